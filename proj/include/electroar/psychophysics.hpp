#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace electroar {

// Subjective intensity as a function of stimulation probability:
//   S = k / (1 + exp(a - b p))
// b > 0 keeps the curve increasing, k is the asymptotic magnitude.
struct SigmoidModel {
  double a = 0.0;
  double b = 1.0;
  double k = 1.0;

  void validate() const;
  friend bool operator==(const SigmoidModel&, const SigmoidModel&) = default;
};

struct MagnitudeSample {
  double probability = 0.0;
  double reported = 0.0;  // relative to the reference level 100
};

// Sigmoid value at any real argument; no domain check.
double evaluate(const SigmoidModel& model, double x) noexcept;

// Domain-checked: p must lie in [0, 1].
double forward(const SigmoidModel& model, double p);

struct InverseResult {
  double probability = 0.0;  // clamped to [0, 1]
  double unclamped = 0.0;    // (a - ln(k/S - 1)) / b
  bool clamped = false;
};

// Requires 0 < S < k.
InverseResult inverse(const SigmoidModel& model, double magnitude);

struct LevelMean {
  double probability = 0.0;
  double mean_reported = 0.0;
  std::size_t count = 0;
};

struct ScanPoint {
  double k_candidate = 0.0;
  double residual = 0.0;
};

struct FitReport {
  double residual = 0.0;  // objective at the returned (a, b, k)
  std::vector<LevelMean> level_means;
  std::vector<ScanPoint> scan;  // coarse k scan, in scan order
};

struct FitResult {
  SigmoidModel model;
  FitReport report;
};

inline constexpr std::size_t kScanPoints = 200;

// Least squares of ln(k/S - 1) against a - b p. (a, b) are solved in closed
// form for each k; k itself comes from a geometric scan between
// 1.0001 max(S) and 10 max(S) followed by golden-section refinement.
FitResult fit(std::span<const MagnitudeSample> samples);

// Objective value for a fixed model over the given samples.
double fit_residual(const SigmoidModel& model, std::span<const MagnitudeSample> samples);

struct IntensityMapping {
  double deadzone_fraction = 0.02;
  double ceiling_fraction = 0.95;
};

// Maps a pressure count onto a stimulation probability: the count is scaled
// to ceiling_fraction * k and inverted through the model. Counts below the
// deadzone map to 0.
double pressure_to_probability(const SigmoidModel& model, std::uint32_t cell,
                               std::uint32_t max_count, const IntensityMapping& mapping = {});

// Calibration CSV: header `probability,reported`, one trial per row.
std::vector<MagnitudeSample> read_calibration_csv(std::istream& in);
std::vector<MagnitudeSample> read_calibration_csv(const std::filesystem::path& path);
void write_calibration_csv(std::ostream& out, std::span<const MagnitudeSample> samples);

// Model file: header `a,b,k,residual` followed by one record.
void write_model(const std::filesystem::path& path, const SigmoidModel& model, double residual);
SigmoidModel read_model(const std::filesystem::path& path, double* residual = nullptr);

// Trace file: header `k_candidate,residual`.
void write_scan_trace(const std::filesystem::path& path, std::span<const ScanPoint> scan);

}  // namespace electroar
