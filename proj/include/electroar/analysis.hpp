#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "electroar/grid.hpp"
#include "electroar/modulator.hpp"

namespace electroar {

// Per-electrode pulse rate (Hz) averaged over an observation window.
struct StimulationMap {
  GridGeometry geometry = GridGeometry::electrode_preset();
  std::vector<double> densities;
  std::uint64_t window_ticks = 1;

  double energy() const noexcept;
};

// density[e] = count[e] * tick_rate / window_ticks. With `finger` set, events
// from other fingers are ignored.
StimulationMap accumulate_map(std::span<const PulseEvent> events, std::uint64_t window_ticks,
                              const GridGeometry& geometry = GridGeometry::electrode_preset(),
                              std::optional<FingerId> finger = std::nullopt,
                              double tick_rate_hz = kTickRateHz);

// Incremental form used while the scheduler is running.
class MapAccumulator {
 public:
  explicit MapAccumulator(GridGeometry geometry = GridGeometry::electrode_preset(),
                          std::optional<FingerId> finger = std::nullopt, double tick_rate_hz = kTickRateHz);

  void add(const PulseEvent& event);
  void add(std::span<const PulseEvent> events);
  StimulationMap finish(std::uint64_t window_ticks) const;
  void reset();

 private:
  GridGeometry geometry_;
  std::optional<FingerId> finger_;
  double tick_rate_hz_;
  std::vector<std::uint64_t> counts_;
};

struct LabeledMap {
  std::string label;
  StimulationMap map;
};

struct Classification {
  std::string label;
  std::size_t index = 0;
  std::vector<double> scores;  // one per template, template order
};

// Nearest template by L2 distance between unit-normalised maps. Ties go to
// the earlier template.
Classification classify_static(const StimulationMap& map, std::span<const LabeledMap> templates);

struct SignatureTemplate {
  std::string label;
  double peaks_per_cycle = 0.0;
};

// circle 0, triangle 3, square 4, hexagon 6.
std::vector<SignatureTemplate> prism_signatures();

inline constexpr double kPeakThresholdFactor = 1.25;
inline constexpr double kPeakReferenceQuantile = 0.25;

// Peaks in a cyclic energy series. The threshold is kPeakThresholdFactor
// times the lower-quartile energy; every maximal run of samples above it
// (wrapping at the ends) counts as one peak. A series entirely above the
// threshold has no peak.
std::size_t count_energy_peaks(std::span<const double> energies, double* threshold = nullptr);

struct DynamicClassification {
  Classification classification;
  double peaks_per_cycle = 0.0;
  std::size_t total_peaks = 0;
  std::size_t cycles = 0;
  double threshold = 0.0;
};

// Counts energy peaks over whole cycles of the series and picks the template
// with the nearest peaks-per-cycle signature (ties to the earlier template).
DynamicClassification classify_dynamic(std::span<const StimulationMap> maps, std::size_t maps_per_cycle,
                                       std::span<const SignatureTemplate> templates);

struct TrialRecord {
  std::string truth;
  std::string predicted;
  std::optional<double> duration_s;
};

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> counts;  // [true][predicted]

  std::uint64_t row_total(std::size_t truth) const;
  std::uint64_t total() const;
  std::optional<double> accuracy(std::size_t truth) const;
  std::optional<double> overall_accuracy() const;
  // counts[truth][predicted] / row_total(truth)
  std::optional<double> rate(std::size_t truth, std::size_t predicted) const;
};

// Lower convention: the element at floor(q (n - 1)) of the sorted values.
double lower_quantile(std::span<const double> sorted, double q);

struct ClassTiming {
  std::string label;
  std::vector<double> durations;  // sorted ascending
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

struct TrialTiming {
  std::vector<ClassTiming> per_class;  // classes with at least one timed trial
};

struct Tabulation {
  ConfusionMatrix matrix;
  TrialTiming timing;
};

Tabulation tabulate(std::span<const TrialRecord> trials, std::span<const std::string> labels);

// Writes confusion.csv, accuracy.csv and timing.csv into `directory`.
void emit_report(const ConfusionMatrix& matrix, const TrialTiming& timing, const std::filesystem::path& directory);

// Trial log CSV: header `true,predicted,duration_s` (duration may be empty).
std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path);

}  // namespace electroar
