#include "electroar/psychophysics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "electroar/error.hpp"
#include "text.hpp"

namespace electroar {

void SigmoidModel::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(k))
    fail(ErrorCode::DomainError, "sigmoid coefficients must be finite");
  if (!(b > 0.0)) fail(ErrorCode::DomainError, "sigmoid slope b must be positive");
  if (!(k > 0.0)) fail(ErrorCode::DomainError, "sigmoid asymptote k must be positive");
}

double evaluate(const SigmoidModel& model, double x) noexcept {
  return model.k / (1.0 + std::exp(model.a - model.b * x));
}

double forward(const SigmoidModel& model, double p) {
  model.validate();
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::DomainError, "probability outside [0, 1]");
  return evaluate(model, p);
}

InverseResult inverse(const SigmoidModel& model, double magnitude) {
  model.validate();
  if (!(magnitude > 0.0 && magnitude < model.k))
    fail(ErrorCode::DomainError, "magnitude must lie strictly between 0 and k");
  // k/S - 1 written as (k - S)/S to keep precision near the asymptote.
  const double raw = (model.a - std::log((model.k - magnitude) / magnitude)) / model.b;
  InverseResult result;
  result.unclamped = raw;
  result.probability = std::clamp(raw, 0.0, 1.0);
  result.clamped = result.probability != raw;
  return result;
}

namespace {

struct LineFit {
  double a = 0.0;
  double b = 0.0;
  double residual = std::numeric_limits<double>::infinity();
};

// Samples sorted by (probability, reported) so every summation below runs in
// the same order regardless of how the caller arranged the input.
struct Prepared {
  std::vector<double> p;
  std::vector<double> s;
  double max_s = 0.0;
  double mean_p = 0.0;
  double spread_p = 0.0;  // sum (p - mean_p)^2
};

Prepared prepare(std::span<const MagnitudeSample> samples) {
  std::vector<MagnitudeSample> sorted(samples.begin(), samples.end());
  for (const auto& sample : sorted) {
    if (!(sample.probability >= 0.0 && sample.probability <= 1.0))
      fail(ErrorCode::DomainError, "sample probability outside [0, 1]");
    if (!(sample.reported > 0.0) || !std::isfinite(sample.reported))
      fail(ErrorCode::NonPositiveMagnitude, "reported magnitudes must be positive");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
    return l.probability != r.probability ? l.probability < r.probability : l.reported < r.reported;
  });

  std::size_t levels = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (i == 0 || sorted[i].probability != sorted[i - 1].probability) ++levels;
  if (sorted.size() < 3 || levels < 3)
    fail(ErrorCode::InsufficientData, "need at least 3 samples over 3 distinct probability levels");

  Prepared prep;
  for (const auto& sample : sorted) {
    prep.p.push_back(sample.probability);
    prep.s.push_back(sample.reported);
    prep.max_s = std::max(prep.max_s, sample.reported);
  }
  double sum = 0.0;
  for (double p : prep.p) sum += p;
  prep.mean_p = sum / static_cast<double>(prep.p.size());
  for (double p : prep.p) prep.spread_p += (p - prep.mean_p) * (p - prep.mean_p);
  return prep;
}

// k is parameterised as max_s * (1 + e^t), which keeps k > max(S) for every t
// and resolves k - max(S) with relative precision even when k hugs the data.
LineFit fit_line(const Prepared& prep, double t) {
  const double excess = prep.max_s * std::exp(t);
  const std::size_t n = prep.p.size();
  std::vector<double> y(n);
  double sum_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::log(((prep.max_s - prep.s[i]) + excess) / prep.s[i]);
    sum_y += y[i];
  }
  const double mean_y = sum_y / static_cast<double>(n);
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross += (prep.p[i] - prep.mean_p) * (y[i] - mean_y);

  LineFit line;
  const double slope = cross / prep.spread_p;  // y = intercept + slope * p
  line.a = mean_y - slope * prep.mean_p;
  line.b = -slope;
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (line.a - line.b * prep.p[i]);
    residual += r * r;
  }
  line.residual = residual;
  return line;
}

double k_of(const Prepared& prep, double t) { return prep.max_s * (1.0 + std::exp(t)); }
double t_of(const Prepared& prep, double k) { return std::log((k - prep.max_s) / prep.max_s); }

constexpr double kTMin = -60.0;
constexpr double kTMax = 60.0;
constexpr double kTWidth = 1e-10;
constexpr double kTGridStep = 0.125;

double golden_section(const Prepared& prep, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = fit_line(prep, x1).residual;
  double f2 = fit_line(prep, x2).residual;
  while (hi - lo > kTWidth) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = fit_line(prep, x1).residual;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = fit_line(prep, x2).residual;
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

FitResult fit(std::span<const MagnitudeSample> samples) {
  const Prepared prep = prepare(samples);

  FitReport report;
  const double k_lo = 1.0001 * prep.max_s;
  const double k_hi = 10.0 * prep.max_s;
  std::vector<double> scan_t(kScanPoints);
  std::size_t best = 0;
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(kScanPoints - 1);
    const double k = k_lo * std::pow(k_hi / k_lo, frac);
    scan_t[i] = t_of(prep, k);
    const double residual = fit_line(prep, scan_t[i]).residual;
    report.scan.push_back({k, residual});
    if (residual < report.scan[best].residual) best = i;
  }

  // The k scan is coarse in t near k = max(S), where the valley is narrow, so
  // a uniform t grid over the whole search range is added. Every local
  // minimum of the combined points is refined and the lowest residual wins.
  std::vector<std::pair<double, double>> points;  // (t, residual)
  for (std::size_t i = 0; i < kScanPoints; ++i) points.emplace_back(scan_t[i], report.scan[i].residual);
  for (double g = kTMin; g <= kTMax; g += kTGridStep) points.emplace_back(g, fit_line(prep, g).residual);
  std::sort(points.begin(), points.end());

  double t = scan_t[best];
  LineFit line = fit_line(prep, t);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool left_ok = i == 0 || points[i].second <= points[i - 1].second;
    const bool right_ok = i + 1 == points.size() || points[i].second <= points[i + 1].second;
    if (!left_ok || !right_ok) continue;
    const double lo = i == 0 ? points[i].first : points[i - 1].first;
    const double hi = i + 1 == points.size() ? points[i].first : points[i + 1].first;
    const double candidate = golden_section(prep, lo, hi);
    if (const LineFit refined = fit_line(prep, candidate); refined.residual < line.residual) {
      t = candidate;
      line = refined;
    }
  }

  if (!(line.b > 0.0) || !std::isfinite(line.b))
    fail(ErrorCode::DegenerateFit, "fitted slope is not positive; data has no increasing sigmoid");

  FitResult result;
  result.model = {line.a, line.b, k_of(prep, t)};
  report.residual = line.residual;
  for (std::size_t i = 0; i < prep.p.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < prep.p.size() && prep.p[j] == prep.p[i]) sum += prep.s[j++];
    report.level_means.push_back({prep.p[i], sum / static_cast<double>(j - i), j - i});
    i = j;
  }
  result.report = std::move(report);
  return result;
}

double fit_residual(const SigmoidModel& model, std::span<const MagnitudeSample> samples) {
  double residual = 0.0;
  for (const auto& sample : samples) {
    const double y = std::log(model.k / sample.reported - 1.0);
    const double r = y - (model.a - model.b * sample.probability);
    residual += r * r;
  }
  return residual;
}

double pressure_to_probability(const SigmoidModel& model, std::uint32_t cell,
                               std::uint32_t max_count, const IntensityMapping& mapping) {
  if (max_count == 0) fail(ErrorCode::DomainError, "max_count must be positive");
  if (cell > max_count) fail(ErrorCode::DomainError, "cell exceeds max_count");
  const double fraction = static_cast<double>(cell) / static_cast<double>(max_count);
  if (cell == 0 || fraction < mapping.deadzone_fraction) return 0.0;
  return inverse(model, fraction * mapping.ceiling_fraction * model.k).probability;
}

std::vector<MagnitudeSample> read_calibration_csv(std::istream& in) {
  std::vector<MagnitudeSample> samples;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = text::trim(line);
    if (view.empty()) continue;
    if (!header_seen) {
      if (view != "probability,reported")
        fail(ErrorCode::InvalidArgument, "calibration CSV must start with `probability,reported`");
      header_seen = true;
      continue;
    }
    const auto fields = text::split(view, ',');
    const auto p = fields.size() == 2 ? text::parse_double(fields[0]) : std::nullopt;
    const auto s = fields.size() == 2 ? text::parse_double(fields[1]) : std::nullopt;
    if (!p || !s)
      fail(ErrorCode::InvalidArgument, "malformed calibration row at line " + std::to_string(line_no));
    samples.push_back({*p, *s});
  }
  if (samples.empty()) fail(ErrorCode::InsufficientData, "calibration CSV holds no samples");
  return samples;
}

std::vector<MagnitudeSample> read_calibration_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  return read_calibration_csv(in);
}

void write_calibration_csv(std::ostream& out, std::span<const MagnitudeSample> samples) {
  out << "probability,reported\n";
  for (const auto& sample : samples)
    out << text::format_exact(sample.probability) << ',' << text::format_exact(sample.reported) << '\n';
}

void write_model(const std::filesystem::path& path, const SigmoidModel& model, double residual) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << "a,b,k,residual\n"
      << text::format_exact(model.a) << ',' << text::format_exact(model.b) << ','
      << text::format_exact(model.k) << ',' << text::format_exact(residual) << '\n';
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

SigmoidModel read_model(const std::filesystem::path& path, double* residual) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::string header;
  std::string record;
  std::getline(in, header);
  std::getline(in, record);
  if (text::trim(header) != "a,b,k,residual")
    fail(ErrorCode::InvalidArgument, "model file must start with `a,b,k,residual`");
  const auto fields = text::split(text::trim(record), ',');
  if (fields.size() != 4) fail(ErrorCode::InvalidArgument, "model record needs 4 fields");
  double values[4];
  for (std::size_t i = 0; i < 4; ++i) {
    const auto v = text::parse_double(fields[i]);
    if (!v) fail(ErrorCode::InvalidArgument, "malformed model record");
    values[i] = *v;
  }
  SigmoidModel model{values[0], values[1], values[2]};
  model.validate();
  if (residual) *residual = values[3];
  return model;
}

void write_scan_trace(const std::filesystem::path& path, std::span<const ScanPoint> scan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out << "k_candidate,residual\n";
  for (const auto& point : scan)
    out << text::format_exact(point.k_candidate) << ',' << text::format_exact(point.residual) << '\n';
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace electroar
