#include "electroar/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "electroar/error.hpp"

namespace electroar {

double StimulationMap::energy() const noexcept {
  return std::accumulate(densities.begin(), densities.end(), 0.0);
}

MapAccumulator::MapAccumulator(GridGeometry geometry, std::optional<FingerId> finger, double tick_rate_hz)
    : geometry_(geometry), finger_(finger), tick_rate_hz_(tick_rate_hz), counts_(geometry.cell_count(), 0) {
  geometry_.validate();
}

void MapAccumulator::add(const PulseEvent& event) {
  if (finger_ && event.finger != *finger_) return;
  if (event.electrode_index >= counts_.size()) fail(ErrorCode::InvalidArgument, "electrode index outside the map");
  ++counts_[event.electrode_index];
}

void MapAccumulator::add(std::span<const PulseEvent> events) {
  for (const auto& event : events) add(event);
}

StimulationMap MapAccumulator::finish(std::uint64_t window_ticks) const {
  if (window_ticks == 0) fail(ErrorCode::InvalidArgument, "window must span at least one tick");
  StimulationMap map;
  map.geometry = geometry_;
  map.window_ticks = window_ticks;
  map.densities.reserve(counts_.size());
  for (auto c : counts_) map.densities.push_back(static_cast<double>(c) * tick_rate_hz_ / static_cast<double>(window_ticks));
  return map;
}

void MapAccumulator::reset() { std::fill(counts_.begin(), counts_.end(), 0); }

StimulationMap accumulate_map(std::span<const PulseEvent> events, std::uint64_t window_ticks,
                              const GridGeometry& geometry, std::optional<FingerId> finger, double tick_rate_hz) {
  MapAccumulator acc(geometry, finger, tick_rate_hz);
  acc.add(events);
  return acc.finish(window_ticks);
}

namespace {

std::vector<double> unit_normalized(const StimulationMap& map, const char* what) {
  double norm = 0.0;
  for (double d : map.densities) norm += d * d;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) fail(ErrorCode::UndefinedNormalization, std::string(what) + " is all zero");
  std::vector<double> out(map.densities.size());
  std::transform(map.densities.begin(), map.densities.end(), out.begin(), [norm](double d) { return d / norm; });
  return out;
}

}  // namespace

Classification classify_static(const StimulationMap& map, std::span<const LabeledMap> templates) {
  if (templates.size() < 2) fail(ErrorCode::EmptyTemplates, "need at least two templates");
  for (const auto& t : templates)
    if (!t.map.geometry.same_shape(map.geometry) || t.map.densities.size() != map.densities.size())
      fail(ErrorCode::GeometryMismatch, "template `" + t.label + "` geometry differs from the map");

  const auto observed = unit_normalized(map, "observed map");
  Classification out;
  out.scores.reserve(templates.size());
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto reference = unit_normalized(templates[t].map, "template map");
    double sum = 0.0;
    for (std::size_t e = 0; e < observed.size(); ++e) sum += (observed[e] - reference[e]) * (observed[e] - reference[e]);
    out.scores.push_back(std::sqrt(sum));
    if (out.scores[t] < out.scores[out.index]) out.index = t;
  }
  out.label = templates[out.index].label;
  return out;
}

std::vector<SignatureTemplate> prism_signatures() {
  return {{"circle", 0.0}, {"triangle", 3.0}, {"square", 4.0}, {"hexagon", 6.0}};
}

std::size_t count_energy_peaks(std::span<const double> energies, double* threshold) {
  if (energies.empty()) return 0;
  std::vector<double> sorted(energies.begin(), energies.end());
  std::sort(sorted.begin(), sorted.end());
  const double limit = kPeakThresholdFactor * lower_quantile(sorted, kPeakReferenceQuantile);
  if (threshold) *threshold = limit;

  const std::size_t n = energies.size();
  std::size_t above = 0;
  std::size_t starts = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool here = energies[i] > limit;
    const bool before = energies[(i + n - 1) % n] > limit;
    above += here;
    starts += here && !before;
  }
  return above == n ? 0 : starts;
}

DynamicClassification classify_dynamic(std::span<const StimulationMap> maps, std::size_t maps_per_cycle,
                                       std::span<const SignatureTemplate> templates) {
  if (templates.empty()) fail(ErrorCode::EmptyTemplates, "no signature templates");
  if (maps_per_cycle == 0 || maps.size() < maps_per_cycle)
    fail(ErrorCode::SeriesTooShort, "series holds less than one scroll cycle");

  DynamicClassification out;
  out.cycles = maps.size() / maps_per_cycle;
  std::vector<double> energies;
  energies.reserve(out.cycles * maps_per_cycle);
  for (std::size_t i = 0; i < out.cycles * maps_per_cycle; ++i) energies.push_back(maps[i].energy());
  out.total_peaks = count_energy_peaks(energies, &out.threshold);
  out.peaks_per_cycle = static_cast<double>(out.total_peaks) / static_cast<double>(out.cycles);

  auto& c = out.classification;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    c.scores.push_back(std::abs(out.peaks_per_cycle - templates[t].peaks_per_cycle));
    if (c.scores[t] < c.scores[c.index]) c.index = t;
  }
  c.label = templates[c.index].label;
  return out;
}

std::uint64_t ConfusionMatrix::row_total(std::size_t truth) const {
  return std::accumulate(counts.at(truth).begin(), counts.at(truth).end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (std::size_t r = 0; r < counts.size(); ++r) sum += row_total(r);
  return sum;
}

std::optional<double> ConfusionMatrix::rate(std::size_t truth, std::size_t predicted) const {
  const auto row = row_total(truth);
  if (row == 0) return std::nullopt;
  return static_cast<double>(counts.at(truth).at(predicted)) / static_cast<double>(row);
}

std::optional<double> ConfusionMatrix::accuracy(std::size_t truth) const { return rate(truth, truth); }

std::optional<double> ConfusionMatrix::overall_accuracy() const {
  const auto all = total();
  if (all == 0) return std::nullopt;
  std::uint64_t diagonal = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) diagonal += counts[c][c];
  return static_cast<double>(diagonal) / static_cast<double>(all);
}

double lower_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorCode::InvalidArgument, "quantile of an empty set");
  const auto index = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[index];
}

Tabulation tabulate(std::span<const TrialRecord> trials, std::span<const std::string> labels) {
  if (trials.empty()) fail(ErrorCode::InvalidArgument, "no trials to tabulate");
  if (labels.empty()) fail(ErrorCode::LabelMismatch, "empty class set");

  auto index_of = [&](const std::string& label) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) fail(ErrorCode::LabelMismatch, "label `" + label + "` is not in the class set");
    return static_cast<std::size_t>(it - labels.begin());
  };

  Tabulation out;
  out.matrix.labels.assign(labels.begin(), labels.end());
  out.matrix.counts.assign(labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  std::vector<std::vector<double>> durations(labels.size());
  for (const auto& trial : trials) {
    const auto truth = index_of(trial.truth);
    const auto predicted = index_of(trial.predicted);
    ++out.matrix.counts[truth][predicted];
    if (trial.duration_s) {
      if (!(*trial.duration_s > 0.0)) fail(ErrorCode::DomainError, "trial durations must be positive");
      durations[truth].push_back(*trial.duration_s);
    }
  }
  for (std::size_t c = 0; c < labels.size(); ++c) {
    if (durations[c].empty()) continue;
    std::sort(durations[c].begin(), durations[c].end());
    ClassTiming timing{labels[c], durations[c], 0.0, 0.0, 0.0};
    timing.q1 = lower_quantile(timing.durations, 0.25);
    timing.median = lower_quantile(timing.durations, 0.5);
    timing.q3 = lower_quantile(timing.durations, 0.75);
    out.timing.per_class.push_back(std::move(timing));
  }
  return out;
}

}  // namespace electroar
