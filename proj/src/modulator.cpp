#include "electroar/modulator.hpp"

#include <string>
#include <thread>

#include "electroar/error.hpp"

namespace electroar {

void StimulusFrame::validate() const {
  geometry.validate();
  if (probabilities.size() != geometry.cell_count())
    fail(ErrorCode::GeometryMismatch, "stimulus frame size does not match its geometry");
  for (double p : probabilities)
    if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::DomainError, "stimulation probability outside [0, 1]");
}

void SchedulerConfig::validate() const {
  if (!(tick_rate_hz > 0.0)) fail(ErrorCode::InvalidArgument, "tick rate must be positive");
}

std::vector<PulseEvent> tick(const StimulusFrame& frame, PulseRng& rng, std::uint32_t pulse_width_us) {
  std::vector<PulseEvent> events;
  for (std::size_t e = 0; e < frame.probabilities.size(); ++e) {
    if (rng.uniform() <= frame.probabilities[e])
      events.push_back({frame.finger, static_cast<std::uint32_t>(e), frame.tick, pulse_width_us});
  }
  return events;
}

double RateStats::rate_hz(std::size_t electrode) const {
  if (window_ticks == 0 || electrode >= counts.size()) return 0.0;
  return static_cast<double>(counts[electrode]) * tick_rate_hz / static_cast<double>(window_ticks);
}

Scheduler::Scheduler(const SchedulerConfig& config, GridGeometry geometry)
    : config_(config), geometry_(geometry), rng_(config.rng_seed) {
  config_.validate();
  geometry_.validate();
  stats_.counts.assign(geometry_.cell_count(), 0);
  stats_.tick_rate_hz = config_.tick_rate_hz;
}

std::vector<PulseEvent> Scheduler::step(const StimulusFrame* incoming) {
  const std::uint64_t now = next_tick_++;
  ++stats_.window_ticks;
  if (incoming) {
    incoming->validate();
    if (!incoming->geometry.same_shape(geometry_))
      fail(ErrorCode::GeometryMismatch, "stimulus frame geometry differs from scheduler geometry");
    held_ = *incoming;
  } else if (held_) {
    ++stats_.held_ticks;
  } else {
    ++stats_.idle_ticks;
    return {};
  }

  StimulusFrame& frame = *held_;
  frame.tick = now;
  auto events = electroar::tick(frame, rng_, config_.pulse_width_us);
  for (const auto& event : events) ++stats_.counts[event.electrode_index];
  return events;
}

RunResult run(std::span<const StimulusFrame> frames, std::uint64_t ticks, const SchedulerConfig& config) {
  if (ticks == 0) fail(ErrorCode::InvalidArgument, "run needs at least one tick");
  const GridGeometry geometry = frames.empty() ? GridGeometry::electrode_preset() : frames.front().geometry;
  Scheduler scheduler(config, geometry);
  RunResult result;
  for (std::uint64_t t = 0; t < ticks; ++t) {
    const StimulusFrame* incoming = t < frames.size() ? &frames[t] : nullptr;
    auto events = scheduler.step(incoming);
    result.events.insert(result.events.end(), events.begin(), events.end());
  }
  result.stats = scheduler.stats();
  return result;
}

TickPacer::TickPacer(TimeMode mode, double tick_rate_hz)
    : mode_(mode), tick_rate_hz_(tick_rate_hz), start_(std::chrono::steady_clock::now()) {
  if (!(tick_rate_hz_ > 0.0)) fail(ErrorCode::InvalidArgument, "tick rate must be positive");
}

void TickPacer::wait_for(std::uint64_t tick) const {
  if (mode_ == TimeMode::Simulated) return;
  const auto offset = std::chrono::duration<double>(static_cast<double>(tick) / tick_rate_hz_);
  std::this_thread::sleep_until(start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(offset));
}

}  // namespace electroar
