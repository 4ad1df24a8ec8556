#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "electroar/grid.hpp"

namespace electroar {

inline constexpr double kTickRateHz = 120.0;
inline constexpr std::uint32_t kPulseWidthUs = 100;

struct StimulusFrame {
  FingerId finger = FingerId::Index;
  GridGeometry geometry = GridGeometry::electrode_preset();
  std::vector<double> probabilities;  // row-major, each in [0, 1]
  std::uint64_t tick = 0;

  void validate() const;
};

struct PulseEvent {
  FingerId finger = FingerId::Index;
  std::uint32_t electrode_index = 0;
  std::uint64_t tick = 0;
  std::uint32_t pulse_width_us = kPulseWidthUs;

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

struct SchedulerConfig {
  double tick_rate_hz = kTickRateHz;
  std::uint64_t rng_seed = 0;
  std::uint32_t pulse_width_us = kPulseWidthUs;

  void validate() const;
};

// Uniform draws on [0, 1) with 53 random mantissa bits.
class PulseRng {
 public:
  explicit PulseRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// One independent draw per electrode in row-major order; electrode fires iff
// u <= p. Events carry frame.tick.
std::vector<PulseEvent> tick(const StimulusFrame& frame, PulseRng& rng,
                             std::uint32_t pulse_width_us = kPulseWidthUs);

struct RateStats {
  std::vector<std::uint64_t> counts;  // per electrode
  std::uint64_t window_ticks = 0;
  double tick_rate_hz = kTickRateHz;
  std::uint64_t held_ticks = 0;  // ticks that reused the previous frame
  std::uint64_t idle_ticks = 0;  // ticks before any frame arrived

  double rate_hz(std::size_t electrode) const;
};

// Clocked tick loop for one finger. Each step consumes a fresh frame or, when
// the input stalls, holds the last one.
class Scheduler {
 public:
  explicit Scheduler(const SchedulerConfig& config,
                     GridGeometry geometry = GridGeometry::electrode_preset());

  std::vector<PulseEvent> step(const StimulusFrame* incoming);

  std::uint64_t current_tick() const noexcept { return next_tick_; }
  const RateStats& stats() const noexcept { return stats_; }
  const SchedulerConfig& config() const noexcept { return config_; }

 private:
  SchedulerConfig config_;
  GridGeometry geometry_;
  PulseRng rng_;
  std::optional<StimulusFrame> held_;
  RateStats stats_;
  std::uint64_t next_tick_ = 0;
};

struct RunResult {
  std::vector<PulseEvent> events;
  RateStats stats;
};

// frames[t] feeds tick t; once the span runs out the last frame is held.
RunResult run(std::span<const StimulusFrame> frames, std::uint64_t ticks,
              const SchedulerConfig& config);

constexpr double expected_rate(double p, double tick_rate_hz = kTickRateHz) noexcept {
  return tick_rate_hz * p;
}

enum class TimeMode { Simulated, WallClock };

// Simulated mode returns immediately; wall-clock mode sleeps until
// start + tick / rate.
class TickPacer {
 public:
  explicit TickPacer(TimeMode mode, double tick_rate_hz = kTickRateHz);

  void wait_for(std::uint64_t tick) const;
  TimeMode mode() const noexcept { return mode_; }

 private:
  TimeMode mode_;
  double tick_rate_hz_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace electroar
