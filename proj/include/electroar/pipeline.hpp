#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "electroar/analysis.hpp"
#include "electroar/modulator.hpp"
#include "electroar/patterns.hpp"
#include "electroar/psychophysics.hpp"
#include "electroar/transport.hpp"

namespace electroar {

struct PipelineOptions {
  std::uint64_t seed = 0;
  TimeMode mode = TimeMode::Simulated;
  LinkModel link;  // rng_seed is replaced by a per-trial derived seed
  SigmoidModel model{3.0, 6.0, 150.0};
  IntensityMapping mapping;
  std::uint32_t max_count = 65535;
  std::uint64_t window_ticks = 2400;  // scheduling window for static trials
  std::uint32_t bin_ticks = 24;       // map length for the dynamic series
  std::uint32_t pulse_width_us = kPulseWidthUs;
  bool write_pulse_logs = true;
};

enum class TrialKind { StaticBar, DynamicScroll };

struct TrialOutcome {
  std::string recording;
  TrialKind kind = TrialKind::StaticBar;
  std::string truth;
  std::string predicted;
  bool classified = true;  // false when the observed map carried no pulses
  double duration_s = 0.0;
  double score = 0.0;  // static: winning distance; dynamic: peaks per cycle
  StimulationMap map;  // full-window map of the classified finger
  std::uint64_t pulses = 0;
  LinkStats link;
  SessionCounters session;
};

struct PipelineResult {
  std::vector<TrialOutcome> trials;
  Tabulation tabulation;
};

// Sensor grid -> spatial filter -> electrode decimation -> per-electrode
// probability through the inverse intensity model.
std::vector<double> sensor_to_probabilities(const PressureGrid& sensor, const SigmoidModel& model,
                                            const IntensityMapping& mapping, std::uint32_t max_count);

// Static templates: noiseless expected-rate maps (tick_rate * p) for every
// bar orientation drawn with the given thickness and amplitude.
std::vector<LabeledMap> bar_templates(const PipelineOptions& options, double thickness_sensels,
                                      std::uint16_t amplitude);

std::vector<std::string> class_labels(TrialKind kind);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream) noexcept;

// One recording through follower session -> link -> leader session ->
// mapping -> scheduler -> accumulation -> classification.
TrialOutcome run_trial(const PipelineOptions& options, const Recording& recording, std::size_t trial_index,
                       std::vector<PulseEvent>* pulses = nullptr);

// Every recording is one trial. With `out_dir`, writes the report CSVs plus
// trials.csv, maps.csv and per-trial pulse logs.
PipelineResult run_pipeline(const PipelineOptions& options, std::span<const Recording> recordings,
                            std::span<const std::string> names, const std::optional<std::filesystem::path>& out_dir);
PipelineResult run_pipeline(const PipelineOptions& options, std::span<const std::filesystem::path> recordings,
                            const std::optional<std::filesystem::path>& out_dir);

// Pulse log CSV: `tick,finger,electrode,pulse_width_us`, finger as its wire code.
void write_pulse_log(const std::filesystem::path& path, std::span<const PulseEvent> events);

// Sends every frame of a recording as one datagram; wall-clock mode paces by tick.
std::uint64_t stream_recording_udp(const std::filesystem::path& recording, const std::string& host,
                                   std::uint16_t port, TimeMode mode);

// Receives frames on 127.0.0.1:port until `max_frames` arrive or the link is
// idle for `idle_timeout_ms`, keeps the ones the leader session hands off and
// writes them as a recording carrying `meta`. Returns the number of frames
// written.
std::uint64_t capture_recording_udp(UdpSocket& socket, const std::filesystem::path& out,
                                    std::uint64_t max_frames, int idle_timeout_ms,
                                    std::span<const std::pair<std::string, std::string>> meta = {});

}  // namespace electroar
