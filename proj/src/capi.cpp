#include "electroar/electroar.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "electroar/analysis.hpp"
#include "electroar/error.hpp"
#include "electroar/grid.hpp"
#include "electroar/modulator.hpp"
#include "electroar/patterns.hpp"
#include "electroar/pipeline.hpp"
#include "electroar/psychophysics.hpp"
#include "electroar/transport.hpp"

using namespace electroar;

struct ear_model {
  SigmoidModel model;
  double residual = 0.0;
};

struct ear_scheduler {
  Scheduler scheduler;
  GridGeometry geometry;
};

struct ear_link {
  SimulatedLink link;
};

struct ear_leader {
  LeaderSession session;
};

struct ear_pipeline_result {
  PipelineResult result;
};

struct ear_udp_receiver {
  UdpSocket socket;
};

namespace {

thread_local std::string g_last_error;

ear_status set_error(ear_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ear_status guarded(F&& body) {
  try {
    body();
    return EAR_OK;
  } catch (const Error& e) {
    // what() leads with the code name, which ear_status_name already gives
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    return set_error(static_cast<ear_status>(static_cast<int>(e.code())), message);
  } catch (const std::bad_alloc&) {
    return set_error(EAR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(EAR_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(EAR_ERR_INTERNAL, "unknown failure");
  }
}

#define EAR_REQUIRE(ptr) \
  do { \
    if (!(ptr)) return set_error(EAR_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

FingerId finger_or_throw(int code) {
  if (code < 0 || code > 255) fail(ErrorCode::InvalidArgument, "finger code out of range");
  const auto f = finger_from_code(static_cast<std::uint8_t>(code));
  if (!f) fail(ErrorCode::InvalidArgument, "unknown finger code " + std::to_string(code));
  return *f;
}

CrossSection shape_or_throw(int code) {
  if (code < 0 || code >= static_cast<int>(std::size(kCrossSections)))
    fail(ErrorCode::InvalidArgument, "unknown shape code " + std::to_string(code));
  return kCrossSections[code];
}

LinkModel to_link_model(const ear_link_model& m) {
  LinkModel out;
  out.latency_ticks = m.latency_ticks;
  out.jitter_ticks = m.jitter_ticks;
  out.loss_probability = m.loss_probability;
  out.reorder_probability = m.reorder_probability;
  out.rng_seed = m.seed;
  return out;
}

void copy_truncated(char* dst, std::size_t cap, const std::string* src) {
  const std::string value = src ? *src : std::string();
  const auto n = std::min(cap - 1, value.size());
  std::memcpy(dst, value.data(), n);
  dst[n] = '\0';
}

void fill_summary(const FitResult& fit, std::size_t samples, ear_fit_summary* out) {
  std::memset(out, 0, sizeof *out);
  out->a = fit.model.a;
  out->b = fit.model.b;
  out->k = fit.model.k;
  out->residual = fit.report.residual;
  out->sample_count = samples;
  out->level_count = fit.report.level_means.size();
  for (std::size_t i = 0; i < fit.report.level_means.size() && i < EAR_MAX_FIT_LEVELS; ++i) {
    out->level_probability[i] = fit.report.level_means[i].probability;
    out->level_mean[i] = fit.report.level_means[i].mean_reported;
    out->level_samples[i] = fit.report.level_means[i].count;
  }
}

}  // namespace

extern "C" {

const char* ear_status_name(ear_status status) {
  switch (status) {
    case EAR_OK: return "Ok";
    case EAR_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case EAR_ERR_NULL_ARGUMENT: return "NullArgument";
    case EAR_ERR_INTERNAL: return "Internal";
    default: break;
  }
  if (status >= EAR_ERR_INVALID_ARGUMENT && status <= EAR_ERR_IO)
    return to_string(static_cast<ErrorCode>(static_cast<int>(status))).data();
  return "Unknown";
}

const char* ear_last_error(void) { return g_last_error.c_str(); }

const char* ear_version(void) { return "1.0.0"; }

// ---- grids

ear_status ear_spatial_filter(const uint16_t* values, uint32_t width, uint32_t height, uint16_t* out,
                              size_t out_len) {
  EAR_REQUIRE(values);
  EAR_REQUIRE(out);
  return guarded([&] {
    GridGeometry g{width, height, 2.0};
    PressureGrid in(g, std::vector<std::uint16_t>(values, values + g.cell_count()));
    const auto filtered = spatial_filter(in);
    if (out_len < filtered.values().size()) fail(ErrorCode::InvalidArgument, "output buffer too small");
    std::copy(filtered.values().begin(), filtered.values().end(), out);
  });
}

ear_status ear_resample_to_electrodes(const uint16_t* filtered, uint32_t width, uint32_t height,
                                      const uint32_t* row_map, size_t row_map_len, uint32_t target_width,
                                      uint32_t target_height, uint16_t* out, size_t out_len) {
  EAR_REQUIRE(filtered);
  EAR_REQUIRE(out);
  return guarded([&] {
    GridGeometry g{width, height, 2.0};
    PressureGrid in(g, std::vector<std::uint16_t>(filtered, filtered + g.cell_count()));
    std::optional<std::span<const std::uint32_t>> map;
    if (row_map) map = std::span<const std::uint32_t>(row_map, row_map_len);
    const auto grid = resample_to_electrodes(in, GridGeometry{target_width, target_height, 2.0}, map);
    if (out_len < grid.values().size()) fail(ErrorCode::InvalidArgument, "output buffer too small");
    std::copy(grid.values().begin(), grid.values().end(), out);
  });
}

// ---- model

ear_status ear_model_create(double a, double b, double k, ear_model** out) {
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    SigmoidModel m{a, b, k};
    m.validate();
    *out = new ear_model{m, 0.0};
  });
}

ear_status ear_model_load(const char* path, ear_model** out) {
  EAR_REQUIRE(path);
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    double residual = 0.0;
    const auto m = read_model(path, &residual);
    *out = new ear_model{m, residual};
  });
}

ear_status ear_model_save(const ear_model* model, const char* path) {
  EAR_REQUIRE(model);
  EAR_REQUIRE(path);
  return guarded([&] { write_model(path, model->model, model->residual); });
}

void ear_model_destroy(ear_model* model) { delete model; }

ear_status ear_model_params(const ear_model* model, double* a, double* b, double* k) {
  EAR_REQUIRE(model);
  if (a) *a = model->model.a;
  if (b) *b = model->model.b;
  if (k) *k = model->model.k;
  return EAR_OK;
}

ear_status ear_model_forward(const ear_model* model, double p, double* magnitude) {
  EAR_REQUIRE(model);
  EAR_REQUIRE(magnitude);
  return guarded([&] { *magnitude = forward(model->model, p); });
}

ear_status ear_model_inverse(const ear_model* model, double magnitude, double* p, int* clamped) {
  EAR_REQUIRE(model);
  EAR_REQUIRE(p);
  return guarded([&] {
    const auto r = inverse(model->model, magnitude);
    *p = r.probability;
    if (clamped) *clamped = r.clamped ? 1 : 0;
  });
}

ear_status ear_model_pressure_to_probability(const ear_model* model, uint32_t cell, uint32_t max_count,
                                             double deadzone_fraction, double* p) {
  EAR_REQUIRE(model);
  EAR_REQUIRE(p);
  return guarded([&] {
    IntensityMapping mapping;
    mapping.deadzone_fraction = deadzone_fraction;
    *p = pressure_to_probability(model->model, cell, max_count, mapping);
  });
}

// ---- fitting

ear_status ear_fit_samples(const double* probabilities, const double* reported, size_t count,
                           ear_model** out_model, ear_fit_summary* summary) {
  if (count > 0) {
    EAR_REQUIRE(probabilities);
    EAR_REQUIRE(reported);
  }
  if (out_model) *out_model = nullptr;
  return guarded([&] {
    std::vector<MagnitudeSample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) samples.push_back({probabilities[i], reported[i]});
    const auto result = fit(samples);
    if (summary) fill_summary(result, count, summary);
    if (out_model) *out_model = new ear_model{result.model, result.report.residual};
  });
}

ear_status ear_fit_csv(const char* csv_path, const char* model_out, const char* trace_out, ear_model** out_model,
                       ear_fit_summary* summary) {
  EAR_REQUIRE(csv_path);
  if (out_model) *out_model = nullptr;
  return guarded([&] {
    const auto samples = read_calibration_csv(std::filesystem::path(csv_path));
    const auto result = fit(samples);
    if (model_out) write_model(model_out, result.model, result.report.residual);
    if (trace_out) write_scan_trace(trace_out, result.report.scan);
    if (summary) fill_summary(result, samples.size(), summary);
    if (out_model) *out_model = new ear_model{result.model, result.report.residual};
  });
}

// ---- scheduling

double ear_expected_rate(double p, double tick_rate_hz) { return expected_rate(p, tick_rate_hz); }

ear_status ear_scheduler_create(uint64_t seed, double tick_rate_hz, uint32_t pulse_width_us, uint32_t width,
                                uint32_t height, ear_scheduler** out) {
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    SchedulerConfig config;
    config.rng_seed = seed;
    config.tick_rate_hz = tick_rate_hz;
    config.pulse_width_us = pulse_width_us;
    GridGeometry g{width, height, 2.0};
    *out = new ear_scheduler{Scheduler(config, g), g};
  });
}

void ear_scheduler_destroy(ear_scheduler* scheduler) { delete scheduler; }

ear_status ear_scheduler_step(ear_scheduler* scheduler, int finger, const double* probabilities, size_t count,
                              uint32_t* fired, size_t fired_cap, size_t* fired_count, uint64_t* tick) {
  EAR_REQUIRE(scheduler);
  return guarded([&] {
    std::vector<PulseEvent> events;
    if (probabilities) {
      StimulusFrame frame;
      frame.finger = finger_or_throw(finger);
      frame.geometry = scheduler->geometry;
      frame.probabilities.assign(probabilities, probabilities + count);
      frame.tick = scheduler->scheduler.current_tick();
      events = scheduler->scheduler.step(&frame);
    } else {
      events = scheduler->scheduler.step(nullptr);
    }
    if (tick) *tick = events.empty() ? scheduler->scheduler.current_tick() - 1 : events.front().tick;
    if (fired_count) *fired_count = events.size();
    if (fired) {
      if (fired_cap < events.size()) fail(ErrorCode::InvalidArgument, "fired buffer too small");
      for (std::size_t i = 0; i < events.size(); ++i) fired[i] = events[i].electrode_index;
    }
  });
}

ear_status ear_scheduler_rate(const ear_scheduler* scheduler, size_t electrode, double* rate_hz) {
  EAR_REQUIRE(scheduler);
  EAR_REQUIRE(rate_hz);
  return guarded([&] { *rate_hz = scheduler->scheduler.stats().rate_hz(electrode); });
}

// ---- frames

uint32_t ear_crc32(const uint8_t* bytes, size_t len) {
  if (!bytes) return crc32({});
  return crc32(std::span<const std::uint8_t>(bytes, len));
}

size_t ear_frame_encoded_size(uint32_t width, uint32_t height) { return encoded_size(width, height); }

ear_status ear_frame_encode(const ear_frame* frame, uint8_t* buffer, size_t capacity, size_t* written) {
  EAR_REQUIRE(frame);
  const std::size_t cells = static_cast<std::size_t>(frame->width) * frame->height;
  if (cells > 0) EAR_REQUIRE(frame->values);
  std::vector<std::uint8_t> bytes;
  const auto status = guarded([&] {
    if (frame->frame_type > 2) fail(ErrorCode::InvalidField, "unknown frame type");
    const auto logical = LogicalFrame::from_counts(
        static_cast<FrameType>(frame->frame_type), finger_or_throw(frame->finger), frame->sequence, frame->tick,
        frame->width, frame->height, std::span<const std::uint32_t>(frame->values, cells));
    bytes = encode(logical);
  });
  if (status != EAR_OK) return status;
  if (written) *written = bytes.size();
  if (!buffer || capacity < bytes.size())
    return set_error(EAR_ERR_BUFFER_TOO_SMALL, "frame needs " + std::to_string(bytes.size()) + " bytes");
  std::memcpy(buffer, bytes.data(), bytes.size());
  return EAR_OK;
}

ear_status ear_frame_decode(const uint8_t* bytes, size_t len, ear_frame_header* header, uint16_t* values,
                            size_t values_cap, size_t* consumed) {
  if (len > 0) EAR_REQUIRE(bytes);
  DecodedFrame decoded;
  const auto status = guarded([&] { decoded = decode(std::span<const std::uint8_t>(bytes, len)); });
  if (status != EAR_OK) return status;
  const auto& f = decoded.frame;
  if (header) {
    header->frame_type = static_cast<uint8_t>(f.type);
    header->finger = static_cast<uint8_t>(f.finger);
    header->sequence = f.sequence;
    header->tick = f.tick;
    header->width = f.width;
    header->height = f.height;
  }
  if (consumed) *consumed = decoded.consumed;
  if (values) {
    if (values_cap < f.values.size())
      return set_error(EAR_ERR_BUFFER_TOO_SMALL, "payload needs " + std::to_string(f.values.size()) + " values");
    std::copy(f.values.begin(), f.values.end(), values);
  }
  return EAR_OK;
}

// ---- link and leader

void ear_link_model_default(ear_link_model* model) {
  if (!model) return;
  const LinkModel d;
  model->latency_ticks = d.latency_ticks;
  model->jitter_ticks = d.jitter_ticks;
  model->loss_probability = d.loss_probability;
  model->reorder_probability = d.reorder_probability;
  model->seed = d.rng_seed;
}

ear_status ear_link_create(const ear_link_model* model, ear_link** out) {
  EAR_REQUIRE(model);
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new ear_link{SimulatedLink(to_link_model(*model))}; });
}

void ear_link_destroy(ear_link* link) { delete link; }

ear_status ear_link_send(ear_link* link, const uint8_t* bytes, size_t len, uint64_t tick) {
  EAR_REQUIRE(link);
  if (len > 0) EAR_REQUIRE(bytes);
  return guarded([&] { link->link.send(std::vector<std::uint8_t>(bytes, bytes + len), tick); });
}

ear_status ear_link_advance(ear_link* link, uint64_t tick, ear_delivery_fn deliver, void* user) {
  EAR_REQUIRE(link);
  std::vector<Delivery> due;
  const auto status = guarded([&] { due = link->link.advance(tick); });
  if (status != EAR_OK || !deliver) return status;
  for (const auto& d : due) deliver(d.bytes.data(), d.bytes.size(), d.sent_tick, d.delivery_tick, user);
  return EAR_OK;
}

ear_status ear_leader_create(ear_leader** out) {
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new ear_leader{}; });
}

void ear_leader_destroy(ear_leader* leader) { delete leader; }

ear_status ear_leader_ingest(ear_leader* leader, const uint8_t* bytes, size_t len, int* handed_off) {
  EAR_REQUIRE(leader);
  if (len > 0) EAR_REQUIRE(bytes);
  return guarded([&] {
    const auto fresh = leader->session.ingest_bytes(std::span<const std::uint8_t>(bytes, len));
    if (handed_off) *handed_off = fresh ? 1 : 0;
  });
}

ear_status ear_leader_counters(const ear_leader* leader, ear_session_counters* out) {
  EAR_REQUIRE(leader);
  EAR_REQUIRE(out);
  const auto& c = leader->session.counters();
  *out = {c.received, c.handed_off, c.gap_count, c.stale_count, c.out_of_order_count, c.decode_errors};
  return EAR_OK;
}

// ---- generation and recordings

void ear_bar_options_default(ear_bar_options* options) {
  if (!options) return;
  const BarPattern d;
  options->orientation_deg = d.orientation_deg;
  options->thickness_sensels = d.thickness_sensels;
  options->amplitude = d.amplitude;
  options->frames = 2400;
  options->finger = EAR_FINGER_INDEX;
  options->seed = 0;
}

void ear_scroll_options_default(ear_scroll_options* options) {
  if (!options) return;
  options->shape = EAR_SHAPE_CIRCLE;
  options->frames_per_cycle = kDefaultFramesPerCycle;
  options->cycles = kDefaultCycles;
  options->amplitude = kDefaultScrollAmplitude;
  options->seed = 0;
}

ear_status ear_generate_bar(int orientation_deg, double thickness_sensels, uint16_t amplitude, uint16_t* out,
                            size_t out_len) {
  EAR_REQUIRE(out);
  return guarded([&] {
    const auto grid = generate_bar(BarPattern{orientation_deg, thickness_sensels, amplitude});
    if (out_len < grid.values().size()) fail(ErrorCode::InvalidArgument, "output buffer too small");
    std::copy(grid.values().begin(), grid.values().end(), out);
  });
}

ear_status ear_write_bar_recording(const ear_bar_options* options, const char* path, uint64_t* frames_written) {
  EAR_REQUIRE(options);
  EAR_REQUIRE(path);
  return guarded([&] {
    const BarPattern pattern{options->orientation_deg, options->thickness_sensels, options->amplitude};
    auto rec = bar_recording(pattern, options->frames, finger_or_throw(options->finger));
    rec.header.set("seed", std::to_string(options->seed));
    record(path, rec);
    if (frames_written) *frames_written = rec.frames.size();
  });
}

ear_status ear_write_scroll_recording(const ear_scroll_options* options, const char* path,
                                      uint64_t* frames_written) {
  EAR_REQUIRE(options);
  EAR_REQUIRE(path);
  return guarded([&] {
    PrismSpec spec;
    spec.cross_section = shape_or_throw(options->shape);
    const auto seq = generate_scroll(spec, options->frames_per_cycle, options->cycles, options->amplitude);
    auto rec = scroll_recording(seq);
    rec.header.set("seed", std::to_string(options->seed));
    record(path, rec);
    if (frames_written) *frames_written = rec.frames.size();
  });
}

ear_status ear_recording_info_read(const char* path, ear_recording_info* out) {
  EAR_REQUIRE(path);
  EAR_REQUIRE(out);
  return guarded([&] {
    RecordingReader reader(path);
    ear_recording_info info{};
    const auto& h = reader.header();
    info.width = h.geometry.width;
    info.height = h.geometry.height;
    info.tick_rate = h.tick_rate;
    copy_truncated(info.kind, sizeof info.kind, h.find("kind"));
    copy_truncated(info.label, sizeof info.label, h.find("label"));
    while (auto frame = reader.next()) {
      if (info.frame_count == 0) info.first_tick = frame->tick;
      info.last_tick = frame->tick;
      ++info.frame_count;
    }
    *out = info;
  });
}

// ---- pipeline

void ear_pipeline_options_default(ear_pipeline_options* options) {
  if (!options) return;
  const PipelineOptions d;
  std::memset(options, 0, sizeof *options);
  options->seed = d.seed;
  options->wall_clock = 0;
  ear_link_model_default(&options->link);
  options->a = d.model.a;
  options->b = d.model.b;
  options->k = d.model.k;
  options->deadzone_fraction = d.mapping.deadzone_fraction;
  options->max_count = d.max_count;
  options->window_ticks = d.window_ticks;
  options->bin_ticks = d.bin_ticks;
  options->pulse_width_us = d.pulse_width_us;
  options->write_pulse_logs = d.write_pulse_logs ? 1 : 0;
}

ear_status ear_pipeline_run(const ear_pipeline_options* options, const char* const* recordings, size_t count,
                            const char* out_dir, ear_pipeline_result** out) {
  EAR_REQUIRE(options);
  EAR_REQUIRE(out);
  *out = nullptr;
  if (count > 0) EAR_REQUIRE(recordings);
  return guarded([&] {
    PipelineOptions o;
    o.seed = options->seed;
    o.mode = options->wall_clock ? TimeMode::WallClock : TimeMode::Simulated;
    o.link = to_link_model(options->link);
    o.model = SigmoidModel{options->a, options->b, options->k};
    o.mapping.deadzone_fraction = options->deadzone_fraction;
    o.max_count = options->max_count;
    o.window_ticks = options->window_ticks;
    o.bin_ticks = options->bin_ticks;
    o.pulse_width_us = options->pulse_width_us;
    o.write_pulse_logs = options->write_pulse_logs != 0;
    std::vector<std::filesystem::path> paths;
    for (std::size_t i = 0; i < count; ++i) {
      if (!recordings[i]) fail(ErrorCode::InvalidArgument, "recording path is NULL");
      paths.emplace_back(recordings[i]);
    }
    std::optional<std::filesystem::path> dir;
    if (out_dir) dir = out_dir;
    auto result = run_pipeline(o, paths, dir);
    *out = new ear_pipeline_result{std::move(result)};
  });
}

void ear_pipeline_result_destroy(ear_pipeline_result* result) { delete result; }

size_t ear_pipeline_result_trial_count(const ear_pipeline_result* result) {
  return result ? result->result.trials.size() : 0;
}

ear_status ear_pipeline_result_trial(const ear_pipeline_result* result, size_t index, ear_trial_info* out) {
  EAR_REQUIRE(result);
  EAR_REQUIRE(out);
  if (index >= result->result.trials.size()) return set_error(EAR_ERR_INVALID_ARGUMENT, "trial index out of range");
  const auto& t = result->result.trials[index];
  out->recording = t.recording.c_str();
  out->truth = t.truth.c_str();
  out->predicted = t.predicted.c_str();
  out->classified = t.classified ? 1 : 0;
  out->duration_s = t.duration_s;
  out->score = t.score;
  out->pulses = t.pulses;
  return EAR_OK;
}

double ear_pipeline_result_accuracy(const ear_pipeline_result* result) {
  if (!result) return 0.0;
  return result->result.tabulation.matrix.overall_accuracy().value_or(0.0);
}

// ---- analysis

ear_status ear_analyze_trial_log(const char* trials_csv, const char* const* labels, size_t label_count,
                                 const char* out_dir, double* overall_accuracy) {
  EAR_REQUIRE(trials_csv);
  EAR_REQUIRE(out_dir);
  if (label_count > 0) EAR_REQUIRE(labels);
  return guarded([&] {
    const auto trials = read_trial_log(trials_csv);
    std::vector<std::string> classes;
    if (labels) {
      for (std::size_t i = 0; i < label_count; ++i) {
        if (!labels[i]) fail(ErrorCode::InvalidArgument, "label is NULL");
        classes.emplace_back(labels[i]);
      }
    } else {
      auto note = [&](const std::string& l) {
        if (std::find(classes.begin(), classes.end(), l) == classes.end()) classes.push_back(l);
      };
      for (const auto& t : trials) note(t.truth);
      for (const auto& t : trials) note(t.predicted);
    }
    const auto tab = tabulate(trials, classes);
    emit_report(tab.matrix, tab.timing, out_dir);
    if (overall_accuracy) *overall_accuracy = tab.matrix.overall_accuracy().value_or(0.0);
  });
}

// ---- UDP

ear_status ear_udp_stream_recording(const char* path, const char* host, uint16_t port, int wall_clock,
                                    uint64_t* sent) {
  EAR_REQUIRE(path);
  EAR_REQUIRE(host);
  return guarded([&] {
    const auto n =
        stream_recording_udp(path, host, port, wall_clock ? TimeMode::WallClock : TimeMode::Simulated);
    if (sent) *sent = n;
  });
}

ear_status ear_udp_receiver_open(uint16_t port, ear_udp_receiver** out) {
  EAR_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new ear_udp_receiver{UdpSocket::bound(port)}; });
}

void ear_udp_receiver_destroy(ear_udp_receiver* receiver) { delete receiver; }

uint16_t ear_udp_receiver_port(const ear_udp_receiver* receiver) {
  if (!receiver) return 0;
  try {
    return receiver->socket.local_port();
  } catch (...) {
    return 0;
  }
}

ear_status ear_udp_receiver_capture(ear_udp_receiver* receiver, const char* out_path, uint64_t max_frames,
                                    int idle_timeout_ms, const char* meta_from, uint64_t* written) {
  EAR_REQUIRE(receiver);
  EAR_REQUIRE(out_path);
  return guarded([&] {
    std::vector<std::pair<std::string, std::string>> meta;
    if (meta_from) meta = RecordingReader(meta_from).header().meta;
    const auto limit = max_frames == 0 ? std::numeric_limits<std::uint64_t>::max() : max_frames;
    const auto n = capture_recording_udp(receiver->socket, out_path, limit, idle_timeout_ms, meta);
    if (written) *written = n;
  });
}

}  // extern "C"
