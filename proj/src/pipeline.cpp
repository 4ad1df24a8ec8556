#include "electroar/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "electroar/error.hpp"
#include "text.hpp"

namespace electroar {

namespace {

std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

const std::string& require_meta(const RecordingHeader& header, std::string_view key) {
  const auto* value = header.find(key);
  if (!value) fail(ErrorCode::BadHeader, "recording lacks `meta " + std::string(key) + "`");
  return *value;
}

template <typename Int>
Int meta_int(const RecordingHeader& header, std::string_view key) {
  const auto v = text::parse_int<Int>(require_meta(header, key));
  if (!v) fail(ErrorCode::BadHeader, "malformed `meta " + std::string(key) + "`");
  return *v;
}

TrialKind kind_of(const RecordingHeader& header) {
  const auto& kind = require_meta(header, "kind");
  if (kind == "bar") return TrialKind::StaticBar;
  if (kind == "scroll") return TrialKind::DynamicScroll;
  fail(ErrorCode::BadHeader, "unknown recording kind `" + kind + "`");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, std::uint64_t stream) noexcept {
  return splitmix(splitmix(base ^ splitmix(trial)) + stream);
}

std::vector<double> sensor_to_probabilities(const PressureGrid& sensor, const SigmoidModel& model,
                                            const IntensityMapping& mapping, std::uint32_t max_count) {
  const PressureGrid electrodes = resample_to_electrodes(spatial_filter(sensor), GridGeometry::electrode_preset());
  std::vector<double> p;
  p.reserve(electrodes.values().size());
  for (auto v : electrodes.values()) p.push_back(pressure_to_probability(model, v, max_count, mapping));
  return p;
}

std::vector<LabeledMap> bar_templates(const PipelineOptions& options, double thickness_sensels,
                                      std::uint16_t amplitude) {
  std::vector<LabeledMap> templates;
  for (int deg : kBarOrientations) {
    const auto grid = generate_bar({deg, thickness_sensels, amplitude});
    LabeledMap t{bar_label(deg), {}};
    for (double p : sensor_to_probabilities(grid, options.model, options.mapping, options.max_count))
      t.map.densities.push_back(expected_rate(p));
    templates.push_back(std::move(t));
  }
  return templates;
}

std::vector<std::string> class_labels(TrialKind kind) {
  std::vector<std::string> labels;
  if (kind == TrialKind::StaticBar) {
    for (int deg : kBarOrientations) labels.push_back(bar_label(deg));
  } else {
    for (const auto& s : prism_signatures()) labels.push_back(s.label);
  }
  return labels;
}

TrialOutcome run_trial(const PipelineOptions& options, const Recording& recording, std::size_t trial_index,
                       std::vector<PulseEvent>* pulses) {
  const auto& header = recording.header;
  TrialOutcome out;
  out.kind = kind_of(header);
  out.truth = require_meta(header, "label");

  std::vector<FingerId> fingers;
  FingerId classified_finger = FingerId::Index;
  std::uint64_t total_ticks = 0;
  std::size_t maps_per_cycle = 0;
  if (out.kind == TrialKind::StaticBar) {
    if (const auto* name = header.find("finger")) {
      const auto f = finger_from_name(*name);
      if (!f) fail(ErrorCode::BadHeader, "unknown finger `" + *name + "`");
      classified_finger = *f;
    }
    fingers = {classified_finger};
    total_ticks = options.window_ticks;
  } else {
    fingers = {FingerId::Index, FingerId::Thumb};
    const auto fpc = meta_int<std::uint32_t>(header, "frames_per_cycle");
    const auto cycles = meta_int<std::uint32_t>(header, "cycles");
    if (options.bin_ticks == 0 || fpc % options.bin_ticks != 0)
      fail(ErrorCode::InvalidArgument, "bin_ticks must divide frames_per_cycle");
    maps_per_cycle = fpc / options.bin_ticks;
    total_ticks = static_cast<std::uint64_t>(fpc) * cycles;
  }
  if (total_ticks == 0) fail(ErrorCode::InvalidArgument, "trial window must span at least one tick");

  LinkModel link_model = options.link;
  link_model.rng_seed = derive_seed(options.seed, trial_index, 0);
  SimulatedLink link(link_model);
  LeaderSession leader;
  const TickPacer pacer(options.mode, header.tick_rate);

  std::map<FingerId, Scheduler> schedulers;
  for (auto f : fingers) {
    SchedulerConfig config{static_cast<double>(header.tick_rate), derive_seed(options.seed, trial_index, 1 + static_cast<std::uint64_t>(f)),
                           options.pulse_width_us};
    schedulers.emplace(f, Scheduler(config));
  }
  MapAccumulator window_acc(GridGeometry::electrode_preset(), classified_finger, header.tick_rate);
  MapAccumulator bin_acc(GridGeometry::electrode_preset(), classified_finger, header.tick_rate);
  std::vector<StimulationMap> series;

  std::size_t next_frame = 0;
  for (std::uint64_t t = 0; t < total_ticks; ++t) {
    pacer.wait_for(t);
    while (next_frame < recording.frames.size() && recording.frames[next_frame].tick <= t) {
      link.send(encode(recording.frames[next_frame]), t);
      ++next_frame;
    }

    std::map<FingerId, StimulusFrame> fresh;
    for (const auto& delivery : link.advance(t)) {
      const auto frame = leader.ingest_bytes(delivery.bytes);
      if (!frame || frame->type != FrameType::Pressure || !schedulers.contains(frame->finger)) continue;
      StimulusFrame stimulus;
      stimulus.finger = frame->finger;
      stimulus.tick = frame->tick;
      stimulus.probabilities = sensor_to_probabilities(frame->to_grid(header.geometry.pitch_mm), options.model,
                                                       options.mapping, options.max_count);
      fresh.insert_or_assign(frame->finger, std::move(stimulus));
    }

    for (auto& [finger, scheduler] : schedulers) {
      const auto it = fresh.find(finger);
      const auto events = scheduler.step(it == fresh.end() ? nullptr : &it->second);
      out.pulses += events.size();
      window_acc.add(events);
      bin_acc.add(events);
      if (pulses) pulses->insert(pulses->end(), events.begin(), events.end());
    }
    if (maps_per_cycle && (t + 1) % options.bin_ticks == 0) {
      series.push_back(bin_acc.finish(options.bin_ticks));
      bin_acc.reset();
    }
  }

  out.map = window_acc.finish(total_ticks);
  out.duration_s = static_cast<double>(total_ticks) / header.tick_rate;
  out.link = link.stats();
  out.session = leader.counters();

  if (out.kind == TrialKind::StaticBar) {
    const double thickness = text::parse_double(require_meta(header, "thickness")).value_or(1.5);
    const auto amplitude = meta_int<std::uint16_t>(header, "amplitude");
    const auto templates = bar_templates(options, thickness, amplitude);
    if (out.map.energy() > 0.0) {
      const auto c = classify_static(out.map, templates);
      out.predicted = c.label;
      out.score = c.scores[c.index];
    } else {
      // Nothing delivered: every template is equally (un)likely, so the
      // label-order tie-break applies.
      out.predicted = templates.front().label;
      out.classified = false;
      out.score = 0.0;
    }
  } else {
    const auto signatures = prism_signatures();
    const auto c = classify_dynamic(series, maps_per_cycle, signatures);
    out.predicted = c.classification.label;
    out.score = c.peaks_per_cycle;
  }
  return out;
}

void write_pulse_log(const std::filesystem::path& path, std::span<const PulseEvent> events) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  std::string buffer = "tick,finger,electrode,pulse_width_us\n";
  for (const auto& e : events) {
    buffer += std::to_string(e.tick);
    buffer += ',';
    buffer += std::to_string(static_cast<unsigned>(e.finger));
    buffer += ',';
    buffer += std::to_string(e.electrode_index);
    buffer += ',';
    buffer += std::to_string(e.pulse_width_us);
    buffer += '\n';
  }
  out << buffer;
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

PipelineResult run_pipeline(const PipelineOptions& options, std::span<const Recording> recordings,
                            std::span<const std::string> names, const std::optional<std::filesystem::path>& out_dir) {
  if (recordings.empty()) fail(ErrorCode::InvalidArgument, "pipeline needs at least one recording");
  if (names.size() != recordings.size()) fail(ErrorCode::InvalidArgument, "one name per recording");
  const TrialKind kind = kind_of(recordings.front().header);
  for (const auto& r : recordings)
    if (kind_of(r.header) != kind) fail(ErrorCode::LabelMismatch, "bar and scroll recordings cannot share one report");

  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir->string() + ": " + ec.message());
  }

  PipelineResult result;
  std::vector<TrialRecord> records;
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    std::vector<PulseEvent> pulses;
    const bool keep_pulses = out_dir && options.write_pulse_logs;
    auto outcome = run_trial(options, recordings[i], i, keep_pulses ? &pulses : nullptr);
    outcome.recording = names[i];
    if (keep_pulses) {
      char name[32];
      std::snprintf(name, sizeof name, "pulses_%03zu.csv", i);
      write_pulse_log(*out_dir / name, pulses);
    }
    records.push_back({outcome.truth, outcome.predicted, outcome.duration_s});
    result.trials.push_back(std::move(outcome));
  }
  const auto labels = class_labels(kind);
  result.tabulation = tabulate(records, labels);

  if (out_dir) {
    emit_report(result.tabulation.matrix, result.tabulation.timing, *out_dir);

    std::ostringstream trials;
    trials << "trial,recording,true,predicted,classified,duration_s,score,pulses,sent,dropped,handed_off,stale,gaps\n";
    std::ostringstream maps;
    maps << "trial,label,window_ticks";
    const auto cells = GridGeometry::electrode_preset().cell_count();
    for (std::size_t e = 0; e < cells; ++e) maps << ",e" << e;
    maps << '\n';
    for (std::size_t i = 0; i < result.trials.size(); ++i) {
      const auto& t = result.trials[i];
      trials << i << ',' << t.recording << ',' << t.truth << ',' << t.predicted << ',' << (t.classified ? 1 : 0) << ','
             << text::format_g(t.duration_s, 6) << ',' << text::format_g(t.score, 6) << ',' << t.pulses << ','
             << t.link.sent << ',' << t.link.dropped << ',' << t.session.handed_off << ',' << t.session.stale_count
             << ',' << t.session.gap_count << '\n';
      maps << i << ',' << t.truth << ',' << t.map.window_ticks;
      for (double d : t.map.densities) maps << ',' << text::format_g(d, 6);
      maps << '\n';
    }
    for (const auto& [file, content] : {std::pair{"trials.csv", trials.str()}, std::pair{"maps.csv", maps.str()}}) {
      std::ofstream out(*out_dir / file, std::ios::binary | std::ios::trunc);
      out << content;
      if (!out) fail(ErrorCode::IoError, std::string("write failed for ") + file);
    }
  }
  return result;
}

PipelineResult run_pipeline(const PipelineOptions& options, std::span<const std::filesystem::path> recordings,
                            const std::optional<std::filesystem::path>& out_dir) {
  std::vector<Recording> loaded;
  std::vector<std::string> names;
  for (const auto& path : recordings) {
    // Frames are paced inside run_trial, so the file is read in one go.
    loaded.push_back(replay(path));
    names.push_back(path.filename().string());
  }
  return run_pipeline(options, loaded, names, out_dir);
}

std::uint64_t stream_recording_udp(const std::filesystem::path& recording, const std::string& host,
                                   std::uint16_t port, TimeMode mode) {
  RecordingReader reader(recording);
  const TickPacer pacer(mode, reader.header().tick_rate);
  const UdpSocket socket = UdpSocket::unbound();
  std::uint64_t sent = 0;
  while (auto frame = reader.next()) {
    pacer.wait_for(frame->tick);
    socket.send_to(host, port, encode(*frame));
    ++sent;
  }
  return sent;
}

std::uint64_t capture_recording_udp(UdpSocket& socket, const std::filesystem::path& out, std::uint64_t max_frames,
                                    int idle_timeout_ms, std::span<const std::pair<std::string, std::string>> meta) {
  LeaderSession leader;
  std::vector<LogicalFrame> kept;
  while (kept.size() < max_frames) {
    const auto datagram = socket.receive(idle_timeout_ms);
    if (!datagram) break;
    if (auto frame = leader.ingest_bytes(*datagram)) kept.push_back(std::move(*frame));
  }
  Recording rec;
  if (!kept.empty()) rec.header.geometry = {kept.front().width, kept.front().height, 2.0};
  for (const auto& [k, v] : meta) rec.header.set(k, v);
  rec.header.set("source", "udp");
  std::stable_sort(kept.begin(), kept.end(), [](const auto& l, const auto& r) { return l.tick < r.tick; });
  std::erase_if(kept, [&](const LogicalFrame& f) {
    return f.width != rec.header.geometry.width || f.height != rec.header.geometry.height;
  });
  rec.frames = std::move(kept);
  record(out, rec);
  return rec.frames.size();
}

}  // namespace electroar
