// electroar command line. Links only the C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "electroar/electroar.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report(ear_status status) {
  if (status == EAR_OK) return kExitOk;
  std::fprintf(stderr, "error: %s: %s\n", ear_status_name(status), ear_last_error());
  return kExitDomain;
}

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ELECTROAR_OUT"); env && *env) return env;
  return ".";
}

// Default output path: flag, else <ELECTROAR_OUT or .>/<name>.
std::string output_path(const std::string& flag, const std::string& name) {
  if (!flag.empty()) return flag;
  return (std::filesystem::path(output_dir("")) / name).string();
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
}

int shape_code(const std::string& name) {
  if (name == "circle") return EAR_SHAPE_CIRCLE;
  if (name == "triangle") return EAR_SHAPE_TRIANGLE;
  if (name == "square") return EAR_SHAPE_SQUARE;
  if (name == "hexagon") return EAR_SHAPE_HEXAGON;
  throw UsageError("unknown shape `" + name + "`");
}

int finger_code(const std::string& name) {
  if (name == "thumb") return EAR_FINGER_THUMB;
  if (name == "index") return EAR_FINGER_INDEX;
  if (name == "middle") return EAR_FINGER_MIDDLE;
  throw UsageError("unknown finger `" + name + "`");
}

// --model accepts "a,b,k" or a model file written by `fit`.
ear_status resolve_model(const std::string& spec, double& a, double& b, double& k) {
  if (std::filesystem::exists(spec)) {
    ear_model* model = nullptr;
    const auto status = ear_model_load(spec.c_str(), &model);
    if (status != EAR_OK) return status;
    ear_model_params(model, &a, &b, &k);
    ear_model_destroy(model);
    return EAR_OK;
  }
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf,%lf,%lf%c", &a, &b, &k, &tail) != 3)
    throw UsageError("--model wants a,b,k or an existing model file, got `" + spec + "`");
  return EAR_OK;
}

struct GenerateArgs {
  int deg = 0;
  double thickness = 1.5;
  int amplitude = -1;
  std::uint64_t frames = 2400;
  std::string finger = "index";
  std::string shape = "circle";
  std::uint32_t frames_per_cycle = 720;
  std::uint32_t cycles = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate_bar(const GenerateArgs& g) {
  ear_bar_options o;
  ear_bar_options_default(&o);
  o.orientation_deg = g.deg;
  o.thickness_sensels = g.thickness;
  if (g.amplitude >= 0) o.amplitude = static_cast<std::uint16_t>(g.amplitude);
  o.frames = g.frames;
  o.finger = finger_code(g.finger);
  o.seed = g.seed;
  const auto path = output_path(g.out, "bar_" + std::to_string(g.deg) + ".earlog");
  ensure_parent(path);
  std::uint64_t written = 0;
  if (const auto s = ear_write_bar_recording(&o, path.c_str(), &written); s != EAR_OK) return report(s);
  std::printf("%s: %llu frames\n", path.c_str(), static_cast<unsigned long long>(written));
  return kExitOk;
}

int run_generate_scroll(const GenerateArgs& g) {
  ear_scroll_options o;
  ear_scroll_options_default(&o);
  o.shape = shape_code(g.shape);
  o.frames_per_cycle = g.frames_per_cycle;
  o.cycles = g.cycles;
  if (g.amplitude >= 0) o.amplitude = static_cast<std::uint16_t>(g.amplitude);
  o.seed = g.seed;
  const auto path = output_path(g.out, "scroll_" + g.shape + ".earlog");
  ensure_parent(path);
  std::uint64_t written = 0;
  if (const auto s = ear_write_scroll_recording(&o, path.c_str(), &written); s != EAR_OK) return report(s);
  std::printf("%s: %llu frames (%u cycles)\n", path.c_str(), static_cast<unsigned long long>(written), g.cycles);
  return kExitOk;
}

struct FitArgs {
  std::string input;
  std::string out;
  std::string trace;
};

int run_fit(const FitArgs& f) {
  const auto model_path = output_path(f.out, "model.csv");
  ensure_parent(model_path);
  if (!f.trace.empty()) ensure_parent(f.trace);
  ear_fit_summary summary;
  const auto s = ear_fit_csv(f.input.c_str(), model_path.c_str(), f.trace.empty() ? nullptr : f.trace.c_str(),
                             nullptr, &summary);
  if (s != EAR_OK) return report(s);
  std::printf("samples %zu, levels %zu\n", summary.sample_count, summary.level_count);
  for (std::size_t i = 0; i < summary.level_count && i < EAR_MAX_FIT_LEVELS; ++i)
    std::printf("  p=%.6g  mean=%.6g  n=%zu\n", summary.level_probability[i], summary.level_mean[i],
                summary.level_samples[i]);
  std::printf("a=%.10g b=%.10g k=%.10g residual=%.6g\n", summary.a, summary.b, summary.k, summary.residual);
  std::printf("model written to %s\n", model_path.c_str());
  return kExitOk;
}

struct PipelineArgs {
  std::vector<std::string> recordings;
  std::optional<std::uint64_t> seed;
  std::string mode = "simulated";
  double loss = 0.0;
  std::uint64_t latency = 1;
  std::uint64_t jitter = 0;
  double reorder = 0.0;
  std::string model = "3,6,150";
  std::uint64_t window = 2400;
  std::uint32_t bin = 24;
  bool no_pulse_logs = false;
  std::string out_dir;
};

int run_pipeline(const PipelineArgs& p) {
  const bool wall = p.mode == "wall-clock";
  if (!wall && !p.seed) throw UsageError("--seed is required in simulated mode");
  ear_pipeline_options o;
  ear_pipeline_options_default(&o);
  o.seed = p.seed.value_or(0);
  o.wall_clock = wall ? 1 : 0;
  o.link.loss_probability = p.loss;
  o.link.latency_ticks = p.latency;
  o.link.jitter_ticks = p.jitter;
  o.link.reorder_probability = p.reorder;
  o.window_ticks = p.window;
  o.bin_ticks = p.bin;
  o.write_pulse_logs = p.no_pulse_logs ? 0 : 1;
  if (const auto s = resolve_model(p.model, o.a, o.b, o.k); s != EAR_OK) return report(s);

  std::vector<const char*> paths;
  for (const auto& r : p.recordings) paths.push_back(r.c_str());
  const auto dir = output_dir(p.out_dir);
  ear_pipeline_result* result = nullptr;
  if (const auto s = ear_pipeline_run(&o, paths.data(), paths.size(), dir.c_str(), &result); s != EAR_OK)
    return report(s);
  const auto n = ear_pipeline_result_trial_count(result);
  for (std::size_t i = 0; i < n; ++i) {
    ear_trial_info t;
    ear_pipeline_result_trial(result, i, &t);
    std::printf("%-32s true=%-9s predicted=%-9s%s score=%.6g pulses=%llu\n", t.recording, t.truth, t.predicted,
                t.classified ? "" : " (no pulses)", t.score, static_cast<unsigned long long>(t.pulses));
  }
  std::printf("accuracy %.6g%% over %zu trials; reports in %s\n", 100.0 * ear_pipeline_result_accuracy(result), n,
              dir.c_str());
  ear_pipeline_result_destroy(result);
  return kExitOk;
}

int run_replay(const std::string& path) {
  ear_recording_info info;
  if (const auto s = ear_recording_info_read(path.c_str(), &info); s != EAR_OK) return report(s);
  std::printf("%s: %ux%u at %u Hz, %llu frames, ticks %llu..%llu, kind=%s label=%s\n", path.c_str(), info.width,
              info.height, info.tick_rate, static_cast<unsigned long long>(info.frame_count),
              static_cast<unsigned long long>(info.first_tick), static_cast<unsigned long long>(info.last_tick),
              info.kind, info.label);
  return kExitOk;
}

int run_analyze(const std::string& trials, const std::vector<std::string>& labels, const std::string& out_dir) {
  std::vector<const char*> l;
  for (const auto& s : labels) l.push_back(s.c_str());
  const auto dir = output_dir(out_dir);
  double acc = 0.0;
  const auto s = ear_analyze_trial_log(trials.c_str(), labels.empty() ? nullptr : l.data(), l.size(), dir.c_str(), &acc);
  if (s != EAR_OK) return report(s);
  std::printf("overall accuracy %.6g%%; reports in %s\n", 100.0 * acc, dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"electroar: tactile transfer pipeline simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ear_version()));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic stimulus recording");
  generate->require_subcommand(1);
  auto add_common = [&](CLI::App* c) {
    c->add_option("--amplitude", gen.amplitude, "peak pressure count")->check(CLI::Range(0, 65535));
    c->add_option("--seed", gen.seed, "recorded in the file metadata");
    c->add_option("--out", gen.out, "output recording path");
  };
  auto* bar = generate->add_subcommand("bar", "one bar orientation held for --frames ticks");
  bar->add_option("--deg", gen.deg, "orientation")->check(CLI::IsMember({0, 45, 90, 135}));
  bar->add_option("--thickness", gen.thickness, "bar thickness in sensels")->check(CLI::PositiveNumber);
  bar->add_option("--frames", gen.frames, "frame count, one per tick")->check(CLI::PositiveNumber);
  bar->add_option("--finger", gen.finger, "thumb, index or middle")
      ->check(CLI::IsMember({"thumb", "index", "middle"}));
  add_common(bar);
  auto* scroll = generate->add_subcommand("scroll", "prism scrolled back and forth between the fingers");
  scroll->add_option("--shape", gen.shape, "circle, triangle, square or hexagon")
      ->check(CLI::IsMember({"circle", "triangle", "square", "hexagon"}));
  scroll->add_option("--frames-per-cycle", gen.frames_per_cycle, "ticks per back-and-forth cycle");
  scroll->add_option("--cycles", gen.cycles, "cycle count");
  add_common(scroll);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit the intensity model to a calibration CSV");
  fit_cmd->add_option("--input", fit.input, "CSV with header probability,reported")->required();
  fit_cmd->add_option("--out", fit.out, "model file (a,b,k,residual)");
  fit_cmd->add_option("--trace", fit.trace, "k scan trace CSV");

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "run recordings through link, mapping, scheduler and classifier");
  pipe_cmd->add_option("recordings", pipe.recordings, "recording files, one trial each")->required();
  pipe_cmd->add_option("--seed", pipe.seed, "base seed (required in simulated mode)");
  pipe_cmd->add_option("--mode", pipe.mode, "simulated or wall-clock")
      ->check(CLI::IsMember({"simulated", "wall-clock"}));
  pipe_cmd->add_option("--loss", pipe.loss, "frame loss probability");
  pipe_cmd->add_option("--latency-ticks", pipe.latency, "base link delay");
  pipe_cmd->add_option("--jitter-ticks", pipe.jitter, "uniform delay jitter bound");
  pipe_cmd->add_option("--reorder", pipe.reorder, "adjacent swap probability");
  pipe_cmd->add_option("--model", pipe.model, "a,b,k or a model file");
  pipe_cmd->add_option("--window-ticks", pipe.window, "static scheduling window")->check(CLI::PositiveNumber);
  pipe_cmd->add_option("--bin-ticks", pipe.bin, "map length for scroll trials")->check(CLI::PositiveNumber);
  pipe_cmd->add_flag("--no-pulse-logs", pipe.no_pulse_logs, "skip pulses_NNN.csv");
  pipe_cmd->add_option("--out-dir", pipe.out_dir, "report directory (default $ELECTROAR_OUT or .)");

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "validate a recording and print its summary");
  replay_cmd->add_option("recording", replay_path)->required();

  std::string trials_path;
  std::vector<std::string> labels;
  std::string analyze_dir;
  auto* analyze_cmd = app.add_subcommand("analyze", "tabulate a trial log into report CSVs");
  analyze_cmd->add_option("trials", trials_path, "CSV with header true,predicted,duration_s")->required();
  analyze_cmd->add_option("--labels", labels, "class order (default: order of appearance)")->delimiter(',');
  analyze_cmd->add_option("--out-dir", analyze_dir, "report directory");

  std::string stream_path;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::string stream_mode = "simulated";
  auto* stream_cmd = app.add_subcommand("stream", "send a recording as UDP datagrams (follower side)");
  stream_cmd->add_option("recording", stream_path)->required();
  stream_cmd->add_option("--host", host);
  stream_cmd->add_option("--port", port)->required();
  stream_cmd->add_option("--mode", stream_mode)->check(CLI::IsMember({"simulated", "wall-clock"}));

  std::string listen_out;
  std::uint64_t max_frames = 0;
  int idle_ms = 2000;
  std::string meta_from;
  auto* listen_cmd = app.add_subcommand("listen", "capture UDP frames into a recording (leader side)");
  listen_cmd->add_option("--port", port)->required();
  listen_cmd->add_option("--out", listen_out, "output recording")->required();
  listen_cmd->add_option("--max-frames", max_frames, "stop after this many frames (0: until idle)");
  listen_cmd->add_option("--idle-ms", idle_ms, "stop after this long without data");
  listen_cmd->add_option("--meta-from", meta_from, "copy header metadata from this recording");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (bar->parsed()) return run_generate_bar(gen);
    if (scroll->parsed()) return run_generate_scroll(gen);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (pipe_cmd->parsed()) return run_pipeline(pipe);
    if (replay_cmd->parsed()) return run_replay(replay_path);
    if (analyze_cmd->parsed()) return run_analyze(trials_path, labels, analyze_dir);
    if (stream_cmd->parsed()) {
      std::uint64_t sent = 0;
      const auto s = ear_udp_stream_recording(stream_path.c_str(), host.c_str(), port, stream_mode == "wall-clock", &sent);
      if (s != EAR_OK) return report(s);
      std::printf("sent %llu frames to %s:%u\n", static_cast<unsigned long long>(sent), host.c_str(), port);
      return kExitOk;
    }
    if (listen_cmd->parsed()) {
      ear_udp_receiver* rx = nullptr;
      if (const auto s = ear_udp_receiver_open(port, &rx); s != EAR_OK) return report(s);
      std::printf("listening on 127.0.0.1:%u\n", ear_udp_receiver_port(rx));
      std::fflush(stdout);
      std::uint64_t written = 0;
      ensure_parent(listen_out);
      const auto s = ear_udp_receiver_capture(rx, listen_out.c_str(), max_frames, idle_ms,
                                              meta_from.empty() ? nullptr : meta_from.c_str(), &written);
      ear_udp_receiver_destroy(rx);
      if (s != EAR_OK) return report(s);
      std::printf("%s: %llu frames\n", listen_out.c_str(), static_cast<unsigned long long>(written));
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
