// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "electroar/analysis.hpp"
#include "electroar/error.hpp"
#include "electroar/grid.hpp"
#include "electroar/modulator.hpp"
#include "electroar/pipeline.hpp"
#include "electroar/psychophysics.hpp"
#include "electroar/transport.hpp"
#include "oracles.hpp"

using namespace electroar;
namespace fs = std::filesystem;

namespace {

constexpr double kLevels[] = {0.1, 0.2, 0.4, 0.6, 0.8, 1.0};

struct Verdict {
  bool ok = true;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict rate_law() {
  Verdict v;
  const auto geom = GridGeometry::electrode_preset();
  const std::uint64_t ticks = 12000;
  double worst = 0;
  auto run_level = [&](double p, std::uint64_t seed) {
    StimulusFrame f;
    f.probabilities.assign(geom.cell_count(), p);
    SchedulerConfig cfg;
    cfg.rng_seed = seed;
    const std::vector<StimulusFrame> frames{f};
    return run(frames, ticks, cfg).stats;
  };
  std::uint64_t seed = 100;
  for (double p : kLevels) {
    const auto stats = run_level(p, seed++);
    const double sigma = std::sqrt(ticks * p * (1 - p));
    for (std::size_t e = 0; e < stats.counts.size(); ++e) {
      const double dev = std::abs(static_cast<double>(stats.counts[e]) - ticks * p);
      if (p == 1.0) {
        if (stats.rate_hz(e) != 120.0) v.ok = false;
        continue;
      }
      worst = std::max(worst, dev / sigma);
      if (dev > 3 * sigma) v.ok = false;
    }
  }
  for (auto c : run_level(0.0, seed).counts)
    if (c != 0) v.ok = false;
  v.detail = "worst deviation " + fmt("%.3f", worst) + " sigma";
  return v;
}

Verdict round_trip() {
  Verdict v;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ub(1, 20), ua(0, 10), uk(50, 500), uf(0.01, 0.99);
  double worst = 0;
  int through_forward = 0;
  for (int m = 0; m < 1000; ++m) {
    const SigmoidModel model{ua(rng), ub(rng), uk(rng)};
    for (int s = 0; s < 10; ++s) {
      const double S = uf(rng) * model.k;
      const auto inv = inverse(model, S);
      double err = std::abs(evaluate(model, inv.unclamped) - S);
      if (!inv.clamped) {
        err = std::max(err, std::abs(forward(model, inv.probability) - S));
        ++through_forward;
      }
      worst = std::max(worst, err);
    }
  }
  v.ok = worst < 1e-9;
  v.detail = "max error " + fmt("%.3g", worst) + ", " + std::to_string(through_forward) + " via forward";
  return v;
}

Verdict fit_recovery() {
  Verdict v;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ub(1, 20), ua(0, 10), uk(50, 500);
  double worst = 0;
  for (int m = 0; m < 100; ++m) {
    const double a = ua(rng), b = ub(rng), k = uk(rng);
    std::vector<MagnitudeSample> samples;
    for (double p : kLevels) samples.push_back({p, oracle::sigmoid(a, b, k, p)});
    try {
      const auto got = fit(samples).model;
      worst = std::max({worst, std::abs(got.a - a) / a, std::abs(got.b - b) / b, std::abs(got.k - k) / k});
    } catch (const Error& e) {
      v.ok = false;
      v.detail = std::string("fit threw: ") + e.what();
      return v;
    }
  }
  v.ok = worst < 1e-6;
  v.detail = "worst relative error " + fmt("%.3g", worst);
  return v;
}

Verdict filter_oracle() {
  Verdict v;
  std::mt19937_64 rng(4);
  const GridGeometry geom{5, 10, 2.0};
  int mismatched = 0;
  for (int g = 0; g < 1000; ++g) {
    std::vector<std::uint16_t> cells(50);
    for (auto& c : cells) c = static_cast<std::uint16_t>(rng());
    const auto out = spatial_filter(PressureGrid(geom, cells));
    if (out.geometry().width != 4 || out.geometry().height != 9) ++mismatched;
    else if (std::vector<std::uint16_t>(out.values().begin(), out.values().end()) != oracle::box_filter(cells, 5, 10))
      ++mismatched;
  }
  v.ok = mismatched == 0;
  v.detail = std::to_string(mismatched) + " mismatched grids";
  return v;
}

Verdict codec() {
  Verdict v;
  std::mt19937_64 rng(5);
  auto random_frame = [&] {
    LogicalFrame f;
    f.type = static_cast<FrameType>(rng() % 3);
    f.finger = static_cast<FingerId>(rng() % 3);
    f.sequence = static_cast<std::uint32_t>(rng());
    f.tick = rng();
    f.width = 1 + rng() % 24;
    f.height = 1 + rng() % 24;
    f.values.resize(f.width * f.height);
    for (auto& x : f.values) x = static_cast<std::uint16_t>(rng());
    return f;
  };
  int bad_round_trips = 0, silent = 0;
  for (int n = 0; n < 10000; ++n) {
    const auto f = random_frame();
    const auto bytes = encode(f);
    const auto d = decode(bytes);
    const auto& g = d.frame;
    if (d.consumed != bytes.size() || g.type != f.type || g.finger != f.finger || g.sequence != f.sequence ||
        g.tick != f.tick || g.width != f.width || g.height != f.height || g.values != f.values)
      ++bad_round_trips;
    if (encode(g) != bytes) ++bad_round_trips;
  }
  for (int n = 0; n < 10000; ++n) {
    auto bytes = encode(random_frame());
    bytes[rng() % bytes.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      decode(bytes);
      ++silent;
    } catch (const Error&) {
    }
  }
  v.ok = bad_round_trips == 0 && silent == 0;
  v.detail = std::to_string(bad_round_trips) + " bad round trips, " + std::to_string(silent) + " undetected";
  return v;
}

std::vector<Recording> bar_corpus(std::uint64_t frames) {
  std::vector<Recording> out;
  for (int deg : kBarOrientations) out.push_back(bar_recording({deg, 1.5, 40000}, frames));
  return out;
}

std::vector<std::string> names(const std::vector<Recording>& recs) {
  std::vector<std::string> n;
  for (const auto& r : recs) n.push_back(*r.header.find("label"));
  return n;
}

Verdict static_bars() {
  Verdict v;
  const auto recs = bar_corpus(2400);
  int correct = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PipelineOptions o;
    o.seed = seed;
    o.write_pulse_logs = false;
    for (const auto& t : run_pipeline(o, recs, names(recs), std::nullopt).trials) {
      ++total;
      correct += t.classified && t.predicted == t.truth;
    }
  }
  v.ok = correct == 20 && total == 20;
  v.detail = std::to_string(correct) + "/" + std::to_string(total);
  return v;
}

Verdict dynamic_prisms() {
  Verdict v;
  std::vector<Recording> recs;
  for (auto cs : kCrossSections) {
    PrismSpec spec;
    spec.cross_section = cs;
    recs.push_back(scroll_recording(generate_scroll(spec, kDefaultFramesPerCycle, kDefaultCycles,
                                                    kDefaultScrollAmplitude)));
  }
  const std::map<std::string, double> want = {{"circle", 0}, {"triangle", 3}, {"square", 4}, {"hexagon", 6}};
  int correct = 0, exact = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    PipelineOptions o;
    o.seed = seed;
    o.write_pulse_logs = false;
    for (const auto& t : run_pipeline(o, recs, names(recs), std::nullopt).trials) {
      ++total;
      correct += t.predicted == t.truth;
      exact += want.count(t.truth) && t.score == want.at(t.truth);
    }
  }
  v.ok = correct == 20 && exact == 20;
  v.detail = std::to_string(correct) + "/" + std::to_string(total) + " correct, " + std::to_string(exact) +
             " exact peak counts";
  return v;
}

Verdict degradation() {
  Verdict v;
  const auto recs = bar_corpus(600);
  std::vector<double> means;
  for (double loss : {0.0, 0.3, 0.6, 0.9}) {
    double sum = 0;
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      PipelineOptions o;
      o.seed = seed;
      o.window_ticks = 600;
      o.link.loss_probability = loss;
      o.write_pulse_logs = false;
      sum += *run_pipeline(o, recs, names(recs), std::nullopt).tabulation.matrix.overall_accuracy();
      ++runs;
    }
    means.push_back(sum / runs);
  }
  for (std::size_t i = 1; i < means.size(); ++i)
    if (means[i] > means[i - 1]) v.ok = false;
  v.detail = "mean accuracy";
  for (double m : means) v.detail += " " + fmt("%.4g", m);
  return v;
}

Verdict tabulation_fidelity() {
  Verdict v;
  std::vector<TrialRecord> trials;
  auto add = [&](const std::string& t, const std::string& p, int n) {
    for (int i = 0; i < n; ++i) trials.push_back({t, p, 1.0 + i % 7});
  };
  add("bar_45", "bar_45", 73);
  add("bar_45", "bar_90", 10);
  add("bar_45", "bar_0", 9);
  add("bar_45", "bar_135", 8);
  add("bar_0", "bar_0", 87);
  add("bar_0", "bar_135", 13);
  const std::vector<std::string> labels = {"bar_0", "bar_45", "bar_90", "bar_135"};
  const auto tab = tabulate(trials, labels);
  const auto dir = fs::temp_directory_path() / ("electroar_tab_" + std::to_string(std::random_device{}()));
  emit_report(tab.matrix, tab.timing, dir);
  std::istringstream in(slurp(dir / "accuracy.csv"));
  fs::remove_all(dir);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  v.ok = lines.size() == 6 && lines[1] == "bar_0,87,100,0.87,87,bar_135,13" &&
         lines[2] == "bar_45,73,100,0.73,73,bar_90,10";
  v.detail = lines.size() > 2 ? lines[2] : "accuracy.csv incomplete";
  return v;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

int shell(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); }

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = slurp(e.path());
  return out;
}

// Returns the untimed setup cost separately so only the two runs count.
Verdict determinism(const fs::path& cli, const fs::path& work, double& setup_s) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  fs::remove_all(work);
  fs::create_directories(work);
  std::string inputs;
  for (int deg : kBarOrientations) {
    const auto rec = work / ("bar_" + std::to_string(deg) + ".earlog");
    if (shell(quoted(cli) + " generate bar --deg " + std::to_string(deg) + " --seed 3 --out " + quoted(rec)) != 0) {
      v.ok = false;
      v.detail = "generate failed";
      return v;
    }
    inputs += " " + quoted(rec);
  }
  setup_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const char* run : {"run_a", "run_b"}) {
    if (shell(quoted(cli) + " pipeline" + inputs + " --seed 42 --loss 0.2 --jitter-ticks 2 --reorder 0.1 --out-dir " +
              quoted(work / run)) != 0) {
      v.ok = false;
      v.detail = "pipeline failed";
      return v;
    }
  }
  const auto a = tree(work / "run_a"), b = tree(work / "run_b");
  std::size_t pulse_logs = 0;
  for (const auto& [name, _] : a) pulse_logs += name.rfind("pulses_", 0) == 0;
  v.ok = a == b && pulse_logs == 4 && a.count("accuracy.csv") && a.count("confusion.csv");
  v.detail = std::to_string(a.size()) + " files compared";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"electroar acceptance checks"};
  std::string cli;
  std::string work = (fs::temp_directory_path() / "electroar_acceptance").string();
  app.add_option("--cli", cli, "path to the electroar command-line tool")->required();
  app.add_option("--work", work, "scratch directory");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Verdict(double&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"rate law", 1.0, [](double&) { return rate_law(); }},
      {"sigmoid round trip", 1.0, [](double&) { return round_trip(); }},
      {"fit recovery", 10.0, [](double&) { return fit_recovery(); }},
      {"filter oracle", 1.0, [](double&) { return filter_oracle(); }},
      {"codec soundness", 5.0, [](double&) { return codec(); }},
      {"static separability", 5.0, [](double&) { return static_bars(); }},
      {"dynamic separability", 10.0, [](double&) { return dynamic_prisms(); }},
      {"degradation monotonicity", 10.0, [](double&) { return degradation(); }},
      {"tabulation fidelity", 1.0, [](double&) { return tabulation_fidelity(); }},
      {"global determinism", 5.0, [&](double& setup) { return determinism(cli, work, setup); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    double setup = 0;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run(setup);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() - setup;
    const bool fast = secs < c.limit_s;
    const bool pass = v.ok && fast;
    failures += !pass;
    std::printf("%s %2zu %-26s %.3fs (limit %gs)%s; %s\n", pass ? "PASS" : "FAIL", i + 1, c.name, secs, c.limit_s,
                fast ? "" : " too slow", v.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
