// Acceptance checks: one verdict line per criterion, checked end to end
// through the public pipeline (run -> analyze -> report) or against
// independent brute-force oracles.
#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gdeval/harness.hpp"

using namespace gdeval;
namespace fs = std::filesystem;

namespace {

void verdict(int n, const std::string& title, bool ok) {
  std::printf("ACCEPTANCE %2d %-28s %s\n", n, title.c_str(),
              ok ? "PASS" : "FAIL");
  std::fflush(stdout);
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("gdeval_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::vector<std::string> kComposites = {
    "info_gathering", "cognitive_effort", "plan_execute", "combined"};
const std::vector<std::string> kSubtasks = {
    "height_estimation", "generate_configurations", "evaluate_configuration",
    "select_configuration", "execution"};

std::vector<std::string> concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

const GDEstimate* aggregate_for(const ResultsBundle& bundle,
                                const std::string& task) {
  for (const auto& t : bundle.tasks)
    if (t.task == task) return &t.aggregate;
  return nullptr;
}

// The full oracle matrix is shared by criteria 1 and 2 (its subtask records
// provide the reference capability profiles for the random agent).
struct OracleMatrix {
  fs::path dir;
  ResultsBundle results;
  double seconds = 0;
};

const OracleMatrix& oracle_matrix() {
  static const OracleMatrix m = [] {
    OracleMatrix out;
    out.dir = fresh_dir("oracle");
    RunConfig c;
    c.tasks = concat(kComposites, kSubtasks);
    c.blocks = {3, 4, 5};
    c.seeds = 30;
    c.agent = {{"kind", "oracle"}, {"k", 20}};
    c.out_dir = out.dir.string();
    auto t0 = std::chrono::steady_clock::now();
    run(c);
    out.results = analyze(out.dir.string(), {});  // N=10000, B=2000 defaults
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
  }();
  return m;
}

RunRecord run_one(TaskId id, int n, int seed, Agent& agent) {
  std::uint64_t episode_seed = Rng::derive_seed(
      1, to_string(id) + "/" + std::to_string(n) + "b/" + std::to_string(seed));
  return run_episode(id, n, seed, episode_seed, agent, {}, nullptr);
}

double stat_value(const RunRecord& r, const std::string& kind) {
  for (const auto& s : r.stats)
    if (s.kind == kind) return s.value;
  return std::numeric_limits<double>::quiet_NaN();
}

ReturnSamples synthetic_samples(double pi, double star, double zero, double sd,
                                int n_pi, int n_sim, Rng& rng) {
  ReturnSamples s;
  for (int i = 0; i < n_pi; ++i) s.r_pi.push_back(rng.normal(pi, sd));
  for (int i = 0; i < n_sim; ++i) {
    s.r_star.push_back(rng.normal(star, sd));
    s.r_zero.push_back(rng.normal(zero, sd));
  }
  return s;
}

}  // namespace

TEST_CASE("criterion 1: oracle calibration") {
  const auto& m = oracle_matrix();
  bool ok = m.seconds < 600.0;
  for (const auto& task : kComposites) {
    const GDEstimate* est = aggregate_for(m.results, task);
    ok = ok && est && est->valid;
    if (est && est->valid) {
      ok = ok && est->gd >= 0.95 && est->gd <= 1.05;
      ok = ok && est->ci_low <= 1.0 && 1.0 <= est->ci_high;
    }
  }
  verdict(1, "oracle calibration", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 2: baseline calibration") {
  auto dir = fresh_dir("random");
  RunConfig c;
  c.tasks = kComposites;
  c.blocks = {3, 4, 5};
  c.seeds = 30;
  c.agent = {{"kind", "random"}};
  c.out_dir = dir.string();
  run(c);

  AnalyzeOptions opt;
  opt.profiles_from = oracle_matrix().dir.string();
  auto bundle = analyze(dir.string(), opt);

  bool ok = true;
  for (const auto& task : kComposites) {
    const GDEstimate* est = aggregate_for(bundle, task);
    ok = ok && est && est->valid && std::abs(est->gd) <= 0.10;
  }
  verdict(2, "baseline calibration", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 3: laziness monotonicity") {
  std::map<std::string, std::vector<GDEstimate>> sweep;  // task -> L=1,2,4
  for (double laziness : {1.0, 2.0, 4.0}) {
    auto dir = fresh_dir("noisy_l" + std::to_string(int(laziness)));
    RunConfig c;
    c.tasks = concat({"info_gathering", "combined"}, kSubtasks);
    c.blocks = {3, 4, 5};
    c.seeds = 30;
    c.agent = {{"kind", "noisy"}, {"k", 8}, {"laziness", laziness}};
    c.out_dir = dir.string();
    run(c);
    auto bundle = analyze(dir.string(), {});
    for (const std::string task : {"info_gathering", "combined"}) {
      const GDEstimate* est = aggregate_for(bundle, task);
      REQUIRE(est);
      sweep[task].push_back(*est);
    }
  }

  bool ok = true;
  for (const auto& [task, est] : sweep) {
    ok = ok && est[0].gd > est[1].gd && est[1].gd > est[2].gd;
    // 95% intervals for laziness 1 and 4 must not overlap.
    ok = ok && (est[0].ci_low > est[2].ci_high || est[2].ci_low > est[0].ci_high);
  }
  verdict(3, "laziness monotonicity", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 4: monte carlo anchors") {
  CapabilityProfile perfect;
  perfect.estimation_errors = {0.0};
  perfect.evaluation_errors = {0.0};
  perfect.config_counts = {1e9};  // clamps to the full enumeration
  perfect.selection_distances = {0.0};
  perfect.execution_distances = {0.0};

  // Two observed runs with distinct brute-force optima; r_pi identifies
  // which run an iteration resampled, so r_star must equal that optimum.
  std::vector<CompositeRun> runs = {{{{"a", 5}, {"b", 7}, {"c", 9}}, 9.0},
                                    {{{"a", 6}, {"b", 6}, {"c", 6}}, 6.0}};
  bool ok = true;
  Rng rng(2024);
  auto ce = simulate_returns(TaskId::CognitiveEffort, perfect, runs, 3, 10000,
                             rng);
  for (std::size_t i = 0; i < ce.r_star.size(); ++i)
    ok = ok && ce.r_star[i] == (ce.r_pi[i] == 9.0 ? 9.0 : 6.0);
  auto info =
      simulate_returns(TaskId::InfoGathering, perfect, runs, 3, 10000, rng);
  for (std::size_t i = 0; i < info.r_star.size(); ++i)
    ok = ok && info.r_star[i] == (info.r_pi[i] == 9.0 ? 16.0 : 12.0);

  // Baselines against the exhaustive uniform averages for n=3.
  std::vector<CompositeRun> single = {{{{"a", 5}, {"b", 7}, {"c", 9}}, 9.0}};
  auto base_info = simulate_returns(TaskId::InfoGathering, perfect, single, 3,
                                    10000, rng);
  auto base_cfg = simulate_returns(TaskId::CognitiveEffort, perfect, single, 3,
                                   10000, rng);
  double pair_mean = mean(base_info.r_zero);
  double cfg_mean = mean(base_cfg.r_zero);
  ok = ok && std::abs(pair_mean - 14.0) <= 0.01 * 14.0;  // (12+14+16)/3
  ok = ok && std::abs(cfg_mean - 7.0) <= 0.01 * 7.0;     // (5+7+9)/3
  verdict(4, "monte carlo anchors", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 5: partition oracle") {
  bool ok = true;

  // One-move example: {a,b | c} -> {a | b,c}.
  ok = ok && distance(Configuration::make({"a", "b"}, {"c"}),
                      Configuration::make({"a"}, {"b", "c"})) == 1;

  // Independent distance oracle: n minus the best matched overlap.
  auto oracle_distance = [](const Configuration& a, const Configuration& b) {
    auto common = [](const std::vector<BlockId>& x,
                     const std::vector<BlockId>& y) {
      int k = 0;
      for (const auto& e : x)
        if (std::find(y.begin(), y.end(), e) != y.end()) ++k;
      return k;
    };
    int n = static_cast<int>(a.first.size() + a.second.size());
    int straight = common(a.first, b.first) + common(a.second, b.second);
    int crossed = common(a.first, b.second) + common(a.second, b.first);
    return n - std::max(straight, crossed);
  };

  for (int n = 3; n <= 5 && ok; ++n) {
    std::vector<BlockId> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back(std::string(1, char('a' + i)));
    auto configs = enumerate_configurations(blocks);
    for (const auto& a : configs) {
      ok = ok && distance(a, a) == 0;
      for (const auto& b : configs) {
        int dab = distance(a, b);
        ok = ok && dab == distance(b, a);
        ok = ok && dab == oracle_distance(a, b);
        if (!(a == b)) ok = ok && dab > 0;
        for (const auto& c : configs)
          ok = ok && distance(a, c) <= dab + distance(b, c);
      }
    }
  }

  for (int n = 2; n <= 10; ++n) {
    std::vector<BlockId> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back(std::string(1, char('a' + i)));
    auto configs = enumerate_configurations(blocks);
    ok = ok && configs.size() == (std::size_t{1} << (n - 1)) - 1;
    std::set<Configuration> distinct(configs.begin(), configs.end());
    ok = ok && distinct.size() == configs.size();
  }
  verdict(5, "partition oracle", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 6: measurement statistics") {
  bool ok = true;
  for (double h : {5.0, 7.5, 10.0}) {
    HeightMap heights{{"a", h}, {"b", 6}, {"c", 6}};
    WorldState world(heights, 99);
    const int n = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      double x = world.measure("a");
      sum += x;
      sq += x * x;
    }
    double mean = sum / n;
    double sd = std::sqrt(sq / n - mean * mean);
    ok = ok && std::abs(mean - h) < 0.03;
    ok = ok && std::abs(sd - 0.1 * h) < 0.02 * 0.1 * h;
  }
  verdict(6, "measurement statistics", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 7: noise-channel rates") {
  bool ok = true;
  const int n = 10000;

  HeightMap heights{{"a", 5}, {"b", 6}, {"c", 7}};
  WorldState world(heights, 5);
  Rng rng(55);
  Action pick = *parse_action("<pick up a>").action;
  int perturbed = 0;
  for (int i = 0; i < n; ++i)
    if (perturb_action(pick, world, rng, 0.2).perturbed) ++perturbed;
  ok = ok && std::abs(perturbed / double(n) - 0.2) < 0.01;

  const auto& corpus = default_distraction_corpus();
  int distracted = 0;
  for (int i = 0; i < n; ++i) {
    Observation obs;
    obs.status = "You picked up a.";
    if (maybe_distract(std::move(obs), rng, corpus, 0.2).distraction)
      ++distracted;
  }
  ok = ok && std::abs(distracted / double(n) - 0.2) < 0.01;
  verdict(7, "noise-channel rates", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 8: estimator theory") {
  bool ok = true;
  for (int k : {1, 5, 20}) {
    auto agent = make_oracle_agent(k);
    // Readings are N(h, 0.1h), so relative errors are N(0, 0.1/sqrt(k)).
    double sq = 0;
    const int episodes = 1000;
    for (int seed = 0; seed < episodes; ++seed) {
      auto r = run_one(TaskId::HeightEstimation, 3, seed, *agent);
      double rel = stat_value(r, "estimation-error") /
                   r.heights.at(*r.target_block);
      sq += rel * rel;
    }
    double sd = std::sqrt(sq / episodes);
    double expected = 0.1 / std::sqrt(double(k));
    ok = ok && std::abs(sd - expected) <= 0.10 * expected;
  }
  verdict(8, "estimator theory", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 9: bootstrap coverage") {
  // True GD = (14-12)/(16-12) = 0.5 by construction.
  int covered = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng gen(3000 + t);
    auto s = synthetic_samples(14, 16, 12, 1.5, 30, 300, gen);
    Rng boot(9000 + t);
    auto est = bootstrap_gd(s, 1000, boot);
    if (est.valid && est.ci_low <= 0.5 && 0.5 <= est.ci_high) ++covered;
  }
  bool ok = covered >= 180;  // >= 90%

  // Quadrupling the sample sizes should roughly halve the interval.
  double widths[2];
  int idx = 0;
  for (int n : {30, 120}) {
    double total = 0;
    for (int t = 0; t < 30; ++t) {
      Rng gen(100 * n + t);
      auto s = synthetic_samples(14, 16, 12, 1.5, n, 4 * n, gen);
      Rng boot(17 + t);
      auto est = bootstrap_gd(s, 1000, boot);
      total += est.ci_high - est.ci_low;
    }
    widths[idx++] = total / 30;
  }
  double shrink = widths[0] / widths[1];
  ok = ok && shrink > 1.6 && shrink < 2.6;
  verdict(9, "bootstrap coverage", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 10: determinism and resumability") {
  auto make_config = [](const fs::path& dir) {
    RunConfig c;
    c.tasks = {"cognitive_effort", "generate_configurations",
               "evaluate_configuration", "select_configuration"};
    c.blocks = {3};
    c.seeds = 6;
    c.agent = {{"kind", "oracle"}, {"k", 5}};
    c.mc_iterations = 2000;
    c.bootstrap = 1000;
    c.out_dir = dir.string();
    return c;
  };
  AnalyzeOptions opt;
  opt.mc_iterations = 2000;
  opt.bootstrap = 1000;

  auto a = fresh_dir("det_a");
  auto b = fresh_dir("det_b");
  run(make_config(a));
  run(make_config(b));
  analyze(a.string(), opt);
  analyze(b.string(), opt);
  bool ok = slurp(a / "records.jsonl") == slurp(b / "records.jsonl");
  ok = ok && slurp(a / "analysis.json") == slurp(b / "analysis.json");

  // Kill-and-resume: a run stopped partway and finished later matches the
  // uninterrupted one byte for byte.
  auto resumed = fresh_dir("det_resumed");
  auto partial = make_config(resumed);
  partial.seeds = 3;
  run(partial);
  run(make_config(resumed));
  analyze(resumed.string(), opt);
  ok = ok && slurp(resumed / "records.jsonl") == slurp(a / "records.jsonl");
  ok = ok && slurp(resumed / "analysis.json") == slurp(a / "analysis.json");
  verdict(10, "determinism / resumability", ok);
  REQUIRE(ok);
}

TEST_CASE("criterion 11: gd unit anchors") {
  bool ok = true;
  ok = ok && *gd_ratio(14, 16, 12) == 0.5;
  ok = ok && *gd_ratio(12, 16, 12) == 0.0;  // policy equals the baseline
  ok = ok && *gd_ratio(16, 16, 12) == 1.0;  // policy equals the optimum

  // Anti-goal-directedness: a synthetic agent that lands below the random
  // baseline gets a negative score.
  Rng rng(77);
  auto s = synthetic_samples(10, 16, 12, 1.0, 40, 400, rng);
  Rng boot(78);
  auto est = bootstrap_gd(s, 1000, boot);
  ok = ok && est.valid && est.gd < 0.0 && est.ci_high < 0.0;
  verdict(11, "gd unit anchors", ok);
  REQUIRE(ok);
}
