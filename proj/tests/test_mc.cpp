#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "gdeval/mc.hpp"

using namespace gdeval;

namespace {

std::vector<CompositeRun> runs_579(double ret = 9.0) {
  return {{{{"a", 5}, {"b", 7}, {"c", 9}}, ret}};
}

CapabilityProfile degenerate_profile() {
  CapabilityProfile p;
  p.estimation_errors = {0.0};
  p.evaluation_errors = {0.0};
  p.config_counts = {1e9};  // clamps to the full enumeration
  p.selection_distances = {0.0};
  p.execution_distances = {0.0};
  return p;
}

}  // namespace

TEST_CASE("degenerate profile reproduces the brute-force optimum") {
  auto profile = degenerate_profile();
  Rng rng(1);
  for (TaskId id : {TaskId::InfoGathering, TaskId::CognitiveEffort,
                    TaskId::PlanExecute, TaskId::Combined}) {
    auto s = simulate_returns(id, profile, runs_579(), 3, 2000, rng);
    double expected = id == TaskId::InfoGathering ? 16.0 : 9.0;
    for (double v : s.r_star) REQUIRE(v == expected);
  }
}

TEST_CASE("baseline matches the exhaustive uniform average") {
  auto profile = degenerate_profile();
  Rng rng(2);
  auto info =
      simulate_returns(TaskId::InfoGathering, profile, runs_579(), 3, 10000, rng);
  double pair_mean = 0;
  for (double v : info.r_zero) pair_mean += v;
  pair_mean /= info.r_zero.size();
  REQUIRE(pair_mean == Catch::Approx(14.0).epsilon(0.01));

  auto ce = simulate_returns(TaskId::CognitiveEffort, profile, runs_579(), 3,
                             10000, rng);
  double cfg_mean = 0;
  for (double v : ce.r_zero) cfg_mean += v;
  cfg_mean /= ce.r_zero.size();
  REQUIRE(cfg_mean == Catch::Approx(7.0).epsilon(0.01));
}

TEST_CASE("estimation errors can flip the preferred pair") {
  CapabilityProfile p = degenerate_profile();
  p.estimation_errors = {6.0, 0.0};  // occasionally inflates a short block
  Rng rng(3);
  auto s =
      simulate_returns(TaskId::InfoGathering, p, runs_579(), 3, 20000, rng);
  std::map<double, int> support;
  for (double v : s.r_star) ++support[v];
  REQUIRE(support.count(16.0));  // b+c, the true optimum
  REQUIRE(support.count(14.0));  // a+c after a gets +6 and b gets 0
  for (const auto& [v, k] : support)
    REQUIRE((v == 16.0 || v == 14.0 || v == 12.0));
  // A constant shift never changes the argmax.
  p.estimation_errors = {3.0};
  auto shifted =
      simulate_returns(TaskId::InfoGathering, p, runs_579(), 3, 2000, rng);
  for (double v : shifted.r_star) REQUIRE(v == 16.0);
}

TEST_CASE("observed returns are resampled jointly with their heights") {
  CapabilityProfile p = degenerate_profile();
  std::vector<CompositeRun> runs = {{{{"a", 5}, {"b", 7}, {"c", 9}}, 9.0},
                                    {{{"a", 6}, {"b", 6}, {"c", 6}}, 6.0}};
  Rng rng(4);
  auto s = simulate_returns(TaskId::CognitiveEffort, p, runs, 3, 20000, rng);
  REQUIRE(s.r_pi.size() == 20000);
  int first = 0;
  for (std::size_t i = 0; i < s.r_pi.size(); ++i) {
    // Which run was drawn shows in r_pi; its heights must drive r_star.
    if (s.r_pi[i] == 9.0) {
      ++first;
      REQUIRE(s.r_star[i] == 9.0);
    } else {
      REQUIRE(s.r_pi[i] == 6.0);
      REQUIRE(s.r_star[i] == Catch::Approx(6.0));
    }
  }
  REQUIRE(std::abs(first / 20000.0 - 0.5) < 0.02);
}

TEST_CASE("m=1 makes the capable policy indistinguishable from random") {
  CapabilityProfile p = degenerate_profile();
  p.config_counts = {1.0};
  p.evaluation_errors = {2.0, -1.0};
  p.selection_distances = {1.0};
  Rng rng(5);
  auto s = simulate_returns(TaskId::CognitiveEffort, p, runs_579(), 3,
                            100000, rng);
  std::map<double, double> star, zero;
  for (double v : s.r_star) star[v] += 1.0 / s.r_star.size();
  for (double v : s.r_zero) zero[v] += 1.0 / s.r_zero.size();
  REQUIRE(star.size() == zero.size());
  for (const auto& [v, f] : zero)
    REQUIRE(star.at(v) == Catch::Approx(f).margin(0.01));
}

TEST_CASE("plan-execute adds an execution displacement") {
  CapabilityProfile p = degenerate_profile();
  Rng rng(6);

  // Zero execution distance collapses to the cognitive-effort pipeline.
  auto ce =
      simulate_returns(TaskId::CognitiveEffort, p, runs_579(), 3, 5000, rng);
  auto pe0 =
      simulate_returns(TaskId::PlanExecute, p, runs_579(), 3, 5000, rng);
  for (double v : pe0.r_star) REQUIRE(v == 9.0);
  REQUIRE(ce.r_star == std::vector<double>(5000, 9.0));

  // Distance-1 execution noise lands on a uniform neighbor of the optimum.
  p.execution_distances = {1.0};
  auto pe1 =
      simulate_returns(TaskId::PlanExecute, p, runs_579(), 3, 40000, rng);
  double mean_star = 0;
  for (double v : pe1.r_star) {
    REQUIRE((v == 5.0 || v == 7.0));  // the two distance-1 neighbors
    mean_star += v;
  }
  mean_star /= pe1.r_star.size();
  REQUIRE(mean_star == Catch::Approx(6.0).epsilon(0.01));
}

TEST_CASE("combined scores with true heights under estimated planning") {
  CapabilityProfile p = degenerate_profile();
  p.estimation_errors = {40.0, -40.0};  // estimates carry no signal
  Rng rng(7);
  auto wild =
      simulate_returns(TaskId::Combined, p, runs_579(), 3, 30000, rng);
  double mean_star = 0;
  for (double v : wild.r_star) {
    REQUIRE((v == 5.0 || v == 7.0 || v == 9.0));  // true-height support
    mean_star += v;
  }
  mean_star /= wild.r_star.size();
  // Uninformed estimates degrade the capable policy toward the baseline.
  REQUIRE(mean_star == Catch::Approx(7.0).margin(0.15));

  p.estimation_errors = {0.0};
  auto exact =
      simulate_returns(TaskId::Combined, p, runs_579(), 3, 2000, rng);
  for (double v : exact.r_star) REQUIRE(v == 9.0);
}

TEST_CASE("simulations are reproducible and stratified") {
  auto profile = degenerate_profile();
  Rng r1(42), r2(42);
  auto a = simulate_returns(TaskId::Combined, profile, runs_579(), 3, 500, r1);
  auto b = simulate_returns(TaskId::Combined, profile, runs_579(), 3, 500, r2);
  REQUIRE(a.r_star == b.r_star);
  REQUIRE(a.r_zero == b.r_zero);
  REQUIRE(a.r_pi == b.r_pi);
  REQUIRE(a.n_blocks == 3);
  REQUIRE(a.iterations == 500);
}

TEST_CASE("missing capability samples are reported by name") {
  CapabilityProfile p = degenerate_profile();
  p.selection_distances.clear();
  Rng rng(8);
  REQUIRE_THROWS_WITH(
      simulate_returns(TaskId::CognitiveEffort, p, runs_579(), 3, 10, rng),
      Catch::Matchers::ContainsSubstring("selection-distance"));
  REQUIRE_THROWS(simulate_returns(TaskId::HeightEstimation, p, runs_579(), 3,
                                  10, rng));
  REQUIRE_THROWS(simulate_returns(TaskId::CognitiveEffort, p, {}, 3, 10, rng));
}

TEST_CASE("simulated returns stay within the physical range") {
  CapabilityProfile p = degenerate_profile();
  p.estimation_errors = {2.0, -3.0, 0.5};
  p.evaluation_errors = {1.0, -1.0};
  p.config_counts = {1, 2, 3};
  p.selection_distances = {0, 1, 2};
  p.execution_distances = {0, 1};
  Rng rng(9);
  auto s = simulate_returns(TaskId::Combined, p, runs_579(), 3, 20000, rng);
  for (double v : s.r_star) {
    REQUIRE(v >= 5.0);   // lightest single block
    REQUIRE(v <= 21.0);  // sum of all heights
  }
}
