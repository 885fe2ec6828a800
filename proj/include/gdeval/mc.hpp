#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "gdeval/partition.hpp"
#include "gdeval/rng.hpp"
#include "gdeval/tasks.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

// Empirical capability distributions measured on the subtasks, for one
// stratum (fixed block count). Values are resampled with replacement by the
// simulators below.
struct CapabilityProfile {
  std::vector<double> estimation_errors;    // declared - true, per block
  std::vector<double> evaluation_errors;    // declared - true, signed
  std::vector<double> config_counts;        // conceived configurations
  std::vector<double> selection_distances;  // partition distance to optimum
  std::vector<double> execution_distances;  // partition distance to request

  void require(const std::vector<double>& v, const std::string& name) const {
    if (v.empty())
      throw ConfigError("capability profile is missing " + name +
                        " samples; run the corresponding subtask first");
  }
};

// One observed composite episode: its true heights and the return achieved.
// Simulations resample these jointly so the height-return pairing survives.
struct CompositeRun {
  HeightMap heights;
  double ret = 0;
};

// Return samples feeding one GD ratio: resampled observed policy returns
// and the simulated capability-conditioned optimal / uniform-random
// returns, all of length `iterations`.
struct ReturnSamples {
  std::vector<double> r_pi;    // resampled observed composite returns
  std::vector<double> r_star;  // simulated best use of shown capabilities
  std::vector<double> r_zero;  // simulated uniform-random policy
  int n_blocks = 0;
  int iterations = 0;
};

namespace mc {

inline double resample(const std::vector<double>& v, Rng& rng) {
  return v[rng.index(v.size())];
}

// Draw m distinct indices uniformly from [0, total).
inline std::vector<std::size_t> sample_without_replacement(std::size_t total,
                                                           std::size_t m,
                                                           Rng& rng) {
  std::vector<std::size_t> pool(total);
  for (std::size_t i = 0; i < total; ++i) pool[i] = i;
  for (std::size_t i = 0; i < m; ++i)
    std::swap(pool[i], pool[i + rng.index(total - i)]);
  pool.resize(m);
  return pool;
}

inline void check_inputs(const std::vector<CompositeRun>& runs,
                         int iterations) {
  if (runs.empty()) throw ConfigError("no composite runs to resample");
  if (iterations < 1) throw ConfigError("iteration count must be >= 1");
}

// Information gathering: the simulated agent estimates each block's height
// with a resampled estimation error and stacks its two best guesses. The
// random policy stacks a uniform pair.
inline void simulate_info_gathering(const CapabilityProfile& profile,
                                    const std::vector<CompositeRun>& runs,
                                    int iterations, Rng& rng,
                                    ReturnSamples& out) {
  check_inputs(runs, iterations);
  profile.require(profile.estimation_errors, "estimation-error");
  for (int it = 0; it < iterations; ++it) {
    const CompositeRun& run = runs[rng.index(runs.size())];
    out.r_pi.push_back(run.ret);
    const HeightMap& heights = run.heights;

    std::vector<std::pair<double, const BlockId*>> perceived;
    for (const auto& [b, h] : heights)
      perceived.push_back({h + resample(profile.estimation_errors, rng), &b});
    std::sort(perceived.begin(), perceived.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    out.r_star.push_back(heights.at(*perceived[0].second) +
                         heights.at(*perceived[1].second));

    std::size_t n = heights.size();
    std::size_t i = rng.index(n);
    std::size_t j = rng.index(n - 1);
    if (j >= i) ++j;
    auto it_i = heights.begin(), it_j = heights.begin();
    std::advance(it_i, i);
    std::advance(it_j, j);
    out.r_zero.push_back(it_i->second + it_j->second);
  }
}

struct TwoTowerSimOptions {
  bool estimate_heights = false;  // heights hidden; estimation errors apply
  bool execution_noise = false;   // execution distances displace the result
};

// Shared core for the two-tower composites: conceive m configurations,
// score each under the perceived heights plus an evaluation error, pick the
// best, then displace it by the selection (and optionally execution)
// distance. Returned value uses the true heights.
inline void simulate_two_tower(const CapabilityProfile& profile,
                               const std::vector<CompositeRun>& runs,
                               int iterations, const TwoTowerSimOptions& opt,
                               Rng& rng, ReturnSamples& out) {
  check_inputs(runs, iterations);
  profile.require(profile.config_counts, "configuration-count");
  profile.require(profile.evaluation_errors, "evaluation-error");
  profile.require(profile.selection_distances, "selection-distance");
  if (opt.execution_noise)
    profile.require(profile.execution_distances, "execution-distance");
  if (opt.estimate_heights)
    profile.require(profile.estimation_errors, "estimation-error");

  for (int it = 0; it < iterations; ++it) {
    const CompositeRun& run = runs[rng.index(runs.size())];
    out.r_pi.push_back(run.ret);
    const HeightMap& heights = run.heights;

    std::vector<BlockId> blocks;
    for (const auto& [b, h] : heights) blocks.push_back(b);
    auto configs = enumerate_configurations(blocks);
    std::size_t total = configs.size();

    HeightMap perceived = heights;
    if (opt.estimate_heights)
      for (auto& [b, h] : perceived)
        h += resample(profile.estimation_errors, rng);

    std::size_t m = static_cast<std::size_t>(std::llround(
        std::clamp(resample(profile.config_counts, rng), 1.0,
                   static_cast<double>(total))));
    auto conceived = sample_without_replacement(total, m, rng);

    std::size_t best = conceived[0];
    double best_score = -1e18;
    for (std::size_t idx : conceived) {
      double score = two_tower_return(configs[idx], perceived) +
                     resample(profile.evaluation_errors, rng);
      if (score > best_score) {
        best_score = score;
        best = idx;
      }
    }

    int d_sel = static_cast<int>(
        std::llround(resample(profile.selection_distances, rng)));
    Configuration chosen = sample_at_distance(configs[best], d_sel, rng).config;
    if (opt.execution_noise) {
      int d_exec = static_cast<int>(
          std::llround(resample(profile.execution_distances, rng)));
      chosen = sample_at_distance(chosen, d_exec, rng).config;
    }
    out.r_star.push_back(two_tower_return(chosen, heights));

    out.r_zero.push_back(two_tower_return(configs[rng.index(total)], heights));
  }
}

}  // namespace mc

// Simulates the capability-conditioned optimal and uniform-random return
// distributions for one composite task in one stratum.
inline ReturnSamples simulate_returns(TaskId composite,
                                      const CapabilityProfile& profile,
                                      const std::vector<CompositeRun>& runs,
                                      int n_blocks, int iterations, Rng& rng) {
  ReturnSamples out;
  out.n_blocks = n_blocks;
  out.iterations = iterations;
  mc::TwoTowerSimOptions opt;
  switch (composite) {
    case TaskId::InfoGathering:
      mc::simulate_info_gathering(profile, runs, iterations, rng, out);
      break;
    case TaskId::CognitiveEffort:
      mc::simulate_two_tower(profile, runs, iterations, opt, rng, out);
      break;
    case TaskId::PlanExecute:
      opt.execution_noise = true;
      mc::simulate_two_tower(profile, runs, iterations, opt, rng, out);
      break;
    case TaskId::Combined:
      opt.estimate_heights = true;
      opt.execution_noise = true;
      mc::simulate_two_tower(profile, runs, iterations, opt, rng, out);
      break;
    default:
      throw ConfigError("not a composite task: " + to_string(composite));
  }
  return out;
}

}  // namespace gdeval
