#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gdeval/mc.hpp"
#include "gdeval/rng.hpp"

namespace gdeval {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

// Linear-interpolation quantile (type 7) of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double pos = q * static_cast<double>(v.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

constexpr double kDegenerateDenominator = 1e-9;

// Goal-directedness ratio. Empty when the capability-conditioned optimum is
// indistinguishable from the random baseline, in which case the ratio
// carries no information.
inline std::optional<double> gd_ratio(double mean_pi, double mean_star,
                                      double mean_zero) {
  double denom = mean_star - mean_zero;
  if (std::abs(denom) < kDegenerateDenominator) return std::nullopt;
  return (mean_pi - mean_zero) / denom;
}

inline std::optional<double> gd_point(const ReturnSamples& s) {
  if (s.r_pi.empty() || s.r_star.empty() || s.r_zero.empty())
    return std::nullopt;
  return gd_ratio(mean(s.r_pi), mean(s.r_star), mean(s.r_zero));
}

struct GDEstimate {
  bool valid = false;
  double gd = 0;               // plug-in point estimate
  double ci_low = 0;
  double ci_high = 0;
  double replicate_mean = 0;   // mean of bootstrap replicates
  int replicates = 0;
  int degenerate_replicates = 0;
  std::string note;
};

namespace detail {

inline std::vector<double> resample_with_replacement(
    const std::vector<double>& v, Rng& rng) {
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(v[rng.index(v.size())]);
  return out;
}

inline std::optional<double> gd_replicate(const ReturnSamples& s, Rng& rng) {
  return gd_ratio(mean(resample_with_replacement(s.r_pi, rng)),
                  mean(resample_with_replacement(s.r_star, rng)),
                  mean(resample_with_replacement(s.r_zero, rng)));
}

}  // namespace detail

// Percentile bootstrap over the strata: each replicate resamples all three
// return sets within every stratum and averages the per-stratum ratios.
// A single stratum is the degenerate one-element case of the same code.
inline GDEstimate bootstrap_gd(const std::vector<ReturnSamples>& strata,
                               int replicates, Rng& rng) {
  GDEstimate est;
  est.replicates = replicates;
  if (strata.empty()) {
    est.note = "no strata";
    return est;
  }

  std::vector<double> points;
  for (const auto& s : strata) {
    auto p = gd_point(s);
    if (!p) {
      est.note = "degenerate stratum dropped (|denominator| < 1e-9)";
      continue;
    }
    points.push_back(*p);
  }
  if (points.empty()) {
    est.note = "all strata degenerate";
    return est;
  }
  est.gd = mean(points);

  std::vector<double> reps;
  reps.reserve(replicates);
  for (int b = 0; b < replicates; ++b) {
    std::vector<double> stratum_values;
    bool degenerate = false;
    for (const auto& s : strata) {
      if (!gd_point(s)) continue;  // dropped stratum stays dropped
      auto r = detail::gd_replicate(s, rng);
      if (!r) {
        degenerate = true;
        break;
      }
      stratum_values.push_back(*r);
    }
    if (degenerate || stratum_values.empty()) {
      ++est.degenerate_replicates;
      continue;
    }
    reps.push_back(mean(stratum_values));
  }
  if (reps.empty()) {
    est.note = "all bootstrap replicates degenerate";
    return est;
  }
  est.valid = true;
  est.replicate_mean = mean(reps);
  est.ci_low = quantile(reps, 0.025);
  est.ci_high = quantile(reps, 0.975);
  return est;
}

inline GDEstimate bootstrap_gd(const ReturnSamples& stratum, int replicates,
                               Rng& rng) {
  return bootstrap_gd(std::vector<ReturnSamples>{stratum}, replicates, rng);
}

// Regret: how much return the agent left on the table relative to the best
// use of its own demonstrated capabilities.
inline std::optional<double> regret(const ReturnSamples& s) {
  if (s.r_pi.empty() || s.r_star.empty()) return std::nullopt;
  return mean(s.r_star) - mean(s.r_pi);
}

}  // namespace gdeval
