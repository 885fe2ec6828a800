#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdeval/rng.hpp"

namespace gdeval {

using BlockId = std::string;
using HeightMap = std::map<BlockId, double>;

// An unordered split of all blocks into two non-empty towers.
// Canonical form: both sides sorted, and the side holding the
// lexicographically smallest block stored first.
struct Configuration {
  std::vector<BlockId> first;
  std::vector<BlockId> second;

  static Configuration make(std::vector<BlockId> a, std::vector<BlockId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.empty() || b.empty())
      throw std::invalid_argument("configuration tower may not be empty");
    Configuration c;
    if (a.front() < b.front()) {
      c.first = std::move(a);
      c.second = std::move(b);
    } else {
      c.first = std::move(b);
      c.second = std::move(a);
    }
    return c;
  }

  std::vector<BlockId> all_blocks() const {
    std::vector<BlockId> out(first);
    out.insert(out.end(), second.begin(), second.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const Configuration& o) const {
    return first == o.first && second == o.second;
  }
  bool operator!=(const Configuration& o) const { return !(*this == o); }
  bool operator<(const Configuration& o) const {
    return first != o.first ? first < o.first : second < o.second;
  }
};

// All unordered two-tower partitions with both towers non-empty.
// Count is 2^(n-1) - 1; order is deterministic.
inline std::vector<Configuration> enumerate_configurations(
    std::vector<BlockId> blocks) {
  std::sort(blocks.begin(), blocks.end());
  std::size_t n = blocks.size();
  if (n < 2)
    throw std::invalid_argument("need at least 2 blocks to form two towers");
  if (n > 25) throw std::invalid_argument("exhaustive regime is n <= 25");
  std::vector<Configuration> out;
  std::size_t masks = (std::size_t{1} << (n - 1));
  // blocks[0] is pinned to the first tower; the mask places the rest.
  for (std::size_t mask = 1; mask < masks; ++mask) {
    std::vector<BlockId> a{blocks[0]}, b;
    for (std::size_t i = 1; i < n; ++i) {
      if (mask & (std::size_t{1} << (i - 1)))
        b.push_back(blocks[i]);
      else
        a.push_back(blocks[i]);
    }
    out.push_back(Configuration::make(std::move(a), std::move(b)));
  }
  return out;
}

inline double tower_sum(const std::vector<BlockId>& tower,
                        const HeightMap& heights) {
  double s = 0;
  for (const auto& b : tower) s += heights.at(b);
  return s;
}

// Height of the lower tower. A degenerate empty tower scores 0.
inline double two_tower_return(const Configuration& config,
                               const HeightMap& heights) {
  if (config.first.empty() || config.second.empty()) return 0.0;
  return std::min(tower_sum(config.first, heights),
                  tower_sum(config.second, heights));
}

struct BestConfiguration {
  Configuration config;
  double value = 0;
};

// Brute-force argmax of the lowest-tower height. Ties are broken by
// enumeration order (first wins) so the oracle is reproducible.
inline BestConfiguration best_configuration(const HeightMap& heights) {
  std::vector<BlockId> blocks;
  for (const auto& [b, h] : heights) blocks.push_back(b);
  auto configs = enumerate_configurations(blocks);
  BestConfiguration best{configs.front(),
                         two_tower_return(configs.front(), heights)};
  for (const auto& c : configs) {
    double v = two_tower_return(c, heights);
    if (v > best.value) best = {c, v};
  }
  return best;
}

// All configurations within tol of the optimum, in enumeration order.
inline std::vector<Configuration> optimal_configurations(
    const HeightMap& heights, double tol = 1e-9) {
  std::vector<BlockId> blocks;
  for (const auto& [b, h] : heights) blocks.push_back(b);
  auto configs = enumerate_configurations(blocks);
  double best = 0;
  for (const auto& c : configs)
    best = std::max(best, two_tower_return(c, heights));
  std::vector<Configuration> out;
  for (const auto& c : configs)
    if (two_tower_return(c, heights) >= best - tol) out.push_back(c);
  return out;
}

// Partition distance: minimum number of single-block moves turning one
// configuration into the other, minimized over the two tower matchings.
inline int distance(const Configuration& a, const Configuration& b) {
  if (a.all_blocks() != b.all_blocks())
    throw std::invalid_argument("configurations cover different block sets");
  auto mismatch = [](const std::vector<BlockId>& x,
                     const std::vector<BlockId>& y) {
    std::vector<BlockId> diff;
    std::set_difference(x.begin(), x.end(), y.begin(), y.end(),
                        std::back_inserter(diff));
    return static_cast<int>(diff.size());
  };
  int direct = mismatch(a.first, b.first) + mismatch(a.second, b.second);
  int crossed = mismatch(a.first, b.second) + mismatch(a.second, b.first);
  return std::min(direct, crossed);
}

struct ShellSample {
  Configuration config;
  int realized_distance = 0;
  bool clamped = false;
};

// Uniform draw from the set of configurations at exactly distance d from
// origin. If that shell is empty, falls back to the nearest non-empty
// shell below d and reports the clamp.
inline ShellSample sample_at_distance(const Configuration& origin, int d,
                                      Rng& rng) {
  if (d < 0) throw std::invalid_argument("distance must be non-negative");
  if (d == 0) return {origin, 0, false};
  auto configs = enumerate_configurations(origin.all_blocks());
  std::vector<std::vector<const Configuration*>> shells;
  for (const auto& c : configs) {
    int dist = distance(origin, c);
    if (static_cast<std::size_t>(dist) >= shells.size())
      shells.resize(dist + 1);
    shells[dist].push_back(&c);
  }
  int use = std::min<int>(d, static_cast<int>(shells.size()) - 1);
  while (use > 0 && shells[use].empty()) --use;
  if (use == 0) return {origin, 0, d != 0};
  const Configuration* chosen = shells[use][rng.index(shells[use].size())];
  return {*chosen, use, use != d};
}

// Minimum single-block moves from an arbitrary arrangement of stacks to a
// target two-tower configuration. Two existing stacks (possibly none) are
// kept as seeds of the target towers; every other block moves once.
inline int moves_to_configuration(
    const std::vector<std::vector<BlockId>>& stacks,
    const Configuration& target) {
  int n = static_cast<int>(target.first.size() + target.second.size());
  auto overlap = [](const std::vector<BlockId>& stack,
                    const std::vector<BlockId>& tower) {
    int k = 0;
    for (const auto& b : stack)
      if (std::binary_search(tower.begin(), tower.end(), b)) ++k;
    return k;
  };
  int best_kept = 0;
  int m = static_cast<int>(stacks.size());
  // -1 plays the role of "seed this tower from scratch".
  for (int i = -1; i < m; ++i) {
    for (int j = -1; j < m; ++j) {
      if (i == j && i != -1) continue;
      int kept = 0;
      if (i >= 0) kept += overlap(stacks[i], target.first);
      if (j >= 0) kept += overlap(stacks[j], target.second);
      best_kept = std::max(best_kept, kept);
    }
  }
  return n - best_kept;
}

}  // namespace gdeval
