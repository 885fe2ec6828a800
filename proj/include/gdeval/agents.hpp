#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gdeval/partition.hpp"
#include "gdeval/prompts.hpp"
#include "gdeval/rng.hpp"
#include "gdeval/tasks.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

// Everything the agent is told when an episode starts.
struct TaskBrief {
  TaskId id = TaskId::InfoGathering;
  std::vector<BlockId> blocks;
  HeightMap known_heights;                 // empty when heights are hidden
  std::optional<BlockId> target_block;     // height estimation
  std::optional<Configuration> requested;  // execution
  std::optional<Configuration> shown;      // evaluation
  std::string system_text;
  std::string task_text;
};

// Structured mirror of the latest environment message. Scripted agents read
// this; the remote adapter only ever sees the rendered text.
struct AgentView {
  std::string text;
  std::vector<std::vector<BlockId>> towers;
  std::optional<BlockId> holding;
  std::optional<std::pair<BlockId, double>> measurement;
  bool another_config_request = false;     // generate-configurations loop
  std::optional<BlockId> estimate_request; // stepping: estimate this block
  bool build_request = false;              // stepping: build phase started
  bool tower_fell = false;
  bool format_reminder = false;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string id() const = 0;
  virtual void begin_episode(const TaskBrief& brief, std::uint64_t seed) = 0;
  virtual std::string next_message(const AgentView& view) = 0;
};

namespace detail {

inline std::string towers_tag(const Configuration& c) {
  return "<towers " + prompts::config_text(c) + ">";
}

inline std::string height_tag(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << "<height " << v << "cm>";
  return os.str();
}

inline std::vector<std::string> legal_manipulation_tags(const AgentView& v) {
  std::vector<std::string> out;
  if (v.holding) {
    for (const auto& t : v.towers)
      out.push_back("<stack " + *v.holding + " on " + t.back() + ">");
    out.push_back("<put down " + *v.holding + ">");
  } else {
    for (const auto& t : v.towers)
      out.push_back("<pick up " + t.back() + ">");
  }
  return out;
}

}  // namespace detail

// Baseline policy: a uniform draw over the currently legal actions each
// turn. Declarations count as single options; a chosen height declaration
// draws its value uniformly from the plausible range.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t salt = 0) : salt_(salt) {}

  std::string id() const override { return "random"; }

  void begin_episode(const TaskBrief& brief, std::uint64_t seed) override {
    brief_ = brief;
    spec_ = task_spec(brief.id);
    rng_ = Rng(Rng::derive_seed(seed ^ salt_, "random-agent"));
    configs_.clear();
    if (spec_.can_declare_towers)
      configs_ = enumerate_configurations(brief.blocks);
  }

  std::string next_message(const AgentView& view) override {
    std::vector<std::string> options;
    if (spec_.can_measure)
      for (const auto& b : brief_.blocks)
        options.push_back("<measure " + b + ">");
    if (spec_.can_manipulate) {
      auto manips = detail::legal_manipulation_tags(view);
      options.insert(options.end(), manips.begin(), manips.end());
    }
    for (const auto& c : configs_) options.push_back(detail::towers_tag(c));
    if (spec_.can_declare_height) options.push_back("@height");
    if (spec_.can_declare_done) options.push_back("<done>");
    if (options.empty()) return "<done>";
    std::string chosen = options[rng_.index(options.size())];
    if (chosen == "@height") {
      double lo = 5.0, hi = 10.0;
      if (!brief_.known_heights.empty()) {
        lo = 1e9;
        hi = 0;
        for (const auto& [b, h] : brief_.known_heights) {
          lo = std::min(lo, h);
          hi += h;
        }
      }
      return detail::height_tag(rng_.uniform(lo, hi));
    }
    return chosen;
  }

 private:
  std::uint64_t salt_;
  TaskBrief brief_;
  TaskSpec spec_;
  Rng rng_{0};
  std::vector<Configuration> configs_;
};

struct ScriptedAgentConfig {
  std::string id = "oracle";
  int measurements_per_block = 20;  // k
  // Composite-task error inflation: on composite tasks the agent takes only
  // k / laziness measurements per block and weighs only a 1/laziness
  // fraction of the candidate configurations, emulating under-use of a
  // demonstrated capability. Subtask behavior is unaffected.
  double laziness = 1.0;
  int falling_tower_give_up_after = 2;  // collapses endured before quitting
};

// Capability-matched reference agent. With laziness 1 it deploys on
// composite tasks exactly the capabilities it demonstrates on subtasks, so
// its goal-directedness calibrates to 1.
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(ScriptedAgentConfig config)
      : config_(std::move(config)) {
    if (config_.laziness < 1.0)
      throw ConfigError("laziness factor must be >= 1");
    if (config_.measurements_per_block < 1)
      throw ConfigError("measurements per block must be >= 1");
  }

  std::string id() const override { return config_.id; }

  void begin_episode(const TaskBrief& brief, std::uint64_t seed) override {
    brief_ = brief;
    spec_ = task_spec(brief.id);
    lazy_rng_ = Rng::child(seed, "laziness");
    readings_.clear();
    generate_index_ = 0;
    collapses_seen_ = 0;
    current_estimate_target_.reset();
    target_config_.reset();
    if (spec_.can_declare_towers && brief.blocks.size() >= 2)
      all_configs_ = enumerate_configurations(brief.blocks);
    else
      all_configs_.clear();
  }

  std::string next_message(const AgentView& view) override {
    if (view.measurement)
      readings_[view.measurement->first].push_back(view.measurement->second);

    switch (brief_.id) {
      case TaskId::HeightEstimation:
        return estimate_step(*brief_.target_block, subtask_k());
      case TaskId::EvaluateConfiguration: {
        double taller =
            std::max(tower_sum(brief_.shown->first, brief_.known_heights),
                     tower_sum(brief_.shown->second, brief_.known_heights));
        return detail::height_tag(taller);
      }
      case TaskId::SelectConfiguration:
        return detail::towers_tag(
            best_configuration(brief_.known_heights).config);
      case TaskId::GenerateConfigurations: {
        if (generate_index_ >= all_configs_.size()) return "<done>";
        return detail::towers_tag(all_configs_[generate_index_++]);
      }
      case TaskId::Execution:
        return build_step(view, *brief_.requested);
      case TaskId::CognitiveEffort: {
        if (!target_config_)
          target_config_ = composite_choice(brief_.known_heights);
        return detail::towers_tag(*target_config_);
      }
      case TaskId::PlanExecute: {
        if (!target_config_)
          target_config_ = composite_choice(brief_.known_heights);
        return build_step(view, *target_config_);
      }
      case TaskId::InfoGathering:
        return info_gathering_step(view, composite_k());
      case TaskId::Combined: {
        if (auto m = measure_all_step(composite_k())) return *m;
        if (!target_config_)
          target_config_ = composite_choice(estimated_heights());
        return build_step(view, *target_config_);
      }
      case TaskId::FallingTower:
        return falling_tower_step(view);
      case TaskId::SteppingInfoGathering:
      case TaskId::SteppingCombined:
        return stepping_step(view);
    }
    return "<done>";
  }

 private:
  int subtask_k() const { return config_.measurements_per_block; }
  int composite_k() const {
    return std::max(
        1, static_cast<int>(config_.measurements_per_block / config_.laziness));
  }

  // Composite-task configuration choice: the lazy agent only bothers to
  // weigh a 1/laziness fraction of the configurations (uniformly chosen,
  // at least one) and commits to the best of that subset.
  Configuration composite_choice(const HeightMap& est) {
    if (config_.laziness <= 1.0) return best_configuration(est).config;
    auto configs = enumerate_configurations(brief_.blocks);
    auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(configs.size() / config_.laziness)));
    for (std::size_t i = 0; i < m; ++i)
      std::swap(configs[i], configs[i + lazy_rng_.index(configs.size() - i)]);
    std::size_t best = 0;
    double best_value = two_tower_return(configs[0], est);
    for (std::size_t i = 1; i < m; ++i) {
      double v = two_tower_return(configs[i], est);
      if (v > best_value) {
        best_value = v;
        best = i;
      }
    }
    return configs[best];
  }

  double mean_reading(const BlockId& b) const {
    const auto& r = readings_.at(b);
    return std::accumulate(r.begin(), r.end(), 0.0) / r.size();
  }

  HeightMap estimated_heights() const {
    HeightMap est;
    for (const auto& b : brief_.blocks) est[b] = mean_reading(b);
    return est;
  }

  std::string estimate_step(const BlockId& target, int k) {
    auto it = readings_.find(target);
    if (it == readings_.end() || static_cast<int>(it->second.size()) < k)
      return "<measure " + target + ">";
    return detail::height_tag(mean_reading(target));
  }

  // Measures every block k times, in block order; empty when finished.
  std::optional<std::string> measure_all_step(int k) {
    for (const auto& b : brief_.blocks) {
      auto it = readings_.find(b);
      if (it == readings_.end() || static_cast<int>(it->second.size()) < k)
        return "<measure " + b + ">";
    }
    return std::nullopt;
  }

  std::string info_gathering_step(const AgentView& view, int k) {
    if (auto m = measure_all_step(k)) return *m;
    // Preferred pair: the two blocks with the highest estimates.
    std::vector<BlockId> order = brief_.blocks;
    std::sort(order.begin(), order.end(), [&](const BlockId& a,
                                              const BlockId& b) {
      return mean_reading(a) > mean_reading(b);
    });
    const BlockId& top = order[0];
    const BlockId& base = order[1];
    if (view.holding) {
      if (*view.holding == top) return "<stack " + top + " on " + base + ">";
      return "<put down " + *view.holding + ">";
    }
    return "<pick up " + top + ">";
  }

  // One corrective action toward the target configuration, recomputed from
  // the observed state each turn so perturbations get repaired.
  std::string build_step(const AgentView& view, const Configuration& target) {
    auto in_tower = [](const BlockId& b, const std::vector<BlockId>& tower) {
      return std::binary_search(tower.begin(), tower.end(), b);
    };
    auto subset_of = [&](const std::vector<BlockId>& stack,
                         const std::vector<BlockId>& tower) {
      return std::all_of(stack.begin(), stack.end(),
                         [&](const BlockId& b) { return in_tower(b, tower); });
    };
    // Anchors: the largest current stack that fits inside each target tower.
    int anchor1 = -1, anchor2 = -1;
    for (int i = 0; i < static_cast<int>(view.towers.size()); ++i) {
      const auto& stack = view.towers[i];
      if (subset_of(stack, target.first)) {
        if (anchor1 < 0 || stack.size() > view.towers[anchor1].size())
          anchor1 = i;
      } else if (subset_of(stack, target.second)) {
        if (anchor2 < 0 || stack.size() > view.towers[anchor2].size())
          anchor2 = i;
      }
    }
    if (!view.holding && view.towers.size() == 2 && anchor1 >= 0 &&
        anchor2 >= 0 &&
        view.towers[anchor1].size() == target.first.size() &&
        view.towers[anchor2].size() == target.second.size())
      return "<done>";
    if (view.holding) {
      const BlockId& held = *view.holding;
      bool to_first = in_tower(held, target.first);
      int anchor = to_first ? anchor1 : anchor2;
      if (anchor < 0) return "<put down " + held + ">";
      return "<stack " + held + " on " + view.towers[anchor].back() + ">";
    }
    // Dismantle any stack that is not an anchor.
    for (int i = 0; i < static_cast<int>(view.towers.size()); ++i)
      if (i != anchor1 && i != anchor2)
        return "<pick up " + view.towers[i].back() + ">";
    // Both anchors exist but a tower is incomplete: merge the smaller
    // fragment. This happens when a target tower is split across stacks.
    if (anchor1 >= 0 && view.towers[anchor1].size() < target.first.size())
      return "<pick up " + view.towers[anchor1].back() + ">";
    if (anchor2 >= 0 && view.towers[anchor2].size() < target.second.size())
      return "<pick up " + view.towers[anchor2].back() + ">";
    return "<done>";
  }

  std::string falling_tower_step(const AgentView& view) {
    if (view.tower_fell) ++collapses_seen_;
    if (collapses_seen_ > config_.falling_tower_give_up_after) return "<done>";
    if (view.holding) {
      // Stack onto the tallest existing stack.
      const std::vector<BlockId>* best = nullptr;
      for (const auto& t : view.towers)
        if (!best || t.size() > best->size()) best = &t;
      if (!best) return "<put down " + *view.holding + ">";
      return "<stack " + *view.holding + " on " + best->back() + ">";
    }
    if (view.towers.size() <= 1) return "<done>";  // everything stacked
    // Pick up the top of a shortest stack.
    const std::vector<BlockId>* donor = nullptr;
    for (const auto& t : view.towers)
      if (!donor || t.size() < donor->size()) donor = &t;
    return "<pick up " + donor->back() + ">";
  }

  std::string stepping_step(const AgentView& view) {
    if (view.estimate_request) current_estimate_target_ = *view.estimate_request;
    if (!view.build_request && current_estimate_target_)
      return estimate_step(*current_estimate_target_, subtask_k());
    if (brief_.id == TaskId::SteppingInfoGathering)
      return info_gathering_step(view, subtask_k());
    if (!target_config_)
      target_config_ = best_configuration(estimated_heights()).config;
    return build_step(view, *target_config_);
  }

  ScriptedAgentConfig config_;
  TaskBrief brief_;
  TaskSpec spec_;
  std::map<BlockId, std::vector<double>> readings_;
  std::vector<Configuration> all_configs_;
  std::size_t generate_index_ = 0;
  int collapses_seen_ = 0;
  std::optional<BlockId> current_estimate_target_;
  std::optional<Configuration> target_config_;
  Rng lazy_rng_{0};
};

inline std::unique_ptr<Agent> make_random_agent() {
  return std::make_unique<RandomAgent>();
}

inline std::unique_ptr<Agent> make_oracle_agent(int k) {
  ScriptedAgentConfig c;
  c.id = "oracle_k" + std::to_string(k);
  c.measurements_per_block = k;
  return std::make_unique<ScriptedAgent>(c);
}

inline std::unique_ptr<Agent> make_noisy_agent(int k, double laziness) {
  ScriptedAgentConfig c;
  std::ostringstream os;
  os << "noisy_k" << k << "_l" << laziness;
  c.id = os.str();
  c.measurements_per_block = k;
  c.laziness = laziness;
  return std::make_unique<ScriptedAgent>(c);
}

}  // namespace gdeval
