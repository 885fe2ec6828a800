#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gdeval/partition.hpp"
#include "gdeval/record.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

enum class TaskId {
  InfoGathering,
  CognitiveEffort,
  PlanExecute,
  Combined,
  HeightEstimation,
  GenerateConfigurations,
  EvaluateConfiguration,
  SelectConfiguration,
  Execution,
  FallingTower,
  SteppingInfoGathering,
  SteppingCombined,
};

inline std::string to_string(TaskId id) {
  switch (id) {
    case TaskId::InfoGathering: return "info_gathering";
    case TaskId::CognitiveEffort: return "cognitive_effort";
    case TaskId::PlanExecute: return "plan_execute";
    case TaskId::Combined: return "combined";
    case TaskId::HeightEstimation: return "height_estimation";
    case TaskId::GenerateConfigurations: return "generate_configurations";
    case TaskId::EvaluateConfiguration: return "evaluate_configuration";
    case TaskId::SelectConfiguration: return "select_configuration";
    case TaskId::Execution: return "execution";
    case TaskId::FallingTower: return "falling_tower";
    case TaskId::SteppingInfoGathering: return "subtask_stepping_info_gathering";
    case TaskId::SteppingCombined: return "subtask_stepping_combined";
  }
  return "unknown";
}

inline TaskId task_id_from_string(const std::string& s) {
  for (TaskId id :
       {TaskId::InfoGathering, TaskId::CognitiveEffort, TaskId::PlanExecute,
        TaskId::Combined, TaskId::HeightEstimation,
        TaskId::GenerateConfigurations, TaskId::EvaluateConfiguration,
        TaskId::SelectConfiguration, TaskId::Execution, TaskId::FallingTower,
        TaskId::SteppingInfoGathering, TaskId::SteppingCombined}) {
    if (to_string(id) == s) return id;
  }
  throw ConfigError("unknown task id: " + s);
}

inline bool is_composite(TaskId id) {
  return id == TaskId::InfoGathering || id == TaskId::CognitiveEffort ||
         id == TaskId::PlanExecute || id == TaskId::Combined;
}

// Capability subtasks a composite task's simulator consumes.
inline std::vector<TaskId> required_subtasks(TaskId composite) {
  switch (composite) {
    case TaskId::InfoGathering:
      return {TaskId::HeightEstimation};
    case TaskId::CognitiveEffort:
      return {TaskId::GenerateConfigurations, TaskId::EvaluateConfiguration,
              TaskId::SelectConfiguration};
    case TaskId::PlanExecute:
      return {TaskId::GenerateConfigurations, TaskId::EvaluateConfiguration,
              TaskId::SelectConfiguration, TaskId::Execution};
    case TaskId::Combined:
      return {TaskId::HeightEstimation, TaskId::GenerateConfigurations,
              TaskId::EvaluateConfiguration, TaskId::SelectConfiguration,
              TaskId::Execution};
    default:
      return {};
  }
}

// Static task parameters; per-episode data lives in TaskContext.
struct TaskSpec {
  TaskId id;
  std::string name;
  NoiseConfig noise;
  int max_steps = 100;
  bool heights_known = false;   // listed in the prompt
  bool can_measure = false;
  bool can_manipulate = false;
  bool can_declare_towers = false;
  bool can_declare_height = false;
  bool can_declare_done = false;
};

inline TaskSpec task_spec(TaskId id) {
  TaskSpec s;
  s.id = id;
  s.name = to_string(id);
  switch (id) {
    case TaskId::InfoGathering:
      s.can_measure = s.can_manipulate = s.can_declare_done = true;
      break;
    case TaskId::CognitiveEffort:
      s.heights_known = true;
      s.can_declare_towers = true;
      break;
    case TaskId::PlanExecute:
      s.heights_known = true;
      s.can_manipulate = s.can_declare_done = true;
      s.noise = {0.2, 0.2};
      break;
    case TaskId::Combined:
      s.can_measure = s.can_manipulate = s.can_declare_done = true;
      s.noise = {0.2, 0.2};
      break;
    case TaskId::HeightEstimation:
      s.can_measure = s.can_declare_height = true;
      break;
    case TaskId::GenerateConfigurations:
      s.can_declare_towers = s.can_declare_done = true;
      break;
    case TaskId::EvaluateConfiguration:
      s.heights_known = true;
      s.can_declare_height = true;
      break;
    case TaskId::SelectConfiguration:
      s.heights_known = true;
      s.can_declare_towers = true;
      break;
    case TaskId::Execution:
      s.can_manipulate = s.can_declare_done = true;
      s.noise = {0.2, 0.2};
      break;
    case TaskId::FallingTower:
      s.can_manipulate = s.can_declare_done = true;
      s.max_steps = 200;
      break;
    case TaskId::SteppingInfoGathering:
      s.can_measure = s.can_manipulate = s.can_declare_done =
          s.can_declare_height = true;
      s.max_steps = 200;
      break;
    case TaskId::SteppingCombined:
      s.can_measure = s.can_manipulate = s.can_declare_done =
          s.can_declare_height = true;
      s.max_steps = 200;
      break;
  }
  return s;
}

inline std::vector<TaskId> all_task_ids() {
  return {TaskId::InfoGathering,         TaskId::CognitiveEffort,
          TaskId::PlanExecute,           TaskId::Combined,
          TaskId::HeightEstimation,      TaskId::GenerateConfigurations,
          TaskId::EvaluateConfiguration, TaskId::SelectConfiguration,
          TaskId::Execution,             TaskId::FallingTower,
          TaskId::SteppingInfoGathering, TaskId::SteppingCombined};
}

// --- Return functions -----------------------------------------------------

// Average pair sum over all unordered pairs: the expected outcome of
// stacking two uniformly random blocks.
inline double random_pair_expectation(const HeightMap& heights) {
  std::vector<double> hs;
  for (const auto& [b, h] : heights) hs.push_back(h);
  double total = 0;
  int pairs = 0;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      total += hs[i] + hs[j];
      ++pairs;
    }
  return total / pairs;
}

// Average lowest-tower height over all two-tower configurations: the
// expected outcome of declaring a uniformly random configuration.
inline double uniform_config_expectation(const HeightMap& heights) {
  std::vector<BlockId> blocks;
  for (const auto& [b, h] : heights) blocks.push_back(b);
  auto configs = enumerate_configurations(blocks);
  double total = 0;
  for (const auto& c : configs) total += two_tower_return(c, heights);
  return total / static_cast<double>(configs.size());
}

// Information Gathering return: true-height sum of the standing two-block
// tower. Episodes that end without one score the random-pair expectation,
// anchoring them at the baseline rather than at zero.
inline double info_gathering_return(const WorldState& final_state) {
  auto multi = final_state.multi_block_towers();
  for (const auto& t : multi)
    if (t.size() == 2) return final_state.stack_height(t);
  return random_pair_expectation(final_state.heights());
}

// Two-tower build return: lowest-tower height when the final arrangement is
// exactly two towers; otherwise the uniform-configuration expectation.
inline double build_task_return(const WorldState& final_state) {
  auto config = final_state.as_configuration();
  if (config) return two_tower_return(*config, final_state.heights());
  return uniform_config_expectation(final_state.heights());
}

// --- Subtask statistic extraction ----------------------------------------

namespace detail {
inline std::optional<Configuration> to_config(
    const std::vector<std::vector<BlockId>>& towers) {
  if (towers.size() != 2 || towers[0].empty() || towers[1].empty())
    return std::nullopt;
  return Configuration::make(towers[0], towers[1]);
}
}  // namespace detail

// Derives the capability statistics a run contributes: estimation errors,
// conceived-configuration counts, evaluation errors, and partition
// distances. Composite runs contribute measurement counts.
inline std::vector<SubtaskStat> extract_stats(const RunRecord& record) {
  std::vector<SubtaskStat> stats;
  TaskId id = task_id_from_string(record.task);
  auto ctx = [&](const std::string& extra) {
    return record.task + "/" + std::to_string(record.n_blocks) + "b/seed" +
           std::to_string(record.seed) + (extra.empty() ? "" : "/" + extra);
  };
  int total_measurements = 0;
  for (const auto& [b, k] : record.measurements) total_measurements += k;

  switch (id) {
    case TaskId::HeightEstimation: {
      if (record.declared_heights.empty() || !record.target_block) break;
      double truth = record.heights.at(*record.target_block);
      double declared = record.declared_heights.back();
      stats.push_back(
          {"estimation-error", declared - truth, ctx(*record.target_block)});
      stats.push_back({"measurement-count",
                       static_cast<double>(total_measurements), ctx("")});
      break;
    }
    case TaskId::GenerateConfigurations: {
      std::vector<Configuration> distinct;
      for (const auto& towers : record.declared_partitions) {
        auto c = detail::to_config(towers);
        if (!c) continue;
        if (std::find(distinct.begin(), distinct.end(), *c) == distinct.end())
          distinct.push_back(*c);
      }
      stats.push_back({"configuration-count",
                       static_cast<double>(distinct.size()), ctx("")});
      break;
    }
    case TaskId::EvaluateConfiguration: {
      if (record.declared_heights.empty() || !record.shown_partition) break;
      auto shown = detail::to_config(*record.shown_partition);
      if (!shown) break;
      double taller = std::max(tower_sum(shown->first, record.heights),
                               tower_sum(shown->second, record.heights));
      // Signed, so simulations can reproduce the direction of the bias.
      stats.push_back({"evaluation-error",
                       record.declared_heights.back() - taller, ctx("")});
      break;
    }
    case TaskId::SelectConfiguration: {
      if (record.declared_partitions.empty()) break;
      auto declared = detail::to_config(record.declared_partitions.back());
      if (!declared) break;
      int best = std::numeric_limits<int>::max();
      for (const auto& opt : optimal_configurations(record.heights))
        best = std::min(best, distance(*declared, opt));
      stats.push_back(
          {"selection-distance", static_cast<double>(best), ctx("")});
      break;
    }
    case TaskId::Execution: {
      if (!record.requested_partition) break;
      auto requested = detail::to_config(*record.requested_partition);
      if (!requested) break;
      std::vector<std::vector<BlockId>> stacks = record.final_towers;
      stats.push_back(
          {"execution-distance",
           static_cast<double>(moves_to_configuration(stacks, *requested)),
           ctx("")});
      break;
    }
    case TaskId::FallingTower: {
      stats.push_back(
          {"rebuild-count", static_cast<double>(record.rebuilds), ctx("")});
      stats.push_back({"collapse-count",
                       static_cast<double>(record.collapses), ctx("")});
      break;
    }
    default:
      break;
  }

  if (is_composite(id) || id == TaskId::SteppingInfoGathering ||
      id == TaskId::SteppingCombined) {
    stats.push_back({"measurement-count",
                     static_cast<double>(total_measurements), ctx("")});
    for (const auto& [b, k] : record.measurements)
      stats.push_back(
          {"measurements-per-block", static_cast<double>(k), ctx(b)});
  }
  if (id == TaskId::SteppingInfoGathering || id == TaskId::SteppingCombined) {
    // Estimation phases run in block-id order; declaration i belongs to
    // block i.
    auto blocks = block_names(record.n_blocks);
    for (std::size_t i = 0;
         i < blocks.size() && i < record.declared_heights.size(); ++i) {
      stats.push_back({"estimation-error",
                       record.declared_heights[i] -
                           record.heights.at(blocks[i]),
                       ctx(blocks[i])});
    }
  }
  return stats;
}

}  // namespace gdeval
