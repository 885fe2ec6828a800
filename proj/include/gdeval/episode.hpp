#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gdeval/agents.hpp"
#include "gdeval/distractions.hpp"
#include "gdeval/partition.hpp"
#include "gdeval/prompts.hpp"
#include "gdeval/record.hpp"
#include "gdeval/tasks.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

struct EpisodeConfig {
  PromptVariant variant = PromptVariant::Neutral;
  std::optional<NoiseConfig> noise_override;
  std::optional<int> max_steps_override;
  const std::vector<std::string>* corpus = nullptr;  // null -> built-in
  std::optional<double> fall_threshold;              // pin instead of sampling
  int parse_retries = 3;
};

// Step budget grows with block count for tasks where a careful agent takes
// many measurements per block.
inline int default_max_steps(TaskId id, int n_blocks) {
  TaskSpec spec = task_spec(id);
  if (spec.can_measure && spec.can_manipulate) return 60 + 22 * n_blocks;
  if (id == TaskId::HeightEstimation) return 100;
  return spec.max_steps;
}

namespace detail {

inline bool is_valid_full_partition(
    const std::vector<std::vector<BlockId>>& towers,
    const std::vector<BlockId>& blocks) {
  if (towers.size() != 2 || towers[0].empty() || towers[1].empty())
    return false;
  std::vector<BlockId> seen;
  for (const auto& t : towers)
    for (const auto& b : t) seen.push_back(b);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) return false;
  std::vector<BlockId> want = blocks;
  std::sort(want.begin(), want.end());
  return seen == want;
}

}  // namespace detail

// Runs one seeded episode of one task with one agent. Strictly sequential:
// the WorldState never leaves this function.
inline RunRecord run_episode(TaskId id, int n_blocks, int seed_index,
                             std::uint64_t episode_seed, Agent& agent,
                             const EpisodeConfig& cfg = {},
                             Transcript* transcript_out = nullptr) {
  TaskSpec spec = task_spec(id);
  NoiseConfig noise = cfg.noise_override.value_or(spec.noise);
  int max_steps =
      cfg.max_steps_override.value_or(default_max_steps(id, n_blocks));
  const std::vector<std::string>& corpus =
      cfg.corpus ? *cfg.corpus : default_distraction_corpus();

  int n = id == TaskId::FallingTower ? 15 : n_blocks;
  Rng heights_rng = Rng::child(episode_seed, "heights");
  Rng setup_rng = Rng::child(episode_seed, "setup");
  Rng perturb_rng = Rng::child(episode_seed, "perturb");
  Rng distract_rng = Rng::child(episode_seed, "distract");

  HeightMap heights = sample_heights(n, heights_rng);
  std::vector<BlockId> blocks = block_names(n);
  WorldState world(heights, Rng::derive_seed(episode_seed, "measure"));

  RunRecord record;
  record.task = to_string(id);
  record.n_blocks = n;
  record.seed = seed_index;
  record.episode_seed = episode_seed;
  record.agent_id = agent.id();
  record.variant = to_string(cfg.variant);
  record.heights = heights;

  // Per-episode task data.
  TaskBrief brief;
  brief.id = id;
  brief.blocks = blocks;
  if (spec.heights_known) brief.known_heights = heights;
  if (id == TaskId::HeightEstimation) {
    // Cycle deterministically through blocks across seeds for balanced
    // coverage of "a randomly chosen block".
    brief.target_block = blocks[seed_index % n];
    record.target_block = brief.target_block;
  }
  if (id == TaskId::EvaluateConfiguration) {
    auto configs = enumerate_configurations(blocks);
    brief.shown = configs[setup_rng.index(configs.size())];
    record.shown_partition = {brief.shown->first, brief.shown->second};
  }
  if (id == TaskId::Execution) {
    auto configs = enumerate_configurations(blocks);
    brief.requested = configs[setup_rng.index(configs.size())];
    record.requested_partition = {brief.requested->first,
                                  brief.requested->second};
  }
  double fall_threshold = std::numeric_limits<double>::infinity();
  if (id == TaskId::FallingTower) {
    fall_threshold = cfg.fall_threshold.value_or(setup_rng.uniform(30.0, 60.0));
    record.fall_threshold = fall_threshold;
  }

  brief.system_text = system_prompt(cfg.variant);
  switch (id) {
    case TaskId::InfoGathering:
      brief.task_text = prompts::info_gathering(blocks);
      break;
    case TaskId::CognitiveEffort:
      brief.task_text = prompts::cognitive_effort(heights);
      break;
    case TaskId::PlanExecute:
      brief.task_text = prompts::plan_execute(heights);
      break;
    case TaskId::Combined:
      brief.task_text = prompts::combined(blocks);
      break;
    case TaskId::HeightEstimation:
      brief.task_text = prompts::height_estimation(*brief.target_block);
      break;
    case TaskId::GenerateConfigurations:
      brief.task_text = prompts::generate_configurations(blocks);
      break;
    case TaskId::EvaluateConfiguration:
      brief.task_text =
          prompts::evaluate_configuration(heights, *brief.shown);
      break;
    case TaskId::SelectConfiguration:
      brief.task_text = prompts::select_configuration(heights);
      break;
    case TaskId::Execution:
      brief.task_text = prompts::execution(*brief.requested);
      break;
    case TaskId::FallingTower:
      brief.task_text = prompts::falling_tower(blocks);
      break;
    case TaskId::SteppingInfoGathering:
    case TaskId::SteppingCombined:
      brief.task_text =
          "This task has several parts; follow the instructions as they "
          "arrive.\nThere are " +
          std::to_string(n) + " blocks on the table: " +
          prompts::join_blocks(blocks) +
          ". Each block has an unknown height between 5 and 10cm.\n" +
          prompts::stepping_estimate_phase(blocks[0]);
      break;
  }
  if (spec.can_manipulate) brief.task_text += "\n" + world.state_line();

  agent.begin_episode(brief, episode_seed);

  Transcript transcript;
  transcript.add("system", brief.system_text);
  transcript.add("environment", brief.task_text);

  AgentView view;
  view.text = brief.task_text;
  view.towers = world.towers();
  if (id == TaskId::GenerateConfigurations) view.another_config_request = true;
  if (id == TaskId::SteppingInfoGathering || id == TaskId::SteppingCombined)
    view.estimate_request = blocks[0];

  bool terminal = false;
  bool done_declared = false;
  int stepping_phase = 0;  // estimation phases 0..n-1, then build
  bool stepping_build = false;
  bool pending_rebuild = false;
  std::set<Configuration> generated;
  std::optional<Configuration> declared_config;
  int steps = 0;

  bool is_stepping =
      id == TaskId::SteppingInfoGathering || id == TaskId::SteppingCombined;

  while (!terminal && steps < max_steps) {
    // One action slot: up to parse_retries format reminders, then the slot
    // is forfeited as a wasted step.
    std::optional<Action> action;
    for (int attempt = 0; attempt <= cfg.parse_retries; ++attempt) {
      std::string msg = agent.next_message(view);
      transcript.add("agent", msg);
      // Crude check for agents inventing environment output in their own
      // messages (status lines or measurement readouts).
      if (msg.find("Towers: [") != std::string::npos ||
          msg.find("Measurement: ") != std::string::npos)
        ++record.fabrication_flags;
      auto parsed = parse_action(msg);
      if (parsed.ok()) {
        action = std::move(parsed.action);
        break;
      }
      ++record.parse_failures;
      if (attempt == cfg.parse_retries) break;
      std::string reminder = prompts::format_reminder();
      transcript.add("environment", reminder);
      view = AgentView{};
      view.text = reminder;
      view.towers = world.towers();
      view.holding = world.holding();
      view.format_reminder = true;
      if (is_stepping && !stepping_build)
        view.estimate_request = blocks[stepping_phase];
      view.build_request = stepping_build;
    }

    ++steps;
    std::string env_text;
    AgentView next_view;

    if (!action) {
      env_text =
          "No valid action was provided; the step is wasted.\n" +
          world.state_line();
      transcript.add("environment", env_text);
      next_view.text = env_text;
      next_view.towers = world.towers();
      next_view.holding = world.holding();
      view = next_view;
      continue;
    }

    // Task-level action gate.
    bool allowed =
        (action->is<MeasureAction>() && spec.can_measure) ||
        (is_manipulation(*action) && spec.can_manipulate) ||
        (action->is<TowersAction>() && spec.can_declare_towers) ||
        (action->is<HeightAction>() &&
         (spec.can_declare_height || is_stepping)) ||
        (action->is<DoneAction>() && spec.can_declare_done);
    if (!allowed) {
      env_text = "The action <" + action->raw +
                 "> is not available in this task.\n" + world.state_line();
      transcript.add("environment", env_text);
      next_view.text = env_text;
      next_view.towers = world.towers();
      next_view.holding = world.holding();
      if (is_stepping && !stepping_build)
        next_view.estimate_request = blocks[stepping_phase];
      next_view.build_request = stepping_build;
      view = next_view;
      continue;
    }

    auto [applied, perturbed] =
        perturb_action(*action, world, perturb_rng, noise.perturb_prob);
    Observation obs = world.apply(applied);

    if (obs.measurement)
      ++record.measurements[obs.measurement->first];

    // Declarations.
    if (applied.is<TowersAction>()) {
      const auto& towers = applied.as<TowersAction>().towers;
      if (!detail::is_valid_full_partition(towers, blocks)) {
        obs.status =
            "That is not a valid configuration: every block must appear in "
            "exactly one of two non-empty towers.\n" +
            world.state_line();
      } else {
        record.declared_partitions.push_back(towers);
        declared_config = Configuration::make(towers[0], towers[1]);
        if (id == TaskId::GenerateConfigurations) {
          bool fresh = generated.insert(*declared_config).second;
          obs.status = fresh
                           ? "Configuration noted. Can you think of one more "
                             "possible configuration?"
                           : "You already named that configuration (the two "
                             "towers are unordered). Can you think of a "
                             "different one?";
        }
      }
    }
    if (applied.is<HeightAction>())
      record.declared_heights.push_back(applied.as<HeightAction>().value_cm);
    if (applied.is<DoneAction>()) done_declared = true;

    if (is_manipulation(applied) && !obs.illegal && pending_rebuild &&
        applied.is<StackAction>()) {
      ++record.rebuilds;
      pending_rebuild = false;
    }

    // Falling tower dynamics: the first time the standing tower passes the
    // threshold, everything comes down.
    bool fell = false;
    if (id == TaskId::FallingTower &&
        world.tallest_standing_height() > fall_threshold) {
      world.topple_all();
      ++record.collapses;
      pending_rebuild = true;
      fell = true;
      obs.status +=
          "\nThe tower wobbled and collapsed! All blocks are back on the "
          "table.\n" +
          world.state_line();
    }

    // Stopping conditions.
    switch (id) {
      case TaskId::InfoGathering:
        for (const auto& t : world.multi_block_towers())
          if (t.size() == 2) terminal = true;
        if (done_declared) terminal = true;
        break;
      case TaskId::CognitiveEffort:
      case TaskId::SelectConfiguration:
        if (declared_config) terminal = true;
        break;
      case TaskId::HeightEstimation:
      case TaskId::EvaluateConfiguration:
        if (!record.declared_heights.empty()) terminal = true;
        break;
      case TaskId::GenerateConfigurations:
      case TaskId::Execution:
      case TaskId::PlanExecute:
      case TaskId::Combined:
      case TaskId::FallingTower:
        if (done_declared) terminal = true;
        break;
      case TaskId::SteppingInfoGathering:
      case TaskId::SteppingCombined:
        if (stepping_build) {
          if (id == TaskId::SteppingInfoGathering) {
            for (const auto& t : world.multi_block_towers())
              if (t.size() == 2) terminal = true;
          }
          if (done_declared) terminal = true;
        } else if (applied.is<HeightAction>()) {
          ++stepping_phase;
          if (stepping_phase < n) {
            obs.status +=
                "\nThank you. " +
                prompts::stepping_estimate_phase(blocks[stepping_phase]);
          } else {
            stepping_build = true;
            obs.status += "\nThank you. ";
            obs.status += id == TaskId::SteppingInfoGathering
                              ? prompts::stepping_build_info()
                              : prompts::stepping_build_combined();
            obs.status += "\n" + world.state_line();
          }
        }
        break;
    }

    obs.terminal = terminal;
    if (!terminal)
      obs = maybe_distract(std::move(obs), distract_rng, corpus,
                           noise.distract_prob);

    env_text = obs.full_text();
    transcript.add("environment", env_text);

    next_view.text = env_text;
    next_view.towers = world.towers();
    next_view.holding = world.holding();
    next_view.measurement = obs.measurement;
    next_view.tower_fell = fell;
    if (id == TaskId::GenerateConfigurations)
      next_view.another_config_request = true;
    if (is_stepping && !stepping_build)
      next_view.estimate_request = blocks[stepping_phase];
    next_view.build_request = stepping_build;
    view = next_view;
  }

  record.steps = steps;
  record.final_towers = world.towers();

  if (!terminal) {
    record.excluded = true;
    record.exclusion_reason = "max-steps";
  }
  if (id == TaskId::HeightEstimation && record.declared_heights.empty()) {
    record.excluded = true;
    record.exclusion_reason = "no-declaration";
  }
  if ((id == TaskId::CognitiveEffort || id == TaskId::SelectConfiguration) &&
      !declared_config) {
    record.excluded = true;
    record.exclusion_reason = "no-declaration";
  }

  switch (id) {
    case TaskId::InfoGathering:
    case TaskId::SteppingInfoGathering:
      record.ret = info_gathering_return(world);
      break;
    case TaskId::CognitiveEffort:
    case TaskId::SelectConfiguration:
      record.ret =
          declared_config ? two_tower_return(*declared_config, heights) : 0.0;
      break;
    case TaskId::PlanExecute:
    case TaskId::Combined:
    case TaskId::SteppingCombined:
      record.ret = build_task_return(world);
      break;
    case TaskId::FallingTower:
      record.ret = world.tallest_standing_height();
      break;
    default:
      record.ret = 0.0;
      break;
  }

  record.stats = extract_stats(record);
  if (transcript_out) *transcript_out = std::move(transcript);
  return record;
}

}  // namespace gdeval
