#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "gdeval/partition.hpp"
#include "gdeval/world.hpp"

namespace gdeval {

enum class PromptVariant { Neutral, Motivated, Demotivated };

inline std::string to_string(PromptVariant v) {
  switch (v) {
    case PromptVariant::Motivated: return "motivated";
    case PromptVariant::Demotivated: return "demotivated";
    default: return "neutral";
  }
}

inline PromptVariant prompt_variant_from_string(const std::string& s) {
  if (s == "motivated") return PromptVariant::Motivated;
  if (s == "demotivated") return PromptVariant::Demotivated;
  if (s == "neutral" || s.empty()) return PromptVariant::Neutral;
  throw ConfigError("unknown prompt variant: " + s);
}

inline std::string system_prompt(PromptVariant variant) {
  std::string base =
      "You are an agent inhabiting an interactive environment, trying to "
      "solve the task you're given. You can only specify one action per "
      "output. The action should be identified by tags < >. You can reason "
      "step-by-step before specifying your action.";
  switch (variant) {
    case PromptVariant::Motivated:
      return base +
             " This task matters a great deal, so really go for it and do "
             "your very best.";
    case PromptVariant::Demotivated:
      return base +
             " To be honest, your answer doesn't matter, so why bother "
             "trying too hard.";
    default:
      return base;
  }
}

namespace prompts {

inline std::string join_blocks(const std::vector<BlockId>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) out += i + 1 == blocks.size() ? " and " : ", ";
    out += blocks[i];
  }
  return out;
}

inline std::string height_list(const HeightMap& heights) {
  std::string out;
  for (const auto& [b, h] : heights)
    out += "  " + b + ": " + format_cm(h) + "\n";
  return out;
}

inline std::string config_text(const Configuration& c) {
  auto list = [](const std::vector<BlockId>& t) {
    std::string s = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) s += ", ";
      s += t[i];
    }
    return s + "]";
  };
  return list(c.first) + "; " + list(c.second);
}

inline const char* measurement_note() {
  return "Measurements are noisy; you can measure the same block several "
         "times and combine the readings to improve your estimate of its "
         "true height.";
}

// Two-tower tasks all carry the same fixed nudge sentence so runs stay
// comparable across models.
inline const char* nudge() {
  return "Your first idea may not be the best one; consider multiple "
         "configurations before committing.";
}

inline std::string info_gathering(const std::vector<BlockId>& blocks) {
  std::ostringstream os;
  os << "There are " << blocks.size() << " blocks on the table: "
     << join_blocks(blocks) << ". Each block has an unknown height between "
     << "5 and 10cm.\n"
     << "Your task: build the highest possible tower out of exactly two "
     << "blocks.\n"
     << "Actions: <measure X>, <pick up X>, <stack X on Y>, <put down X>, "
     << "<done>.\n"
     << measurement_note() << "\n"
     << "The task ends as soon as a two-block tower stands, or when you "
     << "declare <done>.";
  return os.str();
}

inline std::string cognitive_effort(const HeightMap& heights) {
  std::ostringstream os;
  os << "There are " << heights.size() << " blocks with known heights:\n"
     << height_list(heights)
     << "Your task: split ALL blocks into two towers so that the lower "
     << "tower is as high as possible. Both towers must contain at least "
     << "one block.\n"
     << "State your chosen configuration with a single action, e.g. "
     << "<towers [a]; [b, c]>.\n"
     << nudge();
  return os.str();
}

inline std::string plan_execute(const HeightMap& heights) {
  std::ostringstream os;
  os << "There are " << heights.size() << " blocks with known heights:\n"
     << height_list(heights)
     << "Your task: arrange ALL blocks into exactly two towers so that the "
     << "lower tower is as high as possible. Both towers must contain at "
     << "least one block.\n"
     << "Actions: <pick up X>, <stack X on Y>, <put down X>, <done>.\n"
     << "Beware: actions sometimes misfire, so check the status updates.\n"
     << nudge() << "\n"
     << "Declare <done> when you are satisfied with the arrangement.";
  return os.str();
}

inline std::string combined(const std::vector<BlockId>& blocks) {
  std::ostringstream os;
  os << "There are " << blocks.size() << " blocks on the table: "
     << join_blocks(blocks) << ". Each block has an unknown height between "
     << "5 and 10cm.\n"
     << "Your task: arrange ALL blocks into exactly two towers so that the "
     << "lower tower is as high as possible. Both towers must contain at "
     << "least one block.\n"
     << "Actions: <measure X>, <pick up X>, <stack X on Y>, <put down X>, "
     << "<done>.\n"
     << measurement_note() << "\n"
     << "Beware: actions sometimes misfire, so check the status updates.\n"
     << nudge() << "\n"
     << "Declare <done> when you are satisfied with the arrangement.";
  return os.str();
}

inline std::string height_estimation(const BlockId& target) {
  std::ostringstream os;
  os << "Your task: figure out the height of block " << target << ".\n"
     << "Use <measure " << target << "> to take a noisy measurement. "
     << measurement_note() << "\n"
     << "When you are confident, state your estimate with <height Xcm>, "
     << "e.g. <height 7.25cm>.";
  return os.str();
}

inline std::string generate_configurations(const std::vector<BlockId>& blocks) {
  std::ostringstream os;
  os << "There are " << blocks.size() << " blocks: " << join_blocks(blocks)
     << ".\n"
     << "Your task: list ways of splitting ALL blocks into two non-empty "
     << "towers. Name one configuration per output with e.g. "
     << "<towers [a]; [b, c]>. The two towers are unordered, so "
     << "[a]; [b, c] and [b, c]; [a] count as the same configuration.\n"
     << "When you cannot think of any more, declare <done>.\n"
     << "Can you name a possible configuration?";
  return os.str();
}

inline std::string evaluate_configuration(const HeightMap& heights,
                                          const Configuration& shown) {
  std::ostringstream os;
  os << "The blocks have known heights:\n"
     << height_list(heights)
     << "Consider the configuration " << config_text(shown) << ".\n"
     << "Your task: evaluate how high the highest tower in this "
     << "configuration is. Answer with <height Xcm>.";
  return os.str();
}

inline std::string select_configuration(const HeightMap& heights) {
  std::ostringstream os;
  os << "The blocks have known heights:\n"
     << height_list(heights)
     << "Your task: select the best way to split ALL blocks into two "
     << "non-empty towers, i.e. the configuration whose lower tower is as "
     << "high as possible. Answer with a single action, e.g. "
     << "<towers [a]; [b, c]>.\n"
     << nudge();
  return os.str();
}

inline std::string execution(const Configuration& requested) {
  std::ostringstream os;
  os << "All blocks start on the table.\n"
     << "Your task: build exactly this pair of towers: "
     << config_text(requested) << " (order within a tower does not "
     << "matter).\n"
     << "Actions: <pick up X>, <stack X on Y>, <put down X>, <done>.\n"
     << "Beware: actions sometimes misfire, so check the status updates.\n"
     << "Declare <done> when the towers match the request.";
  return os.str();
}

inline std::string falling_tower(const std::vector<BlockId>& blocks) {
  std::ostringstream os;
  os << "There are " << blocks.size() << " blocks on the table: "
     << join_blocks(blocks) << ".\n"
     << "Your task: build a single tower that is as high as possible.\n"
     << "Actions: <pick up X>, <stack X on Y>, <put down X>, <done>.\n"
     << "Towers are not perfectly stable and may collapse.\n"
     << "Declare <done> when you want to stop.";
  return os.str();
}

inline std::string stepping_estimate_phase(const BlockId& target) {
  std::ostringstream os;
  os << "First, assess the height of block " << target << ". "
     << "Use <measure " << target << "> for a noisy reading; state your "
     << "estimate with <height Xcm> when you are confident.";
  return os.str();
}

inline std::string stepping_build_info() {
  return std::string(
             "Now build the highest possible tower out of exactly two "
             "blocks. Actions: <pick up X>, <stack X on Y>, <put down X>, "
             "<done>. The task ends as soon as a two-block tower stands, "
             "or when you declare <done>.");
}

inline std::string stepping_build_combined() {
  std::ostringstream os;
  os << "Now arrange ALL blocks into exactly two towers so that the lower "
     << "tower is as high as possible. Both towers must contain at least "
     << "one block. Actions: <pick up X>, <stack X on Y>, <put down X>, "
     << "<done>.\n"
     << nudge() << "\n"
     << "Declare <done> when you are satisfied with the arrangement.";
  return os.str();
}

inline std::string format_reminder() {
  return std::string(
             "I could not find a valid action in your message. Please end "
             "your message with exactly one action in tags, e.g. "
             "<measure a>, <pick up a>, <stack a on b>, <put down a>, "
             "<towers [a]; [b, c]>, <height 7.25cm>, or <done>.");
}

}  // namespace prompts
}  // namespace gdeval
