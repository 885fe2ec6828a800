#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdeval/partition.hpp"

namespace gdeval {

using nlohmann::json;

// One extracted subtask statistic, e.g. an estimation error or a partition
// distance, with enough context to stratify it later.
struct SubtaskStat {
  std::string kind;
  double value = 0;
  std::string context;
};

inline void to_json(json& j, const SubtaskStat& s) {
  j = json{{"kind", s.kind}, {"value", s.value}, {"context", s.context}};
}
inline void from_json(const json& j, SubtaskStat& s) {
  j.at("kind").get_to(s.kind);
  j.at("value").get_to(s.value);
  s.context = j.value("context", "");
}

// One seeded episode: everything needed to rebuild profiles and scores
// without re-reading the transcript.
struct RunRecord {
  std::string task;
  int n_blocks = 0;
  int seed = 0;
  std::uint64_t episode_seed = 0;
  std::string agent_id;
  std::string variant = "neutral";
  HeightMap heights;

  double ret = 0;
  bool excluded = false;
  std::string exclusion_reason;
  int steps = 0;
  int parse_failures = 0;
  // Agent messages that look like fabricated environment output (heuristic).
  int fabrication_flags = 0;

  std::map<BlockId, int> measurements;
  std::vector<std::vector<BlockId>> final_towers;
  std::vector<std::vector<std::vector<BlockId>>> declared_partitions;
  std::vector<double> declared_heights;
  std::optional<std::vector<std::vector<BlockId>>> requested_partition;
  std::optional<std::vector<std::vector<BlockId>>> shown_partition;
  std::optional<BlockId> target_block;

  double fall_threshold = 0;
  int collapses = 0;
  int rebuilds = 0;

  std::vector<SubtaskStat> stats;
  std::string transcript_file;
};

inline void to_json(json& j, const RunRecord& r) {
  j = json{{"task", r.task},
           {"n_blocks", r.n_blocks},
           {"seed", r.seed},
           {"episode_seed", r.episode_seed},
           {"agent_id", r.agent_id},
           {"variant", r.variant},
           {"heights", r.heights},
           {"return", r.ret},
           {"excluded", r.excluded},
           {"exclusion_reason", r.exclusion_reason},
           {"steps", r.steps},
           {"parse_failures", r.parse_failures},
           {"fabrication_flags", r.fabrication_flags},
           {"measurements", r.measurements},
           {"final_towers", r.final_towers},
           {"declared_partitions", r.declared_partitions},
           {"declared_heights", r.declared_heights},
           {"fall_threshold", r.fall_threshold},
           {"collapses", r.collapses},
           {"rebuilds", r.rebuilds},
           {"stats", r.stats},
           {"transcript_file", r.transcript_file}};
  if (r.requested_partition) j["requested_partition"] = *r.requested_partition;
  if (r.shown_partition) j["shown_partition"] = *r.shown_partition;
  if (r.target_block) j["target_block"] = *r.target_block;
}

inline void from_json(const json& j, RunRecord& r) {
  j.at("task").get_to(r.task);
  j.at("n_blocks").get_to(r.n_blocks);
  j.at("seed").get_to(r.seed);
  j.at("episode_seed").get_to(r.episode_seed);
  j.at("agent_id").get_to(r.agent_id);
  r.variant = j.value("variant", "neutral");
  j.at("heights").get_to(r.heights);
  j.at("return").get_to(r.ret);
  j.at("excluded").get_to(r.excluded);
  r.exclusion_reason = j.value("exclusion_reason", "");
  j.at("steps").get_to(r.steps);
  r.parse_failures = j.value("parse_failures", 0);
  r.fabrication_flags = j.value("fabrication_flags", 0);
  j.at("measurements").get_to(r.measurements);
  j.at("final_towers").get_to(r.final_towers);
  j.at("declared_partitions").get_to(r.declared_partitions);
  j.at("declared_heights").get_to(r.declared_heights);
  r.fall_threshold = j.value("fall_threshold", 0.0);
  r.collapses = j.value("collapses", 0);
  r.rebuilds = j.value("rebuilds", 0);
  j.at("stats").get_to(r.stats);
  r.transcript_file = j.value("transcript_file", "");
  if (j.contains("requested_partition"))
    r.requested_partition =
        j.at("requested_partition").get<std::vector<std::vector<BlockId>>>();
  if (j.contains("shown_partition"))
    r.shown_partition =
        j.at("shown_partition").get<std::vector<std::vector<BlockId>>>();
  if (j.contains("target_block"))
    r.target_block = j.at("target_block").get<BlockId>();
}

// One transcript turn; a transcript is an append-only list of these.
struct TranscriptEntry {
  std::string role;  // system | environment | agent
  std::string text;
};

inline void to_json(json& j, const TranscriptEntry& e) {
  j = json{{"role", e.role}, {"text", e.text}};
}
inline void from_json(const json& j, TranscriptEntry& e) {
  j.at("role").get_to(e.role);
  j.at("text").get_to(e.text);
}

struct Transcript {
  std::vector<TranscriptEntry> entries;
  void add(std::string role, std::string text) {
    entries.push_back({std::move(role), std::move(text)});
  }
};

}  // namespace gdeval
