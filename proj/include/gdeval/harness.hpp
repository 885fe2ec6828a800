#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdeval/agents.hpp"
#include "gdeval/distractions.hpp"
#include "gdeval/episode.hpp"
#include "gdeval/mc.hpp"
#include "gdeval/record.hpp"
#include "gdeval/remote.hpp"
#include "gdeval/stats.hpp"
#include "gdeval/tasks.hpp"

namespace gdeval {

namespace fs = std::filesystem;

struct RunConfig {
  std::vector<std::string> tasks;
  std::vector<int> blocks = {3, 4, 5};
  int seeds = 30;
  json agent = json{{"kind", "random"}};
  std::string variant = "neutral";
  std::optional<double> perturb_prob;   // override per-task defaults
  std::optional<double> distract_prob;
  std::optional<int> max_steps;
  int mc_iterations = 10000;
  int bootstrap = 2000;
  std::uint64_t root_seed = 1;
  std::string out_dir = "out";
  std::string distraction_corpus;  // optional path, one paragraph per line

  void validate() const {
    if (tasks.empty()) throw ConfigError("config lists no tasks");
    if (seeds < 1) throw ConfigError("seed count must be >= 1");
    if (mc_iterations < 1) throw ConfigError("mc iterations must be >= 1");
    if (bootstrap < 1000) throw ConfigError("bootstrap replicates must be >= 1000");
    for (const auto& t : tasks) task_id_from_string(t);  // throws on unknown
    for (int b : blocks)
      if (b < 3 || b > 15) throw ConfigError("block counts must be in [3, 15]");
  }
};

inline void from_json(const json& j, RunConfig& c) {
  j.at("tasks").get_to(c.tasks);
  if (j.contains("blocks")) j.at("blocks").get_to(c.blocks);
  c.seeds = j.value("seeds", 30);
  if (j.contains("agent")) c.agent = j.at("agent");
  c.variant = j.value("variant", "neutral");
  if (j.contains("perturb_prob")) c.perturb_prob = j.at("perturb_prob").get<double>();
  if (j.contains("distract_prob")) c.distract_prob = j.at("distract_prob").get<double>();
  if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<int>();
  c.mc_iterations = j.value("mc_iterations", 10000);
  c.bootstrap = j.value("bootstrap", 2000);
  c.root_seed = j.value("root_seed", std::uint64_t{1});
  c.out_dir = j.value("out_dir", std::string("out"));
  c.distraction_corpus = j.value("distraction_corpus", std::string());
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j = json::parse(in);
  RunConfig c = j.get<RunConfig>();
  c.validate();
  return c;
}

// Builds an agent from its declarative spec.
inline std::unique_ptr<Agent> make_agent(const json& spec) {
  std::string kind = spec.value("kind", "random");
  if (kind == "random") return make_random_agent();
  if (kind == "oracle") return make_oracle_agent(spec.value("k", 20));
  if (kind == "noisy")
    return make_noisy_agent(spec.value("k", 8), spec.value("laziness", 1.0));
  if (kind == "scripted") {
    ScriptedAgentConfig c;
    c.id = spec.value("id", std::string("scripted"));
    c.measurements_per_block = spec.value("k", 20);
    c.laziness = spec.value("laziness", 1.0);
    c.falling_tower_give_up_after = spec.value("give_up_after", 2);
    return std::make_unique<ScriptedAgent>(c);
  }
  if (kind == "remote") {
    RemoteAgentConfig c;
    c.id = spec.value("id", std::string("remote"));
    c.base_url = spec.value("base_url", std::string());
    c.path = spec.value("path", std::string("/v1/chat/completions"));
    c.model = spec.value("model", std::string());
    c.api_key_env = spec.value("api_key_env", std::string("GDEVAL_API_KEY"));
    if (spec.contains("temperature"))
      c.temperature = spec.at("temperature").get<double>();
    c.request_log_dir = spec.value("request_log_dir", std::string());
    return std::make_unique<RemoteAgent>(c);
  }
  throw ConfigError("unknown agent kind: " + kind);
}

namespace detail {

inline std::string cell_key(const std::string& task, int n, int seed,
                            const std::string& agent_id,
                            const std::string& variant) {
  return task + "|" + std::to_string(n) + "|" + std::to_string(seed) + "|" +
         agent_id + "|" + variant;
}

inline std::vector<RunRecord> load_records(const fs::path& dir) {
  std::vector<RunRecord> out;
  std::ifstream in(dir / "records.jsonl");
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line).get<RunRecord>());
  }
  return out;
}

inline std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace detail

// Runs the full (task x blocks x seed) matrix, persisting each episode
// before starting the next; completed cells found on disk are skipped, so a
// killed run resumes where it stopped.
inline std::vector<RunRecord> run(const RunConfig& config) {
  config.validate();
  fs::path dir(config.out_dir);
  fs::create_directories(dir / "transcripts");

  auto agent = make_agent(config.agent);
  PromptVariant variant = prompt_variant_from_string(config.variant);

  std::vector<std::string> corpus_storage;
  EpisodeConfig ep;
  ep.variant = variant;
  if (config.max_steps) ep.max_steps_override = config.max_steps;
  if (!config.distraction_corpus.empty()) {
    corpus_storage = load_distraction_corpus(config.distraction_corpus);
    ep.corpus = &corpus_storage;
  }

  std::vector<RunRecord> existing = detail::load_records(dir);
  std::set<std::string> done_cells;
  for (const auto& r : existing)
    done_cells.insert(detail::cell_key(r.task, r.n_blocks, r.seed, r.agent_id,
                                       r.variant));

  std::ofstream records_out(dir / "records.jsonl", std::ios::app);
  if (!records_out)
    throw ConfigError("cannot open records file in " + config.out_dir);

  std::vector<RunRecord> all = existing;
  for (const auto& task_name : config.tasks) {
    TaskId id = task_id_from_string(task_name);
    // The falling-tower environment always uses its full 15-block set.
    std::vector<int> blocks =
        id == TaskId::FallingTower ? std::vector<int>{15} : config.blocks;
    TaskSpec spec = task_spec(id);
    EpisodeConfig cell_ep = ep;
    if (config.perturb_prob || config.distract_prob) {
      NoiseConfig noise = spec.noise;
      if (config.perturb_prob) noise.perturb_prob = *config.perturb_prob;
      if (config.distract_prob) noise.distract_prob = *config.distract_prob;
      cell_ep.noise_override = noise;
    }
    for (int n : blocks) {
      for (int seed = 0; seed < config.seeds; ++seed) {
        std::string key = detail::cell_key(task_name, n, seed, agent->id(),
                                           config.variant);
        if (done_cells.count(key)) continue;
        std::uint64_t episode_seed = Rng::derive_seed(
            config.root_seed,
            task_name + "/" + std::to_string(n) + "b/" + std::to_string(seed));
        Transcript transcript;
        RunRecord record =
            run_episode(id, n, seed, episode_seed, *agent, cell_ep, &transcript);
        std::string tname = task_name + "_" + std::to_string(n) + "b_" +
                            std::to_string(seed) + ".jsonl";
        record.transcript_file = "transcripts/" + tname;
        {
          std::ofstream tout(dir / "transcripts" / tname);
          for (const auto& e : transcript.entries)
            tout << json(e).dump() << "\n";
        }
        records_out << json(record).dump() << std::endl;  // flush per cell
        all.push_back(std::move(record));
        done_cells.insert(key);
      }
    }
  }
  records_out.close();

  // Canonicalize the on-disk order so a resumed run ends up byte-identical
  // to an uninterrupted one. Records outside this matrix keep their place.
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < all.size(); ++i)
    position[detail::cell_key(all[i].task, all[i].n_blocks, all[i].seed,
                              all[i].agent_id, all[i].variant)] = i;
  std::vector<RunRecord> ordered;
  std::vector<bool> placed(all.size(), false);
  for (const auto& task_name : config.tasks) {
    std::vector<int> blocks = task_id_from_string(task_name) ==
                                      TaskId::FallingTower
                                  ? std::vector<int>{15}
                                  : config.blocks;
    for (int n : blocks)
      for (int seed = 0; seed < config.seeds; ++seed) {
        auto it = position.find(detail::cell_key(task_name, n, seed,
                                                 agent->id(), config.variant));
        if (it == position.end() || placed[it->second]) continue;
        ordered.push_back(all[it->second]);
        placed[it->second] = true;
      }
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!placed[i]) ordered.push_back(all[i]);
  bool reordered = false;
  for (std::size_t i = 0; i < all.size() && !reordered; ++i)
    reordered = !(json(ordered[i]) == json(all[i]));
  if (reordered) {
    std::ofstream rewritten(dir / "records.jsonl", std::ios::trunc);
    for (const auto& r : ordered) rewritten << json(r).dump() << "\n";
  }
  return ordered;
}

// --- Analysis -------------------------------------------------------------

struct StratumResult {
  int n_blocks = 0;
  int n_runs = 0;
  int n_excluded = 0;
  GDEstimate estimate;
  double mean_r_pi = 0;
  double mean_r_star = 0;
  double mean_r_zero = 0;
  double regret = 0;
};

struct TaskResult {
  std::string task;
  std::vector<StratumResult> strata;
  GDEstimate aggregate;
  int n_runs = 0;
  int n_excluded = 0;
};

struct ResultsBundle {
  std::vector<TaskResult> tasks;
  // stratum -> stat kind -> summary
  std::map<int, std::map<std::string, std::vector<double>>> capabilities;
  json aux = json::array();
  std::vector<std::string> warnings;
  std::uint64_t records_hash = 0;
  int mc_iterations = 0;
  int bootstrap = 0;
};

namespace detail {

// Which subtask's records feed which capability sample set.
inline const std::map<std::string, std::string>& capability_sources() {
  static const std::map<std::string, std::string> sources = {
      {"estimation-error", "height_estimation"},
      {"configuration-count", "generate_configurations"},
      {"evaluation-error", "evaluate_configuration"},
      {"selection-distance", "select_configuration"},
      {"execution-distance", "execution"},
  };
  return sources;
}

inline std::map<int, CapabilityProfile> build_profiles(
    const std::vector<RunRecord>& records) {
  std::map<int, std::map<std::string, std::vector<double>>> samples;
  for (const auto& r : records) {
    if (r.excluded) continue;
    auto source = capability_sources();
    for (const auto& s : r.stats) {
      auto it = source.find(s.kind);
      if (it == source.end() || it->second != r.task) continue;
      samples[r.n_blocks][s.kind].push_back(s.value);
    }
  }
  std::map<int, CapabilityProfile> profiles;
  for (auto& [n, kinds] : samples) {
    CapabilityProfile& p = profiles[n];
    p.estimation_errors = kinds["estimation-error"];
    p.evaluation_errors = kinds["evaluation-error"];
    p.config_counts = kinds["configuration-count"];
    p.selection_distances = kinds["selection-distance"];
    p.execution_distances = kinds["execution-distance"];
  }
  return profiles;
}

}  // namespace detail

struct AnalyzeOptions {
  int mc_iterations = 10000;
  int bootstrap = 2000;
  std::uint64_t seed = 0xA11A;
  // Directory whose subtask records supply the capability profiles; empty
  // means the analyzed directory itself. Lets a weak policy be scored
  // against a reference capability level.
  std::string profiles_from;
};

inline ResultsBundle analyze(const std::string& in_dir,
                             const AnalyzeOptions& opt = {}) {
  fs::path dir(in_dir);
  std::vector<RunRecord> records = detail::load_records(dir);
  if (records.empty())
    throw ConfigError("no records found in " + in_dir);

  std::vector<RunRecord> profile_records = records;
  if (!opt.profiles_from.empty()) {
    profile_records = detail::load_records(fs::path(opt.profiles_from));
    if (profile_records.empty())
      throw ConfigError("no records found in " + opt.profiles_from);
  }

  ResultsBundle bundle;
  bundle.records_hash = detail::fnv1a_file(dir / "records.jsonl");
  bundle.mc_iterations = opt.mc_iterations;
  bundle.bootstrap = opt.bootstrap;

  auto profiles = detail::build_profiles(profile_records);
  for (const auto& [n, p] : profiles) {
    bundle.capabilities[n]["estimation-error"] = p.estimation_errors;
    bundle.capabilities[n]["evaluation-error"] = p.evaluation_errors;
    bundle.capabilities[n]["configuration-count"] = p.config_counts;
    bundle.capabilities[n]["selection-distance"] = p.selection_distances;
    bundle.capabilities[n]["execution-distance"] = p.execution_distances;
  }

  // Group records by task and stratum.
  std::map<std::string, std::map<int, std::vector<const RunRecord*>>> cells;
  for (const auto& r : records) cells[r.task][r.n_blocks].push_back(&r);

  for (const auto& [task_name, strata] : cells) {
    TaskId id = task_id_from_string(task_name);
    TaskResult result;
    result.task = task_name;
    std::vector<ReturnSamples> stratum_samples;

    for (const auto& [n, recs] : strata) {
      StratumResult sr;
      sr.n_blocks = n;
      for (const auto* r : recs)
        r->excluded ? ++sr.n_excluded : ++sr.n_runs;
      result.n_runs += sr.n_runs;
      result.n_excluded += sr.n_excluded;

      if (is_composite(id)) {
        std::vector<CompositeRun> runs;
        for (const auto* r : recs)
          if (!r->excluded) runs.push_back({r->heights, r->ret});
        if (runs.empty()) {
          bundle.warnings.push_back(task_name + " " + std::to_string(n) +
                                    "b: every run excluded; stratum skipped");
          result.strata.push_back(sr);
          continue;
        }
        auto pit = profiles.find(n);
        if (pit == profiles.end())
          throw ConfigError(task_name + " " + std::to_string(n) +
                            "b: no subtask records at this block count, "
                            "cannot build a capability profile");
        Rng sim_rng = Rng::child(opt.seed,
                                 "sim/" + task_name + "/" + std::to_string(n));
        ReturnSamples samples;
        try {
          samples = simulate_returns(id, pit->second, runs, n,
                                     opt.mc_iterations, sim_rng);
        } catch (const ConfigError& e) {
          throw ConfigError(task_name + " " + std::to_string(n) + "b: " +
                            e.what());
        }
        sr.mean_r_pi = mean(samples.r_pi);
        sr.mean_r_star = mean(samples.r_star);
        sr.mean_r_zero = mean(samples.r_zero);
        sr.regret = sr.mean_r_star - sr.mean_r_pi;
        Rng boot_rng = Rng::child(opt.seed,
                                  "boot/" + task_name + "/" + std::to_string(n));
        sr.estimate = bootstrap_gd(samples, opt.bootstrap, boot_rng);
        if (!sr.estimate.valid)
          bundle.warnings.push_back(task_name + " " + std::to_string(n) +
                                    "b: " + sr.estimate.note);
        else
          stratum_samples.push_back(std::move(samples));
      }
      result.strata.push_back(sr);
    }

    if (is_composite(id) && !stratum_samples.empty()) {
      Rng boot_rng = Rng::child(opt.seed, "boot/" + task_name + "/aggregate");
      result.aggregate =
          bootstrap_gd(stratum_samples, opt.bootstrap, boot_rng);
    }
    bundle.tasks.push_back(std::move(result));
  }

  // Auxiliary metrics.
  auto add_aux = [&](const std::string& task, int n, const std::string& metric,
                     double value) {
    bundle.aux.push_back(json{{"task", task},
                              {"n_blocks", n},
                              {"metric", metric},
                              {"value", value}});
  };
  for (const auto& [task_name, strata] : cells) {
    TaskId id = task_id_from_string(task_name);
    for (const auto& [n, recs] : strata) {
      std::vector<double> returns, per_block, rebuilds, collapses;
      for (const auto* r : recs) {
        if (r->excluded) continue;
        returns.push_back(r->ret);
        for (const auto& s : r->stats) {
          if (s.kind == "measurements-per-block") per_block.push_back(s.value);
          if (s.kind == "rebuild-count") rebuilds.push_back(s.value);
          if (s.kind == "collapse-count") collapses.push_back(s.value);
        }
      }
      if (!returns.empty()) add_aux(task_name, n, "mean-return", mean(returns));
      if (!per_block.empty()) {
        add_aux(task_name, n, "measurements-per-block-mean", mean(per_block));
        add_aux(task_name, n, "measurements-per-block-median",
                detail::median(per_block));
      }
      if (id == TaskId::FallingTower && !returns.empty()) {
        add_aux(task_name, n, "mean-rebuilds", mean(rebuilds));
        add_aux(task_name, n, "mean-collapses", mean(collapses));
      }
    }
  }

  // Persist so `report` can run as a separate command.
  json out;
  out["records_hash"] = bundle.records_hash;
  out["mc_iterations"] = bundle.mc_iterations;
  out["bootstrap"] = bundle.bootstrap;
  out["warnings"] = bundle.warnings;
  out["aux"] = bundle.aux;
  json jtasks = json::array();
  auto estimate_json = [](const GDEstimate& e) {
    return json{{"valid", e.valid},
                {"gd", e.gd},
                {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},
                {"replicate_mean", e.replicate_mean},
                {"replicates", e.replicates},
                {"degenerate_replicates", e.degenerate_replicates},
                {"note", e.note}};
  };
  for (const auto& t : bundle.tasks) {
    json jt{{"task", t.task},
            {"n_runs", t.n_runs},
            {"n_excluded", t.n_excluded},
            {"aggregate", estimate_json(t.aggregate)}};
    json js = json::array();
    for (const auto& s : t.strata)
      js.push_back(json{{"n_blocks", s.n_blocks},
                        {"n_runs", s.n_runs},
                        {"n_excluded", s.n_excluded},
                        {"mean_r_pi", s.mean_r_pi},
                        {"mean_r_star", s.mean_r_star},
                        {"mean_r_zero", s.mean_r_zero},
                        {"regret", s.regret},
                        {"estimate", estimate_json(s.estimate)}});
    jt["strata"] = js;
    jtasks.push_back(jt);
  }
  out["tasks"] = jtasks;
  json jcaps;
  for (const auto& [n, kinds] : bundle.capabilities) {
    json jk;
    for (const auto& [kind, values] : kinds)
      jk[kind] = json{{"count", values.size()},
                      {"mean", mean(values)},
                      {"median", detail::median(values)},
                      {"sd", detail::sample_sd(values)}};
    jcaps[std::to_string(n)] = jk;
  }
  out["capabilities"] = jcaps;
  std::ofstream afile(dir / "analysis.json");
  afile << out.dump(2) << "\n";

  return bundle;
}

// --- Reporting ------------------------------------------------------------

// Emits flat CSV tables plus a plot-data JSON from a stored analysis.
inline void report(const std::string& in_dir) {
  fs::path dir(in_dir);
  std::ifstream afile(dir / "analysis.json");
  if (!afile)
    throw ConfigError("no analysis.json in " + in_dir + "; run analyze first");
  json a = json::parse(afile);

  std::ofstream gd_csv(dir / "gd.csv");
  gd_csv << "task,n-blocks,gd,ci-low,ci-high,n-runs,n-excluded\n";
  std::ofstream regret_csv(dir / "regret.csv");
  regret_csv << "task,n-blocks,regret,mean-r-pi,mean-r-star,mean-r-zero\n";
  std::ofstream aux_csv(dir / "aux.csv");
  aux_csv << "task,n-blocks,metric,value\n";
  std::ofstream caps_csv(dir / "capabilities.csv");
  caps_csv << "n-blocks,kind,count,mean,median,sd\n";

  json plot;
  plot["records_hash"] = a.value("records_hash", std::uint64_t{0});
  plot["series"] = json::array();

  for (const auto& jt : a.value("tasks", json::array())) {
    std::string task = jt.at("task");
    TaskId id = task_id_from_string(task);
    json series{{"task", task}, {"points", json::array()}};
    for (const auto& js : jt.at("strata")) {
      int n = js.at("n_blocks");
      const json& e = js.at("estimate");
      if (is_composite(id) && e.value("valid", false)) {
        gd_csv << task << "," << n << "," << e.at("gd").get<double>() << ","
               << e.at("ci_low").get<double>() << ","
               << e.at("ci_high").get<double>() << ","
               << js.at("n_runs").get<int>() << ","
               << js.at("n_excluded").get<int>() << "\n";
        regret_csv << task << "," << n << ","
                   << js.at("regret").get<double>() << ","
                   << js.at("mean_r_pi").get<double>() << ","
                   << js.at("mean_r_star").get<double>() << ","
                   << js.at("mean_r_zero").get<double>() << "\n";
        series["points"].push_back(json{{"n_blocks", n},
                                        {"gd", e.at("gd")},
                                        {"ci_low", e.at("ci_low")},
                                        {"ci_high", e.at("ci_high")}});
      }
    }
    const json& agg = jt.at("aggregate");
    if (is_composite(id) && agg.value("valid", false)) {
      gd_csv << task << ",all," << agg.at("gd").get<double>() << ","
             << agg.at("ci_low").get<double>() << ","
             << agg.at("ci_high").get<double>() << ","
             << jt.at("n_runs").get<int>() << ","
             << jt.at("n_excluded").get<int>() << "\n";
      series["aggregate"] = json{{"gd", agg.at("gd")},
                                 {"ci_low", agg.at("ci_low")},
                                 {"ci_high", agg.at("ci_high")}};
    }
    if (is_composite(id)) plot["series"].push_back(series);
  }

  for (const auto& row : a.value("aux", json::array()))
    aux_csv << row.at("task").get<std::string>() << ","
            << row.at("n_blocks").get<int>() << ","
            << row.at("metric").get<std::string>() << ","
            << row.at("value").get<double>() << "\n";

  for (const auto& [n, kinds] : a.value("capabilities", json::object()).items())
    for (const auto& [kind, summary] : kinds.items())
      caps_csv << n << "," << kind << ","
               << summary.at("count").get<std::size_t>() << ","
               << summary.at("mean").get<double>() << ","
               << summary.at("median").get<double>() << ","
               << summary.at("sd").get<double>() << "\n";

  std::ofstream pfile(dir / "plotdata.json");
  pfile << plot.dump(2) << "\n";
}

}  // namespace gdeval
