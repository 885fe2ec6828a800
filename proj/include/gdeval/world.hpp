#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdeval/action.hpp"
#include "gdeval/partition.hpp"
#include "gdeval/rng.hpp"

namespace gdeval {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoiseConfig {
  double perturb_prob = 0.0;   // chance a manipulation becomes a random one
  double distract_prob = 0.0;  // chance a status update carries a distraction
};

struct Observation {
  std::string status;
  std::optional<std::pair<BlockId, double>> measurement;
  std::optional<std::string> distraction;
  bool terminal = false;
  bool illegal = false;  // the action was rejected and the state unchanged

  std::string full_text() const {
    if (!distraction) return status;
    return status + "\n\n" + *distraction;
  }
};

// Block ids "a", "b", ... in order.
inline std::vector<BlockId> block_names(int n) {
  std::vector<BlockId> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
  return out;
}

// True heights, i.i.d. uniform on [5, 10] cm.
inline HeightMap sample_heights(int n, Rng& rng) {
  if (n < 3 || n > 15)
    throw ConfigError("block count must be between 3 and 15");
  HeightMap heights;
  for (const auto& b : block_names(n)) heights[b] = rng.uniform(5.0, 10.0);
  return heights;
}

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

inline std::string format_cm(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << x << "cm";
  return os.str();
}

// Transcript style for measurements, e.g. "a: 9.65cm".
inline std::string format_reading(const BlockId& block, double reading) {
  return block + ": " + format_cm(reading);
}

// Blocks live in ordered stacks (bottom first); a block on the table is a
// one-block stack. The true heights stay hidden from agents.
class WorldState {
 public:
  WorldState(HeightMap heights, std::uint64_t measure_seed)
      : heights_(std::move(heights)), measure_rng_(measure_seed) {
    for (const auto& [b, h] : heights_) {
      if (h <= 0) throw ConfigError("heights must be strictly positive");
      towers_.push_back({b});
    }
  }

  const HeightMap& heights() const { return heights_; }
  const std::vector<std::vector<BlockId>>& towers() const { return towers_; }
  const std::optional<BlockId>& holding() const { return holding_; }
  int step() const { return step_; }

  bool has_block(const BlockId& b) const { return heights_.count(b) > 0; }

  bool is_top(const BlockId& b) const {
    for (const auto& t : towers_)
      if (t.back() == b) return true;
    return false;
  }

  // Stacks with at least two blocks.
  std::vector<std::vector<BlockId>> multi_block_towers() const {
    std::vector<std::vector<BlockId>> out;
    for (const auto& t : towers_)
      if (t.size() >= 2) out.push_back(t);
    return out;
  }

  double stack_height(const std::vector<BlockId>& stack) const {
    double s = 0;
    for (const auto& b : stack) s += heights_.at(b);
    return s;
  }

  double tallest_standing_height() const {
    double best = 0;
    for (const auto& t : towers_) best = std::max(best, stack_height(t));
    return best;
  }

  // Fresh noisy reading: N(h, 0.1 h), reported to 2 decimal places.
  double measure(const BlockId& block) {
    double h = heights_.at(block);
    return round2(measure_rng_.normal(h, 0.1 * h));
  }

  // Every legal pick-up / stack / put-down in the current state.
  std::vector<Action> legal_manipulations() const {
    std::vector<Action> out;
    if (holding_) {
      for (const auto& t : towers_)
        out.push_back({StackAction{*holding_, t.back()},
                       "stack " + *holding_ + " on " + t.back()});
      out.push_back({PutDownAction{*holding_}, "put down " + *holding_});
    } else {
      for (const auto& t : towers_)
        out.push_back({PickUpAction{t.back()}, "pick up " + t.back()});
    }
    return out;
  }

  // Applies stacking semantics; illegal moves leave the towers unchanged
  // and the observation explains why. The step counter always advances.
  Observation apply(const Action& action) {
    ++step_;
    Observation obs;
    if (const auto* m = std::get_if<MeasureAction>(&action.op)) {
      if (!has_block(m->block)) {
        obs.status = "There is no block called '" + m->block + "'.";
        obs.illegal = true;
      } else {
        double reading = measure(m->block);
        obs.measurement = {m->block, reading};
        obs.status = "Measurement: " + format_reading(m->block, reading);
      }
    } else if (const auto* p = std::get_if<PickUpAction>(&action.op)) {
      if (!has_block(p->block)) {
        obs.status = "There is no block called '" + p->block + "'.";
        obs.illegal = true;
      } else if (holding_) {
        obs.status = "You are already holding " + *holding_ +
                     "; put it down or stack it first.";
        obs.illegal = true;
      } else if (!is_top(p->block)) {
        obs.status = "Block " + p->block +
                     " has another block on top of it and cannot be picked up.";
        obs.illegal = true;
      } else {
        remove_from_towers(p->block);
        holding_ = p->block;
        obs.status = "You picked up " + p->block + ".";
      }
    } else if (const auto* s = std::get_if<StackAction>(&action.op)) {
      if (!has_block(s->top) || !has_block(s->bottom)) {
        obs.status = "Unknown block in stack action.";
        obs.illegal = true;
      } else if (!holding_ || *holding_ != s->top) {
        obs.status = "You must be holding " + s->top +
                     " to stack it; pick it up first.";
        obs.illegal = true;
      } else if (!is_top(s->bottom)) {
        obs.status = "Block " + s->bottom + " is not exposed.";
        obs.illegal = true;
      } else {
        for (auto& t : towers_)
          if (t.back() == s->bottom) t.push_back(s->top);
        holding_.reset();
        obs.status = "You stacked " + s->top + " on " + s->bottom + ".";
      }
    } else if (const auto* p = std::get_if<PutDownAction>(&action.op)) {
      if (!holding_ || *holding_ != p->block) {
        obs.status = "You are not holding " + p->block + ".";
        obs.illegal = true;
      } else {
        towers_.push_back({p->block});
        holding_.reset();
        obs.status = "You put down " + p->block + " on the table.";
      }
    } else {
      // Declarations (towers, height, done) do not move any block; the
      // episode runner interprets them.
      obs.status = "Noted.";
    }
    obs.status += "\n" + state_line();
    return obs;
  }

  std::string state_line() const {
    std::ostringstream os;
    os << "Towers: ";
    if (towers_.empty()) os << "(none)";
    for (std::size_t i = 0; i < towers_.size(); ++i) {
      if (i) os << "; ";
      os << "[";
      for (std::size_t j = 0; j < towers_[i].size(); ++j) {
        if (j) os << ", ";
        os << towers_[i][j];
      }
      os << "]";
    }
    os << ". Holding: " << (holding_ ? *holding_ : "none") << ".";
    return os.str();
  }

  // The final arrangement as a two-tower configuration, when it is one.
  std::optional<Configuration> as_configuration() const {
    if (holding_ || towers_.size() != 2) return std::nullopt;
    return Configuration::make(towers_[0], towers_[1]);
  }

  void topple_all() {
    std::vector<BlockId> blocks;
    for (const auto& t : towers_)
      for (const auto& b : t) blocks.push_back(b);
    std::sort(blocks.begin(), blocks.end());
    towers_.clear();
    for (const auto& b : blocks) towers_.push_back({b});
  }

 private:
  void remove_from_towers(const BlockId& b) {
    for (auto it = towers_.begin(); it != towers_.end(); ++it) {
      if (it->back() == b) {
        it->pop_back();
        if (it->empty()) towers_.erase(it);
        return;
      }
    }
  }

  HeightMap heights_;
  std::vector<std::vector<BlockId>> towers_;
  std::optional<BlockId> holding_;
  int step_ = 0;
  Rng measure_rng_;
};

struct PerturbResult {
  Action action;
  bool perturbed = false;
};

// With probability p a pick-up / stack / put-down is replaced by a random
// legal manipulation. Declarations and measurements are never perturbed.
inline PerturbResult perturb_action(const Action& action,
                                    const WorldState& state, Rng& rng,
                                    double p) {
  if (p <= 0.0 || !is_manipulation(action)) return {action, false};
  if (!rng.bernoulli(p)) return {action, false};
  auto legal = state.legal_manipulations();
  if (legal.empty()) return {action, false};
  return {legal[rng.index(legal.size())], true};
}

// With probability q appends one corpus excerpt to the status text; the
// original status is preserved verbatim as a prefix.
inline Observation maybe_distract(Observation obs, Rng& rng,
                                  const std::vector<std::string>& corpus,
                                  double q) {
  if (q <= 0.0) return obs;
  if (corpus.empty())
    throw ConfigError("distraction enabled but the corpus is empty");
  if (rng.bernoulli(q)) obs.distraction = corpus[rng.index(corpus.size())];
  return obs;
}

// Parses the "Towers: [...]; [...]. Holding: x." line the environment
// appends to every status update. Scripted agents read state from here.
struct StateLine {
  std::vector<std::vector<BlockId>> towers;
  std::optional<BlockId> holding;
};

inline std::optional<StateLine> parse_state_line(const std::string& text) {
  std::size_t pos = text.rfind("Towers: ");
  if (pos == std::string::npos) return std::nullopt;
  std::size_t hold = text.find("Holding: ", pos);
  if (hold == std::string::npos) return std::nullopt;
  StateLine out;
  std::string towers_part = text.substr(pos + 8, hold - pos - 8);
  std::size_t cur = 0;
  while (true) {
    std::size_t open = towers_part.find('[', cur);
    if (open == std::string::npos) break;
    std::size_t close = towers_part.find(']', open);
    if (close == std::string::npos) return std::nullopt;
    std::vector<BlockId> tower;
    std::string inside = towers_part.substr(open + 1, close - open - 1);
    std::string item;
    for (char c : inside + ",") {
      if (c == ',') {
        item = detail::strip(item);
        if (!item.empty()) tower.push_back(item);
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    out.towers.push_back(std::move(tower));
    cur = close + 1;
  }
  std::size_t end = text.find('.', hold);
  std::string held = text.substr(hold + 9, end == std::string::npos
                                               ? std::string::npos
                                               : end - hold - 9);
  held = detail::strip(held);
  if (held != "none" && !held.empty()) out.holding = held;
  return out;
}

}  // namespace gdeval
