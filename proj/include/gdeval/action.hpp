#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gdeval {

struct MeasureAction {
  std::string block;
};
struct PickUpAction {
  std::string block;
};
struct StackAction {
  std::string top;
  std::string bottom;
};
struct PutDownAction {
  std::string block;
};
struct TowersAction {
  std::vector<std::vector<std::string>> towers;
};
struct HeightAction {
  double value_cm = 0;
};
struct DoneAction {};

using ActionOp = std::variant<MeasureAction, PickUpAction, StackAction,
                              PutDownAction, TowersAction, HeightAction,
                              DoneAction>;

struct Action {
  ActionOp op;
  std::string raw;  // tag text as emitted, without the angle brackets

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(op);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(op);
  }
};

inline bool is_manipulation(const Action& a) {
  return a.is<PickUpAction>() || a.is<StackAction>() || a.is<PutDownAction>();
}

struct ParseResult {
  std::optional<Action> action;
  std::string error;  // set when no well-formed tag was found
  bool ok() const { return action.has_value(); }
};

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur), cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "[a, b]; [c]" -> {{a,b},{c}}; empty optional on malformed syntax.
inline std::optional<std::vector<std::vector<std::string>>> parse_tower_lists(
    const std::string& body) {
  std::vector<std::vector<std::string>> towers;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t open = body.find('[', pos);
    if (open == std::string::npos) break;
    std::size_t close = body.find(']', open);
    if (close == std::string::npos) return std::nullopt;
    std::vector<std::string> tower;
    std::string inside = body.substr(open + 1, close - open - 1);
    std::size_t start = 0;
    while (start <= inside.size()) {
      std::size_t comma = inside.find(',', start);
      std::string item = strip(inside.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start));
      if (!item.empty()) tower.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    towers.push_back(std::move(tower));
    pos = close + 1;
  }
  if (towers.empty()) return std::nullopt;
  return towers;
}

inline std::optional<Action> parse_tag(const std::string& raw) {
  std::string body = strip(raw);
  std::string low = lower(body);
  auto words = split_words(low);
  if (words.empty()) return std::nullopt;
  if (words[0] == "measure" && words.size() == 2)
    return Action{MeasureAction{words[1]}, body};
  if (words[0] == "pick" && words.size() == 3 && words[1] == "up")
    return Action{PickUpAction{words[2]}, body};
  if (words[0] == "stack" && words.size() == 4 && words[2] == "on")
    return Action{StackAction{words[1], words[3]}, body};
  if (words[0] == "put" && words.size() == 3 && words[1] == "down")
    return Action{PutDownAction{words[2]}, body};
  if (words[0] == "done" && words.size() == 1) return Action{DoneAction{}, body};
  if (words[0] == "towers") {
    auto lists = parse_tower_lists(low.substr(low.find("towers") + 6));
    if (!lists) return std::nullopt;
    for (const auto& t : *lists)
      if (t.empty()) return std::nullopt;
    return Action{TowersAction{*lists}, body};
  }
  if (words[0] == "height" && words.size() == 2) {
    std::string num = words[1];
    if (num.size() >= 2 && num.substr(num.size() - 2) == "cm")
      num = num.substr(0, num.size() - 2);
    try {
      std::size_t used = 0;
      double v = std::stod(num, &used);
      if (used != num.size()) return std::nullopt;
      return Action{HeightAction{v}, body};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Scans the message for the last well-formed <...> tag. Free-form reasoning
// before (or between) tags is permitted and ignored; earlier draft tags are
// superseded by the final one.
inline ParseResult parse_action(const std::string& text) {
  std::optional<Action> found;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find('<', pos);
    if (open == std::string::npos) break;
    std::size_t next_open = text.find('<', open + 1);
    std::size_t close = text.find('>', open + 1);
    if (close == std::string::npos) break;
    if (next_open != std::string::npos && next_open < close) {
      pos = next_open;  // stray '<' in prose; try again from the next one
      continue;
    }
    if (auto a = detail::parse_tag(text.substr(open + 1, close - open - 1)))
      found = std::move(a);
    pos = close + 1;
  }
  if (found) return {std::move(found), ""};
  return {std::nullopt, text};
}

}  // namespace gdeval
