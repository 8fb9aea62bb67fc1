#pragma once

#include "tailgame/game_io.hpp"
#include "tailgame/strategy.hpp"

#include <algorithm>
#include <map>

namespace tailgame {

// Strategy files are JSON bound to a game's vertex ids:
//
//   {"player": "max", "memory_states": ["m0", ...], "initial": "m0",
//    "update": [{"mem": "m0", "vertex": "s", "next": "m1"}, ...],
//    "action": [{"mem": "m0", "vertex": "s", "move": "t"}, ...]}
//
// `update` must be total over memory x vertices; `action` covers exactly the
// vertices owned by the player.
inline MealyStrategy parse_strategy(std::string_view text, const GameGraph& g) {
  using detail::json;
  const json root = detail::parse_json(text);
  const std::string who = detail::string_member(root, "player", "strategy");
  if (who != "max" && who != "min") throw ParseError("strategy: player must be max or min");
  const Player player = who == "max" ? Player::Max : Player::Min;

  const json& jm = detail::member(root, "memory_states", "strategy");
  if (!jm.is_array() || jm.empty()) throw ParseError("strategy: memory_states must be a nonempty array");
  std::vector<std::string> names;
  std::map<std::string, MemoryIndex> mem_index;
  for (const auto& n : jm) {
    if (!n.is_string()) throw ParseError("strategy: memory state names must be strings");
    if (!mem_index.emplace(n.get<std::string>(), names.size()).second) {
      throw ParseError("strategy: duplicate memory state '" + n.get<std::string>() + "'");
    }
    names.push_back(n.get<std::string>());
  }
  auto mem_of = [&](const std::string& name, const std::string& where) {
    auto it = mem_index.find(name);
    if (it == mem_index.end()) throw ParseError(where + ": unknown memory state '" + name + "'");
    return it->second;
  };
  auto vertex_of = [&](const std::string& id, const std::string& where) {
    auto v = g.find(id);
    if (!v) throw ParseError(where + ": unknown vertex '" + id + "'");
    return *v;
  };
  const MemoryIndex initial = mem_of(detail::string_member(root, "initial", "strategy"), "initial");

  constexpr MemoryIndex kUnset = static_cast<MemoryIndex>(-1);
  std::vector<std::vector<MemoryIndex>> update(names.size(), std::vector<MemoryIndex>(g.size(), kUnset));
  std::vector<std::vector<std::optional<VertexIndex>>> action(
      names.size(), std::vector<std::optional<VertexIndex>>(g.size()));

  const json& ju = detail::member(root, "update", "strategy");
  const json& ja = detail::member(root, "action", "strategy");
  if (!ju.is_array() || !ja.is_array()) throw ParseError("strategy: update/action must be arrays");
  for (std::size_t i = 0; i < ju.size(); ++i) {
    const std::string where = "update[" + std::to_string(i) + "]";
    auto m = mem_of(detail::string_member(ju[i], "mem", where), where);
    auto v = vertex_of(detail::string_member(ju[i], "vertex", where), where);
    if (update[m][v] != kUnset) throw ParseError(where + ": duplicate entry");
    update[m][v] = mem_of(detail::string_member(ju[i], "next", where), where);
  }
  for (std::size_t i = 0; i < ja.size(); ++i) {
    const std::string where = "action[" + std::to_string(i) + "]";
    auto m = mem_of(detail::string_member(ja[i], "mem", where), where);
    auto v = vertex_of(detail::string_member(ja[i], "vertex", where), where);
    if (action[m][v]) throw ParseError(where + ": duplicate entry");
    action[m][v] = vertex_of(detail::string_member(ja[i], "move", where), where);
  }
  for (MemoryIndex m = 0; m < names.size(); ++m) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      if (update[m][v] == kUnset) {
        throw ParseError("strategy: update not total, missing (" + names[m] + ", " + g.id(v) + ")");
      }
    }
  }
  MealyStrategy s(player, std::move(names), initial, std::move(update), std::move(action));
  require_legal(g, s, player);
  return s;
}

inline MealyStrategy load_strategy(const std::string& path, const GameGraph& g) {
  return parse_strategy(detail::read_file(path), g);
}

namespace detail {
inline nlohmann::ordered_json strategy_json(const MealyStrategy& s, const GameGraph& g) {
  nlohmann::ordered_json root;
  root["player"] = std::string(to_string(s.player()));
  root["memory_states"] = s.memory_names();
  root["initial"] = s.memory_name(s.initial());

  std::vector<MemoryIndex> mem_order(s.memory_size());
  for (MemoryIndex m = 0; m < s.memory_size(); ++m) mem_order[m] = m;
  std::sort(mem_order.begin(), mem_order.end(),
            [&](MemoryIndex a, MemoryIndex b) { return s.memory_name(a) < s.memory_name(b); });

  auto ju = nlohmann::ordered_json::array();
  auto ja = nlohmann::ordered_json::array();
  for (auto m : mem_order) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      nlohmann::ordered_json e;
      e["mem"] = s.memory_name(m);
      e["vertex"] = g.id(v);
      e["next"] = s.memory_name(s.update(m, v));
      ju.push_back(std::move(e));
    }
  }
  for (auto m : mem_order) {
    for (VertexIndex v = 0; v < g.size(); ++v) {
      if (!s.action_entry(m, v)) continue;
      nlohmann::ordered_json e;
      e["mem"] = s.memory_name(m);
      e["vertex"] = g.id(v);
      e["move"] = g.id(*s.action_entry(m, v));
      ja.push_back(std::move(e));
    }
  }
  root["update"] = std::move(ju);
  root["action"] = std::move(ja);
  return root;
}
}  // namespace detail

// Entries sorted by (memory name, vertex id); memory_states keep their order.
inline std::string serialize_strategy(const MealyStrategy& s, const GameGraph& g) {
  return detail::strategy_json(s, g).dump(2) + "\n";
}

}  // namespace tailgame
