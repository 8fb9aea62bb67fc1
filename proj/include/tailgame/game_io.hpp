#pragma once

#include "tailgame/game.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

namespace tailgame {

// Game files are JSON:
//
//   {"name": "...",
//    "vertices": [{"id": "a", "owner": "max"|"min"|"random", "priority": 0}, ...],
//    "edges": [{"from": "a", "to": "b", "prob": "1/2"}, ...]}
//
// `prob` appears only on edges leaving random vertices. Priorities follow the
// min-parity convention: Max wins a play iff the least priority seen
// infinitely often is even.

namespace detail {

using json = nlohmann::json;

inline const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

inline std::string string_member(const json& obj, const char* key, const std::string& where) {
  const json& j = member(obj, key, where);
  if (!j.is_string()) throw ParseError(where + ": '" + key + "' must be a string");
  return j.get<std::string>();
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Parses without validating; used by parse_game and by tools that want to
// report every violation.
inline GameGraph parse_game_unchecked(std::string_view text) {
  using detail::json;
  const json root = detail::parse_json(text);
  if (!root.is_object()) throw ParseError("game: expected a top-level object");
  std::string name;
  if (auto it = root.find("name"); it != root.end()) {
    if (!it->is_string()) throw ParseError("game: 'name' must be a string");
    name = it->get<std::string>();
  }
  const json& jv = detail::member(root, "vertices", "game");
  const json& je = detail::member(root, "edges", "game");
  if (!jv.is_array() || !je.is_array()) throw ParseError("game: vertices/edges must be arrays");

  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    Vertex v;
    v.id = detail::string_member(jv[i], "id", where);
    auto owner = parse_owner(detail::string_member(jv[i], "owner", where));
    if (!owner) throw ParseError(where + ": owner must be max, min or random");
    v.owner = *owner;
    const json& pr = detail::member(jv[i], "priority", where);
    if (!pr.is_number_integer() || pr.get<long long>() < 0 ||
        pr.get<long long>() > 1'000'000'000) {
      throw ParseError(where + ": priority must be a nonnegative integer");
    }
    v.priority = static_cast<unsigned>(pr.get<long long>());
    vertices.push_back(std::move(v));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    Edge e;
    e.from = detail::string_member(je[i], "from", where);
    e.to = detail::string_member(je[i], "to", where);
    if (je[i].contains("prob")) {
      const std::string p = detail::string_member(je[i], "prob", where);
      e.prob = parse_rational(p);
      if (!e.prob) throw ParseError(where + ": malformed rational '" + p + "'");
    }
    edges.push_back(std::move(e));
  }
  return GameGraph(std::move(name), std::move(vertices), std::move(edges));
}

inline GameGraph parse_game(std::string_view text) {
  GameGraph g = parse_game_unchecked(text);
  require_valid(g);
  return g;
}

inline GameGraph load_game(const std::string& path) {
  return parse_game(detail::read_file(path));
}

// Canonical form: keys in documented order, vertices by id, edges by
// (from, to), rationals in lowest terms, empty name omitted.
inline std::string serialize_game(const GameGraph& g) {
  nlohmann::ordered_json root = nlohmann::ordered_json::object();
  if (!g.name().empty()) root["name"] = g.name();
  auto& vs = root["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : g.vertices()) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    jv["owner"] = std::string(to_string(v.owner));
    jv["priority"] = v.priority;
    vs.push_back(std::move(jv));
  }
  auto& es = root["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    nlohmann::ordered_json je;
    je["from"] = e.from;
    je["to"] = e.to;
    if (e.prob) je["prob"] = to_string(*e.prob);
    es.push_back(std::move(je));
  }
  return root.dump(2) + "\n";
}

}  // namespace tailgame
