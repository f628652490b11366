#include "coarselab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coarselab/errors.hpp"
#include "coarselab/graph.hpp"

namespace coarselab {

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedError(origin + ": invalid JSON: " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

namespace {

void dump_into(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        dump_into(v, out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += v > 0 ? "\"inf\"" : (v < 0 ? "\"-inf\"" : "\"nan\"");
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
      out += buf;
      break;
    }
    default:
      out += j.dump();
  }
}

bool parse_int(const std::string& s, long long& v) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  // Reject forms that would not round-trip, such as "+3" or "007".
  return ec == std::errc{} && ptr == end && std::to_string(v) == s;
}

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw MalformedError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw MalformedError(where + "." + key + ": missing");
  return *it;
}

PointIndex point_from_json(const Json& j, const FiniteSpace& s, const std::string& field) {
  return s.index_of(id_from_json(j, field), field);
}

double number_from_json(const Json& j, const std::string& field) {
  if (!j.is_number()) throw MalformedError(field + ": expected a number");
  return j.get<double>();
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

std::string id_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw MalformedError(field + ": point id must be a string or an integer");
}

Json id_to_json(const std::string& label) {
  long long v = 0;
  if (parse_int(label, v)) return v;
  return label;
}

double distance_from_json(const Json& j, const std::string& field) {
  if (j.is_null()) return kInfinity;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return kInfinity;
    throw MalformedError(field + ": unknown distance '" + s + "'");
  }
  if (!j.is_number()) throw MalformedError(field + ": expected a number");
  return j.get<double>();
}

Json distance_to_json(double d) {
  if (d == kInfinity) return "inf";
  long long v = static_cast<long long>(d);
  if (static_cast<double>(v) == d && std::fabs(d) < 9e15) return v;
  return d;
}

FiniteSpace space_from_json(const Json& j) {
  const auto& pts = require(j, "points", "space");
  if (!pts.is_array()) throw MalformedError("space.points: expected an array");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    labels.push_back(id_from_json(pts[i], "space.points[" + std::to_string(i) + "]"));
  }
  const std::size_t n = labels.size();
  const auto& metric = require(j, "metric", "space");
  const auto& kind = require(metric, "kind", "space.metric");
  DistanceMatrix d(n);
  if (kind == "explicit") {
    const auto& rows = require(metric, "rows", "space.metric");
    if (!rows.is_array() || rows.size() != n) {
      throw MalformedError("space.metric.rows: expected one row per point");
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::string field = "space.metric.rows[" + std::to_string(i) + "]";
      if (!rows[i].is_array() || rows[i].size() != n) {
        throw MalformedError(field + ": expected " + std::to_string(n) + " entries");
      }
      for (std::size_t k = 0; k < n; ++k) d(i, k) = distance_from_json(rows[i][k], field);
    }
  } else if (kind == "graph") {
    const auto& edges = require(metric, "edges", "space.metric");
    if (!edges.is_array()) throw MalformedError("space.metric.edges: expected an array");
    std::unordered_map<std::string, PointIndex> index;
    for (PointIndex i = 0; i < n; ++i) index.emplace(labels[i], i);
    std::vector<WeightedEdge> list;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string field = "space.metric.edges[" + std::to_string(e) + "]";
      if (!edges[e].is_array() || edges[e].size() != 3) {
        throw MalformedError(field + ": expected [a, b, weight]");
      }
      auto lookup = [&](const Json& id) {
        auto it = index.find(id_from_json(id, field));
        if (it == index.end()) throw MalformedError(field + ": unknown point");
        return it->second;
      };
      list.push_back({lookup(edges[e][0]), lookup(edges[e][1]), number_from_json(edges[e][2], field)});
    }
    d = graph_distances(n, list);
  } else {
    throw MalformedError("space.metric.kind: expected \"explicit\" or \"graph\"");
  }
  const std::string base = id_from_json(require(j, "basepoint", "space"), "space.basepoint");
  PointIndex b = n;
  for (PointIndex i = 0; i < n; ++i) {
    if (labels[i] == base) b = i;
  }
  if (b == n) throw MalformedError("space.basepoint: unknown point '" + base + "'");
  const double wr = number_from_json(require(j, "window_radius", "space"), "space.window_radius");
  return FiniteSpace(std::move(labels), std::move(d), b, wr);
}

Json space_to_json(const FiniteSpace& s) {
  Json pts = Json::array();
  for (const auto& l : s.labels()) pts.push_back(id_to_json(l));
  Json rows = Json::array();
  for (PointIndex i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (double v : s.distances().row(i)) row.push_back(distance_to_json(v));
    rows.push_back(std::move(row));
  }
  return Json{{"points", std::move(pts)},
              {"metric", {{"kind", "explicit"}, {"rows", std::move(rows)}}},
              {"basepoint", id_to_json(s.label(s.basepoint()))},
              {"window_radius", distance_to_json(s.window_radius())}};
}

Family family_from_json(const Json& j, const FiniteSpace& s) {
  const auto& members = require(j, "members", "family");
  if (!members.is_array()) throw MalformedError("family.members: expected an array");
  std::vector<PointSet> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string field = "family.members[" + std::to_string(i) + "]";
    if (!members[i].is_array()) throw MalformedError(field + ": expected an array");
    PointSet m;
    for (const auto& id : members[i]) m.push_back(point_from_json(id, s, field));
    out.push_back(std::move(m));
  }
  return Family(s.size(), std::move(out));
}

Json family_to_json(const Family& f, const FiniteSpace& s) {
  Json members = Json::array();
  for (const auto& m : f.members()) members.push_back(point_set_to_json(m, s));
  return Json{{"members", std::move(members)}};
}

GroupAction action_from_json(const Json& j, std::shared_ptr<const FiniteSpace> s) {
  const auto& gens = require(j, "generators", "action");
  if (!gens.is_object()) throw MalformedError("action.generators: expected an object");
  std::vector<std::pair<std::string, Permutation>> tables;
  for (const auto& [symbol, table] : gens.items()) {
    const std::string field = "action.generators." + symbol;
    if (!table.is_array()) throw MalformedError(field + ": expected a list of point ids");
    Permutation perm;
    for (const auto& id : table) perm.push_back(point_from_json(id, *s, field));
    tables.emplace_back(symbol, std::move(perm));
  }
  std::map<std::string, std::string> inverses;
  if (auto it = j.find("inverses"); it != j.end()) {
    if (!it->is_object()) throw MalformedError("action.inverses: expected an object");
    for (const auto& [symbol, inv] : it->items()) {
      if (!inv.is_string()) throw MalformedError("action.inverses." + symbol + ": expected a symbol");
      inverses.emplace(symbol, inv.get<std::string>());
    }
  }
  return GroupAction(std::move(s), std::move(tables), std::move(inverses));
}

Json action_to_json(const GroupAction& a) {
  Json gens = Json::object();
  Json inverses = Json::object();
  for (const auto& g : a.generators()) {
    gens[g.symbol] = point_set_to_json(g.perm, a.space());
    inverses[g.symbol] = g.inverse;
  }
  return Json{{"generators", std::move(gens)}, {"inverses", std::move(inverses)}};
}

PartitionOfUnity partition_from_json(const Json& j, const FiniteSpace& s) {
  const auto& verts = require(j, "vertices", "partition");
  if (!verts.is_array()) throw MalformedError("partition.vertices: expected an array");
  std::vector<std::string> vertices;
  std::unordered_map<std::string, std::size_t> vindex;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    auto v = id_from_json(verts[i], "partition.vertices[" + std::to_string(i) + "]");
    if (!vindex.emplace(v, i).second) {
      throw MalformedError("partition.vertices: duplicate vertex '" + v + "'");
    }
    vertices.push_back(std::move(v));
  }
  const auto& rows = require(j, "rows", "partition");
  if (!rows.is_object()) throw MalformedError("partition.rows: expected an object");
  std::vector<std::vector<Weight>> out(s.size());
  std::vector<bool> seen(s.size(), false);
  for (const auto& [point, row] : rows.items()) {
    const std::string field = "partition.rows." + point;
    const PointIndex x = s.index_of(point, field);
    seen[x] = true;
    if (!row.is_array()) throw MalformedError(field + ": expected [[vertex, weight], ...]");
    for (const auto& w : row) {
      if (!w.is_array() || w.size() != 2) throw MalformedError(field + ": expected [vertex, weight]");
      auto it = vindex.find(id_from_json(w[0], field));
      if (it == vindex.end()) throw MalformedError(field + ": unknown vertex");
      out[x].push_back({it->second, number_from_json(w[1], field)});
    }
  }
  for (PointIndex x = 0; x < s.size(); ++x) {
    if (!seen[x]) throw MalformedError("partition.rows: missing point '" + s.label(x) + "'");
  }
  return PartitionOfUnity(std::move(vertices), std::move(out));
}

Json partition_to_json(const PartitionOfUnity& phi, const FiniteSpace& s) {
  Json verts = Json::array();
  for (const auto& v : phi.vertices()) verts.push_back(id_to_json(v));
  Json rows = Json::object();
  for (PointIndex x = 0; x < phi.size(); ++x) {
    Json row = Json::array();
    for (const auto& w : phi.row(x)) {
      row.push_back(Json::array({id_to_json(phi.vertices()[w.vertex]), w.value}));
    }
    rows[s.label(x)] = std::move(row);
  }
  return Json{{"vertices", std::move(verts)}, {"rows", std::move(rows)}};
}

BandOperator operator_from_json(const Json& j, const FiniteSpace& s) {
  const auto& entries = require(j, "entries", "operator");
  if (!entries.is_array()) throw MalformedError("operator.entries: expected an array");
  BandOperator t(s.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string field = "operator.entries[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    if (!e.is_array() || (e.size() != 3 && e.size() != 4)) {
      throw MalformedError(field + ": expected [x, y, re, im]");
    }
    const PointIndex x = point_from_json(e[0], s, field);
    const PointIndex y = point_from_json(e[1], s, field);
    const double re = number_from_json(e[2], field);
    const double im = e.size() == 4 ? number_from_json(e[3], field) : 0.0;
    if (t.at(x, y) != Scalar{}) throw MalformedError(field + ": entry listed twice");
    t.set(x, y, {re, im});
  }
  return t;
}

Json operator_to_json(const BandOperator& t, const FiniteSpace& s) {
  Json entries = Json::array();
  for (const auto& [e, v] : t.entries()) {
    entries.push_back(Json::array({id_to_json(s.label(e.first)), id_to_json(s.label(e.second)),
                                   v.real(), v.imag()}));
  }
  return Json{{"entries", std::move(entries)}};
}

std::vector<PointIndex> point_map_from_json(const Json& j, const FiniteSpace& from,
                                            const FiniteSpace& to) {
  const auto& m = require(j, "map", "point map");
  if (!m.is_object()) throw MalformedError("map: expected an object");
  std::vector<PointIndex> out(from.size(), to.size());
  for (const auto& [point, image] : m.items()) {
    const std::string field = "map." + point;
    out[from.index_of(point, field)] = point_from_json(image, to, field);
  }
  for (PointIndex x = 0; x < from.size(); ++x) {
    if (out[x] == to.size()) throw MalformedError("map: missing point '" + from.label(x) + "'");
  }
  return out;
}

Json point_map_to_json(std::span<const PointIndex> f, const FiniteSpace& from,
                       const FiniteSpace& to) {
  Json m = Json::object();
  for (PointIndex x = 0; x < f.size(); ++x) m[from.label(x)] = id_to_json(to.label(f[x]));
  return Json{{"map", std::move(m)}};
}

std::vector<std::string> fiber_map_from_json(const Json& j, const FiniteSpace& s) {
  const auto& m = require(j, "fibers", "fiber map");
  if (!m.is_object()) throw MalformedError("fibers: expected an object");
  std::vector<std::string> out(s.size());
  std::vector<bool> seen(s.size(), false);
  for (const auto& [point, label] : m.items()) {
    const std::string field = "fibers." + point;
    const PointIndex x = s.index_of(point, field);
    out[x] = id_from_json(label, field);
    seen[x] = true;
  }
  for (PointIndex x = 0; x < s.size(); ++x) {
    if (!seen[x]) throw MalformedError("fibers: missing point '" + s.label(x) + "'");
  }
  return out;
}

Json point_set_to_json(std::span<const PointIndex> pts, const FiniteSpace& s) {
  Json out = Json::array();
  for (PointIndex p : pts) out.push_back(id_to_json(s.label(p)));
  return out;
}

}  // namespace coarselab
