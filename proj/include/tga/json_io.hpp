#pragma once

#include "tga/bundle.hpp"
#include "tga/cech.hpp"
#include "tga/correspondence.hpp"
#include "tga/graph.hpp"
#include "tga/simplicial.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <vector>

namespace tga {

using Json = nlohmann::json;

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

// Canonical rendering: sorted keys (nlohmann's object is ordered), two-space
// indent, trailing newline.
inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

namespace jio {

inline void check_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw SchemaError(what + ": expected an object");
}

inline void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                       const std::string& what) {
  check_object(j, what);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw SchemaError(what + ": unknown key '" + it.key() + "'");
  }
}

inline const Json& require_key(const Json& j, const char* key, const std::string& what) {
  check_object(j, what);
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(what + ": missing key '" + std::string(key) + "'");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline const Json& as_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array");
  return j;
}

inline long long as_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
  return j.get<long long>();
}

inline Rat as_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }
  throw SchemaError(where + ": expected a rational as \"p/q\" or an integer");
}

inline Int as_big_integer(const Json& j, const std::string& where) {
  const Rat r = as_rational(j, where);
  if (!is_integer(r)) throw SchemaError(where + ": expected an integer");
  return rat_num(r);
}

// "a,b" or "a,b,c" keys with integer chart ids.
inline std::vector<long long> split_chart_key(const std::string& key, std::size_t arity,
                                              const std::string& where) {
  std::vector<std::string> parts{""};
  for (char c : key) {
    if (c == ',')
      parts.emplace_back();
    else
      parts.back() += c;
  }
  if (parts.size() != arity)
    throw SchemaError(where + ": key '" + key + "' must name " + std::to_string(arity) +
                      " charts");
  std::vector<long long> out;
  for (const auto& p : parts) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw SchemaError(where + ": '" + p + "' is not an integer chart id");
    }
  }
  return out;
}

}  // namespace jio

// ---- graphs ---------------------------------------------------------------

// {"vertices":[...], "edges":[{"id","src","rng"}...],
//  "infinite_families":[{"src","rng"}...]} — the legacy key
// "infinite_receivers":["v"...] is accepted as shorthand for self-sourced
// families v -> v.
inline DiscreteGraph graph_from_json(const Json& j) {
  jio::check_keys(j, {"vertices", "edges", "infinite_families", "infinite_receivers"}, "graph");
  DiscreteGraph g;
  for (const auto& v : jio::as_array(jio::require_key(j, "vertices", "graph"), "graph.vertices"))
    g.vertices.push_back(jio::as_string(v, "graph.vertices[]"));
  if (j.contains("edges"))
    for (const auto& e : jio::as_array(j["edges"], "graph.edges")) {
      jio::check_keys(e, {"id", "src", "rng"}, "graph.edges[]");
      g.edges.push_back({jio::as_string(jio::require_key(e, "id", "graph.edges[]"), "edge.id"),
                         jio::as_string(jio::require_key(e, "src", "graph.edges[]"), "edge.src"),
                         jio::as_string(jio::require_key(e, "rng", "graph.edges[]"), "edge.rng")});
    }
  if (j.contains("infinite_families"))
    for (const auto& f : jio::as_array(j["infinite_families"], "graph.infinite_families")) {
      jio::check_keys(f, {"src", "rng"}, "graph.infinite_families[]");
      g.infinite_families.push_back(
          {jio::as_string(jio::require_key(f, "src", "family"), "family.src"),
           jio::as_string(jio::require_key(f, "rng", "family"), "family.rng")});
    }
  if (j.contains("infinite_receivers"))
    for (const auto& v : jio::as_array(j["infinite_receivers"], "graph.infinite_receivers")) {
      const std::string id = jio::as_string(v, "graph.infinite_receivers[]");
      g.infinite_families.push_back({id, id});
    }
  validate_graph(g);
  return g;
}

inline Json graph_to_json(const DiscreteGraph& g) {
  Json j;
  j["vertices"] = g.vertices;
  j["edges"] = Json::array();
  for (const Edge& e : g.edges)
    j["edges"].push_back({{"id", e.id}, {"src", e.src}, {"rng", e.rng}});
  if (!g.infinite_families.empty()) {
    j["infinite_families"] = Json::array();
    for (const auto& f : g.infinite_families)
      j["infinite_families"].push_back({{"src", f.src}, {"rng", f.rng}});
  }
  return j;
}

// ---- simplicial spaces ------------------------------------------------------

// Either a named complex ("circle" | "sphere" | "torus") or
// {"vertices":[...], "simplices":{"1":[[a,b]...], "2":[[a,b,c]...]}}.
inline SimplicialSpace space_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "circle") return circle_complex();
    if (name == "sphere") return sphere_complex();
    if (name == "torus") return torus_complex();
    throw SchemaError("space: unknown named complex '" + name + "'");
  }
  jio::check_keys(j, {"vertices", "simplices"}, "space");
  std::vector<long long> vertices;
  for (const auto& v : jio::as_array(jio::require_key(j, "vertices", "space"), "space.vertices"))
    vertices.push_back(jio::as_integer(v, "space.vertices[]"));
  std::vector<std::array<long long, 2>> edges;
  std::vector<std::array<long long, 3>> triangles;
  if (j.contains("simplices")) {
    const Json& s = j["simplices"];
    jio::check_keys(s, {"1", "2"}, "space.simplices");
    if (s.contains("1"))
      for (const auto& e : jio::as_array(s["1"], "space.simplices.1")) {
        jio::as_array(e, "space.simplices.1[]");
        if (e.size() != 2) throw SchemaError("space.simplices.1[]: expected [a, b]");
        edges.push_back({jio::as_integer(e[0], "edge vertex"), jio::as_integer(e[1], "edge vertex")});
      }
    if (s.contains("2"))
      for (const auto& t : jio::as_array(s["2"], "space.simplices.2")) {
        jio::as_array(t, "space.simplices.2[]");
        if (t.size() != 3) throw SchemaError("space.simplices.2[]: expected [a, b, c]");
        triangles.push_back({jio::as_integer(t[0], "triangle vertex"),
                             jio::as_integer(t[1], "triangle vertex"),
                             jio::as_integer(t[2], "triangle vertex")});
      }
  }
  return make_space(vertices, edges, triangles);
}

inline Json space_to_json(const SimplicialSpace& x) {
  Json j;
  j["vertices"] = x.vertices;
  Json ones = Json::array(), twos = Json::array();
  for (const auto& e : x.edges) ones.push_back({e[0], e[1]});
  for (const auto& t : x.triangles) twos.push_back({t[0], t[1], t[2]});
  j["simplices"] = {{"1", ones}, {"2", twos}};
  return j;
}

// ---- cocycle documents ------------------------------------------------------

// {"space": <space>, "cover": "star" | {"style":"band","genus":g},
//  "theta": {"a,b": "p/q", ...}, "winding": {"a,b": k, ...},
//  "defects": {"a,b,c": n, ...}}
// Sparse: a missing overlap key means a zero lift.  Keys that are not
// overlaps of the cover are schema errors.
struct CocycleDocument {
  CoverModel cover;
  CechCocycle cocycle;
};

inline CocycleDocument cocycle_from_json(const Json& j) {
  jio::check_keys(j, {"space", "cover", "theta", "winding", "defects"}, "cocycle document");
  CocycleDocument doc;
  const Json cover = j.contains("cover") ? j["cover"] : Json("star");
  if (cover.is_string() && cover.get<std::string>() == "star") {
    doc.cover = star_cover(space_from_json(jio::require_key(j, "space", "cocycle document")));
  } else if (cover.is_object()) {
    jio::check_keys(cover, {"style", "genus"}, "cover");
    if (jio::as_string(jio::require_key(cover, "style", "cover"), "cover.style") != "band")
      throw SchemaError("cover.style: expected \"band\"");
    if (j.contains("space"))
      throw SchemaError("cocycle document: band covers carry no simplicial space");
    doc.cover = band_cover(
        static_cast<int>(jio::as_integer(jio::require_key(cover, "genus", "cover"), "cover.genus")));
  } else {
    throw SchemaError("cover: expected \"star\" or {\"style\":\"band\",...}");
  }
  if (j.contains("theta")) {
    jio::check_object(j["theta"], "theta");
    for (auto it = j["theta"].begin(); it != j["theta"].end(); ++it) {
      const auto ab = jio::split_chart_key(it.key(), 2, "theta");
      doc.cocycle.theta[{ab[0], ab[1]}] = jio::as_rational(it.value(), "theta['" + it.key() + "']");
    }
  }
  if (j.contains("winding")) {
    jio::check_object(j["winding"], "winding");
    for (auto it = j["winding"].begin(); it != j["winding"].end(); ++it) {
      const auto ab = jio::split_chart_key(it.key(), 2, "winding");
      doc.cocycle.winding[{ab[0], ab[1]}] =
          jio::as_integer(it.value(), "winding['" + it.key() + "']");
    }
  }
  if (j.contains("defects")) {
    jio::check_object(j["defects"], "defects");
    for (auto it = j["defects"].begin(); it != j["defects"].end(); ++it) {
      const auto abc = jio::split_chart_key(it.key(), 3, "defects");
      doc.cocycle.defects[{abc[0], abc[1], abc[2]}] =
          jio::as_big_integer(it.value(), "defects['" + it.key() + "']");
    }
  }
  return doc;
}

// ---- bundles ----------------------------------------------------------------

// {"base": {"kind":"surface","genus":g} | {"kind":"discrete","size":m},
//  "winding": k}
inline CircleBundle bundle_from_json(const Json& j) {
  jio::check_keys(j, {"base", "winding"}, "bundle document");
  const Json& base = jio::require_key(j, "base", "bundle document");
  jio::check_keys(base, {"kind", "genus", "size"}, "bundle.base");
  const std::string kind = jio::as_string(jio::require_key(base, "kind", "bundle.base"), "base.kind");
  const long long winding =
      j.contains("winding") ? jio::as_integer(j["winding"], "bundle.winding") : 0;
  if (kind == "surface") {
    if (base.contains("size")) throw SchemaError("bundle.base: 'size' belongs to discrete bases");
    const long long genus = jio::as_integer(jio::require_key(base, "genus", "bundle.base"), "base.genus");
    return build_surface_bundle(static_cast<int>(genus), winding);
  }
  if (kind == "discrete") {
    if (base.contains("genus")) throw SchemaError("bundle.base: 'genus' belongs to surface bases");
    if (winding != 0) throw SchemaError("bundle document: discrete bases admit no winding");
    const long long size = jio::as_integer(jio::require_key(base, "size", "bundle.base"), "base.size");
    return build_discrete_bundle(static_cast<int>(size));
  }
  throw SchemaError("bundle.base.kind: expected \"surface\" or \"discrete\"");
}

// ---- correspondence models ---------------------------------------------------

// Graph document keys plus
//   "cover":   {"N1": ["e1","e2"], ...}
//   "cocycle": {"N1,N2": {"e1": "i", ...}, ...}
// with unit values "1", "-1", "i", "-i", "exp(2pi i * p/q)".  Chart pair keys
// must be ascending; chart ids must not contain ','.
template <class K>
CorrespondenceModel<K> model_from_json(const Json& j) {
  jio::check_keys(j, {"vertices", "edges", "infinite_families", "infinite_receivers", "cover",
                       "cocycle"},
                  "model");
  Json graph_part = Json::object();
  for (const char* key : {"vertices", "edges", "infinite_families", "infinite_receivers"})
    if (j.contains(key)) graph_part[key] = j[key];
  CorrespondenceModel<K> m;
  m.graph = graph_from_json(graph_part);
  const Json& cover = jio::require_key(j, "cover", "model");
  jio::check_object(cover, "model.cover");
  for (auto it = cover.begin(); it != cover.end(); ++it) {
    if (it.key().find(',') != std::string::npos)
      throw SchemaError("model.cover: chart id '" + it.key() + "' must not contain ','");
    m.charts.push_back(it.key());
    std::set<std::string> edges;
    for (const auto& e : jio::as_array(it.value(), "model.cover['" + it.key() + "']"))
      edges.insert(jio::as_string(e, "model.cover['" + it.key() + "'][]"));
    m.cover[it.key()] = std::move(edges);
  }
  std::sort(m.charts.begin(), m.charts.end());
  if (j.contains("cocycle")) {
    jio::check_object(j["cocycle"], "model.cocycle");
    for (auto it = j["cocycle"].begin(); it != j["cocycle"].end(); ++it) {
      const std::string& key = it.key();
      const auto comma = key.find(',');
      if (comma == std::string::npos || key.find(',', comma + 1) != std::string::npos)
        throw SchemaError("model.cocycle: key '" + key + "' must name two charts as \"A,B\"");
      const std::string a = key.substr(0, comma), b = key.substr(comma + 1);
      if (!(a < b))
        throw SchemaError("model.cocycle: key '" + key + "' must list charts in ascending order");
      jio::check_object(it.value(), "model.cocycle['" + key + "']");
      std::map<std::string, K> vals;
      for (auto ev = it.value().begin(); ev != it.value().end(); ++ev)
        vals[ev.key()] = parse_unit<K>(
            jio::as_string(ev.value(), "model.cocycle['" + key + "']['" + ev.key() + "']"));
      m.twist[{a, b}] = std::move(vals);
    }
  }
  return m;
}

// ---- report fragments ---------------------------------------------------------

inline Json classification_to_json(const VertexClassification& c) {
  return Json{{"sce", c.sce}, {"fin", c.fin}, {"rg", c.rg}, {"sg", c.sg}};
}

inline Json abelian_to_json(const AbelianGroup& g) {
  Json torsion = Json::array();
  for (const Int& d : g.torsion) torsion.push_back(d.str());
  return Json{{"rank", g.rank}, {"torsion", torsion}, {"group", g.to_string()}};
}

inline Json cocycle_class_to_json(const CocycleClass& c) {
  Json free = Json::array(), torsion = Json::array();
  for (const Int& v : c.free) free.push_back(v.str());
  for (const Int& v : c.torsion) torsion.push_back(v.str());
  return Json{{"free", free},
              {"torsion", torsion},
              {"group", abelian_to_json(c.group)},
              {"is_zero", c.is_zero()}};
}

inline Json trivialize_to_json(const TrivializeResult& t) {
  Json j;
  j["success"] = t.success;
  if (!t.success) {
    j["certificate"] = cocycle_class_to_json(t.certificate);
    return j;
  }
  Json b = Json::object();
  for (const auto& [chart, value] : t.b) b[std::to_string(chart)] = to_string(value);
  Json m = Json::object();
  for (const auto& [pair, value] : t.integer_correction)
    m[std::to_string(pair.first) + "," + std::to_string(pair.second)] = value.str();
  Json periods = Json::object();
  for (const auto& [pair, value] : t.periods)
    periods[std::to_string(pair.first) + "," + std::to_string(pair.second)] = to_string(value);
  j["b"] = std::move(b);
  j["integer_correction"] = std::move(m);
  j["periods"] = std::move(periods);
  j["constant_charts"] = t.periods.empty();
  return j;
}

inline Json cycle_to_json(const DiscreteGraph& g, const Cycle& c) {
  return Json{{"edges", c.edges},
              {"base_points", c.base_points},
              {"has_entrance", cycle_has_entrance(g, c)}};
}

}  // namespace tga
