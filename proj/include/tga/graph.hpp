#pragma once

#include "tga/rational.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace tga {

struct Edge {
  std::string id, src, rng;
  bool operator==(const Edge&) const = default;
};

// A vertex receiving infinitely many parallel edges from src; only the two
// endpoints are recorded, the edges themselves are never materialized.
struct InfiniteFamily {
  std::string src, rng;
  bool operator==(const InfiniteFamily&) const = default;
  auto operator<=>(const InfiniteFamily&) const = default;
};

// Finite directed multigraph: r(e) = rng, s(e) = src.  The discrete tier of a
// topological graph (both vertex and edge spaces carry the discrete topology).
struct DiscreteGraph {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<InfiniteFamily> infinite_families;

  bool operator==(const DiscreteGraph&) const = default;

  bool has_vertex(const std::string& v) const {
    return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
  }

  bool has_edge(const std::string& id) const {
    for (const Edge& e : edges)
      if (e.id == id) return true;
    return false;
  }

  const Edge& edge(const std::string& id) const {
    for (const Edge& e : edges)
      if (e.id == id) return e;
    throw PreconditionError("unknown edge id '" + id + "'");
  }

  std::vector<std::string> in_edges(const std::string& v) const {
    std::vector<std::string> out;
    for (const Edge& e : edges)
      if (e.rng == v) out.push_back(e.id);
    return out;
  }

  std::vector<std::string> out_edges(const std::string& v) const {
    std::vector<std::string> out;
    for (const Edge& e : edges)
      if (e.src == v) out.push_back(e.id);
    return out;
  }

  std::set<std::string> receivers() const {
    std::set<std::string> out;
    for (const Edge& e : edges) out.insert(e.rng);
    return out;
  }

  std::set<std::string> infinite_receivers() const {
    std::set<std::string> out;
    for (const auto& f : infinite_families) out.insert(f.rng);
    return out;
  }
};

inline void validate_graph(const DiscreteGraph& g) {
  std::vector<std::string> problems;
  std::set<std::string> vset;
  for (const auto& v : g.vertices) {
    if (v.empty()) problems.push_back("empty vertex id");
    if (!vset.insert(v).second) problems.push_back("duplicate vertex '" + v + "'");
  }
  std::set<std::string> eset;
  for (const Edge& e : g.edges) {
    if (e.id.empty()) problems.push_back("empty edge id");
    if (!eset.insert(e.id).second) problems.push_back("duplicate edge '" + e.id + "'");
    if (!vset.count(e.src)) problems.push_back("edge '" + e.id + "': unknown src '" + e.src + "'");
    if (!vset.count(e.rng)) problems.push_back("edge '" + e.id + "': unknown rng '" + e.rng + "'");
  }
  std::set<InfiniteFamily> fset;
  for (const auto& f : g.infinite_families) {
    if (!vset.count(f.src)) problems.push_back("infinite family: unknown src '" + f.src + "'");
    if (!vset.count(f.rng)) problems.push_back("infinite family: unknown rng '" + f.rng + "'");
    if (!fset.insert(f).second)
      problems.push_back("duplicate infinite family " + f.src + "->" + f.rng);
  }
  if (!problems.empty()) {
    std::string msg = "invalid graph:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw SchemaError(msg);
  }
}

// The four vertex classes.  sce: sources (receive nothing, not even an
// infinite family).  fin: finite receivers.  rg = fin minus sce: the regular
// vertices.  sg: everything else (singular).
struct VertexClassification {
  std::set<std::string> sce, fin, rg, sg;
  bool operator==(const VertexClassification&) const = default;
};

namespace detail {

// Classification body without the validity check, for callers that construct
// graphs whose validity is guaranteed (e.g. restrictions of validated graphs).
inline VertexClassification classify_unchecked(const DiscreteGraph& g) {
  VertexClassification c;
  const std::set<std::string> recv = g.receivers();
  const std::set<std::string> inf = g.infinite_receivers();
  for (const auto& v : g.vertices) {
    const bool receives = recv.count(v) > 0;
    const bool infinite = inf.count(v) > 0;
    const bool source = !receives && !infinite;
    if (source) c.sce.insert(v);
    if (!infinite) c.fin.insert(v);
    if (!infinite && !source)
      c.rg.insert(v);
    else
      c.sg.insert(v);
  }
  return c;
}

}  // namespace detail

inline VertexClassification classify_vertices(const DiscreteGraph& g) {
  validate_graph(g);
  return detail::classify_unchecked(g);
}

struct Path {
  std::vector<std::string> edges;  // (e_1,...,e_n) with s(e_i) = r(e_{i+1})
  std::string range, source;       // r(e_1), s(e_n)
  bool operator==(const Path&) const = default;
  auto operator<=>(const Path&) const = default;

  std::string id() const {
    std::string out = "(";
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i) out += ",";
      out += edges[i];
    }
    return out + ")";
  }
};

struct PathSpaceGraph {
  int n = 1;
  std::vector<Path> paths;  // lexicographic by edge-id tuple

  // View the path space as a discrete graph (edges = paths, same vertices).
  DiscreteGraph as_graph(const DiscreteGraph& base) const {
    DiscreteGraph g;
    g.vertices = base.vertices;
    for (const Path& p : paths) g.edges.push_back({p.id(), p.source, p.range});
    return g;
  }
};

inline PathSpaceGraph path_space(const DiscreteGraph& g, int n) {
  validate_graph(g);
  if (n < 1) throw PreconditionError("path_space: n must be >= 1");
  if (!g.infinite_families.empty())
    throw PreconditionError("path_space: graphs with infinite families are not supported");
  std::vector<Edge> sorted_edges = g.edges;
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  PathSpaceGraph ps;
  ps.n = n;
  std::vector<const Edge*> acc;
  auto extend = [&](auto&& self) -> void {
    if (static_cast<int>(acc.size()) == n) {
      Path p;
      for (const Edge* e : acc) p.edges.push_back(e->id);
      p.range = acc.front()->rng;
      p.source = acc.back()->src;
      ps.paths.push_back(std::move(p));
      return;
    }
    for (const Edge& e : sorted_edges) {
      if (!acc.empty() && acc.back()->src != e.rng) continue;
      acc.push_back(&e);
      self(self);
      acc.pop_back();
    }
  };
  extend(extend);
  return ps;
}

struct Cycle {
  std::vector<std::string> edges;        // r(e_1) = s(e_n), composable
  std::vector<std::string> base_points;  // r(e_1), ..., r(e_n)
  bool operator==(const Cycle&) const = default;
  auto operator<=>(const Cycle&) const = default;
};

// All simple cycles (distinct base points), each listed once, starting at its
// minimal base point; ordered by (length, edge tuple).
inline std::vector<Cycle> simple_cycles(const DiscreteGraph& g) {
  validate_graph(g);
  std::vector<Edge> sorted_edges = g.edges;
  std::sort(sorted_edges.begin(), sorted_edges.end(),
            [](const Edge& a, const Edge& b) { return a.id < b.id; });
  std::vector<Cycle> out;
  std::vector<std::string> sorted_vertices = g.vertices;
  std::sort(sorted_vertices.begin(), sorted_vertices.end());
  for (const std::string& start : sorted_vertices) {
    std::vector<const Edge*> acc;
    std::set<std::string> visited{start};
    // Walk: at u, take e with r(e)=u, move to s(e); close when s(e)=start.
    auto dfs = [&](auto&& self, const std::string& u) -> void {
      for (const Edge& e : sorted_edges) {
        if (e.rng != u) continue;
        acc.push_back(&e);
        if (e.src == start) {
          Cycle c;
          for (const Edge* x : acc) {
            c.edges.push_back(x->id);
            c.base_points.push_back(x->rng);
          }
          out.push_back(std::move(c));
        } else if (e.src > start && !visited.count(e.src)) {
          visited.insert(e.src);
          self(self, e.src);
          visited.erase(e.src);
        }
        acc.pop_back();
      }
    };
    dfs(dfs, start);
  }
  std::sort(out.begin(), out.end(), [](const Cycle& a, const Cycle& b) {
    return std::make_pair(a.edges.size(), a.edges) < std::make_pair(b.edges.size(), b.edges);
  });
  return out;
}

// true iff some base point admits another incoming edge (or receives an
// infinite family, which provides entrances that are never materialized).
inline bool cycle_has_entrance(const DiscreteGraph& g, const Cycle& c) {
  const std::set<std::string> inf = g.infinite_receivers();
  const std::set<std::string> cycle_edges(c.edges.begin(), c.edges.end());
  for (const std::string& b : c.base_points) {
    if (inf.count(b)) return true;
    for (const Edge& e : g.edges)
      if (e.rng == b && !cycle_edges.count(e.id)) return true;
  }
  return false;
}

inline std::vector<Cycle> cycles_without_entrances(const DiscreteGraph& g) {
  std::vector<Cycle> out;
  for (const Cycle& c : simple_cycles(g))
    if (!cycle_has_entrance(g, c)) out.push_back(c);
  return out;
}

// Discrete tier: topologically free iff no cycle without entrances (base
// points of such cycles are isolated, so "empty interior" fails at any one).
inline bool is_topologically_free(const DiscreteGraph& g) {
  return cycles_without_entrances(g).empty();
}

// Def: every member's last edge differs from every member's first n-1 edges
// (all ordered pairs, including a member against itself).
inline bool is_non_returning(const DiscreteGraph& g, const std::vector<Path>& set) {
  validate_graph(g);
  if (set.empty()) return true;
  const std::size_t n = set.front().edges.size();
  if (n < 2) throw PreconditionError("is_non_returning: paths must have length >= 2");
  for (const Path& p : set) {
    if (p.edges.size() != n)
      throw PreconditionError("is_non_returning: mixed path lengths");
    for (std::size_t i = 0; i < n; ++i) {
      const Edge& e = g.edge(p.edges[i]);
      if (i + 1 < n && g.edge(p.edges[i + 1]).rng != e.src)
        throw PreconditionError("is_non_returning: '" + p.id() + "' is not a path");
    }
  }
  for (const Path& p : set)
    for (const Path& q : set)
      for (std::size_t i = 0; i + 1 < n; ++i)
        if (p.edges.back() == q.edges[i]) return false;
  return true;
}

// The two-level surgery graph E_Y: level 0 is a full copy of E, level 1
// duplicates Y and the edges with source in Y; every range lands on level 0.
inline DiscreteGraph graph_surgery(const DiscreteGraph& g, const std::set<std::string>& y) {
  const VertexClassification c = classify_vertices(g);
  for (const auto& v : y)
    if (!c.rg.count(v))
      throw PreconditionError("graph_surgery: '" + v + "' is not a regular vertex");
  auto at0 = [](const std::string& id) { return id + "@0"; };
  auto at1 = [](const std::string& id) { return id + "@1"; };
  DiscreteGraph out;
  for (const auto& v : g.vertices) out.vertices.push_back(at0(v));
  for (const auto& v : g.vertices)
    if (y.count(v)) out.vertices.push_back(at1(v));
  for (const Edge& e : g.edges) out.edges.push_back({at0(e.id), at0(e.src), at0(e.rng)});
  for (const Edge& e : g.edges)
    if (y.count(e.src)) out.edges.push_back({at1(e.id), at1(e.src), at0(e.rng)});
  for (const auto& f : g.infinite_families) {
    out.infinite_families.push_back({at0(f.src), at0(f.rng)});
    if (y.count(f.src)) out.infinite_families.push_back({at1(f.src), at0(f.rng)});
  }
  return out;
}

}  // namespace tga
