#pragma once

#include "tga/graph.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace tga {

namespace detail {

// Invariance of F0 against a precomputed regular class, so that subset
// enumerations classify the graph once instead of once per subset.
inline bool is_invariant_given(const DiscreteGraph& g, const std::set<std::string>& rg,
                               const std::set<std::string>& f0) {
  for (const Edge& e : g.edges)
    if (f0.count(e.src) && !f0.count(e.rng)) return false;
  for (const auto& f : g.infinite_families)
    if (f0.count(f.src) && !f0.count(f.rng)) return false;
  for (const auto& v : f0) {
    if (!rg.count(v)) continue;
    bool fed = false;
    for (const Edge& e : g.edges)
      if (e.rng == v && f0.count(e.src)) {
        fed = true;
        break;
      }
    if (!fed) return false;
  }
  return true;
}

// Restriction body without the invariance check, for callers holding sets
// already known invariant (e.g. the output of invariant_sets).
inline DiscreteGraph restrict_unchecked(const DiscreteGraph& g, const std::set<std::string>& f0) {
  DiscreteGraph out;
  for (const auto& v : g.vertices)
    if (f0.count(v)) out.vertices.push_back(v);
  for (const Edge& e : g.edges)
    if (f0.count(e.src)) out.edges.push_back(e);
  for (const auto& f : g.infinite_families)
    if (f0.count(f.src)) out.infinite_families.push_back(f);
  return out;
}

}  // namespace detail

// Invariance of a vertex set F0:
//  (a) every edge (or infinite family) with source in F0 has range in F0;
//  (b) every regular vertex of F0 receives some edge whose source is in F0.
inline bool is_invariant(const DiscreteGraph& g, const std::set<std::string>& f0) {
  for (const auto& v : f0)
    if (!g.has_vertex(v)) throw PreconditionError("is_invariant: unknown vertex '" + v + "'");
  return detail::is_invariant_given(g, classify_vertices(g).rg, f0);
}

// The restriction F = (F0, s^-1(F0)).  An infinite family survives iff its
// source lies in F0 (otherwise none of its edges restrict).
inline DiscreteGraph restricted_graph(const DiscreteGraph& g, const std::set<std::string>& f0) {
  if (!is_invariant(g, f0))
    throw PreconditionError("restricted_graph: set is not invariant");
  return detail::restrict_unchecked(g, f0);
}

namespace detail {

inline void vertex_guard(const DiscreteGraph& g, std::size_t max_vertices, const char* op) {
  if (g.vertices.size() > max_vertices)
    throw PreconditionError(std::string(op) + ": vertex count " +
                            std::to_string(g.vertices.size()) + " exceeds the guard (" +
                            std::to_string(max_vertices) + ")");
}

inline bool set_order(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace detail

// All invariant vertex sets, ordered by (size, elements).
inline std::vector<std::set<std::string>> invariant_sets(const DiscreteGraph& g,
                                                         std::size_t max_vertices = 20) {
  validate_graph(g);
  detail::vertex_guard(g, max_vertices, "invariant_sets");
  std::vector<std::string> vs = g.vertices;
  std::sort(vs.begin(), vs.end());
  const std::set<std::string> rg = classify_vertices(g).rg;
  std::vector<std::set<std::string>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << vs.size()); ++mask) {
    std::set<std::string> f0;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (mask & (std::size_t{1} << i)) f0.insert(vs[i]);
    if (detail::is_invariant_given(g, rg, f0)) out.push_back(std::move(f0));
  }
  std::sort(out.begin(), out.end(), detail::set_order);
  return out;
}

// (F0, Z) with F0 invariant and F_sg <= Z <= E_sg n F0, where F_sg is the
// singular class of the restricted graph.  These index the gauge-invariant
// ideal lattice.
struct AdmissiblePair {
  std::set<std::string> f0, z;
  bool operator==(const AdmissiblePair&) const = default;
};

inline std::vector<AdmissiblePair> admissible_pairs(const DiscreteGraph& g,
                                                    std::size_t max_vertices = 20) {
  validate_graph(g);
  detail::vertex_guard(g, max_vertices, "admissible_pairs");
  const std::set<std::string> e_sg = classify_vertices(g).sg;
  std::vector<AdmissiblePair> out;
  for (const auto& f0 : invariant_sets(g, max_vertices)) {
    // f0 comes from invariant_sets, so the restriction is valid by construction.
    const std::set<std::string> f_sg =
        detail::classify_unchecked(detail::restrict_unchecked(g, f0)).sg;
    std::vector<std::string> optional_z;
    for (const auto& v : f0)
      if (e_sg.count(v) && !f_sg.count(v)) optional_z.push_back(v);
    std::sort(optional_z.begin(), optional_z.end());
    std::vector<std::set<std::string>> zs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << optional_z.size()); ++mask) {
      std::set<std::string> z = f_sg;
      for (std::size_t i = 0; i < optional_z.size(); ++i)
        if (mask & (std::size_t{1} << i)) z.insert(optional_z[i]);
      zs.push_back(std::move(z));
    }
    std::sort(zs.begin(), zs.end(), detail::set_order);
    for (auto& z : zs) out.push_back({f0, std::move(z)});
  }
  return out;
}

// Dual description: F0 is invariant iff its complement H is hereditary
// (range in H forces source in H, infinite families included) and saturated
// (a regular vertex all of whose feeders lie in H lies in H).
inline std::vector<std::set<std::string>> hereditary_saturated_oracle(
    const DiscreteGraph& g, std::size_t max_vertices = 20) {
  validate_graph(g);
  detail::vertex_guard(g, max_vertices, "hereditary_saturated_oracle");
  std::vector<std::string> vs = g.vertices;
  std::sort(vs.begin(), vs.end());
  const VertexClassification c = classify_vertices(g);
  std::vector<std::set<std::string>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << vs.size()); ++mask) {
    std::set<std::string> h;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (mask & (std::size_t{1} << i)) h.insert(vs[i]);
    bool ok = true;
    for (const Edge& e : g.edges)
      if (h.count(e.rng) && !h.count(e.src)) ok = false;
    for (const auto& f : g.infinite_families)
      if (h.count(f.rng) && !h.count(f.src)) ok = false;
    if (ok)
      for (const auto& v : vs) {
        if (!c.rg.count(v) || h.count(v)) continue;
        bool all_inside = true;
        for (const Edge& e : g.edges)
          if (e.rng == v && !h.count(e.src)) {
            all_inside = false;
            break;
          }
        if (all_inside) ok = false;  // saturation would force v into H
      }
    if (!ok) continue;
    std::set<std::string> f0;
    for (const auto& v : vs)
      if (!h.count(v)) f0.insert(v);
    out.push_back(std::move(f0));
  }
  std::sort(out.begin(), out.end(), detail::set_order);
  return out;
}

}  // namespace tga
