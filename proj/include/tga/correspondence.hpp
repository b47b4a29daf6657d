#pragma once

#include "tga/graph.hpp"
#include "tga/ideals.hpp"
#include "tga/scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tga {

// A twisted edge correspondence over a discrete graph: an open cover of the
// edge set by charts, each chart a section of the source map, glued along a
// unit-scalar 1-cocycle.  K is std::complex<double> or GaussianRational.
template <class K>
struct CorrespondenceModel {
  DiscreteGraph graph;
  std::vector<std::string> charts;                       // sorted ids
  std::map<std::string, std::set<std::string>> cover;    // chart -> edges
  // (a, b) with a < b -> edge -> value; a missing edge means 1.
  std::map<std::pair<std::string, std::string>, std::map<std::string, K>> twist;
};

template <class K>
using VertexFunction = std::map<std::string, K>;  // missing vertex = 0

// A module element is a compatible family of chart-local edge functions.
template <class K>
struct ModuleElement {
  std::map<std::string, std::map<std::string, K>> values;  // chart -> edge -> value

  K at(const std::string& chart, const std::string& edge) const {
    auto ci = values.find(chart);
    if (ci == values.end()) return K(0);
    auto ei = ci->second.find(edge);
    return ei == ci->second.end() ? K(0) : ei->second;
  }
  void set(const std::string& chart, const std::string& edge, const K& v) {
    values[chart][edge] = v;
  }
};

namespace detail {

template <class K>
const std::set<std::string>& chart_edges(const CorrespondenceModel<K>& m,
                                         const std::string& chart) {
  static const std::set<std::string> empty;
  auto it = m.cover.find(chart);
  return it == m.cover.end() ? empty : it->second;
}

template <class K>
bool chart_contains(const CorrespondenceModel<K>& m, const std::string& chart,
                    const std::string& edge) {
  return chart_edges(m, chart).count(edge) > 0;
}

}  // namespace detail

// Transition value between two charts at an edge in their overlap; charts
// glue by x_a(e) = s_ab(e) * x_b(e).
template <class K>
K cocycle_value(const CorrespondenceModel<K>& m, const std::string& a,
                const std::string& b, const std::string& edge) {
  if (a == b) return K(1);
  const bool flip = a > b;
  const auto key = flip ? std::make_pair(b, a) : std::make_pair(a, b);
  K v(1);
  auto pi = m.twist.find(key);
  if (pi != m.twist.end()) {
    auto ei = pi->second.find(edge);
    if (ei != pi->second.end()) v = ei->second;
  }
  return flip ? scalar_conj(v) : v;
}

// The reference chart of an edge: the first chart (in id order) containing it.
template <class K>
std::string reference_chart(const CorrespondenceModel<K>& m, const std::string& edge) {
  for (const auto& c : m.charts)
    if (detail::chart_contains(m, c, edge)) return c;
  throw PreconditionError("reference_chart: edge '" + edge + "' is not covered");
}

// Edges with a given source, in sorted id order (the fiber over a vertex).
inline std::vector<std::string> source_fiber(const DiscreteGraph& g, const std::string& v) {
  std::vector<std::string> out;
  for (const Edge& e : g.edges)
    if (e.src == v) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

template <class K>
void validate_model(const CorrespondenceModel<K>& m,
                    double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  validate_graph(m.graph);
  if (!m.graph.infinite_families.empty())
    throw PreconditionError("validate_model: infinite families are not supported here");
  std::vector<std::string> problems;
  std::set<std::string> chart_ids;
  for (const auto& c : m.charts) {
    if (c.empty()) problems.push_back("empty chart id");
    if (!chart_ids.insert(c).second) problems.push_back("duplicate chart id '" + c + "'");
  }
  if (!std::is_sorted(m.charts.begin(), m.charts.end()))
    problems.push_back("chart ids are not sorted");
  std::set<std::string> covered;
  for (const auto& [c, edges] : m.cover) {
    if (!chart_ids.count(c)) problems.push_back("cover references unknown chart '" + c + "'");
    std::map<std::string, std::string> src_seen;  // source -> edge within this chart
    for (const auto& e : edges) {
      if (!m.graph.has_edge(e)) {
        problems.push_back("chart '" + c + "' references unknown edge '" + e + "'");
        continue;
      }
      covered.insert(e);
      const std::string& src = m.graph.edge(e).src;
      auto [it, fresh] = src_seen.emplace(src, e);
      if (!fresh)
        problems.push_back("chart '" + c + "' is not a source section: edges '" + it->second +
                           "' and '" + e + "' share source '" + src + "'");
    }
  }
  for (const Edge& e : m.graph.edges)
    if (!covered.count(e.id)) problems.push_back("edge '" + e.id + "' is not covered");
  for (const auto& [key, vals] : m.twist) {
    const auto& [a, b] = key;
    if (!(a < b)) problems.push_back("twist key (" + a + ", " + b + ") is not ordered");
    if (!chart_ids.count(a) || !chart_ids.count(b)) {
      problems.push_back("twist key (" + a + ", " + b + ") references unknown charts");
      continue;
    }
    for (const auto& [e, v] : vals) {
      if (!detail::chart_contains(m, a, e) || !detail::chart_contains(m, b, e))
        problems.push_back("twist (" + a + ", " + b + ") set at edge '" + e +
                           "' outside the overlap");
      else if (!scalar_is_unit(v, tol))
        problems.push_back("twist (" + a + ", " + b + ") at edge '" + e +
                           "' is not a unit scalar");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid correspondence model:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw SchemaError(msg);
  }
  // Cocycle condition on triple overlaps.
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    for (std::size_t j = i + 1; j < m.charts.size(); ++j)
      for (std::size_t k = j + 1; k < m.charts.size(); ++k) {
        const auto &a = m.charts[i], &b = m.charts[j], &c = m.charts[k];
        for (const auto& e : detail::chart_edges(m, a)) {
          if (!detail::chart_contains(m, b, e) || !detail::chart_contains(m, c, e)) continue;
          const K lhs = cocycle_value(m, a, b, e) * cocycle_value(m, b, c, e);
          const K rhs = cocycle_value(m, a, c, e);
          if (!scalar_close(lhs, rhs, tol))
            throw SchemaError("twist violates the cocycle condition on charts (" + a + ", " +
                              b + ", " + c + ") at edge '" + e + "'");
        }
      }
}

// ---- elements ----------------------------------------------------------

// Returns a description of the first compatibility failure, or nullopt.
template <class K>
std::optional<std::string> compatibility_violation(const CorrespondenceModel<K>& m,
                                                   const ModuleElement<K>& x,
                                                   double tol = ScalarTraits<K>::exact ? 0.0
                                                                                       : 1e-9) {
  for (const auto& [c, vals] : x.values) {
    if (!std::binary_search(m.charts.begin(), m.charts.end(), c))
      return "value on unknown chart '" + c + "'";
    for (const auto& [e, v] : vals) {
      (void)v;
      if (!detail::chart_contains(m, c, e))
        return "value at edge '" + e + "' outside chart '" + c + "'";
    }
  }
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    for (std::size_t j = i + 1; j < m.charts.size(); ++j) {
      const auto &a = m.charts[i], &b = m.charts[j];
      for (const auto& e : detail::chart_edges(m, a)) {
        if (!detail::chart_contains(m, b, e)) continue;
        const K lhs = x.at(a, e);
        const K rhs = cocycle_value(m, a, b, e) * x.at(b, e);
        if (!scalar_close(lhs, rhs, tol))
          return "values on charts '" + a + "' and '" + b + "' disagree at edge '" + e +
                 "' in the overlap";
      }
    }
  return std::nullopt;
}

template <class K>
void require_member(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                    double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  if (auto why = compatibility_violation(m, x, tol))
    throw PreconditionError("element is not a module member: " + *why);
}

// Coordinates of an element: its value at each edge's reference chart.
template <class K>
std::map<std::string, K> coords_of(const CorrespondenceModel<K>& m, const ModuleElement<K>& x) {
  std::map<std::string, K> out;
  for (const Edge& e : m.graph.edges) out[e.id] = x.at(reference_chart(m, e.id), e.id);
  return out;
}

// The unique compatible element with the given reference-chart coordinates.
template <class K>
ModuleElement<K> element_from_coords(const CorrespondenceModel<K>& m,
                                     const std::map<std::string, K>& coords) {
  ModuleElement<K> x;
  for (const auto& [e, v] : coords) {
    if (!m.graph.has_edge(e))
      throw PreconditionError("element_from_coords: unknown edge '" + e + "'");
    if (v == K(0)) continue;
    const std::string ref = reference_chart(m, e);
    for (const auto& c : m.charts)
      if (detail::chart_contains(m, c, e)) x.set(c, e, cocycle_value(m, c, ref, e) * v);
  }
  return x;
}

// Basis element supported on a single edge, normalised at its reference chart.
template <class K>
ModuleElement<K> basis_delta(const CorrespondenceModel<K>& m, const std::string& edge) {
  return element_from_coords<K>(m, {{edge, K(1)}});
}

template <class K>
ModuleElement<K> element_add(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                             const ModuleElement<K>& y) {
  std::map<std::string, K> cs = coords_of(m, x);
  for (auto& [e, v] : coords_of(m, y)) cs[e] += v;
  return element_from_coords(m, cs);
}

template <class K>
ModuleElement<K> element_scale(const CorrespondenceModel<K>& m, const K& c,
                               const ModuleElement<K>& x) {
  std::map<std::string, K> cs = coords_of(m, x);
  for (auto& [e, v] : cs) v = c * v;
  return element_from_coords(m, cs);
}

template <class K>
bool element_close(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                   const ModuleElement<K>& y, double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  const auto cx = coords_of(m, x), cy = coords_of(m, y);
  for (const Edge& e : m.graph.edges)
    if (!scalar_close(cx.at(e.id), cy.at(e.id), tol)) return false;
  return true;
}

// Vertex-function-valued inner product: <x, y>(v) = sum over edges with
// source v of conj(x(e)) * y(e).  Chart-independent because the twist is
// unitary, so it is computed in reference coordinates.
template <class K>
VertexFunction<K> inner_product(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                                const ModuleElement<K>& y,
                                double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  require_member(m, x, tol);
  require_member(m, y, tol);
  const auto cx = coords_of(m, x), cy = coords_of(m, y);
  VertexFunction<K> out;
  for (const Edge& e : m.graph.edges) {
    const K term = scalar_conj(cx.at(e.id)) * cy.at(e.id);
    if (term != K(0)) out[e.src] += term;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == K(0); });
  return out;
}

// Right action (x . f)(e) = x(e) f(s(e)); left action uses the range instead.
template <class K>
ModuleElement<K> right_action(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                              const VertexFunction<K>& f) {
  std::map<std::string, K> cs = coords_of(m, x);
  for (auto& [e, v] : cs) {
    auto it = f.find(m.graph.edge(e).src);
    v = v * (it == f.end() ? K(0) : it->second);
  }
  return element_from_coords(m, cs);
}

template <class K>
ModuleElement<K> left_action(const CorrespondenceModel<K>& m, const VertexFunction<K>& f,
                             const ModuleElement<K>& x) {
  std::map<std::string, K> cs = coords_of(m, x);
  for (auto& [e, v] : cs) {
    auto it = f.find(m.graph.edge(e).rng);
    v = (it == f.end() ? K(0) : it->second) * v;
  }
  return element_from_coords(m, cs);
}

// The compatible element induced by an edge function supported in one chart.
template <class K>
ModuleElement<K> induced_section(const CorrespondenceModel<K>& m, const std::string& chart,
                                 const std::map<std::string, K>& f) {
  if (!std::binary_search(m.charts.begin(), m.charts.end(), chart))
    throw PreconditionError("induced_section: unknown chart '" + chart + "'");
  std::map<std::string, K> cs;
  for (const auto& [e, v] : f) {
    if (!detail::chart_contains(m, chart, e))
      throw PreconditionError("induced_section: edge '" + e + "' is not in chart '" + chart +
                              "'");
    if (v == K(0)) continue;
    cs[e] = cocycle_value(m, reference_chart(m, e), chart, e) * v;
  }
  return element_from_coords(m, cs);
}

// Decomposition of a compatible element into induced sections, one per chart:
// each edge contributes through its reference chart, so summing the induced
// sections of the returned local functions reconstructs the element exactly.
template <class K>
std::map<std::string, std::map<std::string, K>> induced_decomposition(
    const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
    double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  require_member(m, x, tol);
  std::map<std::string, std::map<std::string, K>> out;
  for (const auto& [e, v] : coords_of(m, x))
    if (v != K(0)) out[reference_chart(m, e)][e] = v;
  return out;
}

// ---- fibered operators --------------------------------------------------

// A block-diagonal operator: one dense matrix per source fiber, rows and
// columns indexed by the sorted edge ids of that fiber.  Missing block = 0.
template <class K>
struct FiberedOperator {
  std::map<std::string, std::vector<std::vector<K>>> blocks;  // vertex -> matrix
};

namespace detail {

template <class K>
std::vector<std::vector<K>> zero_block(std::size_t n) {
  return std::vector<std::vector<K>>(n, std::vector<K>(n, K(0)));
}

template <class K>
const std::vector<std::vector<K>>* block_of(const FiberedOperator<K>& t, const std::string& v) {
  auto it = t.blocks.find(v);
  return it == t.blocks.end() ? nullptr : &it->second;
}

}  // namespace detail

template <class K>
K operator_entry(const CorrespondenceModel<K>& m, const FiberedOperator<K>& t,
                 const std::string& row_edge, const std::string& col_edge) {
  const std::string v = m.graph.edge(row_edge).src;
  if (m.graph.edge(col_edge).src != v) return K(0);
  const auto* blk = detail::block_of(t, v);
  if (!blk) return K(0);
  const auto fiber = source_fiber(m.graph, v);
  const auto pos = [&](const std::string& e) {
    return static_cast<std::size_t>(std::find(fiber.begin(), fiber.end(), e) - fiber.begin());
  };
  return (*blk)[pos(row_edge)][pos(col_edge)];
}

template <class K>
FiberedOperator<K> operator_add(const CorrespondenceModel<K>& m, const FiberedOperator<K>& a,
                                const FiberedOperator<K>& b) {
  FiberedOperator<K> out = a;
  for (const auto& [v, blk] : b.blocks) {
    auto [it, fresh] = out.blocks.emplace(v, blk);
    if (!fresh)
      for (std::size_t i = 0; i < blk.size(); ++i)
        for (std::size_t j = 0; j < blk.size(); ++j) it->second[i][j] += blk[i][j];
  }
  (void)m;
  return out;
}

template <class K>
FiberedOperator<K> operator_scale(const K& c, const FiberedOperator<K>& a) {
  FiberedOperator<K> out = a;
  for (auto& [v, blk] : out.blocks)
    for (auto& row : blk)
      for (auto& x : row) x = c * x;
  return out;
}

template <class K>
FiberedOperator<K> operator_compose(const CorrespondenceModel<K>& m, const FiberedOperator<K>& a,
                                    const FiberedOperator<K>& b) {
  FiberedOperator<K> out;
  for (const auto& [v, ab] : a.blocks) {
    const auto* bb = detail::block_of(b, v);
    if (!bb) continue;
    const std::size_t n = ab.size();
    auto blk = detail::zero_block<K>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (ab[i][k] == K(0)) continue;
        for (std::size_t j = 0; j < n; ++j) blk[i][j] += ab[i][k] * (*bb)[k][j];
      }
    out.blocks.emplace(v, std::move(blk));
  }
  (void)m;
  return out;
}

template <class K>
FiberedOperator<K> operator_adjoint(const FiberedOperator<K>& a) {
  FiberedOperator<K> out;
  for (const auto& [v, blk] : a.blocks) {
    const std::size_t n = blk.size();
    auto adj = detail::zero_block<K>(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) adj[i][j] = scalar_conj(blk[j][i]);
    out.blocks.emplace(v, std::move(adj));
  }
  return out;
}

template <class K>
bool operator_close(const CorrespondenceModel<K>& m, const FiberedOperator<K>& a,
                    const FiberedOperator<K>& b, double tol = ScalarTraits<K>::exact ? 0.0
                                                                                     : 1e-9) {
  for (const auto& v : m.graph.vertices) {
    const auto fiber = source_fiber(m.graph, v);
    for (const auto& e1 : fiber)
      for (const auto& e2 : fiber)
        if (!scalar_close(operator_entry(m, a, e1, e2), operator_entry(m, b, e1, e2), tol))
          return false;
  }
  return true;
}

template <class K>
ModuleElement<K> operator_apply(const CorrespondenceModel<K>& m, const FiberedOperator<K>& t,
                                const ModuleElement<K>& x,
                                double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  require_member(m, x, tol);
  const auto cx = coords_of(m, x);
  std::map<std::string, K> out;
  for (const auto& [v, blk] : t.blocks) {
    const auto fiber = source_fiber(m.graph, v);
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      K acc(0);
      for (std::size_t j = 0; j < fiber.size(); ++j) acc += blk[i][j] * cx.at(fiber[j]);
      if (acc != K(0)) out[fiber[i]] = acc;
    }
  }
  return element_from_coords(m, out);
}

// Left multiplication by a vertex function: diagonal blocks f(r(e)).
template <class K>
FiberedOperator<K> phi_matrix(const CorrespondenceModel<K>& m, const VertexFunction<K>& f) {
  FiberedOperator<K> out;
  for (const auto& v : m.graph.vertices) {
    const auto fiber = source_fiber(m.graph, v);
    if (fiber.empty()) continue;
    auto blk = detail::zero_block<K>(fiber.size());
    bool nonzero = false;
    for (std::size_t i = 0; i < fiber.size(); ++i) {
      auto it = f.find(m.graph.edge(fiber[i]).rng);
      if (it != f.end() && it->second != K(0)) {
        blk[i][i] = it->second;
        nonzero = true;
      }
    }
    if (nonzero) out.blocks.emplace(v, std::move(blk));
  }
  return out;
}

// Rank-one operator x <y, .>: per fiber the outer product of coordinates.
template <class K>
FiberedOperator<K> rank_one(const CorrespondenceModel<K>& m, const ModuleElement<K>& x,
                            const ModuleElement<K>& y,
                            double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  require_member(m, x, tol);
  require_member(m, y, tol);
  const auto cx = coords_of(m, x), cy = coords_of(m, y);
  FiberedOperator<K> out;
  for (const auto& v : m.graph.vertices) {
    const auto fiber = source_fiber(m.graph, v);
    if (fiber.empty()) continue;
    auto blk = detail::zero_block<K>(fiber.size());
    bool nonzero = false;
    for (std::size_t i = 0; i < fiber.size(); ++i)
      for (std::size_t j = 0; j < fiber.size(); ++j) {
        blk[i][j] = cx.at(fiber[i]) * scalar_conj(cy.at(fiber[j]));
        if (blk[i][j] != K(0)) nonzero = true;
      }
    if (nonzero) out.blocks.emplace(v, std::move(blk));
  }
  return out;
}

// ---- finite-rank decomposition of left multiplication -------------------

// One term of a partition of unity subordinate to the cover: nonnegative
// rational weights on the edges of a single chart.
struct PartitionTerm {
  std::string chart;
  std::map<std::string, Rat> weights;
};

// Default partition: each covered edge is assigned entirely to its reference
// chart (weight 1 there, 0 elsewhere).
template <class K>
std::vector<PartitionTerm> default_partition(const CorrespondenceModel<K>& m) {
  std::map<std::string, PartitionTerm> by_chart;
  for (const Edge& e : m.graph.edges) {
    const std::string ref = reference_chart(m, e.id);
    auto& term = by_chart[ref];
    term.chart = ref;
    term.weights[e.id] = Rat(1);
  }
  std::vector<PartitionTerm> out;
  for (auto& [c, t] : by_chart) out.push_back(std::move(t));
  return out;
}

// Writes phi(f), for f >= 0, as a finite sum of rank-one operators
// Theta_{w_t, w_t} with w_t the section induced by sqrt(h_t * (f o r)) on
// chart t.  Returns the list of sections; summing their rank-one operators
// recovers phi_matrix(m, f).
template <class K>
std::vector<ModuleElement<K>> phi_decomposition(
    const CorrespondenceModel<K>& m, const VertexFunction<K>& f,
    const std::vector<PartitionTerm>& partition,
    double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  for (const auto& [v, val] : f) {
    if (!m.graph.has_vertex(v))
      throw PreconditionError("phi_decomposition: unknown vertex '" + v + "'");
    using Traits = ScalarTraits<K>;
    if constexpr (Traits::exact) {
      if (scalar_im(val) != typename Traits::Real(0) || scalar_re(val) < typename Traits::Real(0))
        throw PreconditionError("phi_decomposition: function is not nonnegative at '" + v + "'");
    } else {
      if (std::abs(scalar_im(val)) > tol || scalar_re(val) < -tol)
        throw PreconditionError("phi_decomposition: function is not nonnegative at '" + v + "'");
    }
  }
  // Partition sanity: nonnegative weights inside their chart, summing to 1
  // on every edge whose range carries mass.
  std::map<std::string, Rat> total;
  for (const auto& t : partition) {
    if (!std::binary_search(m.charts.begin(), m.charts.end(), t.chart))
      throw PreconditionError("phi_decomposition: unknown chart '" + t.chart + "'");
    for (const auto& [e, w] : t.weights) {
      if (!detail::chart_contains(m, t.chart, e))
        throw PreconditionError("phi_decomposition: weight at edge '" + e +
                                "' outside chart '" + t.chart + "'");
      if (w < 0)
        throw PreconditionError("phi_decomposition: negative weight at edge '" + e + "'");
      total[e] += w;
    }
  }
  for (const Edge& e : m.graph.edges) {
    auto it = f.find(e.rng);
    const bool needed = it != f.end() && it->second != K(0);
    if (needed && total[e.id] != Rat(1))
      throw PreconditionError("phi_decomposition: weights at edge '" + e.id +
                              "' do not sum to one");
  }
  std::vector<ModuleElement<K>> sections;
  for (const auto& t : partition) {
    std::map<std::string, K> g;
    for (const auto& [e, w] : t.weights) {
      auto it = f.find(m.graph.edge(e).rng);
      if (it == f.end() || it->second == K(0) || w == 0) continue;
      g[e] = scalar_sqrt(scalar_from_rat<K>(w) * it->second, tol);
    }
    if (!g.empty()) sections.push_back(induced_section(m, t.chart, g));
  }
  return sections;
}

template <class K>
std::vector<ModuleElement<K>> phi_decomposition(const CorrespondenceModel<K>& m,
                                                const VertexFunction<K>& f,
                                                double tol = ScalarTraits<K>::exact ? 0.0
                                                                                    : 1e-9) {
  return phi_decomposition(m, f, default_partition(m), tol);
}

// ---- restriction to an invariant vertex set ------------------------------

template <class K>
CorrespondenceModel<K> submodel(const CorrespondenceModel<K>& m,
                                const std::set<std::string>& f0) {
  if (!is_invariant(m.graph, f0))
    throw PreconditionError("submodel: vertex set is not invariant");
  CorrespondenceModel<K> out;
  out.graph = restricted_graph(m.graph, f0);
  std::set<std::string> kept;
  for (const Edge& e : out.graph.edges) kept.insert(e.id);
  out.charts = m.charts;
  for (const auto& c : m.charts) {
    std::set<std::string> edges;
    for (const auto& e : detail::chart_edges(m, c))
      if (kept.count(e)) edges.insert(e);
    out.cover[c] = std::move(edges);
  }
  for (const auto& [key, vals] : m.twist) {
    std::map<std::string, K> restricted;
    for (const auto& [e, v] : vals)
      if (kept.count(e)) restricted.emplace(e, v);
    if (!restricted.empty()) out.twist.emplace(key, std::move(restricted));
  }
  return out;
}

// Restriction of a fibered operator: keep the blocks over the invariant set.
template <class K>
FiberedOperator<K> restriction_omega(const CorrespondenceModel<K>& m,
                                     const FiberedOperator<K>& t,
                                     const std::set<std::string>& f0) {
  if (!is_invariant(m.graph, f0))
    throw PreconditionError("restriction_omega: vertex set is not invariant");
  FiberedOperator<K> out;
  for (const auto& [v, blk] : t.blocks)
    if (f0.count(v)) out.blocks.emplace(v, blk);
  return out;
}

template <class K>
bool in_kernel_omega(const CorrespondenceModel<K>& m, const FiberedOperator<K>& t,
                     const std::set<std::string>& f0,
                     double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  const FiberedOperator<K> r = restriction_omega(m, t, f0);
  for (const auto& [v, blk] : r.blocks)
    for (const auto& row : blk)
      for (const auto& x : row)
        if (!scalar_close(x, K(0), tol)) return false;
  return true;
}

// ---- tensor powers over the path space ----------------------------------

namespace detail {

inline std::string tuple_chart_id(const std::vector<std::string>& parts) {
  std::string id;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) id += '|';
    id += parts[i];
  }
  return id;
}

}  // namespace detail

// The induced correspondence on paths of length n: charts are n-tuples of
// charts (joined with '|'), covering the paths they cover componentwise,
// twisted by the product of component twists.
template <class K>
CorrespondenceModel<K> path_model(const CorrespondenceModel<K>& m, int n) {
  const PathSpaceGraph ps = path_space(m.graph, n);
  CorrespondenceModel<K> out;
  out.graph = ps.as_graph(m.graph);
  std::vector<std::vector<std::string>> tuples{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples)
      for (const auto& c : m.charts) {
        auto t2 = t;
        t2.push_back(c);
        next.push_back(std::move(t2));
      }
    tuples = std::move(next);
  }
  std::map<std::string, std::vector<std::string>> tuple_of;
  for (const auto& t : tuples) {
    std::set<std::string> covered;
    for (const Path& p : ps.paths) {
      bool inside = true;
      for (std::size_t i = 0; i < p.edges.size(); ++i)
        if (!detail::chart_contains(m, t[i], p.edges[i])) {
          inside = false;
          break;
        }
      if (inside) covered.insert(p.id());
    }
    if (covered.empty()) continue;
    const std::string id = detail::tuple_chart_id(t);
    out.charts.push_back(id);
    out.cover[id] = std::move(covered);
    tuple_of[id] = t;
  }
  std::sort(out.charts.begin(), out.charts.end());
  for (std::size_t i = 0; i < out.charts.size(); ++i)
    for (std::size_t j = i + 1; j < out.charts.size(); ++j) {
      const auto &a = out.charts[i], &b = out.charts[j];
      const auto &ta = tuple_of[a], &tb = tuple_of[b];
      std::map<std::string, K> vals;
      for (const Path& p : ps.paths) {
        if (!out.cover[a].count(p.id()) || !out.cover[b].count(p.id())) continue;
        K v(1);
        for (std::size_t k = 0; k < p.edges.size(); ++k)
          v = v * cocycle_value(m, ta[k], tb[k], p.edges[k]);
        if (v != K(1)) vals.emplace(p.id(), v);
      }
      if (!vals.empty()) out.twist.emplace(std::make_pair(a, b), std::move(vals));
    }
  return out;
}

// Elementary tensor x1 <> x2 <> ... as an element of the path model:
// on a tuple chart its value at a path is the product of component values.
template <class K>
ModuleElement<K> diamond(const CorrespondenceModel<K>& pm,
                         const std::vector<ModuleElement<K>>& xs) {
  if (xs.empty()) throw PreconditionError("diamond: empty tensor");
  ModuleElement<K> out;
  for (const auto& c : pm.charts) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : c) {
      if (ch == '|') {
        parts.push_back(cur);
        cur.clear();
      } else
        cur += ch;
    }
    parts.push_back(cur);
    if (parts.size() != xs.size())
      throw PreconditionError("diamond: tensor length does not match the path model");
    for (const auto& pid : detail::chart_edges(pm, c)) {
      // Recover the component edges from the path id "(e1,e2,...)".
      std::vector<std::string> comps;
      std::string tok;
      for (std::size_t i = 1; i + 1 < pid.size(); ++i) {
        if (pid[i] == ',') {
          comps.push_back(tok);
          tok.clear();
        } else
          tok += pid[i];
      }
      comps.push_back(tok);
      K v(1);
      for (std::size_t i = 0; i < comps.size(); ++i) v = v * xs[i].at(parts[i], comps[i]);
      if (v != K(0)) out.set(c, pid, v);
    }
  }
  return out;
}

// Inner product of elementary tensors, computed recursively:
// < x1<>u, y1<>w > = < u, <x1,y1> . w > after absorbing the first factor.
template <class K>
VertexFunction<K> tensor_inner(const CorrespondenceModel<K>& m,
                               std::vector<ModuleElement<K>> xs,
                               std::vector<ModuleElement<K>> ys,
                               double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  if (xs.empty() || xs.size() != ys.size())
    throw PreconditionError("tensor_inner: mismatched tensor lengths");
  VertexFunction<K> f = inner_product(m, xs.front(), ys.front(), tol);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const ModuleElement<K> scaled = left_action(m, f, ys[i]);
    f = inner_product(m, xs[i], scaled, tol);
  }
  return f;
}

// ---- coboundary equivalence ----------------------------------------------

// Chart-local unit scalars b: chart -> edge -> unit value on that chart.
template <class K>
using ChartUnits = std::map<std::string, std::map<std::string, K>>;

template <class K>
K chart_unit_at(const ChartUnits<K>& b, const std::string& chart, const std::string& edge) {
  auto ci = b.find(chart);
  if (ci == b.end()) return K(1);
  auto ei = ci->second.find(edge);
  return ei == ci->second.end() ? K(1) : ei->second;
}

// The model twisted by the coboundary of b: s'_ab = s_ab * b_a * conj(b_b).
template <class K>
CorrespondenceModel<K> twist_by_coboundary(const CorrespondenceModel<K>& m,
                                           const ChartUnits<K>& b,
                                           double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  for (const auto& [c, vals] : b) {
    if (!std::binary_search(m.charts.begin(), m.charts.end(), c))
      throw PreconditionError("twist_by_coboundary: unknown chart '" + c + "'");
    for (const auto& [e, v] : vals) {
      if (!detail::chart_contains(m, c, e))
        throw PreconditionError("twist_by_coboundary: edge '" + e + "' is not in chart '" + c +
                                "'");
      if (!scalar_is_unit(v, tol))
        throw PreconditionError("twist_by_coboundary: value at ('" + c + "', '" + e +
                                "') is not a unit scalar");
    }
  }
  CorrespondenceModel<K> out = m;
  out.twist.clear();
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    for (std::size_t j = i + 1; j < m.charts.size(); ++j) {
      const auto &a = m.charts[i], &c = m.charts[j];
      std::map<std::string, K> vals;
      for (const auto& e : detail::chart_edges(m, a)) {
        if (!detail::chart_contains(m, c, e)) continue;
        const K v = cocycle_value(m, a, c, e) * chart_unit_at(b, a, e) *
                    scalar_conj(chart_unit_at(b, c, e));
        if (v != K(1)) vals.emplace(e, v);
      }
      if (!vals.empty()) out.twist.emplace(std::make_pair(a, c), std::move(vals));
    }
  return out;
}

// Certifies that m2 differs from m by the coboundary of b; returns a witness
// overlap on failure.
template <class K>
std::optional<std::string> coboundary_mismatch(const CorrespondenceModel<K>& m,
                                               const CorrespondenceModel<K>& m2,
                                               const ChartUnits<K>& b,
                                               double tol = ScalarTraits<K>::exact ? 0.0
                                                                                   : 1e-9) {
  if (m.charts != m2.charts || m.cover != m2.cover)
    return std::optional<std::string>{"the models do not share a cover"};
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    for (std::size_t j = i + 1; j < m.charts.size(); ++j) {
      const auto &a = m.charts[i], &c = m.charts[j];
      for (const auto& e : detail::chart_edges(m, a)) {
        if (!detail::chart_contains(m, c, e)) continue;
        const K want = cocycle_value(m, a, c, e) * chart_unit_at(b, a, e) *
                       scalar_conj(chart_unit_at(b, c, e));
        if (!scalar_close(cocycle_value(m2, a, c, e), want, tol))
          return "twists disagree on charts ('" + a + "', '" + c + "') at edge '" + e + "'";
      }
    }
  return std::nullopt;
}

// The unitary intertwiner for a coboundary change of twist:
// (U x)_a = b_a * x_a, an element of the retwisted model.
template <class K>
ModuleElement<K> coboundary_unitary(const CorrespondenceModel<K>& m,
                                    const CorrespondenceModel<K>& m2, const ChartUnits<K>& b,
                                    const ModuleElement<K>& x,
                                    double tol = ScalarTraits<K>::exact ? 0.0 : 1e-9) {
  if (auto why = coboundary_mismatch(m, m2, b, tol))
    throw PreconditionError("coboundary_unitary: " + *why);
  require_member(m, x, tol);
  ModuleElement<K> out;
  for (const auto& c : m.charts)
    for (const auto& e : detail::chart_edges(m, c)) {
      const K v = chart_unit_at(b, c, e) * x.at(c, e);
      if (v != K(0)) out.set(c, e, v);
    }
  return out;
}

// ---- pointwise structure of the compact-operator ideal -------------------

struct VertexOperatorProfile {
  bool finite_rank_cover = false;   // the fiber over v meets only finitely many edges
  bool in_range_closure = false;    // v receives an edge or an infinite family
};

inline VertexOperatorProfile vertex_profile(const DiscreteGraph& g, const std::string& v) {
  if (!g.has_vertex(v)) throw PreconditionError("vertex_profile: unknown vertex '" + v + "'");
  VertexOperatorProfile p;
  p.finite_rank_cover = true;
  for (const auto& f : g.infinite_families)
    if (f.rng == v) p.finite_rank_cover = false;
  p.in_range_closure = g.receivers().count(v) || !p.finite_rank_cover;
  return p;
}

// Vertices whose indicator lands in the ideal generated by the rank-one
// operators: exactly the regular (finite, receiving) part of the graph.
inline std::set<std::string> compact_support(const DiscreteGraph& g) {
  std::set<std::string> out;
  for (const auto& v : g.vertices) {
    const VertexOperatorProfile p = vertex_profile(g, v);
    if (p.finite_rank_cover && p.in_range_closure) out.insert(v);
  }
  return out;
}

// ---- surgery -------------------------------------------------------------

// Transport of the correspondence across vertex-set surgery: edge copies
// inherit the chart membership and twist of the edge they shadow.
template <class K>
CorrespondenceModel<K> surgery_model(const CorrespondenceModel<K>& m,
                                     const std::set<std::string>& y) {
  CorrespondenceModel<K> out;
  out.graph = graph_surgery(m.graph, y);
  out.charts = m.charts;
  for (const auto& c : m.charts) {
    std::set<std::string> edges;
    for (const auto& e : detail::chart_edges(m, c)) {
      edges.insert(e + "@0");
      if (y.count(m.graph.edge(e).src)) edges.insert(e + "@1");
    }
    out.cover[c] = std::move(edges);
  }
  for (const auto& [key, vals] : m.twist) {
    std::map<std::string, K> lifted;
    for (const auto& [e, v] : vals) {
      lifted.emplace(e + "@0", v);
      if (y.count(m.graph.edge(e).src)) lifted.emplace(e + "@1", v);
    }
    out.twist.emplace(key, std::move(lifted));
  }
  return out;
}

}  // namespace tga
