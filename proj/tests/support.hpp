#pragma once

// Shared test utilities: deterministic RNG, graph/model/cocycle generators,
// and independent oracles (naive admissible-pair enumeration, gcd-of-minors,
// winding numbers, adjacency-power path counts).

#include "tga/cech.hpp"
#include "tga/correspondence.hpp"
#include "tga/graph.hpp"
#include "tga/scalar.hpp"
#include "tga/smith.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tga::test {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long long seed) : gen(seed) {}

  long long integer(long long lo, long long hi) {
    std::uniform_int_distribution<long long> d(lo, hi);
    return d(gen);
  }
  bool chance(double p) {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(gen) < p;
  }
  Rat rational(long long max_num = 6, long long max_den = 6) {
    return Rat(Int(integer(-max_num, max_num)), Int(integer(1, max_den)));
  }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[static_cast<std::size_t>(integer(0, static_cast<long long>(i) - 1))]);
  }
};

// ---- exhaustive corpus ------------------------------------------------------

// Visits every multigraph with `nv` named vertices, up to `max_edges` edges
// drawn with repetition from the nv^2 ordered vertex pairs, and every
// infinite-family pattern with at most `max_families` families over those
// pairs.
template <class F>
void for_each_graph(int nv, int max_edges, int max_families, F&& visit) {
  std::vector<std::string> names;
  for (int i = 0; i < nv; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  const int pairs = nv * nv;
  std::vector<int> multiset;
  auto emit = [&]() {
    const unsigned fam_limit = 1u << pairs;
    for (unsigned fam = 0; fam < fam_limit; ++fam) {
      if (std::popcount(fam) > max_families) continue;
      DiscreteGraph g;
      g.vertices = names;
      for (std::size_t k = 0; k < multiset.size(); ++k) {
        const int p = multiset[k];
        g.edges.push_back({"e" + std::to_string(k), names[p / nv], names[p % nv]});
      }
      for (int p = 0; p < pairs; ++p)
        if (fam & (1u << p)) g.infinite_families.push_back({names[p / nv], names[p % nv]});
      visit(g);
    }
  };
  auto rec = [&](auto&& self, int first) -> void {
    emit();
    if (static_cast<int>(multiset.size()) == max_edges) return;
    for (int p = first; p < pairs; ++p) {
      multiset.push_back(p);
      self(self, p);
      multiset.pop_back();
    }
  };
  rec(rec, 0);
}

template <class F>
void for_each_graph(int nv, int max_edges, F&& visit) {
  for_each_graph(nv, max_edges, nv * nv, std::forward<F>(visit));
}

// ---- random graphs ----------------------------------------------------------

inline DiscreteGraph random_graph(Rng& rng, int max_v, int max_e, bool with_families,
                                  int max_out_degree = 1 << 20) {
  const int nv = static_cast<int>(rng.integer(1, max_v));
  DiscreteGraph g;
  for (int i = 0; i < nv; ++i) g.vertices.push_back("v" + std::to_string(i));
  const int ne = static_cast<int>(rng.integer(0, max_e));
  std::map<std::string, int> out_degree;
  for (int k = 0; k < ne; ++k) {
    const std::string src = g.vertices[static_cast<std::size_t>(rng.integer(0, nv - 1))];
    if (out_degree[src] >= max_out_degree) continue;
    const std::string rng_v = g.vertices[static_cast<std::size_t>(rng.integer(0, nv - 1))];
    g.edges.push_back({"e" + std::to_string(g.edges.size()), src, rng_v});
    ++out_degree[src];
  }
  if (with_families) {
    const int nf = static_cast<int>(rng.integer(0, 2));
    std::set<std::pair<std::string, std::string>> used;
    for (int k = 0; k < nf; ++k) {
      const std::string src = g.vertices[static_cast<std::size_t>(rng.integer(0, nv - 1))];
      const std::string dst = g.vertices[static_cast<std::size_t>(rng.integer(0, nv - 1))];
      if (used.insert({src, dst}).second) g.infinite_families.push_back({src, dst});
    }
  }
  return g;
}

// ---- naive admissible-pair oracle --------------------------------------------

// Independent bitmask implementation straight from the definitions.
struct NaivePair {
  unsigned f0 = 0, z = 0;
  auto operator<=>(const NaivePair&) const = default;
};

inline std::vector<NaivePair> naive_admissible_pairs(const DiscreteGraph& g) {
  std::vector<std::string> vs = g.vertices;
  std::sort(vs.begin(), vs.end());
  auto index = [&](const std::string& v) {
    return static_cast<unsigned>(std::find(vs.begin(), vs.end(), v) - vs.begin());
  };
  struct Arrow {
    unsigned s, r;
  };
  std::vector<Arrow> edges, families;
  for (const Edge& e : g.edges) edges.push_back({index(e.src), index(e.rng)});
  for (const auto& f : g.infinite_families) families.push_back({index(f.src), index(f.rng)});
  const unsigned n = static_cast<unsigned>(vs.size());
  auto bit = [](unsigned i) { return 1u << i; };

  auto receives_edge_from = [&](unsigned v, unsigned mask) {
    for (const Arrow& a : edges)
      if (a.r == v && (mask & bit(a.s))) return true;
    return false;
  };
  auto receives_family_from = [&](unsigned v, unsigned mask) {
    for (const Arrow& a : families)
      if (a.r == v && (mask & bit(a.s))) return true;
    return false;
  };
  const unsigned full = (n == 32) ? ~0u : (bit(n) - 1);
  auto singular_in = [&](unsigned v, unsigned mask) {
    // singular within the restriction to `mask`: not a finite receiver fed
    // from inside
    return !receives_edge_from(v, mask) || receives_family_from(v, mask);
  };

  std::vector<NaivePair> out;
  for (unsigned f0 = 0; f0 <= full; ++f0) {
    bool invariant = true;
    for (const Arrow& a : edges)
      if ((f0 & bit(a.s)) && !(f0 & bit(a.r))) invariant = false;
    for (const Arrow& a : families)
      if ((f0 & bit(a.s)) && !(f0 & bit(a.r))) invariant = false;
    for (unsigned v = 0; v < n && invariant; ++v) {
      if (!(f0 & bit(v))) continue;
      const bool regular_full = receives_edge_from(v, full) && !receives_family_from(v, full);
      if (regular_full && !receives_edge_from(v, f0)) invariant = false;
    }
    if (!invariant) continue;
    for (unsigned z = 0; z <= full; ++z) {
      if ((z & f0) != z) continue;
      bool ok = true;
      for (unsigned v = 0; v < n && ok; ++v) {
        const bool in_f0 = f0 & bit(v);
        const bool in_z = z & bit(v);
        const bool f_sg = in_f0 && singular_in(v, f0);
        const bool e_sg = singular_in(v, full);
        if (f_sg && !in_z) ok = false;          // F_sg <= Z
        if (in_z && !(e_sg && in_f0)) ok = false;  // Z <= E_sg n F0
      }
      if (ok) out.push_back({f0, z});
    }
    if (f0 == full) break;  // avoid wrap when n == 32
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline unsigned mask_of(const std::vector<std::string>& sorted_vs,
                        const std::set<std::string>& subset) {
  unsigned m = 0;
  for (std::size_t i = 0; i < sorted_vs.size(); ++i)
    if (subset.count(sorted_vs[i])) m |= 1u << i;
  return m;
}

// ---- integer-matrix oracles ----------------------------------------------------

// d_k = gcd of all k x k minors, with early exit at gcd 1.
inline Int minors_gcd(const IntMatrix& m, std::size_t k) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  if (k > rows || k > cols) return 0;
  std::vector<std::size_t> ri(k), ci(k);
  Int g = 0;
  auto combo = [&](auto&& self, std::vector<std::size_t>& idx, std::size_t limit,
                   std::size_t pos, auto&& inner) -> bool {
    if (pos == k) return inner();
    for (std::size_t v = pos ? idx[pos - 1] + 1 : 0; v + (k - 1 - pos) < limit; ++v) {
      idx[pos] = v;
      if (self(self, idx, limit, pos + 1, inner)) return true;
    }
    return false;
  };
  auto over_cols = [&]() {
    return combo(combo, ci, cols, 0, [&]() {
      IntMatrix sub(k, std::vector<Int>(k));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[ri[i]][ci[j]];
      g = boost::multiprecision::gcd(g, bareiss_det(sub));
      return g == 1;
    });
  };
  combo(combo, ri, rows, 0, over_cols);
  return g < 0 ? Int(-g) : g;
}

inline IntMatrix random_int_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                   long long span = 6) {
  IntMatrix m(rows, std::vector<Int>(cols));
  for (auto& row : m)
    for (auto& v : row) v = rng.integer(-span, span);
  return m;
}

// ---- winding oracle -------------------------------------------------------------

// Net winding of a sampled loop in C* around 0 (sum of principal turn angles).
inline long long winding_number(const std::vector<std::complex<double>>& loop) {
  double total = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto a = loop[i], b = loop[(i + 1) % loop.size()];
    total += std::arg(b / a);
  }
  return std::llround(total / (2 * 3.14159265358979323846));
}

// ---- path-count oracle -----------------------------------------------------------

inline long long path_count_by_matrix_power(const DiscreteGraph& g, int n) {
  const std::size_t nv = g.vertices.size();
  auto index = [&](const std::string& v) {
    return static_cast<std::size_t>(
        std::find(g.vertices.begin(), g.vertices.end(), v) - g.vertices.begin());
  };
  // M[i][j] = number of edges with range v_i and source v_j; composable
  // tuples correspond to index chains, so the total is the sum of M^n.
  std::vector<std::vector<long long>> m(nv, std::vector<long long>(nv, 0));
  for (const Edge& e : g.edges) ++m[index(e.rng)][index(e.src)];
  std::vector<std::vector<long long>> p = m;
  for (int step = 1; step < n; ++step) {
    std::vector<std::vector<long long>> q(nv, std::vector<long long>(nv, 0));
    for (std::size_t i = 0; i < nv; ++i)
      for (std::size_t k = 0; k < nv; ++k)
        for (std::size_t j = 0; j < nv; ++j) q[i][j] += p[i][k] * m[k][j];
    p = std::move(q);
  }
  long long total = 0;
  for (const auto& row : p) total = std::accumulate(row.begin(), row.end(), total);
  return total;
}

// ---- random correspondence models -------------------------------------------------

// Random model with source-section charts and a coboundary-generated twist
// (every unit cocycle at this tier is one).  quarter_only keeps the phases in
// {1, i, -1, -i} so the model is usable in exact arithmetic.
template <class K>
CorrespondenceModel<K> random_model(Rng& rng, int max_v = 6, int max_e = 10, int max_charts = 4,
                                    bool quarter_only = ScalarTraits<K>::exact) {
  CorrespondenceModel<K> m;
  const int nc = static_cast<int>(rng.integer(1, max_charts));
  m.graph = random_graph(rng, max_v, max_e, false, nc);
  for (int c = 0; c < nc; ++c) m.charts.push_back("c" + std::to_string(c));
  for (const auto& c : m.charts) m.cover[c] = {};

  // Home charts: within each source fiber, distinct charts per edge.
  std::map<std::string, std::vector<std::string>> fibers;
  for (const Edge& e : m.graph.edges) fibers[e.src].push_back(e.id);
  std::map<std::string, std::set<std::string>> used_sources;  // chart -> sources
  for (auto& [src, edge_ids] : fibers) {
    std::vector<std::string> order = m.charts;
    rng.shuffle(order);
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
      m.cover[order[i]].insert(edge_ids[i]);
      used_sources[order[i]].insert(src);
    }
  }
  // Optional extra memberships where the section property allows them.
  for (const Edge& e : m.graph.edges)
    for (const auto& c : m.charts) {
      if (m.cover[c].count(e.id) || used_sources[c].count(e.src)) continue;
      if (rng.chance(0.4)) {
        m.cover[c].insert(e.id);
        used_sources[c].insert(e.src);
      }
    }

  // Twist as a coboundary of random chart-local units.
  std::map<std::string, std::map<std::string, K>> u;
  for (const auto& [c, edges] : m.cover)
    for (const auto& e : edges) {
      const Rat turns = quarter_only ? Rat(Int(rng.integer(0, 3)), Int(4))
                                     : Rat(Int(rng.integer(0, 11)), Int(12));
      u[c][e] = unit_phase<K>(turns);
    }
  for (std::size_t i = 0; i < m.charts.size(); ++i)
    for (std::size_t j = i + 1; j < m.charts.size(); ++j) {
      const auto &a = m.charts[i], &b = m.charts[j];
      std::map<std::string, K> vals;
      for (const auto& e : m.cover[a]) {
        if (!m.cover[b].count(e)) continue;
        const K v = u[a][e] * scalar_conj(u[b][e]);
        if (v != K(1)) vals.emplace(e, v);
      }
      if (!vals.empty()) m.twist[{a, b}] = std::move(vals);
    }
  return m;
}

// ---- random circle-valued cocycles over star covers ---------------------------------

inline CechCocycle random_coboundary(const SimplicialSpace& x, Rng& rng) {
  std::map<long long, Rat> b;
  for (long long v : x.vertices) b[v] = rng.rational();
  return coboundary_cocycle(x, b);
}

// Coboundary + integer 1-cochain + coboundary defects: always class 0.
inline CechCocycle random_class_zero(const SimplicialSpace& x, Rng& rng) {
  CechCocycle s = random_coboundary(x, rng);
  std::map<ChartPair, Int> j;
  for (const auto& e : x.edges) {
    const long long m = rng.integer(-2, 2);
    if (m != 0) s.theta[{e[0], e[1]}] += Rat(m);
    j[{e[0], e[1]}] = rng.integer(-2, 2);
  }
  for (const auto& t : x.triangles) {
    const Int d = j[{t[1], t[2]}] - j[{t[0], t[2]}] + j[{t[0], t[1]}];
    if (d != 0) s.defects[{t[0], t[1], t[2]}] = d;
  }
  return s;
}

}  // namespace tga::test
