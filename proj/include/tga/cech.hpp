#pragma once

#include "tga/abelian.hpp"
#include "tga/simplicial.hpp"
#include "tga/smith.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tga {

// Open cover models.  A star cover of a simplicial space is a good cover whose
// nerve is the space itself (charts = open vertex stars; k-fold overlaps
// correspond to (k-1)-simplices).  A band cover is the two-disk cover of a
// closed surface with one annular overlap; it is consumed by the bundle
// module only.
struct CoverModel {
  enum class Kind { Star, Band };
  Kind kind = Kind::Star;
  SimplicialSpace space;  // star covers
  int band_genus = 0;     // band covers
};

inline CoverModel star_cover(SimplicialSpace space) {
  return CoverModel{CoverModel::Kind::Star, std::move(space), 0};
}

inline CoverModel band_cover(int genus) {
  if (genus < 0) throw PreconditionError("band_cover: genus must be >= 0");
  return CoverModel{CoverModel::Kind::Band, SimplicialSpace{}, genus};
}

using ChartPair = std::pair<long long, long long>;
using ChartTriple = std::array<long long, 3>;

// Circle-valued Cech 1-cocycle over a star cover, in finite form:
//   s_{ab} = exp(2*pi*i*(theta_{ab} + lambda_{ab}))
// with theta_{ab} constant rational log-lifts and lambda_{ab} continuous
// phases recorded only through their integer triple defects.  Constant lifts
// alone can never reach a nonzero class on a space with torsion-free H^2
// (delta-theta pairs to zero against every 2-cycle), so the defects carry the
// winding content; they default to zero.  `winding` is reserved for the
// annular overlap of band covers.
struct CechCocycle {
  std::map<ChartPair, Rat> theta;
  std::map<ChartPair, long long> winding;
  std::map<ChartTriple, Int> defects;

  Rat theta_at(long long a, long long b) const {
    if (a == b) return Rat(0);
    const bool flip = a > b;
    const auto it = theta.find(flip ? ChartPair{b, a} : ChartPair{a, b});
    if (it == theta.end()) return Rat(0);
    return flip ? Rat(-it->second) : it->second;
  }

  Int defect_at(const ChartTriple& t) const {
    const auto it = defects.find(t);
    return it == defects.end() ? Int(0) : it->second;
  }
};

namespace detail {

inline void require_star(const CoverModel& cover, const char* op) {
  if (cover.kind != CoverModel::Kind::Star)
    throw PreconditionError(std::string(op) +
                            ": cover has annular overlaps; band data belongs to the bundle module");
}

inline void validate_cocycle_keys(const CoverModel& cover, const CechCocycle& s) {
  const SimplicialSpace& x = cover.space;
  for (const auto& [pair, value] : s.theta) {
    (void)value;
    if (pair.first >= pair.second)
      throw SchemaError("cocycle: pair key must be ascending");
    try {
      x.edge_index({pair.first, pair.second});
    } catch (const PreconditionError&) {
      throw SchemaError("cocycle: (" + std::to_string(pair.first) + "," +
                        std::to_string(pair.second) + ") is not a double overlap of the cover");
    }
  }
  if (!s.winding.empty())
    throw SchemaError("cocycle: winding data on a good cover (no annular overlaps)");
  for (const auto& [triple, value] : s.defects) {
    (void)value;
    try {
      x.triangle_index(triple);
    } catch (const PreconditionError&) {
      throw SchemaError("cocycle: (" + std::to_string(triple[0]) + "," +
                        std::to_string(triple[1]) + "," + std::to_string(triple[2]) +
                        ") is not a triple overlap of the cover");
    }
  }
}

}  // namespace detail

struct CocycleViolation {
  ChartTriple triple;
  Rat defect;  // the non-integral value of theta_ab + theta_bc - theta_ac
};

struct CocycleReport {
  bool ok = true;
  std::vector<CocycleViolation> violations;
};

inline CocycleReport check_cocycle(const CoverModel& cover, const CechCocycle& s) {
  detail::require_star(cover, "check_cocycle");
  detail::validate_cocycle_keys(cover, s);
  CocycleReport report;
  for (const auto& t : cover.space.triangles) {
    const Rat d = s.theta_at(t[0], t[1]) + s.theta_at(t[1], t[2]) - s.theta_at(t[0], t[2]);
    if (!is_integer(d)) {
      report.ok = false;
      report.violations.push_back({t, d});
    }
  }
  return report;
}

// n_{abc} = (theta_ab + theta_bc - theta_ac) + defect_abc per ascending triple.
inline std::vector<Int> integer_class(const CoverModel& cover, const CechCocycle& s) {
  detail::require_star(cover, "integer_class");
  const CocycleReport report = check_cocycle(cover, s);
  if (!report.ok)
    throw PreconditionError("integer_class: not a cocycle (fractional triple defect)");
  std::vector<Int> n;
  n.reserve(cover.space.triangles.size());
  for (const auto& t : cover.space.triangles) {
    const Rat d = s.theta_at(t[0], t[1]) + s.theta_at(t[1], t[2]) - s.theta_at(t[0], t[2]);
    n.push_back(rat_num(d) / rat_den(d) + s.defect_at(t));
  }
  return n;
}

// Coordinates of [S] in H^2(X, Z).  On a closed oriented surface the free
// coordinate is the pairing with the fundamental class (canonical, and for
// the boundary of the 3-simplex the sign follows the outward orientation);
// otherwise coordinates come from the Smith basis of coker(delta1), which the
// deterministic SNF makes reproducible.
struct CocycleClass {
  std::vector<Int> free;
  std::vector<Int> torsion;  // reduced mod the invariant factors > 1
  AbelianGroup group;

  bool is_zero() const {
    for (const Int& v : free)
      if (v != 0) return false;
    for (const Int& v : torsion)
      if (v != 0) return false;
    return true;
  }
};

inline CocycleClass classify_cocycle(const CoverModel& cover, const CechCocycle& s) {
  detail::require_star(cover, "classify_cocycle");
  const std::vector<Int> n = integer_class(cover, s);
  const SimplicialSpace& x = cover.space;
  CocycleClass out;
  out.group = cohomology_h2(x);
  if (x.triangles.empty()) return out;

  if (const auto eps = fundamental_class(x); eps && out.group == AbelianGroup{1, {}}) {
    Int deg = 0;
    for (std::size_t i = 0; i < n.size(); ++i) deg += Int((*eps)[i]) * n[i];
    out.free.push_back(deg);
    return out;
  }

  const SmithForm snf = smith_normal_form(coboundary1(x));
  const std::vector<Int> y = mat_vec(snf.U, n);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i < snf.rank) {
      const Int d = snf.D[i][i];
      if (d > 1) {
        Int r = y[i] % d;
        if (r < 0) r += d;
        out.torsion.push_back(r);
      }
    } else {
      out.free.push_back(y[i]);
    }
  }
  return out;
}

// Sheaf-level trivialization.  succeeds iff the class vanishes; on success
//   theta_{ab} = (b_a - b_b) - m_{ab} + period_{ab}
// where m is an integer 1-cochain absorbing the defects and `periods`
// (supported off a spanning forest of the nerve) is the part only non-constant
// chart phases can realize.  periods = 0 iff constant b alone trivializes.
struct TrivializeResult {
  bool success = false;
  std::map<long long, Rat> b;
  std::map<ChartPair, Int> integer_correction;
  std::map<ChartPair, Rat> periods;
  CocycleClass certificate;  // set on failure
};

inline TrivializeResult trivialize(const CoverModel& cover, const CechCocycle& s) {
  detail::require_star(cover, "trivialize");
  const std::vector<Int> n = integer_class(cover, s);
  const SimplicialSpace& x = cover.space;
  TrivializeResult out;

  // Integer correction: delta(m) = -n exactly.
  std::map<ChartPair, Int> m;
  if (!x.triangles.empty()) {
    std::vector<Int> rhs;
    rhs.reserve(n.size());
    for (const Int& v : n) rhs.push_back(-v);
    const auto sol = solve_integer(coboundary1(x), rhs);
    if (!sol) {
      out.certificate = classify_cocycle(cover, s);
      return out;
    }
    for (std::size_t j = 0; j < x.edges.size(); ++j)
      if ((*sol)[j] != 0) m[{x.edges[j][0], x.edges[j][1]}] = (*sol)[j];
  }
  auto corrected = [&](long long a, long long b) -> Rat {
    Rat v = s.theta_at(a, b);
    const bool flip = a > b;
    const auto it = m.find(flip ? ChartPair{b, a} : ChartPair{a, b});
    if (it != m.end()) v += flip ? Rat(-it->second) : Rat(it->second);
    return v;
  };

  // Propagate b over a spanning forest; leftover periods sit on co-tree edges.
  std::map<long long, std::vector<long long>> adjacent;
  for (const auto& e : x.edges) {
    adjacent[e[0]].push_back(e[1]);
    adjacent[e[1]].push_back(e[0]);
  }
  std::set<ChartPair> tree;
  for (long long root : x.vertices) {
    if (out.b.count(root)) continue;
    out.b[root] = Rat(0);
    std::vector<long long> stack{root};
    while (!stack.empty()) {
      const long long u = stack.back();
      stack.pop_back();
      for (long long w : adjacent[u]) {
        if (out.b.count(w)) continue;
        // theta'_{uw} = b_u - b_w
        out.b[w] = out.b.at(u) - corrected(u, w);
        tree.insert({std::min(u, w), std::max(u, w)});
        stack.push_back(w);
      }
    }
  }
  for (const auto& e : x.edges) {
    if (tree.count({e[0], e[1]})) continue;
    const Rat period = corrected(e[0], e[1]) - (out.b.at(e[0]) - out.b.at(e[1]));
    if (period != 0) out.periods[{e[0], e[1]}] = period;
  }
  out.integer_correction = std::move(m);
  out.success = true;
  return out;
}

// theta = delta b (theta_{ab} = b_a - b_b), handy for building coboundaries.
inline CechCocycle coboundary_cocycle(const SimplicialSpace& x,
                                      const std::map<long long, Rat>& b) {
  CechCocycle s;
  auto value = [&](long long v) {
    const auto it = b.find(v);
    return it == b.end() ? Rat(0) : it->second;
  };
  for (const auto& e : x.edges) {
    const Rat t = value(e[0]) - value(e[1]);
    if (t != 0) s.theta[{e[0], e[1]}] = t;
  }
  return s;
}

}  // namespace tga
