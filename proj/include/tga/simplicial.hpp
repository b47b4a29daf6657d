#pragma once

#include "tga/abelian.hpp"
#include "tga/smith.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tga {

// Finite simplicial complex of dimension <= 2.  Simplices are stored with
// ascending vertex ids (the orientation convention) and sorted lists.
struct SimplicialSpace {
  std::vector<long long> vertices;
  std::vector<std::array<long long, 2>> edges;
  std::vector<std::array<long long, 3>> triangles;

  bool operator==(const SimplicialSpace&) const = default;

  std::size_t edge_index(const std::array<long long, 2>& e) const {
    const auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) throw PreconditionError("unknown 1-simplex");
    return static_cast<std::size_t>(it - edges.begin());
  }

  std::size_t triangle_index(const std::array<long long, 3>& t) const {
    const auto it = std::lower_bound(triangles.begin(), triangles.end(), t);
    if (it == triangles.end() || *it != t) throw PreconditionError("unknown 2-simplex");
    return static_cast<std::size_t>(it - triangles.begin());
  }
};

inline SimplicialSpace make_space(std::vector<long long> vertices,
                                  std::vector<std::array<long long, 2>> edges,
                                  std::vector<std::array<long long, 3>> triangles) {
  std::vector<std::string> problems;
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    problems.push_back("duplicate vertex id");
  std::set<long long> vset(vertices.begin(), vertices.end());
  for (auto& e : edges) {
    std::sort(e.begin(), e.end());
    if (e[0] == e[1]) problems.push_back("degenerate 1-simplex");
    for (long long v : e)
      if (!vset.count(v)) problems.push_back("1-simplex uses unknown vertex " + std::to_string(v));
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    problems.push_back("duplicate 1-simplex");
  std::set<std::array<long long, 2>> eset(edges.begin(), edges.end());
  for (auto& t : triangles) {
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) problems.push_back("degenerate 2-simplex");
    const std::array<std::array<long long, 2>, 3> faces = {
        {{t[0], t[1]}, {t[0], t[2]}, {t[1], t[2]}}};
    for (const auto& f : faces)
      if (!eset.count(f))
        problems.push_back("2-simplex missing face {" + std::to_string(f[0]) + "," +
                           std::to_string(f[1]) + "}");
  }
  std::sort(triangles.begin(), triangles.end());
  if (std::adjacent_find(triangles.begin(), triangles.end()) != triangles.end())
    problems.push_back("duplicate 2-simplex");
  if (!problems.empty()) {
    std::string msg = "invalid simplicial space:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw SchemaError(msg);
  }
  return SimplicialSpace{std::move(vertices), std::move(edges), std::move(triangles)};
}

// delta0: rows = edges, cols = vertices; (delta b)_{ab} = b_b - b_a.
inline IntMatrix coboundary0(const SimplicialSpace& x) {
  IntMatrix m = zero_matrix(x.edges.size(), x.vertices.size());
  std::map<long long, std::size_t> vidx;
  for (std::size_t i = 0; i < x.vertices.size(); ++i) vidx[x.vertices[i]] = i;
  for (std::size_t r = 0; r < x.edges.size(); ++r) {
    m[r][vidx.at(x.edges[r][0])] = -1;
    m[r][vidx.at(x.edges[r][1])] = 1;
  }
  return m;
}

// delta1: rows = triangles, cols = edges; (delta t)_{abc} = t_{bc} - t_{ac} + t_{ab}.
inline IntMatrix coboundary1(const SimplicialSpace& x) {
  IntMatrix m = zero_matrix(x.triangles.size(), x.edges.size());
  for (std::size_t r = 0; r < x.triangles.size(); ++r) {
    const auto& t = x.triangles[r];
    m[r][x.edge_index({t[1], t[2]})] += 1;
    m[r][x.edge_index({t[0], t[2]})] -= 1;
    m[r][x.edge_index({t[0], t[1]})] += 1;
  }
  return m;
}

// H^2(X, Z).  No 3-simplices at this tier, so H^2 = coker(delta1).
inline AbelianGroup cohomology_h2(const SimplicialSpace& x) {
  if (x.triangles.empty()) return AbelianGroup{};
  return cokernel(coboundary1(x), x.triangles.size());
}

// Coherent orientation signs for a closed surface (every edge in exactly two
// triangles), normalized so the lexicographically last triangle is +1; for the
// boundary of the 3-simplex this is the outward orientation.  nullopt when the
// complex is not a closed orientable surface.
inline std::optional<std::vector<int>> fundamental_class(const SimplicialSpace& x) {
  if (x.triangles.empty()) return std::nullopt;
  // coefficient of face #f in the boundary of an ascending triangle:
  // faces {t1,t2}, {t0,t2}, {t0,t1} -> +, -, +
  auto coeff = [](std::size_t face) { return face == 1 ? -1 : 1; };
  std::map<std::size_t, std::vector<std::pair<std::size_t, int>>> edge_uses;
  for (std::size_t r = 0; r < x.triangles.size(); ++r) {
    const auto& t = x.triangles[r];
    const std::array<std::array<long long, 2>, 3> faces = {
        {{t[1], t[2]}, {t[0], t[2]}, {t[0], t[1]}}};
    for (std::size_t f = 0; f < 3; ++f)
      edge_uses[x.edge_index(faces[f])].push_back({r, coeff(f)});
  }
  for (std::size_t e = 0; e < x.edges.size(); ++e)
    if (edge_uses[e].size() != 2) return std::nullopt;

  std::vector<int> eps(x.triangles.size(), 0);
  std::vector<std::size_t> stack;
  eps[x.triangles.size() - 1] = 1;  // triangles are sorted; seed the last one
  stack.push_back(x.triangles.size() - 1);
  while (!stack.empty()) {
    const std::size_t r = stack.back();
    stack.pop_back();
    const auto& t = x.triangles[r];
    const std::array<std::array<long long, 2>, 3> faces = {
        {{t[1], t[2]}, {t[0], t[2]}, {t[0], t[1]}}};
    for (std::size_t f = 0; f < 3; ++f) {
      const auto& uses = edge_uses[x.edge_index(faces[f])];
      for (const auto& [other, c_other] : uses) {
        if (other == r) continue;
        const int forced = -eps[r] * coeff(f) * c_other;
        if (eps[other] == 0) {
          eps[other] = forced;
          stack.push_back(other);
        } else if (eps[other] != forced) {
          return std::nullopt;  // non-orientable
        }
      }
    }
  }
  for (int e : eps)
    if (e == 0) return std::nullopt;  // disconnected surface: no single class
  return eps;
}

inline SimplicialSpace circle_complex() {
  return make_space({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}}, {});
}

inline SimplicialSpace sphere_complex() {
  return make_space({0, 1, 2, 3}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
                    {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

// 3x3 grid torus: 9 vertices, 27 edges, 18 triangles.
inline SimplicialSpace torus_complex() {
  auto v = [](int i, int j) { return static_cast<long long>(3 * ((i + 3) % 3) + (j + 3) % 3); };
  std::vector<std::array<long long, 2>> edges;
  std::vector<std::array<long long, 3>> tris;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      edges.push_back({v(i, j), v(i + 1, j)});
      edges.push_back({v(i, j), v(i, j + 1)});
      edges.push_back({v(i + 1, j), v(i, j + 1)});
      tris.push_back({v(i, j), v(i + 1, j), v(i, j + 1)});
      tris.push_back({v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)});
    }
  return make_space({0, 1, 2, 3, 4, 5, 6, 7, 8}, std::move(edges), std::move(tris));
}

}  // namespace tga
