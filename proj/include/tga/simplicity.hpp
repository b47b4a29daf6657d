#pragma once

#include "tga/graph.hpp"
#include "tga/ideals.hpp"

#include <set>
#include <string>
#include <vector>

namespace tga {

// Minimality: the only invariant vertex sets are {} and E0.
inline bool is_minimal(const DiscreteGraph& g, std::size_t max_vertices = 20) {
  validate_graph(g);
  if (g.vertices.empty()) throw PreconditionError("is_minimal: empty vertex set");
  const auto sets = invariant_sets(g, max_vertices);
  return sets.size() == 2;  // {} and E0 are always invariant
}

// The forward orbit of a vertex set: closure under following edges (and
// infinite families) from source to range.
inline std::set<std::string> forward_orbit(const DiscreteGraph& g,
                                           const std::set<std::string>& start) {
  std::set<std::string> orbit = start;
  std::vector<std::string> queue(start.begin(), start.end());
  while (!queue.empty()) {
    const std::string v = queue.back();
    queue.pop_back();
    auto push = [&](const std::string& w) {
      if (orbit.insert(w).second) queue.push_back(w);
    };
    for (const Edge& e : g.edges)
      if (e.src == v) push(e.rng);
    for (const auto& f : g.infinite_families)
      if (f.src == v) push(f.rng);
  }
  return orbit;
}

// Whether some cycle without entrances reaches every vertex along forward
// orbits.  On a minimal graph this is exactly the negation of topological
// freeness, which keeps the two characterisations of simplicity aligned.
inline bool is_generated_by_cycle(const DiscreteGraph& g) {
  for (const Cycle& c : cycles_without_entrances(g)) {
    std::set<std::string> base(c.base_points.begin(), c.base_points.end());
    if (forward_orbit(g, base).size() == g.vertices.size()) return true;
  }
  return false;
}

struct SimplicityReport {
  bool simple = false;
  bool minimal = false;
  bool topologically_free = false;
  bool generated_by_cycle = false;
  std::size_t admissible_pair_count = 0;
  std::vector<Cycle> entrance_free_cycles;  // witnesses against freeness
  std::string twist_note;
};

inline SimplicityReport simplicity_verdict(const DiscreteGraph& g,
                                           std::size_t max_vertices = 20) {
  validate_graph(g);
  if (g.vertices.empty()) throw PreconditionError("simplicity_verdict: empty vertex set");
  SimplicityReport rep;
  rep.minimal = is_minimal(g, max_vertices);
  rep.topologically_free = is_topologically_free(g);
  rep.generated_by_cycle = is_generated_by_cycle(g);
  rep.entrance_free_cycles = cycles_without_entrances(g);
  rep.admissible_pair_count = admissible_pairs(g, max_vertices).size();
  rep.simple = rep.minimal && rep.topologically_free;
  const bool alt = rep.minimal && !rep.generated_by_cycle;
  if (rep.simple != alt)
    throw Error("simplicity_verdict: freeness and cycle characterisations disagree");
  rep.twist_note =
      "the verdict depends only on the graph; unitary twisting data never changes it";
  return rep;
}

// Twisting data is accepted for interface parity and ignored: simplicity of
// the twisted algebra never depends on the unitary cocycle.
template <class Twist>
SimplicityReport simplicity_verdict(const DiscreteGraph& g, const Twist&,
                                    std::size_t max_vertices = 20) {
  return simplicity_verdict(g, max_vertices);
}

}  // namespace tga
