#pragma once

#include "tga/smith.hpp"

#include <string>
#include <vector>

namespace tga {

// Finitely generated abelian group, invariant-factor form.
struct AbelianGroup {
  std::size_t rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next

  bool operator==(const AbelianGroup&) const = default;

  bool is_trivial() const { return rank == 0 && torsion.empty(); }

  std::string to_string() const {
    if (is_trivial()) return "trivial";
    std::string s;
    auto append = [&](const std::string& part) {
      if (!s.empty()) s += " x ";
      s += part;
    };
    if (rank == 1) append("Z");
    if (rank > 1) append("Z^" + std::to_string(rank));
    for (const Int& d : torsion) append("Z/" + d.str());
    return s;
  }
};

// Z^g modulo the subgroup generated by the columns of M (M has g rows).
inline AbelianGroup cokernel(const IntMatrix& m, std::size_t generators) {
  if (!m.empty() && m.size() != generators)
    throw PreconditionError("cokernel: row count must equal generator count");
  AbelianGroup g;
  if (m.empty() || m[0].empty()) {
    g.rank = generators;
    return g;
  }
  const SmithForm snf = smith_normal_form(m);
  g.rank = generators - snf.rank;
  for (const Int& d : snf.diagonal)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

}  // namespace tga
