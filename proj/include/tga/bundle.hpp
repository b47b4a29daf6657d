#pragma once

#include "tga/abelian.hpp"
#include "tga/cech.hpp"

#include <string>
#include <utility>
#include <vector>

namespace tga {

// Principal circle bundle presented by clutching data.  Over a closed
// oriented surface the two-disk band cover has one annular overlap and the
// transition's winding number there is the Euler number (orientation fixed so
// the Hopf fibration over the genus-0 base has Euler number +1: equator taken
// as the boundary of the upper disk, counterclockwise).  Over a discrete base
// the cocycle is trivial on overlaps and the total space is a disjoint union
// of circles.
struct CircleBundle {
  enum class Base { Surface, Discrete };
  Base base = Base::Surface;
  int genus = 0;      // surface
  int size = 1;       // discrete: number of points
  long long euler = 0;  // surface: clutching winding
  bool operator==(const CircleBundle&) const = default;
};

inline CircleBundle build_surface_bundle(int genus, long long winding) {
  if (genus < 0) throw PreconditionError("build_bundle: genus must be >= 0");
  return CircleBundle{CircleBundle::Base::Surface, genus, 1, winding};
}

inline CircleBundle build_discrete_bundle(int size) {
  if (size < 1) throw PreconditionError("build_bundle: discrete base needs size >= 1");
  return CircleBundle{CircleBundle::Base::Discrete, 0, size, 0};
}

inline long long euler_number(const CircleBundle& b) {
  if (b.base != CircleBundle::Base::Surface)
    throw PreconditionError("euler_number: only defined over a surface base");
  return b.euler;
}

inline int component_count(const CircleBundle& b) {
  return b.base == CircleBundle::Base::Surface ? 1 : b.size;
}

// Words are products of (generator, exponent) letters.
struct GroupPresentation {
  using Word = std::vector<std::pair<std::string, int>>;
  std::vector<std::string> generators;
  std::vector<Word> relators;

  std::string to_string() const {
    std::string s = "<";
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (i) s += ", ";
      s += generators[i];
    }
    s += " |";
    for (std::size_t i = 0; i < relators.size(); ++i) {
      s += i ? ", " : " ";
      if (relators[i].empty()) s += "1";
      for (std::size_t j = 0; j < relators[i].size(); ++j) {
        if (j) s += " ";
        s += relators[i][j].first;
        if (relators[i][j].second != 1) s += "^" + std::to_string(relators[i][j].second);
      }
    }
    s += " >";
    return s;
  }
};

// pi_1 of the total space.  Surface base, genus g, Euler number e:
//   < a_1, b_1, ..., a_g, b_g, f | [a_i, f], [b_i, f], prod [a_i, b_i] f^-e >
// (central fiber class).  Discrete base: free of rank 1 per component.
inline GroupPresentation pi1_presentation(const CircleBundle& b) {
  GroupPresentation p;
  if (b.base == CircleBundle::Base::Discrete) {
    for (int i = 1; i <= b.size; ++i) p.generators.push_back("f" + std::to_string(i));
    return p;
  }
  std::vector<std::pair<std::string, std::string>> handles;
  for (int i = 1; i <= b.genus; ++i)
    handles.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});
  for (const auto& [a, bb] : handles) {
    p.generators.push_back(a);
    p.generators.push_back(bb);
  }
  p.generators.push_back("f");
  auto commutator = [](const std::string& x, const std::string& y) {
    return GroupPresentation::Word{{x, 1}, {y, 1}, {x, -1}, {y, -1}};
  };
  for (const auto& [a, bb] : handles) {
    p.relators.push_back(commutator(a, "f"));
    p.relators.push_back(commutator(bb, "f"));
  }
  GroupPresentation::Word surface;
  for (const auto& [a, bb] : handles) {
    const auto c = commutator(a, bb);
    surface.insert(surface.end(), c.begin(), c.end());
  }
  if (b.euler != 0) surface.push_back({"f", static_cast<int>(-b.euler)});
  if (!surface.empty()) p.relators.push_back(surface);
  return p;
}

inline AbelianGroup abelianization(const GroupPresentation& p) {
  // columns = relator exponent sums
  IntMatrix m = zero_matrix(p.generators.size(), p.relators.size());
  std::map<std::string, std::size_t> gidx;
  for (std::size_t i = 0; i < p.generators.size(); ++i) gidx[p.generators[i]] = i;
  for (std::size_t r = 0; r < p.relators.size(); ++r)
    for (const auto& [gen, exp] : p.relators[r]) {
      const auto it = gidx.find(gen);
      if (it == gidx.end()) throw PreconditionError("relator uses unknown generator " + gen);
      m[it->second][r] += exp;
    }
  return cokernel(m, p.generators.size());
}

}  // namespace tga
