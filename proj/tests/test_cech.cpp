#include "support.hpp"
#include "tga/cech.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tga;
using tga::test::Rng;

namespace {

// Same non-orientable test surface as in the simplicial tests (H^2 = Z/2).
SimplicialSpace projective_plane() {
  std::vector<std::array<long long, 2>> edges;
  for (long long a = 1; a <= 6; ++a)
    for (long long b = a + 1; b <= 6; ++b) edges.push_back({a, b});
  return make_space({1, 2, 3, 4, 5, 6}, edges,
                    {{1, 2, 4},
                     {1, 2, 5},
                     {1, 3, 4},
                     {1, 3, 6},
                     {1, 5, 6},
                     {2, 3, 5},
                     {2, 3, 6},
                     {2, 4, 6},
                     {3, 4, 5},
                     {4, 5, 6}});
}

CechCocycle single_defect(const SimplicialSpace& x, std::size_t triangle, long long value) {
  CechCocycle s;
  const auto& t = x.triangles[triangle];
  s.defects[{t[0], t[1], t[2]}] = value;
  return s;
}

// Reconstruction identity produced by a successful trivialization:
//   theta_{ab} = (b_a - b_b) - m_{ab} + period_{ab}  on every overlap.
void require_reconstruction(const SimplicialSpace& x, const CechCocycle& s,
                            const TrivializeResult& r) {
  for (const auto& e : x.edges) {
    const Rat theta = s.theta_at(e[0], e[1]);
    Rat m(0), period(0);
    if (const auto it = r.integer_correction.find({e[0], e[1]});
        it != r.integer_correction.end())
      m = Rat(it->second);
    if (const auto it = r.periods.find({e[0], e[1]}); it != r.periods.end()) period = it->second;
    REQUIRE(theta == r.b.at(e[0]) - r.b.at(e[1]) - m + period);
  }
}

}  // namespace

TEST_CASE("cocycle data access") {
  CechCocycle s;
  s.theta[{0, 1}] = Rat(1, 3);
  REQUIRE(s.theta_at(0, 1) == Rat(1, 3));
  REQUIRE(s.theta_at(1, 0) == Rat(-1, 3));  // antisymmetric
  REQUIRE(s.theta_at(0, 0) == 0);
  REQUIRE(s.theta_at(0, 2) == 0);  // sparse: missing means zero lift
  REQUIRE(s.defect_at({0, 1, 2}) == 0);
}

TEST_CASE("key validation") {
  const CoverModel cover = star_cover(sphere_complex());
  SECTION("descending pair key") {
    CechCocycle s;
    s.theta[{1, 0}] = Rat(1, 2);
    REQUIRE_THROWS_AS(check_cocycle(cover, s), SchemaError);
  }
  SECTION("pair that is not an overlap") {
    CechCocycle s;
    s.theta[{0, 7}] = Rat(1, 2);
    REQUIRE_THROWS_AS(check_cocycle(cover, s), SchemaError);
  }
  SECTION("defect key that is not a triple overlap") {
    CechCocycle s;
    s.defects[{0, 1, 7}] = 1;
    REQUIRE_THROWS_AS(check_cocycle(cover, s), SchemaError);
  }
  SECTION("winding data belongs to annular overlaps only") {
    CechCocycle s;
    s.winding[{0, 1}] = 1;
    REQUIRE_THROWS_AS(check_cocycle(cover, s), SchemaError);
  }
  SECTION("star-cover operations reject band covers") {
    const CoverModel band = band_cover(0);
    REQUIRE_THROWS_AS(check_cocycle(band, CechCocycle{}), PreconditionError);
    REQUIRE_THROWS_AS(classify_cocycle(band, CechCocycle{}), PreconditionError);
    REQUIRE_THROWS_AS(trivialize(band, CechCocycle{}), PreconditionError);
    REQUIRE_THROWS_AS(band_cover(-1), PreconditionError);
  }
}

TEST_CASE("cocycle condition") {
  const SimplicialSpace x = sphere_complex();
  const CoverModel cover = star_cover(x);
  Rng rng(81);

  SECTION("coboundaries satisfy it") {
    for (int trial = 0; trial < 20; ++trial)
      REQUIRE(check_cocycle(cover, tga::test::random_coboundary(x, rng)).ok);
  }
  SECTION("a fractional triple sum is reported with its exact value") {
    CechCocycle s = tga::test::random_coboundary(x, rng);
    s.theta[{2, 3}] += Rat(1, 3);  // breaks triples 023 and 123
    const CocycleReport report = check_cocycle(cover, s);
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.violations.size() == 2);
    for (const auto& v : report.violations) REQUIRE(!is_integer(v.defect));
    REQUIRE_THROWS_AS(integer_class(cover, s), PreconditionError);
  }
  SECTION("integer shifts keep it") {
    CechCocycle s = tga::test::random_coboundary(x, rng);
    s.theta[{0, 1}] += 2;
    s.theta[{1, 3}] -= 1;
    REQUIRE(check_cocycle(cover, s).ok);
  }
}

TEST_CASE("integer class is the triple-sum plus defects") {
  const SimplicialSpace x = sphere_complex();
  const CoverModel cover = star_cover(x);
  Rng rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    CechCocycle s = tga::test::random_coboundary(x, rng);
    // add an integer 1-cochain and random defects
    std::vector<Int> m_vec(x.edges.size());
    for (std::size_t j = 0; j < x.edges.size(); ++j) {
      m_vec[j] = rng.integer(-3, 3);
      if (m_vec[j] != 0) s.theta[{x.edges[j][0], x.edges[j][1]}] += Rat(m_vec[j]);
    }
    std::vector<Int> d_vec(x.triangles.size());
    for (std::size_t t = 0; t < x.triangles.size(); ++t) {
      d_vec[t] = rng.integer(-2, 2);
      if (d_vec[t] != 0) s.defects[{x.triangles[t][0], x.triangles[t][1], x.triangles[t][2]}] =
          d_vec[t];
    }
    // coboundary part contributes nothing: class = delta1 * m + defects
    std::vector<Int> expected = mat_vec(coboundary1(x), m_vec);
    for (std::size_t t = 0; t < expected.size(); ++t) expected[t] += d_vec[t];
    REQUIRE(integer_class(cover, s) == expected);
  }
}

TEST_CASE("classification over the sphere") {
  const SimplicialSpace x = sphere_complex();
  const CoverModel cover = star_cover(x);
  Rng rng(83);

  SECTION("group is Z and class-zero constructions land at zero") {
    for (int trial = 0; trial < 20; ++trial) {
      const CocycleClass c = classify_cocycle(cover, tga::test::random_class_zero(x, rng));
      REQUIRE(c.group == AbelianGroup{1, {}});
      REQUIRE(c.free == std::vector<Int>{0});
      REQUIRE(c.is_zero());
    }
  }
  SECTION("a defect on the lexicographically last triangle has degree +1 per unit") {
    for (long long k : {1, -1, 3}) {
      const CocycleClass c = classify_cocycle(cover, single_defect(x, 3, k));
      REQUIRE(c.free == std::vector<Int>{k});
      REQUIRE_FALSE(c.is_zero());
    }
  }
  SECTION("degree is additive") {
    for (int trial = 0; trial < 10; ++trial) {
      CechCocycle s1 = tga::test::random_class_zero(x, rng);
      CechCocycle s2 = single_defect(x, static_cast<std::size_t>(rng.integer(0, 3)),
                                     rng.integer(-3, 3));
      const Int d1 = classify_cocycle(cover, s1).free[0];
      const Int d2 = classify_cocycle(cover, s2).free[0];
      CechCocycle sum = s1;
      for (const auto& [k, v] : s2.theta) sum.theta[k] += v;
      for (const auto& [k, v] : s2.defects) sum.defects[k] += v;
      REQUIRE(classify_cocycle(cover, sum).free[0] == d1 + d2);
    }
  }
}

TEST_CASE("classification over other spaces") {
  SECTION("circle: no double-intersections of three charts, class group trivial") {
    const CoverModel cover = star_cover(circle_complex());
    CechCocycle s;
    s.theta[{0, 1}] = Rat(1, 3);
    const CocycleClass c = classify_cocycle(cover, s);
    REQUIRE(c.group == AbelianGroup{});
    REQUIRE(c.is_zero());
  }
  SECTION("torus: single defect generates Z") {
    const SimplicialSpace x = torus_complex();
    const CoverModel cover = star_cover(x);
    const CocycleClass c = classify_cocycle(cover, single_defect(x, 0, 1));
    REQUIRE(c.group == AbelianGroup{1, {}});
    REQUIRE(c.free.size() == 1);
    const Int d = c.free[0];
    REQUIRE((d == 1 || d == -1));
    // scaling the defect scales the class
    REQUIRE(classify_cocycle(cover, single_defect(x, 0, 5)).free[0] == 5 * d);
  }
  SECTION("non-orientable surface: torsion class of order two") {
    const SimplicialSpace x = projective_plane();
    const CoverModel cover = star_cover(x);
    const CocycleClass c1 = classify_cocycle(cover, single_defect(x, 2, 1));
    REQUIRE(c1.group == AbelianGroup{0, {2}});
    REQUIRE(c1.torsion == std::vector<Int>{1});
    REQUIRE(c1.free.empty());
    REQUIRE_FALSE(c1.is_zero());
    const CocycleClass c2 = classify_cocycle(cover, single_defect(x, 2, 2));
    REQUIRE(c2.torsion == std::vector<Int>{0});
    REQUIRE(c2.is_zero());
  }
}

TEST_CASE("trivialization") {
  Rng rng(84);
  SECTION("succeeds exactly on class zero, with the reconstruction identity") {
    for (const SimplicialSpace& x :
         {sphere_complex(), torus_complex(), projective_plane()}) {
      const CoverModel cover = star_cover(x);
      for (int trial = 0; trial < 10; ++trial) {
        const CechCocycle s = tga::test::random_class_zero(x, rng);
        const TrivializeResult r = trivialize(cover, s);
        REQUIRE(r.success);
        require_reconstruction(x, s, r);
        // the integer correction really kills the class: delta(m) = -n
        std::vector<Int> m_vec(x.edges.size(), 0);
        for (const auto& [k, v] : r.integer_correction)
          m_vec[x.edge_index({k.first, k.second})] = v;
        std::vector<Int> n = integer_class(cover, s);
        const std::vector<Int> dm = mat_vec(coboundary1(x), m_vec);
        for (std::size_t t = 0; t < n.size(); ++t) REQUIRE(dm[t] == -n[t]);
      }
    }
  }
  SECTION("pure coboundaries need no corrections and no periods") {
    const SimplicialSpace x = sphere_complex();
    const CoverModel cover = star_cover(x);
    for (int trial = 0; trial < 10; ++trial) {
      const CechCocycle s = tga::test::random_coboundary(x, rng);
      const TrivializeResult r = trivialize(cover, s);
      REQUIRE(r.success);
      REQUIRE(r.integer_correction.empty());
      REQUIRE(r.periods.empty());
      require_reconstruction(x, s, r);
    }
  }
  SECTION("nonzero class fails with a certificate") {
    const SimplicialSpace x = sphere_complex();
    const CoverModel cover = star_cover(x);
    const CechCocycle s = single_defect(x, 3, 2);
    const TrivializeResult r = trivialize(cover, s);
    REQUIRE_FALSE(r.success);
    REQUIRE(r.b.empty());
    REQUIRE_FALSE(r.certificate.is_zero());
    REQUIRE(r.certificate.free == std::vector<Int>{2});
  }
  SECTION("circle holonomy shows up as a period on the co-tree overlap") {
    const SimplicialSpace x = circle_complex();
    const CoverModel cover = star_cover(x);
    CechCocycle s;
    s.theta[{0, 1}] = Rat(1, 4);
    s.theta[{1, 2}] = Rat(1, 4);
    s.theta[{0, 2}] = Rat(1, 4);
    // loop sum theta_01 + theta_12 + theta_20 = 1/4: not a coboundary of
    // constants, but still trivializable in the sheaf sense
    const TrivializeResult r = trivialize(cover, s);
    REQUIRE(r.success);
    REQUIRE(r.periods.size() == 1);
    require_reconstruction(x, s, r);

    s.theta[{0, 2}] = Rat(1, 2);  // now the loop sum vanishes
    const TrivializeResult r2 = trivialize(cover, s);
    REQUIRE(r2.success);
    REQUIRE(r2.periods.empty());
    require_reconstruction(x, s, r2);
  }
}

TEST_CASE("coboundary constructor matches theta_at") {
  const SimplicialSpace x = torus_complex();
  Rng rng(85);
  std::map<long long, Rat> b;
  for (long long v : x.vertices) b[v] = rng.rational();
  const CechCocycle s = coboundary_cocycle(x, b);
  for (const auto& e : x.edges) REQUIRE(s.theta_at(e[0], e[1]) == b[e[0]] - b[e[1]]);
  REQUIRE(check_cocycle(star_cover(x), s).ok);
}
