#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "geom/space.hpp"
#include "support/oracles.hpp"

using namespace horolab;

namespace {

Word w(const char* text, uint32_t rank = 2) { return *word_parse(text, rank); }

}  // namespace

TEST_CASE("tree distance is the word metric") {
  auto tree = make_tree_space(2);
  CHECK(distance(tree, TreePoint{w("ab")}, TreePoint{w("abb")}) == 1.0);
  CHECK(distance(tree, TreePoint{w("ab")}, TreePoint{w("ab")}) == 0.0);
  CHECK(distance(tree, TreePoint{}, TreePoint{w("aBab")}) == 4.0);

  Rng rng = Rng::seeded(11);
  SamplerParams params;
  for (int i = 0; i < 2000; ++i) {
    auto x = std::get<TreePoint>(sample_point(tree, params, rng));
    auto y = std::get<TreePoint>(sample_point(tree, params, rng));
    CHECK(distance(tree, x, y) == oracles::naive_tree_distance(x.word, y.word));
  }
}

TEST_CASE("star distance matches the two-ray formula") {
  auto star = make_star_space(5);
  CHECK(distance(star, StarPoint{0, 2.0}, StarPoint{3, 5.0}) == 7.0);
  CHECK(distance(star, StarPoint{2, 1.5}, StarPoint{2, 4.0}) == 2.5);
  CHECK(distance(star, StarPoint{0, 0.0}, StarPoint{4, 3.0}) == 3.0);
}

TEST_CASE("half-plane distance: identity and the vertical geodesic") {
  auto plane = make_half_plane_space(0.75);
  CHECK(distance(plane, PlanePoint{0, 1}, PlanePoint{0, 1}) == 0.0);
  double d = distance(plane, PlanePoint{0, 1}, PlanePoint{0, 2});
  CHECK(d == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(d == doctest::Approx(oracles::vertical_geodesic_length(1.0, 2.0)).epsilon(1e-9));
}

TEST_CASE("gromov product examples") {
  auto tree = make_tree_space(2);
  CHECK(gromov_product(tree, TreePoint{w("ab")}, TreePoint{w("abb")}, TreePoint{}) == 2.0);
  CHECK(gromov_product(tree, TreePoint{w("ab")}, TreePoint{w("ab")}, TreePoint{w("b")}) ==
        distance(tree, TreePoint{w("ab")}, TreePoint{w("b")}));

  auto star = make_star_space(4);
  CHECK(gromov_product(star, StarPoint{0, 2.0}, StarPoint{1, 3.0}, star.basepoint) == 0.0);
}

TEST_CASE("apply, compose, inverse") {
  auto tree = make_tree_space(2);
  CHECK(std::get<TreePoint>(apply(tree, TreeIso{w("ab")}, TreePoint{w("A")})).word == w("abA"));
  CHECK(std::get<TreePoint>(apply(tree, identity(tree), TreePoint{w("ba")})).word == w("ba"));
  CHECK(std::get<TreeIso>(compose(tree, TreeIso{w("ab")}, TreeIso{w("B")})).word == w("a"));
  CHECK(is_identity(tree, compose(tree, TreeIso{w("abA")}, inverse(tree, TreeIso{w("abA")}))));

  auto plane = make_half_plane_space(0.75);
  auto moved = std::get<PlanePoint>(apply(plane, make_plane_iso(1, 1, 0, 1), PlanePoint{0, 1}));
  CHECK(moved.x == doctest::Approx(1.0));
  CHECK(moved.y == doctest::Approx(1.0));
  CHECK(is_identity(plane, inverse(plane, identity(plane))));
  auto inv = inverse(plane, make_plane_iso(2, 0, 0, 0.5));
  auto p = std::get<PlanePoint>(apply(plane, inv, PlanePoint{0, 1}));
  CHECK(p.y == doctest::Approx(0.25).epsilon(1e-12));  // (1/2)^2
}

TEST_CASE("random composition round trips") {
  Rng rng = Rng::seeded(5);
  SamplerParams params;
  for (auto space : {make_tree_space(3), make_half_plane_space(0.75), make_star_space(6)}) {
    for (int i = 0; i < 500; ++i) {
      Isometry g = sample_isometry(space, params, rng);
      Point x = sample_point(space, params, rng);
      Point back = apply(space, inverse(space, g), apply(space, g, x));
      double tol = space.kind == SpaceKind::upper_half_plane ? 1e-9 : 0.0;
      CHECK(points_equal(space, back, x, tol));
    }
  }
}

TEST_CASE("isometries preserve distances") {
  Rng rng = Rng::seeded(9);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(5)}) {
    double tol = space.kind == SpaceKind::upper_half_plane ? 1e-9 : 0.0;
    for (int i = 0; i < 10000; ++i) {
      Isometry g = sample_isometry(space, params, rng);
      Point x = sample_point(space, params, rng);
      Point y = sample_point(space, params, rng);
      double before = distance(space, x, y);
      double after = distance(space, apply(space, g, x), apply(space, g, y));
      CHECK(std::abs(before - after) <= tol * (1.0 + before));
    }
  }
}

TEST_CASE("metric axioms on sampled triples") {
  Rng rng = Rng::seeded(21);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(4)}) {
    double tol = space.kind == SpaceKind::upper_half_plane ? 1e-9 : 0.0;
    for (int i = 0; i < 10000; ++i) {
      Point x = sample_point(space, params, rng);
      Point y = sample_point(space, params, rng);
      Point z = sample_point(space, params, rng);
      double xy = distance(space, x, y);
      double yz = distance(space, y, z);
      double xz = distance(space, x, z);
      CHECK(xy >= 0.0);
      CHECK(std::abs(xy - distance(space, y, x)) <= tol);
      CHECK(xz <= xy + yz + tol * (1.0 + xz));
      // Gromov product identity <x,z>_y + <x,y>_z = d(y,z)
      double sum = gromov_product(space, x, z, y) + gromov_product(space, x, y, z);
      CHECK(sum == doctest::Approx(yz).epsilon(1e-9));
    }
  }
}

TEST_CASE("4-point condition holds on all three model spaces") {
  SamplerParams params;
  auto tree = make_tree_space(2);
  auto tr = check_hyperbolicity(tree, 0.0, 20000, 3, params, 2);
  CHECK(tr.holds);
  CHECK(tr.max_violation <= 0.0);

  auto star = make_star_space(7);
  auto sr = check_hyperbolicity(star, 0.0, 20000, 3, params, 2);
  CHECK(sr.holds);

  auto plane = make_half_plane_space(0.75);
  auto pr = check_hyperbolicity(plane, plane.delta, 50000, 3, params, 2);
  CHECK(pr.holds);
  // delta = 0 must fail on the half-plane
  auto bad = check_hyperbolicity(plane, 0.0, 50000, 3, params, 2);
  CHECK_FALSE(bad.holds);
}

TEST_CASE("check_hyperbolicity is deterministic across worker counts") {
  SamplerParams params;
  auto plane = make_half_plane_space(0.75);
  auto a = check_hyperbolicity(plane, 0.3, 30000, 77, params, 1);
  auto b = check_hyperbolicity(plane, 0.3, 30000, 77, params, 8);
  CHECK(a.max_violation == b.max_violation);
}

TEST_CASE("long half-plane products keep a stable displacement") {
  auto plane = make_half_plane_space(0.75);
  Rng rng = Rng::seeded(123);
  Isometry g = identity(plane);
  Isometry a = make_plane_iso(2, 0, 0, 0.5);
  Isometry b = make_plane_iso(1.25, 0.75, 0.75, 1.25);
  double previous = 0.0;
  for (int k = 0; k < 4000; ++k) {
    g = compose(plane, g, rng.uniform() < 0.5 ? a : b);
    double d = displacement(plane, g);
    CHECK(std::isfinite(d));
    CHECK(d >= 0.0);
    previous = d;
  }
  CHECK(previous > 100.0);  // two hyperbolics with crossing axes must escape
}

TEST_CASE("displacement agrees with the distance of the moved basepoint") {
  auto plane = make_half_plane_space(0.75);
  Rng rng = Rng::seeded(8);
  SamplerParams params;
  for (int i = 0; i < 300; ++i) {
    Isometry g = sample_isometry(plane, params, rng);
    double via_point = distance(plane, apply(plane, g, plane.basepoint), plane.basepoint);
    CHECK(displacement(plane, g) == doctest::Approx(via_point).epsilon(1e-9));
  }
  auto tree = make_tree_space(2);
  CHECK(displacement(tree, TreeIso{w("abab")}) == 4.0);
}

TEST_CASE("invalid inputs are rejected") {
  auto tree = make_tree_space(2);
  auto star = make_star_space(3);
  CHECK_THROWS_AS(distance(tree, TreePoint{w("a")}, Point{StarPoint{0, 1.0}}), Error);
  CHECK_THROWS_AS(apply(star, StarIso{{0, 1, 2}}, Point{TreePoint{}}), Error);
  CHECK_THROWS_AS(make_plane_iso(1, 1, 1, 1), Error);  // det 0
  CHECK_FALSE(word_parse("aA", 2).has_value());
  CHECK_FALSE(word_parse("c", 2).has_value());
}
