#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "geom/boundary.hpp"
#include "support/oracles.hpp"

using namespace horolab;

namespace {

Word w(const char* text, uint32_t rank = 2) { return *word_parse(text, rank); }
TreeEnd end_of(const char* text, uint32_t rank = 2) { return *tree_end_parse(text, rank); }

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("tree end canonical forms") {
  CHECK(end_of("(ab)") == end_of("ab(ab)"));
  CHECK(end_of("(abab)") == end_of("(ab)"));
  CHECK(end_of("a(ba)") == end_of("(ab)"));
  CHECK_FALSE(end_of("(a)") == end_of("(b)"));
  CHECK_FALSE(make_tree_end(w("a"), w("A")).has_value());   // join seam cancels
  CHECK_FALSE(make_tree_end({}, {1, -1}).has_value());      // period seam cancels
  CHECK_FALSE(tree_end_parse("ab", 2).has_value());         // missing period
}

TEST_CASE("tree end translation") {
  CHECK(tree_end_translate(w("b"), end_of("(a)")) == end_of("b(a)"));
  CHECK(tree_end_translate(w("A"), end_of("(ab)")) == end_of("(ba)"));
  CHECK(tree_end_translate(w("ba"), end_of("(ab)")) == end_of("ba(ab)"));
  // deep cancellation into the period
  CHECK(tree_end_translate(word_inverse(w("abab")), end_of("(ab)")) == end_of("(ab)"));
}

TEST_CASE("extended Gromov product on the tree matches truncation oracles") {
  auto tree = make_tree_space(2);
  CHECK(extended_gromov_product(tree, bord(BoundaryPoint{end_of("(ab)")}),
                                bord(BoundaryPoint{end_of("(ab)")}), tree.basepoint) == kInf);
  CHECK(extended_gromov_product(tree, bord(BoundaryPoint{end_of("(a)")}),
                                bord(BoundaryPoint{end_of("(b)")}), tree.basepoint) == 0.0);
  CHECK(extended_gromov_product(tree, bord(BoundaryPoint{end_of("(ab)")}),
                                bord(BoundaryPoint{end_of("(abb)")}), tree.basepoint) == 2.0);

  CHECK(oracles::truncated_end_product(tree, end_of("(a)"), end_of("(b)"), 40) == 0.0);
  CHECK(oracles::truncated_end_product(tree, end_of("(ab)"), end_of("(abb)"), 40) == 2.0);

  Rng rng = Rng::seeded(3);
  SamplerParams params;
  for (int i = 0; i < 300; ++i) {
    auto xi = std::get<TreeEnd>(sample_boundary_point(tree, params, rng));
    auto eta = std::get<TreeEnd>(sample_boundary_point(tree, params, rng));
    double got = extended_gromov_product(tree, bord(BoundaryPoint{xi}), bord(BoundaryPoint{eta}),
                                         tree.basepoint);
    if (got != kInf)
      CHECK(got == oracles::truncated_end_product(tree, xi, eta, 2 * (40 + (size_t)got)));
  }
}

TEST_CASE("extended product against interior points and moved bases") {
  auto tree = make_tree_space(2);
  // <x, xi>_base via isometry invariance: translate everything to the basepoint
  CHECK(extended_gromov_product(tree, bord(Point{TreePoint{w("aab")}}),
                                bord(BoundaryPoint{end_of("(a)")}), tree.basepoint) == 2.0);
  CHECK(extended_gromov_product(tree, bord(Point{TreePoint{w("ba")}}),
                                bord(BoundaryPoint{end_of("b(a)")}),
                                Point{TreePoint{w("b")}}) == 1.0);
}

TEST_CASE("half-plane closed forms agree with far-point ray limits") {
  auto plane = make_half_plane_space(0.75);
  Rng rng = Rng::seeded(17);
  for (int i = 0; i < 400; ++i) {
    double xi = std::tan(rng.uniform(-1.5, 1.5));
    double eta = std::tan(rng.uniform(-1.5, 1.5));
    if (std::abs(xi - eta) < 1e-3) continue;
    PlanePoint base{rng.uniform(-2.0, 2.0), std::exp(rng.uniform(-1.0, 1.0))};
    double closed = extended_gromov_product(plane, bord(BoundaryPoint{PlaneEnd{xi, false}}),
                                            bord(BoundaryPoint{PlaneEnd{eta, false}}),
                                            Point{base});
    // approach each end along near-vertical segments
    double t = 1e-8;
    PlanePoint px{xi, t}, pe{eta, t};
    double approx = gromov_product(plane, Point{px}, Point{pe}, Point{base});
    CHECK(closed == doctest::Approx(approx).epsilon(1e-6));
  }
}

TEST_CASE("half-plane products with the point at infinity") {
  auto plane = make_half_plane_space(0.75);
  PlaneEnd inf{0.0, true};
  double p = extended_gromov_product(plane, bord(BoundaryPoint{inf}),
                                     bord(BoundaryPoint{PlaneEnd{1.0, false}}), plane.basepoint);
  CHECK(p == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));  // log |1 - i| = log sqrt 2
  CHECK(extended_gromov_product(plane, bord(BoundaryPoint{inf}), bord(BoundaryPoint{inf}),
                                plane.basepoint) == kInf);
}

TEST_CASE("star products split by shared rays") {
  auto star = make_star_space(6);
  CHECK(extended_gromov_product(star, bord(BoundaryPoint{StarEnd{0}}),
                                bord(BoundaryPoint{StarEnd{0}}), star.basepoint) == kInf);
  CHECK(extended_gromov_product(star, bord(BoundaryPoint{StarEnd{0}}),
                                bord(BoundaryPoint{StarEnd{1}}), star.basepoint) == 0.0);
  CHECK(extended_gromov_product(star, bord(Point{StarPoint{2, 3.0}}),
                                bord(BoundaryPoint{StarEnd{2}}), star.basepoint) == 3.0);
  // base on one of the rays
  CHECK(extended_gromov_product(star, bord(BoundaryPoint{StarEnd{0}}),
                                bord(BoundaryPoint{StarEnd{1}}),
                                Point{StarPoint{0, 2.0}}) == 0.0);
  CHECK(extended_gromov_product(star, bord(BoundaryPoint{StarEnd{3}}),
                                bord(BoundaryPoint{StarEnd{1}}),
                                Point{StarPoint{0, 2.0}}) == 2.0);
}

TEST_CASE("visual quasimetric values and the Gromov inequality") {
  auto tree = make_tree_space(2);
  VisualConfig vc = make_visual_config(tree);
  CHECK(vc.base == 2.0);
  CHECK(visual_quasimetric(tree, vc, bord(BoundaryPoint{end_of("(ab)")}),
                           bord(BoundaryPoint{end_of("(ab)")}), tree.basepoint) == 0.0);
  CHECK(visual_quasimetric(tree, vc, bord(BoundaryPoint{end_of("(ab)")}),
                           bord(BoundaryPoint{end_of("(abb)")}), tree.basepoint) == 0.25);
  CHECK(visual_quasimetric(tree, vc, bord(BoundaryPoint{end_of("(a)")}),
                           bord(BoundaryPoint{end_of("(b)")}), tree.basepoint) == 1.0);

  // rho(x,y) <= 2 max(rho(x,z), rho(z,y)) on sampled triples, all spaces
  Rng rng = Rng::seeded(29);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(5)}) {
    VisualConfig cfg = make_visual_config(space);
    for (int i = 0; i < 4000; ++i) {
      BordPoint x = i % 2 ? bord(sample_point(space, params, rng))
                          : bord(sample_boundary_point(space, params, rng));
      BordPoint y = i % 3 ? bord(sample_boundary_point(space, params, rng))
                          : bord(sample_point(space, params, rng));
      BordPoint z = bord(sample_boundary_point(space, params, rng));
      double xy = visual_quasimetric(space, cfg, x, y, space.basepoint);
      double xz = visual_quasimetric(space, cfg, x, z, space.basepoint);
      double zy = visual_quasimetric(space, cfg, z, y, space.basepoint);
      CHECK(xy <= 2.0 * std::max(xz, zy) + 1e-12);
    }
  }
}

TEST_CASE("chain metric brackets") {
  auto tree = make_tree_space(2);
  VisualConfig vc = make_visual_config(tree);
  BoundaryPoint a = end_of("(a)");
  BoundaryPoint b = end_of("(b)");
  BoundaryPoint ab = end_of("(ab)");

  std::vector<BordPoint> two{bord(a), bord(b)};
  Bracket direct = chain_metric_bracket(tree, vc, bord(a), bord(b), two);
  CHECK(direct.upper == 1.0);  // only the direct chain
  CHECK(direct.lower == 0.25);

  std::vector<BordPoint> three{bord(a), bord(b), bord(ab)};
  for (size_t i = 0; i < three.size(); ++i)
    for (size_t j = i + 1; j < three.size(); ++j) {
      Bracket br = chain_metric_bracket(tree, vc, three[i], three[j], three);
      double rho = visual_quasimetric(tree, vc, three[i], three[j], tree.basepoint);
      CHECK(br.upper <= rho + 1e-15);
      CHECK(br.lower <= br.upper);
      CHECK(br.upper ==
            doctest::Approx(oracles::brute_force_chain(tree, vc, three, i, j)).epsilon(1e-12));
    }

  Bracket same = chain_metric_bracket(tree, vc, bord(a), bord(a), three);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);
  CHECK_THROWS_AS(chain_metric_bracket(tree, vc, bord(a), bord(end_of("(aab)")), three), Error);
}

TEST_CASE("chain upper bounds match brute force on random nets") {
  Rng rng = Rng::seeded(31);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75)}) {
    VisualConfig vc = make_visual_config(space);
    for (int round = 0; round < 50; ++round) {
      std::vector<BordPoint> net;
      for (int i = 0; i < 6; ++i) {
        BordPoint p = i % 3 == 0 ? bord(sample_point(space, params, rng))
                                 : bord(sample_boundary_point(space, params, rng));
        bool dup = false;
        for (const auto& q : net) dup = dup || bord_points_equal(space, p, q);
        if (!dup) net.push_back(p);
      }
      if (net.size() < 3) continue;
      Bracket br = chain_metric_bracket(space, vc, net[0], net[1], net);
      CHECK(br.upper ==
            doctest::Approx(oracles::brute_force_chain(space, vc, net, 0, 1)).epsilon(1e-10));
      CHECK(br.lower <= br.upper + 1e-15);
    }
  }
}

TEST_CASE("bordification metric takes the interior shortcut") {
  auto tree = make_tree_space(2);
  VisualConfig vc = make_visual_config(tree);
  Point pa{TreePoint{w("a")}};
  Point pb{TreePoint{w("b")}};
  std::vector<BordPoint> net{bord(pa), bord(pb)};
  Bracket same = bordification_metric_bracket(tree, vc, bord(pa), bord(pa), net);
  CHECK(same.upper == 0.0);
  Bracket br = bordification_metric_bracket(tree, vc, bord(pa), bord(pb), net);
  CHECK(br.upper == 1.0);  // min(2 log 2 = 1.386.., rho = 1)

  // boundary pairs never use the distance branch and stay <= 1
  std::vector<BordPoint> bnet{bord(BoundaryPoint{end_of("(a)")}),
                              bord(BoundaryPoint{end_of("(b)")})};
  Bracket bb = bordification_metric_bracket(tree, vc, bnet[0], bnet[1], bnet);
  CHECK(bb.upper <= 1.0);
}

TEST_CASE("horofunction evaluation, interior and boundary anchors") {
  auto tree = make_tree_space(2);
  Horofunction at_a{bord(Point{TreePoint{w("a")}})};
  CHECK(horofunction_eval(tree, at_a, TreePoint{}) == 0.0);
  CHECK(horofunction_eval(tree, at_a, TreePoint{w("aa")}) == 0.0);
  CHECK(horofunction_eval(tree, at_a, TreePoint{w("b")}) == 1.0);

  Horofunction h_ainf{bord(BoundaryPoint{end_of("(a)")})};
  CHECK(horofunction_eval(tree, h_ainf, std::get<TreePoint>(tree.basepoint)) == 0.0);
  CHECK(horofunction_eval(tree, h_ainf, TreePoint{w("aa")}) == -2.0);
  CHECK(horofunction_eval(tree, h_ainf, TreePoint{w("b")}) == 1.0);

  // star: the ray horofunction is -radius on its ray, +radius elsewhere
  auto star = make_star_space(4);
  Horofunction h_ray{bord(BoundaryPoint{StarEnd{2}})};
  CHECK(horofunction_eval(star, h_ray, StarPoint{2, 5.0}) == -5.0);
  CHECK(horofunction_eval(star, h_ray, StarPoint{1, 5.0}) == 5.0);
}

TEST_CASE("boundary horofunctions are Busemann limits") {
  auto tree = make_tree_space(2);
  Rng rng = Rng::seeded(41);
  SamplerParams params;
  for (int i = 0; i < 200; ++i) {
    auto xi = std::get<TreeEnd>(sample_boundary_point(tree, params, rng));
    auto z = std::get<TreePoint>(sample_point(tree, params, rng));
    double h = horofunction_eval(tree, Horofunction{bord(BoundaryPoint{xi})}, z);
    // limit of h_{x_n} along the defining ray, exact beyond d(z,e) + prefix
    size_t depth = z.word.size() + xi.pre.size() + 2 * xi.per.size() + 4;
    Word truncation;
    for (size_t k = 0; k < depth; ++k) truncation.push_back(tree_end_letter(xi, k));
    double hx = oracles::naive_tree_distance(z.word, truncation) -
                static_cast<double>(truncation.size());
    CHECK(h == hx);
  }

  auto plane = make_half_plane_space(0.75);
  for (int i = 0; i < 200; ++i) {
    PlaneEnd xi{std::tan(rng.uniform(-1.5, 1.5)), false};
    PlanePoint z{rng.uniform(-3.0, 3.0), std::exp(rng.uniform(-1.5, 1.5))};
    double h = horofunction_eval(plane, Horofunction{bord(BoundaryPoint{xi})}, z);
    PlanePoint far{xi.at, 1e-9};
    double approx = distance(plane, Point{z}, Point{far}) -
                    distance(plane, Point{far}, plane.basepoint);
    CHECK(h == doctest::Approx(approx).epsilon(1e-6));
  }
}

TEST_CASE("horofunctions are 1-Lipschitz") {
  Rng rng = Rng::seeded(43);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(5)}) {
    for (int i = 0; i < 10000; ++i) {
      Horofunction h{i % 2 ? bord(sample_boundary_point(space, params, rng))
                           : bord(sample_point(space, params, rng))};
      Point y = sample_point(space, params, rng);
      Point z = sample_point(space, params, rng);
      double dh = std::abs(horofunction_eval(space, h, y) - horofunction_eval(space, h, z));
      CHECK(dh <= distance(space, y, z) + 1e-9);
    }
  }
}

TEST_CASE("horoProduct1: products dominate horofunction minima") {
  Rng rng = Rng::seeded(47);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75)}) {
    for (int i = 0; i < 4000; ++i) {
      Horofunction h{i % 2 ? bord(sample_boundary_point(space, params, rng))
                           : bord(sample_point(space, params, rng))};
      Point x = sample_point(space, params, rng);
      Point y = sample_point(space, params, rng);
      double product = gromov_product(space, x, y, space.basepoint);
      double bound = std::min(-horofunction_eval(space, h, x), -horofunction_eval(space, h, y)) -
                     space.delta;
      CHECK(product >= bound - 1e-9);
    }
  }
}

TEST_CASE("boundary action and equivariance") {
  auto tree = make_tree_space(2);
  CHECK(boundary_action(tree, identity(tree), BoundaryPoint{end_of("(ab)")}) ==
        BoundaryPoint{end_of("(ab)")});
  CHECK(boundary_action(tree, TreeIso{w("b")}, BoundaryPoint{end_of("(a)")}) ==
        BoundaryPoint{end_of("b(a)")});

  auto plane = make_half_plane_space(0.75);
  auto moved = std::get<PlaneEnd>(
      boundary_action(plane, make_plane_iso(1, 1, 0, 1), PlaneEnd{0.0, false}));
  CHECK(moved.at == doctest::Approx(1.0));
  CHECK_FALSE(moved.at_infinity);

  // g . h(z) = h(g^-1 z) - h(g^-1 x0), exact on trees, 1e-9 on the half-plane
  Rng rng = Rng::seeded(53);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75)}) {
    double tol = space.kind == SpaceKind::upper_half_plane ? 1e-9 : 0.0;
    for (int i = 0; i < 2000; ++i) {
      Horofunction h{i % 2 ? bord(sample_boundary_point(space, params, rng))
                           : bord(sample_point(space, params, rng))};
      Isometry g = sample_isometry(space, params, rng);
      Point z = sample_point(space, params, rng);
      Isometry gi = inverse(space, g);
      double lhs = horofunction_eval(space, horo_action(space, g, h), z);
      double rhs = horofunction_eval(space, h, apply(space, gi, z)) -
                   horofunction_eval(space, h, apply(space, gi, space.basepoint));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0 + std::abs(lhs) + tol));
    }
  }
}

TEST_CASE("horofunction_at_orbit matches pointwise evaluation") {
  Rng rng = Rng::seeded(59);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(4)}) {
    for (int i = 0; i < 500; ++i) {
      BoundaryPoint xi = sample_boundary_point(space, params, rng);
      Isometry g = sample_isometry(space, params, rng);
      double fast = horofunction_at_orbit(space, xi, g);
      double plain = horofunction_eval(space, Horofunction{bord(xi)},
                                       apply(space, g, space.basepoint));
      CHECK(fast == doctest::Approx(plain).epsilon(1e-9));
    }
  }
}

TEST_CASE("comparison bounds") {
  auto tree = make_tree_space(2);
  auto r = comparison_bound_check(tree, end_of("(a)"), end_of("(b)"), TreeIso{w("aa")});
  CHECK(r.constant == 0.0);
  CHECK(r.lower_slack == 0.0);  // equality on both sides
  CHECK(r.upper_slack == 0.0);

  auto id = comparison_bound_check(tree, end_of("(a)"), end_of("(b)"), identity(tree));
  CHECK(id.lower_slack == 0.0);
  CHECK(id.upper_slack == 0.0);

  CHECK_THROWS_AS(comparison_bound_check(tree, end_of("(a)"), end_of("(a)"), TreeIso{w("a")}),
                  Error);

  auto plane = make_half_plane_space(0.75);
  Rng rng = Rng::seeded(61);
  SamplerParams params;
  double tol = 2.0 * plane.delta + 1e-6;
  for (int i = 0; i < 10000; ++i) {
    PlaneEnd xi{std::tan(rng.uniform(-1.5, 1.5)), false};
    PlaneEnd eta{std::tan(rng.uniform(-1.5, 1.5)), false};
    if (xi == eta) continue;
    Isometry g = sample_isometry(plane, params, rng);
    auto rep = comparison_bound_check(plane, xi, eta, g);
    CHECK(rep.lower_slack >= -1e-9);
    CHECK(rep.upper_slack >= -tol);
  }
}

TEST_CASE("visual ratio bounds hold with certified brackets") {
  Rng rng = Rng::seeded(67);
  SamplerParams params;
  for (auto space : {make_tree_space(2), make_half_plane_space(0.75), make_star_space(5)}) {
    VisualConfig vc = make_visual_config(space);
    for (int i = 0; i < 3000; ++i) {
      BoundaryPoint xi = sample_boundary_point(space, params, rng);
      BoundaryPoint eta = sample_boundary_point(space, params, rng);
      if (bord_points_equal(space, bord(xi), bord(eta))) continue;
      Isometry g = sample_isometry(space, params, rng);
      std::vector<BordPoint> net{bord(xi), bord(eta)};
      for (int extra = 0; extra < 3; ++extra)
        net.push_back(bord(sample_boundary_point(space, params, rng)));
      auto rep = visual_ratio_check(space, vc, g, xi, eta, net);
      CHECK_FALSE(rep.certified_violation);
    }
    // identity: ratio 1 within bounds since C >= 4
    BoundaryPoint xi = sample_boundary_point(space, params, rng);
    BoundaryPoint eta = sample_boundary_point(space, params, rng);
    if (!bord_points_equal(space, bord(xi), bord(eta))) {
      std::vector<BordPoint> net{bord(xi), bord(eta)};
      auto rep = visual_ratio_check(space, vc, identity(space), xi, eta, net);
      CHECK_FALSE(rep.certified_violation);
      CHECK(rep.ratio_lower <= 1.0 + 1e-12);
      CHECK(rep.ratio_upper >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("visual config validates the base") {
  auto plane = make_half_plane_space(0.75);
  CHECK(make_visual_config(plane).base == 2.0);  // 2^(1/0.75) > 2 caps at 2
  CHECK_THROWS_AS(make_visual_config(plane, 3.0), Error);
  CHECK_THROWS_AS(make_visual_config(plane, 0.9), Error);
  auto wide = make_half_plane_space(2.0);
  CHECK(make_visual_config(wide).base == doctest::Approx(std::pow(2.0, 0.5)));
}
