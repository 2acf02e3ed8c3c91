#include "geom/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace horolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double hypot2(double x, double y) { return std::sqrt(x * x + y * y); }

// |z - xi| for z = (x, y) in the plane and boundary xi.
double plane_dist_to_end(const PlanePoint& z, const PlaneEnd& e) {
  return hypot2(z.x - e.at, z.y);
}

// Busemann function of xi normalized at w: lim d(z, x_n) - d(w, x_n).
double plane_busemann(const PlaneEnd& xi, const PlanePoint& z, const PlanePoint& w) {
  if (xi.at_infinity) return std::log(w.y / z.y);
  double nz = plane_dist_to_end(z, xi);
  double nw = plane_dist_to_end(w, xi);
  return std::log(nz * nz / z.y) - std::log(nw * nw / w.y);
}

double tree_product_at_base(const SpaceModel& s, const BordPoint& x, const BordPoint& y,
                            const Point& base) {
  Word u = word_inverse(std::get<TreePoint>(base).word);
  auto shifted_word = [&](const Point& p) { return word_concat(u, std::get<TreePoint>(p).word); };
  auto shifted_end = [&](const BoundaryPoint& p) {
    return tree_end_translate(u, std::get<TreeEnd>(p));
  };

  if (!is_boundary(x) && !is_boundary(y))
    return gromov_product(s, std::get<Point>(x), std::get<Point>(y), base);
  if (is_boundary(x) && is_boundary(y)) {
    auto c = tree_end_common_prefix(shifted_end(std::get<BoundaryPoint>(x)),
                                    shifted_end(std::get<BoundaryPoint>(y)));
    return c ? static_cast<double>(*c) : kInf;
  }
  const Point& p = std::get<Point>(is_boundary(x) ? y : x);
  const BoundaryPoint& e = std::get<BoundaryPoint>(is_boundary(x) ? x : y);
  return static_cast<double>(tree_end_word_common_prefix(shifted_word(p), shifted_end(e)));
}

double plane_product_at_base(const SpaceModel& s, const BordPoint& x, const BordPoint& y,
                             const Point& base) {
  const auto& w = std::get<PlanePoint>(base);
  if (!is_boundary(x) && !is_boundary(y))
    return gromov_product(s, std::get<Point>(x), std::get<Point>(y), base);
  if (is_boundary(x) && is_boundary(y)) {
    const auto& a = std::get<PlaneEnd>(std::get<BoundaryPoint>(x));
    const auto& b = std::get<PlaneEnd>(std::get<BoundaryPoint>(y));
    if (a == b) return kInf;
    if (a.at_infinity || b.at_infinity) {
      const PlaneEnd& fin = a.at_infinity ? b : a;
      return std::log(plane_dist_to_end(w, fin) / w.y);
    }
    return std::log(plane_dist_to_end(w, a) * plane_dist_to_end(w, b) /
                    (std::abs(a.at - b.at) * w.y));
  }
  const auto& z = std::get<PlanePoint>(std::get<Point>(is_boundary(x) ? y : x));
  const auto& e = std::get<PlaneEnd>(std::get<BoundaryPoint>(is_boundary(x) ? x : y));
  double d = distance(s, PlanePoint{z.x, z.y}, PlanePoint{w.x, w.y});
  return 0.5 * (d - plane_busemann(e, z, w));
}

double star_product_at_base(const SpaceModel& s, const BordPoint& x, const BordPoint& y,
                            const Point& base) {
  const auto& b = std::get<StarPoint>(base);
  auto ray_term = [&](uint32_t ray) { return ray == b.ray ? -b.radius : b.radius; };
  if (!is_boundary(x) && !is_boundary(y))
    return gromov_product(s, std::get<Point>(x), std::get<Point>(y), base);
  if (is_boundary(x) && is_boundary(y)) {
    const auto& a = std::get<StarEnd>(std::get<BoundaryPoint>(x));
    const auto& c = std::get<StarEnd>(std::get<BoundaryPoint>(y));
    if (a.ray == c.ray) return kInf;
    return 0.5 * (ray_term(a.ray) + ray_term(c.ray));
  }
  const auto& p = std::get<StarPoint>(std::get<Point>(is_boundary(x) ? y : x));
  const auto& e = std::get<StarEnd>(std::get<BoundaryPoint>(is_boundary(x) ? x : y));
  double along = p.ray == e.ray ? p.radius : -p.radius;
  double d = distance(s, Point{p}, base);
  return 0.5 * (d + ray_term(e.ray) + along);
}

}  // namespace

bool boundary_point_in_space(const SpaceModel& s, const BoundaryPoint& p) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      if (!std::holds_alternative<TreeEnd>(p)) return false;
      const auto& e = std::get<TreeEnd>(p);
      auto check = [&](const Word& w) {
        for (int32_t x : w)
          if (static_cast<uint32_t>(std::abs(x)) > s.rank) return false;
        return true;
      };
      return check(e.pre) && check(e.per) && make_tree_end(e.pre, e.per).has_value();
    }
    case SpaceKind::upper_half_plane:
      return std::holds_alternative<PlaneEnd>(p);
    case SpaceKind::star:
      return std::holds_alternative<StarEnd>(p) && std::get<StarEnd>(p).ray < s.rays;
  }
  return false;
}

bool bord_points_equal(const SpaceModel& s, const BordPoint& a, const BordPoint& b) {
  if (is_boundary(a) != is_boundary(b)) return false;
  if (!is_boundary(a)) return points_equal(s, std::get<Point>(a), std::get<Point>(b));
  const auto& x = std::get<BoundaryPoint>(a);
  const auto& y = std::get<BoundaryPoint>(b);
  if (x.index() != y.index()) return false;
  return x == y;
}

std::string bord_point_format(const SpaceModel& s, const BordPoint& p) {
  if (!is_boundary(p)) return point_format(s, std::get<Point>(p));
  const auto& bp = std::get<BoundaryPoint>(p);
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return tree_end_format(std::get<TreeEnd>(bp));
    case SpaceKind::upper_half_plane: {
      const auto& e = std::get<PlaneEnd>(bp);
      if (e.at_infinity) return "inf";
      std::ostringstream os;
      os << e.at;
      return os.str();
    }
    case SpaceKind::star: {
      std::ostringstream os;
      os << "end" << std::get<StarEnd>(bp).ray;
      return os.str();
    }
  }
  return "?";
}

std::string bord_point_key(const SpaceModel& s, const BordPoint& p) {
  auto bits = [](double v) {
    uint64_t u;
    std::memcpy(&u, &v, sizeof u);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(u));
    return std::string(buf);
  };
  if (!is_boundary(p)) {
    const Point& q = std::get<Point>(p);
    switch (s.kind) {
      case SpaceKind::free_group_tree:
        return "P" + word_format(std::get<TreePoint>(q).word);
      case SpaceKind::upper_half_plane: {
        const auto& z = std::get<PlanePoint>(q);
        return "P" + bits(z.x) + bits(z.y);
      }
      case SpaceKind::star: {
        auto sp = std::get<StarPoint>(canonical_point(s.kind, q));
        return "P" + std::to_string(sp.ray) + ":" + bits(sp.radius);
      }
    }
    return {};
  }
  const BoundaryPoint& q = std::get<BoundaryPoint>(p);
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& e = std::get<TreeEnd>(q);
      return "B" + word_format(e.pre) + "(" + word_format(e.per) + ")";
    }
    case SpaceKind::upper_half_plane: {
      const auto& e = std::get<PlaneEnd>(q);
      return e.at_infinity ? "Binf" : "B" + bits(e.at);
    }
    case SpaceKind::star:
      return "B" + std::to_string(std::get<StarEnd>(q).ray);
  }
  return {};
}

VisualConfig make_visual_config(const SpaceModel& s) {
  if (s.delta <= 0.0) return VisualConfig{2.0};
  return VisualConfig{std::min(2.0, std::pow(2.0, 1.0 / s.delta))};
}

VisualConfig make_visual_config(const SpaceModel& s, double base) {
  require(base > 1.0, Errc::invalid_config, "visual base must exceed 1");
  if (s.delta > 0.0)
    require(base <= std::pow(2.0, 1.0 / s.delta) + 1e-12, Errc::invalid_config,
            "visual base must satisfy b <= 2^(1/delta)");
  return VisualConfig{base};
}

double extended_gromov_product(const SpaceModel& s, const BordPoint& x, const BordPoint& y,
                               const Point& base) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: return tree_product_at_base(s, x, y, base);
    case SpaceKind::upper_half_plane: return plane_product_at_base(s, x, y, base);
    case SpaceKind::star: return star_product_at_base(s, x, y, base);
  }
  return 0.0;
}

double visual_quasimetric(const SpaceModel& s, const VisualConfig& vc, const BordPoint& x,
                          const BordPoint& y, const Point& base) {
  double p = extended_gromov_product(s, x, y, base);
  if (p == kInf) return 0.0;
  return std::pow(vc.base, -p);
}

namespace {

size_t find_in_net(const SpaceModel& s, std::span<const BordPoint> net, const BordPoint& p,
                   const char* role) {
  for (size_t i = 0; i < net.size(); ++i)
    if (bord_points_equal(s, net[i], p)) return i;
  fail(Errc::invalid_net, std::string(role) + " is not a member of the declared net");
}

// Single-source shortest path in the complete graph with rho_b edge weights.
std::vector<double> chain_distances(const SpaceModel& s, const VisualConfig& vc,
                                    std::span<const BordPoint> pts, size_t source) {
  const Point& base = s.basepoint;
  size_t n = pts.size();
  std::vector<double> dist(n, kInf);
  std::vector<bool> done(n, false);
  dist[source] = 0.0;
  for (size_t round = 0; round < n; ++round) {
    size_t u = n;
    double best = kInf;
    for (size_t i = 0; i < n; ++i)
      if (!done[i] && dist[i] < best) {
        best = dist[i];
        u = i;
      }
    if (u == n) break;
    done[u] = true;
    for (size_t v = 0; v < n; ++v) {
      if (done[v]) continue;
      double w = visual_quasimetric(s, vc, pts[u], pts[v], base);
      if (dist[u] + w < dist[v]) dist[v] = dist[u] + w;
    }
  }
  return dist;
}

}  // namespace

Bracket chain_metric_bracket(const SpaceModel& s, const VisualConfig& vc, const BordPoint& x,
                             const BordPoint& y, std::span<const BordPoint> net) {
  if (bord_points_equal(s, x, y)) return Bracket{0.0, 0.0};
  size_t si = find_in_net(s, net, x, "first endpoint");
  size_t ti = find_in_net(s, net, y, "second endpoint");
  double rho = visual_quasimetric(s, vc, x, y, s.basepoint);
  double upper = rho;
  if (s.delta > 0.0) {
    // On 0-hyperbolic spaces rho satisfies the triangle inequality, so the
    // direct chain is already the infimum; otherwise search the net.
    auto dist = chain_distances(s, vc, net, si);
    upper = std::min(upper, dist[ti]);
  }
  double lower = rho / 4.0;
  if (lower > upper) lower = upper;  // guard fp noise; Frink gives lower <= upper
  return Bracket{lower, upper};
}

Bracket bordification_metric_bracket(const SpaceModel& s, const VisualConfig& vc,
                                     const BordPoint& x, const BordPoint& y,
                                     std::span<const BordPoint> net) {
  Bracket br = chain_metric_bracket(s, vc, x, y, net);
  if (!is_boundary(x) && !is_boundary(y)) {
    double d = std::log(vc.base) * distance(s, std::get<Point>(x), std::get<Point>(y));
    br.lower = std::min(br.lower, d);
    br.upper = std::min(br.upper, d);
  }
  return br;
}

std::vector<std::vector<double>> chain_upper_matrix(const SpaceModel& s, const VisualConfig& vc,
                                                    std::span<const BordPoint> points) {
  size_t n = points.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double w = bord_points_equal(s, points[i], points[j])
                     ? 0.0
                     : visual_quasimetric(s, vc, points[i], points[j], s.basepoint);
      d[i][j] = d[j][i] = w;
    }
  if (s.delta > 0.0) {
    for (size_t k = 0; k < n; ++k)
      for (size_t i = 0; i < n; ++i) {
        double dik = d[i][k];
        for (size_t j = 0; j < n; ++j)
          if (dik + d[k][j] < d[i][j]) d[i][j] = dik + d[k][j];
      }
  }
  return d;
}

double horofunction_eval(const SpaceModel& s, const Horofunction& h, const Point& z) {
  if (!is_boundary(h.anchor)) {
    const Point& x = std::get<Point>(h.anchor);
    return distance(s, z, x) - distance(s, x, s.basepoint);
  }
  double p = extended_gromov_product(s, bord(z), h.anchor, s.basepoint);
  if (p == kInf) return -kInf;  // unreachable for interior z
  return distance(s, z, s.basepoint) - 2.0 * p;
}

BoundaryPoint boundary_action(const SpaceModel& s, const Isometry& g, const BoundaryPoint& xi) {
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return tree_end_translate(std::get<TreeIso>(g).word, std::get<TreeEnd>(xi));
    case SpaceKind::upper_half_plane: {
      const auto& m = std::get<PlaneIso>(g);
      const auto& e = std::get<PlaneEnd>(xi);
      if (e.at_infinity) {
        if (m.c == 0.0) return PlaneEnd{0.0, true};
        return PlaneEnd{m.a / m.c, false};
      }
      double denom = m.c * e.at + m.d;
      if (denom == 0.0) return PlaneEnd{0.0, true};
      return PlaneEnd{(m.a * e.at + m.b) / denom, false};
    }
    case SpaceKind::star:
      return StarEnd{std::get<StarIso>(g).perm[std::get<StarEnd>(xi).ray]};
  }
  return xi;
}

BordPoint bord_action(const SpaceModel& s, const Isometry& g, const BordPoint& p) {
  if (is_boundary(p)) return bord(boundary_action(s, g, std::get<BoundaryPoint>(p)));
  return bord(apply(s, g, std::get<Point>(p)));
}

Horofunction horo_action(const SpaceModel& s, const Isometry& g, const Horofunction& h) {
  return Horofunction{bord_action(s, g, h.anchor)};
}

ComparisonReport comparison_bound_check(const SpaceModel& s, const BoundaryPoint& xi,
                                        const BoundaryPoint& eta, const Isometry& g) {
  require(!bord_points_equal(s, bord(xi), bord(eta)), Errc::invalid_pair,
          "comparison bound needs two distinct boundary points");
  double product = extended_gromov_product(s, bord(xi), bord(eta), s.basepoint);
  ComparisonReport r;
  r.constant = 2.0 * product + 4.0 * s.delta;
  double d = displacement(s, g);
  double hx = horofunction_at_orbit(s, xi, g);
  double he = horofunction_at_orbit(s, eta, g);
  double m = std::max(hx, he);
  r.lower_slack = d - m;
  r.upper_slack = m + r.constant - d;
  return r;
}

double distortion_constant(const SpaceModel& s, const VisualConfig& vc) {
  return 4.0 * std::pow(vc.base, 6.0 * s.delta);
}

VisualRatioReport visual_ratio_check(const SpaceModel& s, const VisualConfig& vc,
                                     const Isometry& g, const BoundaryPoint& xi,
                                     const BoundaryPoint& eta, std::span<const BordPoint> net) {
  require(!bord_points_equal(s, bord(xi), bord(eta)), Errc::invalid_pair,
          "visual ratio needs two distinct boundary points");

  // Close the net under g so both brackets live in one chain graph.
  std::vector<BordPoint> pts(net.begin(), net.end());
  size_t base_count = pts.size();
  for (size_t i = 0; i < base_count; ++i) pts.push_back(bord_action(s, g, pts[i]));
  find_in_net(s, net, bord(xi), "xi");
  find_in_net(s, net, bord(eta), "eta");

  Bracket plain = chain_metric_bracket(s, vc, bord(xi), bord(eta), pts);
  Bracket moved = chain_metric_bracket(s, vc, bord_action(s, g, bord(xi)),
                                       bord_action(s, g, bord(eta)), pts);

  VisualRatioReport r;
  r.ratio_lower = plain.upper > 0.0 ? moved.lower / plain.upper : 0.0;
  r.ratio_upper = plain.lower > 0.0 ? moved.upper / plain.lower : kInf;

  Isometry ginv = inverse(s, g);
  double hsum = horofunction_at_orbit(s, xi, ginv) + horofunction_at_orbit(s, eta, ginv);
  double scale = std::pow(vc.base, -0.5 * hsum);
  double c = distortion_constant(s, vc);
  r.bound_lower = scale / c;
  r.bound_upper = scale * c;
  r.certified_violation = r.ratio_upper < r.bound_lower * (1.0 - 1e-12) ||
                          r.ratio_lower > r.bound_upper * (1.0 + 1e-12);
  return r;
}

double horofunction_at_orbit(const SpaceModel& s, const BoundaryPoint& xi, const Isometry& g) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const Word& w = std::get<TreeIso>(g).word;
      size_t c = tree_end_word_common_prefix(w, std::get<TreeEnd>(xi));
      return static_cast<double>(w.size()) - 2.0 * static_cast<double>(c);
    }
    case SpaceKind::upper_half_plane: {
      // h_[v](g i) = log ||g^-1 v||^2 - log ||v||^2 with g^-1 = adjugate for det one.
      const auto& m = std::get<PlaneIso>(g);
      const auto& e = std::get<PlaneEnd>(xi);
      double v1 = e.at_infinity ? 1.0 : e.at;
      double v2 = e.at_infinity ? 0.0 : 1.0;
      double w1 = m.d * v1 - m.b * v2;
      double w2 = -m.c * v1 + m.a * v2;
      double n2 = w1 * w1 + w2 * w2;
      if (n2 <= 0.0) return -kInf;  // v collapses onto the contracting direction
      return 2.0 * m.log_scale + std::log(n2) - std::log(v1 * v1 + v2 * v2);
    }
    case SpaceKind::star: {
      Point image = apply(s, g, s.basepoint);
      return horofunction_eval(s, Horofunction{bord(xi)}, image);
    }
  }
  return 0.0;
}

BoundaryPoint sample_boundary_point(const SpaceModel& s, const SamplerParams& params, Rng& rng) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      for (;;) {
        size_t pre_len = static_cast<size_t>(rng.below(params.tree_word_length / 2 + 1));
        size_t per_len = 1 + static_cast<size_t>(rng.below(4));
        auto draw = [&](size_t len) {
          Word w;
          for (size_t i = 0; i < len; ++i) {
            for (;;) {
              uint32_t pick = static_cast<uint32_t>(rng.below(2 * s.rank));
              int32_t letter = pick < s.rank ? static_cast<int32_t>(pick + 1)
                                             : -static_cast<int32_t>(pick - s.rank + 1);
              if (w.empty() || w.back() != -letter) {
                w.push_back(letter);
                break;
              }
            }
          }
          return w;
        };
        auto end = make_tree_end(draw(pre_len), draw(per_len));
        if (end) return *end;
      }
    }
    case SpaceKind::upper_half_plane: {
      double theta = rng.uniform(-3.141592653589793, 3.141592653589793);
      double t = std::tan(theta / 2.0);
      if (!std::isfinite(t)) return PlaneEnd{0.0, true};
      return PlaneEnd{t, false};
    }
    case SpaceKind::star:
      return StarEnd{static_cast<uint32_t>(rng.below(s.rays))};
  }
  return StarEnd{};
}

std::optional<BoundaryPoint> boundary_point_parse(const SpaceModel& s, const std::string& text) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      auto end = tree_end_parse(text, s.rank);
      if (!end) return std::nullopt;
      return BoundaryPoint{*end};
    }
    case SpaceKind::upper_half_plane: {
      if (text == "inf" || text == "+inf" || text == "oo") return BoundaryPoint{PlaneEnd{0.0, true}};
      try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) return std::nullopt;
        return BoundaryPoint{PlaneEnd{v, false}};
      } catch (...) {
        return std::nullopt;
      }
    }
    case SpaceKind::star: {
      if (text.rfind("end", 0) != 0) return std::nullopt;
      try {
        unsigned long ray = std::stoul(text.substr(3));
        if (ray >= s.rays) return std::nullopt;
        return BoundaryPoint{StarEnd{static_cast<uint32_t>(ray)}};
      } catch (...) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace horolab
