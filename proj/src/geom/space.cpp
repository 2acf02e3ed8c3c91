#include "geom/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace horolab {

namespace {

constexpr double kDetTol = 1e-12;

SpaceKind kind_of(const Point& p) {
  if (std::holds_alternative<TreePoint>(p)) return SpaceKind::free_group_tree;
  if (std::holds_alternative<PlanePoint>(p)) return SpaceKind::upper_half_plane;
  return SpaceKind::star;
}

SpaceKind kind_of(const Isometry& g) {
  if (std::holds_alternative<TreeIso>(g)) return SpaceKind::free_group_tree;
  if (std::holds_alternative<PlaneIso>(g)) return SpaceKind::upper_half_plane;
  return SpaceKind::star;
}

void check_point(const SpaceModel& s, const Point& p, const char* role) {
  if (!point_in_space(s, p))
    fail(Errc::invalid_point, std::string(role) + " does not belong to the configured space");
}

void check_iso(const SpaceModel& s, const Isometry& g) {
  if (!isometry_in_space(s, g))
    fail(Errc::invalid_point, "isometry does not belong to the configured space");
}

double plane_distance(const PlanePoint& a, const PlanePoint& b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  double q = 1.0 + (dx * dx + dy * dy) / (2.0 * a.y * b.y);
  return std::acosh(std::max(q, 1.0));
}

double star_distance(const StarPoint& a, const StarPoint& b) {
  if (a.ray == b.ray) return std::abs(a.radius - b.radius);
  return a.radius + b.radius;  // distinct rays meet only at the origin
}

void renormalize(PlaneIso& g) {
  double m = std::max(std::max(std::abs(g.a), std::abs(g.b)),
                      std::max(std::abs(g.c), std::abs(g.d)));
  if (m <= 0.0) fail(Errc::invalid_point, "degenerate half-plane matrix");
  g.a /= m;
  g.b /= m;
  g.c /= m;
  g.d /= m;
  g.log_scale += std::log(m);
}

}  // namespace

const char* space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::free_group_tree: return "free_group_tree";
    case SpaceKind::upper_half_plane: return "upper_half_plane";
    case SpaceKind::star: return "star";
  }
  return "?";
}

SpaceModel make_tree_space(uint32_t rank) {
  require(rank >= 2, Errc::invalid_config, "tree rank must be >= 2");
  SpaceModel s;
  s.kind = SpaceKind::free_group_tree;
  s.rank = rank;
  s.delta = 0.0;
  s.basepoint = TreePoint{};
  return s;
}

SpaceModel make_half_plane_space(double delta) {
  require(delta >= 0.0, Errc::invalid_config, "delta must be nonnegative");
  SpaceModel s;
  s.kind = SpaceKind::upper_half_plane;
  s.delta = delta;
  s.basepoint = PlanePoint{0.0, 1.0};
  return s;
}

SpaceModel make_star_space(uint32_t rays) {
  require(rays >= 2, Errc::invalid_config, "star space needs at least 2 rays");
  SpaceModel s;
  s.kind = SpaceKind::star;
  s.rays = rays;
  s.delta = 0.0;
  s.basepoint = StarPoint{0, 0.0};
  return s;
}

PlaneIso make_plane_iso(double a, double b, double c, double d) {
  double det = a * d - b * c;
  require(std::abs(det - 1.0) <= kDetTol, Errc::invalid_point,
          "half-plane matrix must have determinant 1 within 1e-12");
  PlaneIso g{a, b, c, d, 0.0};
  renormalize(g);
  return g;
}

Point canonical_point(SpaceKind kind, Point p) {
  if (kind == SpaceKind::star) {
    auto& sp = std::get<StarPoint>(p);
    if (sp.radius == 0.0) sp.ray = 0;
  }
  return p;
}

bool point_in_space(const SpaceModel& s, const Point& p) {
  if (kind_of(p) != s.kind) return false;
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& w = std::get<TreePoint>(p).word;
      if (!word_is_reduced(w)) return false;
      for (int32_t x : w)
        if (static_cast<uint32_t>(std::abs(x)) > s.rank) return false;
      return true;
    }
    case SpaceKind::upper_half_plane:
      return std::get<PlanePoint>(p).y > 0.0;
    case SpaceKind::star: {
      const auto& sp = std::get<StarPoint>(p);
      return sp.ray < s.rays && sp.radius >= 0.0;
    }
  }
  return false;
}

bool isometry_in_space(const SpaceModel& s, const Isometry& g) {
  if (kind_of(g) != s.kind) return false;
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& w = std::get<TreeIso>(g).word;
      if (!word_is_reduced(w)) return false;
      for (int32_t x : w)
        if (static_cast<uint32_t>(std::abs(x)) > s.rank) return false;
      return true;
    }
    case SpaceKind::upper_half_plane:
      return true;
    case SpaceKind::star: {
      const auto& perm = std::get<StarIso>(g).perm;
      if (perm.size() != s.rays) return false;
      std::vector<bool> seen(s.rays, false);
      for (uint32_t v : perm) {
        if (v >= s.rays || seen[v]) return false;
        seen[v] = true;
      }
      return true;
    }
  }
  return false;
}

bool points_equal(const SpaceModel& s, const Point& a, const Point& b, double tol) {
  if (kind_of(a) != s.kind || kind_of(b) != s.kind) return false;
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return std::get<TreePoint>(a) == std::get<TreePoint>(b);
    case SpaceKind::upper_half_plane: {
      const auto& pa = std::get<PlanePoint>(a);
      const auto& pb = std::get<PlanePoint>(b);
      return std::abs(pa.x - pb.x) <= tol && std::abs(pa.y - pb.y) <= tol;
    }
    case SpaceKind::star: {
      auto pa = std::get<StarPoint>(canonical_point(s.kind, a));
      auto pb = std::get<StarPoint>(canonical_point(s.kind, b));
      return pa.ray == pb.ray && std::abs(pa.radius - pb.radius) <= tol;
    }
  }
  return false;
}

bool isometries_equal(const SpaceModel& s, const Isometry& a, const Isometry& b, double tol) {
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return std::get<TreeIso>(a).word == std::get<TreeIso>(b).word;
    case SpaceKind::star:
      return std::get<StarIso>(a).perm == std::get<StarIso>(b).perm;
    case SpaceKind::upper_half_plane: {
      PlaneIso ga = std::get<PlaneIso>(a);
      PlaneIso gb = std::get<PlaneIso>(b);
      // Projective sign: make the largest entry positive.
      auto canon = [](PlaneIso& g) {
        double* entries[4] = {&g.a, &g.b, &g.c, &g.d};
        double lead = 0.0;
        for (double* e : entries)
          if (std::abs(*e) > std::abs(lead)) lead = *e;
        if (lead < 0.0)
          for (double* e : entries) *e = -*e;
      };
      canon(ga);
      canon(gb);
      if (std::abs(ga.log_scale - gb.log_scale) > tol) return false;
      return std::abs(ga.a - gb.a) <= tol && std::abs(ga.b - gb.b) <= tol &&
             std::abs(ga.c - gb.c) <= tol && std::abs(ga.d - gb.d) <= tol;
    }
  }
  return false;
}

double distance(const SpaceModel& s, const Point& x, const Point& y) {
  check_point(s, x, "x");
  check_point(s, y, "y");
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& u = std::get<TreePoint>(x).word;
      const auto& v = std::get<TreePoint>(y).word;
      size_t c = common_prefix_length(u, v);
      return static_cast<double>(u.size() + v.size() - 2 * c);
    }
    case SpaceKind::upper_half_plane:
      return plane_distance(std::get<PlanePoint>(x), std::get<PlanePoint>(y));
    case SpaceKind::star:
      return star_distance(std::get<StarPoint>(x), std::get<StarPoint>(y));
  }
  return 0.0;
}

double gromov_product(const SpaceModel& s, const Point& x, const Point& z, const Point& base) {
  return 0.5 * (distance(s, x, base) + distance(s, z, base) - distance(s, x, z));
}

Point apply(const SpaceModel& s, const Isometry& g, const Point& x) {
  check_iso(s, g);
  check_point(s, x, "x");
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return TreePoint{word_concat(std::get<TreeIso>(g).word, std::get<TreePoint>(x).word)};
    case SpaceKind::upper_half_plane: {
      const auto& m = std::get<PlaneIso>(g);
      std::complex<double> z{std::get<PlanePoint>(x).x, std::get<PlanePoint>(x).y};
      std::complex<double> w = (m.a * z + m.b) / (m.c * z + m.d);
      return PlanePoint{w.real(), w.imag()};
    }
    case SpaceKind::star: {
      auto p = std::get<StarPoint>(x);
      p.ray = std::get<StarIso>(g).perm[p.ray];
      return canonical_point(s.kind, p);
    }
  }
  return x;
}

Isometry compose(const SpaceModel& s, const Isometry& g, const Isometry& h) {
  check_iso(s, g);
  check_iso(s, h);
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return TreeIso{word_concat(std::get<TreeIso>(g).word, std::get<TreeIso>(h).word)};
    case SpaceKind::upper_half_plane: {
      const auto& p = std::get<PlaneIso>(g);
      const auto& q = std::get<PlaneIso>(h);
      PlaneIso r;
      r.a = p.a * q.a + p.b * q.c;
      r.b = p.a * q.b + p.b * q.d;
      r.c = p.c * q.a + p.d * q.c;
      r.d = p.c * q.b + p.d * q.d;
      r.log_scale = p.log_scale + q.log_scale;
      renormalize(r);
      return r;
    }
    case SpaceKind::star: {
      const auto& p = std::get<StarIso>(g).perm;
      const auto& q = std::get<StarIso>(h).perm;
      StarIso r;
      r.perm.resize(p.size());
      for (size_t i = 0; i < p.size(); ++i) r.perm[i] = p[q[i]];
      return r;
    }
  }
  return g;
}

Isometry inverse(const SpaceModel& s, const Isometry& g) {
  check_iso(s, g);
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return TreeIso{word_inverse(std::get<TreeIso>(g).word)};
    case SpaceKind::upper_half_plane: {
      // For determinant one, the inverse is the adjugate; the scale carries over.
      const auto& m = std::get<PlaneIso>(g);
      PlaneIso r{m.d, -m.b, -m.c, m.a, m.log_scale};
      renormalize(r);
      return r;
    }
    case SpaceKind::star: {
      const auto& p = std::get<StarIso>(g).perm;
      StarIso r;
      r.perm.resize(p.size());
      for (size_t i = 0; i < p.size(); ++i) r.perm[p[i]] = static_cast<uint32_t>(i);
      return r;
    }
  }
  return g;
}

Isometry identity(const SpaceModel& s) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: return TreeIso{};
    case SpaceKind::upper_half_plane: return PlaneIso{};
    case SpaceKind::star: {
      StarIso r;
      r.perm.resize(s.rays);
      std::iota(r.perm.begin(), r.perm.end(), 0u);
      return r;
    }
  }
  return TreeIso{};
}

bool is_identity(const SpaceModel& s, const Isometry& g, double tol) {
  return isometries_equal(s, g, identity(s), tol);
}

double plane_orbit_distance(const PlaneIso& g) {
  double f2 = g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d;
  double log_q = 2.0 * g.log_scale + std::log(f2 / 2.0);
  if (log_q > 40.0) return log_q + std::log(2.0);  // acosh(q) ~ log(2q)
  double q = std::exp(log_q);
  return std::acosh(std::max(q, 1.0));
}

double displacement(const SpaceModel& s, const Isometry& g) {
  check_iso(s, g);
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return static_cast<double>(std::get<TreeIso>(g).word.size());
    case SpaceKind::upper_half_plane:
      return plane_orbit_distance(std::get<PlaneIso>(g));
    case SpaceKind::star:
      return 0.0;  // ray permutations fix the origin
  }
  return 0.0;
}

std::string point_format(const SpaceModel& s, const Point& p) {
  std::ostringstream os;
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& w = std::get<TreePoint>(p).word;
      os << (w.empty() ? "e" : word_format(w));
      break;
    }
    case SpaceKind::upper_half_plane: {
      const auto& z = std::get<PlanePoint>(p);
      os << z.x << "+" << z.y << "i";
      break;
    }
    case SpaceKind::star: {
      const auto& sp = std::get<StarPoint>(p);
      os << "ray" << sp.ray << ":" << sp.radius;
      break;
    }
  }
  return os.str();
}

std::string isometry_format(const SpaceModel& s, const Isometry& g) {
  std::ostringstream os;
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const auto& w = std::get<TreeIso>(g).word;
      os << (w.empty() ? "e" : word_format(w));
      break;
    }
    case SpaceKind::upper_half_plane: {
      const auto& m = std::get<PlaneIso>(g);
      os << "[" << m.a << "," << m.b << ";" << m.c << "," << m.d << ";ls=" << m.log_scale << "]";
      break;
    }
    case SpaceKind::star: {
      os << "perm(";
      const auto& p = std::get<StarIso>(g).perm;
      for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
      os << ")";
      break;
    }
  }
  return os.str();
}

Point sample_point(const SpaceModel& s, const SamplerParams& params, Rng& rng) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      size_t len = static_cast<size_t>(rng.below(params.tree_word_length + 1));
      Word w;
      w.reserve(len);
      for (size_t i = 0; i < len; ++i) {
        // uniform over the 2*rank - (w empty ? 0 : 1) letters keeping the word reduced
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
      return TreePoint{std::move(w)};
    }
    case SpaceKind::upper_half_plane: {
      double x = params.plane_x_sigma * rng.normal();
      double y = std::exp(params.plane_log_y_sigma * rng.normal());
      return PlanePoint{x, y};
    }
    case SpaceKind::star: {
      uint32_t ray = static_cast<uint32_t>(rng.below(s.rays));
      // Dyadic radii keep the 4-point arithmetic exact in doubles.
      double radius = static_cast<double>(rng.below(1u << 16)) *
                      (params.star_radius_range / 65536.0);
      return canonical_point(s.kind, StarPoint{ray, radius});
    }
  }
  return s.basepoint;
}

Isometry sample_isometry(const SpaceModel& s, const SamplerParams& params, Rng& rng) {
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return TreeIso{std::get<TreePoint>(sample_point(s, params, rng)).word};
    case SpaceKind::upper_half_plane: {
      double t1 = rng.uniform(0.0, 3.141592653589793);
      double t2 = rng.uniform(0.0, 3.141592653589793);
      double u = rng.normal();
      double e = std::exp(u), ei = std::exp(-u);
      double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
      // R(t1) diag(e, 1/e) R(t2)
      return make_plane_iso(c1 * e * c2 - s1 * ei * s2, -c1 * e * s2 - s1 * ei * c2,
                            s1 * e * c2 + c1 * ei * s2, -s1 * e * s2 + c1 * ei * c2);
    }
    case SpaceKind::star: {
      StarIso g;
      g.perm.resize(s.rays);
      std::iota(g.perm.begin(), g.perm.end(), 0u);
      for (size_t i = s.rays; i > 1; --i)
        std::swap(g.perm[i - 1], g.perm[rng.below(i)]);
      return g;
    }
  }
  return identity(s);
}

HyperbolicityReport check_hyperbolicity(const SpaceModel& s, double delta, uint64_t samples,
                                        uint64_t seed, const SamplerParams& params,
                                        unsigned workers) {
  require(delta >= 0.0, Errc::invalid_config, "delta must be nonnegative");
  require(samples >= 1, Errc::invalid_config, "need at least one sample");

  const uint64_t block = 4096;
  const size_t blocks = static_cast<size_t>((samples + block - 1) / block);
  std::vector<double> block_max(blocks, -std::numeric_limits<double>::infinity());

  run_indexed(blocks, workers, [&](size_t bi) {
    Rng rng = Rng::stream(seed, bi);
    uint64_t begin = static_cast<uint64_t>(bi) * block;
    uint64_t end = std::min(samples, begin + block);
    double worst = -std::numeric_limits<double>::infinity();
    for (uint64_t i = begin; i < end; ++i) {
      Point x = sample_point(s, params, rng);
      Point y = sample_point(s, params, rng);
      Point z = sample_point(s, params, rng);
      Point w = sample_point(s, params, rng);
      double xz = gromov_product(s, x, z, w);
      double xy = gromov_product(s, x, y, w);
      double yz = gromov_product(s, y, z, w);
      double violation = std::min(xy, yz) - delta - xz;
      worst = std::max(worst, violation);
    }
    block_max[bi] = worst;
  });

  HyperbolicityReport report;
  report.samples = samples;
  report.seed = seed;
  report.max_violation = -std::numeric_limits<double>::infinity();
  for (double v : block_max) report.max_violation = std::max(report.max_violation, v);
  report.holds = report.max_violation <= 0.0;
  return report;
}

}  // namespace horolab
