#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include "core/rng.hpp"
#include "geom/tree.hpp"

namespace horolab {

enum class SpaceKind { free_group_tree, upper_half_plane, star };

const char* space_kind_name(SpaceKind k);

struct TreePoint {
  Word word;
  bool operator==(const TreePoint&) const = default;
};

struct PlanePoint {
  double x = 0.0;
  double y = 1.0;  // > 0
  bool operator==(const PlanePoint&) const = default;
};

struct StarPoint {
  uint32_t ray = 0;
  double radius = 0.0;  // canonical: radius 0 lives on ray 0
  bool operator==(const StarPoint&) const = default;
};

using Point = std::variant<TreePoint, PlanePoint, StarPoint>;

struct TreeIso {
  Word word;
};

// A real 2x2 matrix of determinant one, stored as entries scaled to unit
// max-norm together with the log of the removed scale. Long products stay
// representable this way; the true matrix is exp(log_scale) * entries.
struct PlaneIso {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double log_scale = 0.0;
};

struct StarIso {
  std::vector<uint32_t> perm;  // ray i maps to perm[i]
};

using Isometry = std::variant<TreeIso, PlaneIso, StarIso>;

struct SpaceModel {
  SpaceKind kind = SpaceKind::free_group_tree;
  uint32_t rank = 2;   // tree generators
  uint32_t rays = 3;   // star half-lines
  double delta = 0.0;  // 4-point hyperbolicity constant
  Point basepoint = TreePoint{};
};

SpaceModel make_tree_space(uint32_t rank);
SpaceModel make_half_plane_space(double delta);
SpaceModel make_star_space(uint32_t rays);

// Construction/validation helpers
PlaneIso make_plane_iso(double a, double b, double c, double d);  // checks det within 1e-12
Point canonical_point(SpaceKind kind, Point p);

bool point_in_space(const SpaceModel& s, const Point& p);
bool isometry_in_space(const SpaceModel& s, const Isometry& g);
bool points_equal(const SpaceModel& s, const Point& a, const Point& b, double tol = 0.0);
bool isometries_equal(const SpaceModel& s, const Isometry& a, const Isometry& b, double tol);

double distance(const SpaceModel& s, const Point& x, const Point& y);
double gromov_product(const SpaceModel& s, const Point& x, const Point& z, const Point& base);

Point apply(const SpaceModel& s, const Isometry& g, const Point& x);
Isometry compose(const SpaceModel& s, const Isometry& g, const Isometry& h);
Isometry inverse(const SpaceModel& s, const Isometry& g);
Isometry identity(const SpaceModel& s);
bool is_identity(const SpaceModel& s, const Isometry& g, double tol = 1e-12);

// d(g x0, x0), stable for long half-plane products via the log-scale form.
double displacement(const SpaceModel& s, const Isometry& g);

// cosh d(M i, i) = ||M||_F^2 / 2 for det-one M; evaluated in log space.
double plane_orbit_distance(const PlaneIso& g);

std::string point_format(const SpaceModel& s, const Point& p);
std::string isometry_format(const SpaceModel& s, const Isometry& g);

struct SamplerParams {
  uint32_t tree_word_length = 24;    // max sampled word length
  double plane_x_sigma = 3.0;        // x ~ N(0, sigma^2)
  double plane_log_y_sigma = 2.0;    // log y ~ N(0, sigma^2)
  double star_radius_range = 64.0;   // radii are dyadic in [0, range)
};

Point sample_point(const SpaceModel& s, const SamplerParams& params, Rng& rng);

// Random isometry: a reduced word on trees, a KAK-decomposed matrix on the
// half-plane, a uniform ray permutation on the star space.
Isometry sample_isometry(const SpaceModel& s, const SamplerParams& params, Rng& rng);

struct HyperbolicityReport {
  double max_violation = 0.0;  // max of min{<x,y>,<y,z>} - delta - <x,z>
  bool holds = true;
  uint64_t samples = 0;
  uint64_t seed = 0;
};

HyperbolicityReport check_hyperbolicity(const SpaceModel& s, double delta, uint64_t samples,
                                        uint64_t seed, const SamplerParams& params,
                                        unsigned workers = 1);

}  // namespace horolab
