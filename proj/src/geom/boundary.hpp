#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geom/space.hpp"

namespace horolab {

struct PlaneEnd {
  double at = 0.0;
  bool at_infinity = false;
  bool operator==(const PlaneEnd&) const = default;
};

struct StarEnd {
  uint32_t ray = 0;
  bool operator==(const StarEnd&) const = default;
};

using BoundaryPoint = std::variant<TreeEnd, PlaneEnd, StarEnd>;

// A point of the bordification X u dX.
using BordPoint = std::variant<Point, BoundaryPoint>;

inline BordPoint bord(Point p) { return BordPoint{std::move(p)}; }
inline BordPoint bord(BoundaryPoint p) { return BordPoint{std::move(p)}; }
inline bool is_boundary(const BordPoint& p) { return p.index() == 1; }

bool boundary_point_in_space(const SpaceModel& s, const BoundaryPoint& p);
bool bord_points_equal(const SpaceModel& s, const BordPoint& a, const BordPoint& b);
std::string bord_point_format(const SpaceModel& s, const BordPoint& p);

// Exact dedup key (canonical words; raw bit patterns for coordinates).
std::string bord_point_key(const SpaceModel& s, const BordPoint& p);

// Visual base b with 1 < b <= 2^(1/delta); defaults to min(2, 2^(1/delta)).
struct VisualConfig {
  double base = 2.0;
};

VisualConfig make_visual_config(const SpaceModel& s);
VisualConfig make_visual_config(const SpaceModel& s, double base);

// Gromov product extended to the bordification, with the exact closed form of
// each model space; +infinity exactly when both arguments are the same
// boundary point.
double extended_gromov_product(const SpaceModel& s, const BordPoint& x, const BordPoint& y,
                               const Point& base);

// rho_b = b^-<x,y>, in [0,1]; 0 iff equal boundary points.
double visual_quasimetric(const SpaceModel& s, const VisualConfig& vc, const BordPoint& x,
                          const BordPoint& y, const Point& base);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};

// Frink chain metric bracket: the upper end is the shortest chain through the
// declared net, the lower end is rho_b/4 (a certified bound below the true
// chain infimum).
Bracket chain_metric_bracket(const SpaceModel& s, const VisualConfig& vc, const BordPoint& x,
                             const BordPoint& y, std::span<const BordPoint> net);

// Bordification metric D_b = min(log(b) d, chain metric), bracket-wise; the
// distance branch is +infinity when either point is on the boundary.
Bracket bordification_metric_bracket(const SpaceModel& s, const VisualConfig& vc,
                                     const BordPoint& x, const BordPoint& y,
                                     std::span<const BordPoint> net);

// All-pairs chain upper bounds over one point set (shared by the group metric
// and ratio checks).
std::vector<std::vector<double>> chain_upper_matrix(const SpaceModel& s, const VisualConfig& vc,
                                                    std::span<const BordPoint> points);

struct Horofunction {
  BordPoint anchor;
};

// h_x(z) = d(z,x) - d(x,x0) for interior anchors; boundary anchors use the
// Busemann form d(z,x0) - 2<z,xi>_{x0}, exact on the model spaces.
double horofunction_eval(const SpaceModel& s, const Horofunction& h, const Point& z);

BoundaryPoint boundary_action(const SpaceModel& s, const Isometry& g, const BoundaryPoint& xi);
BordPoint bord_action(const SpaceModel& s, const Isometry& g, const BordPoint& p);
Horofunction horo_action(const SpaceModel& s, const Isometry& g, const Horofunction& h);

struct ComparisonReport {
  double lower_slack = 0.0;  // d(g x0, x0) - max_i h_i(g x0)      (>= 0 expected)
  double upper_slack = 0.0;  // max_i h_i(g x0) + K - d(g x0, x0)  (>= 0 expected)
  double constant = 0.0;     // K = 2 <xi,eta>_{x0} + 4 delta
};

ComparisonReport comparison_bound_check(const SpaceModel& s, const BoundaryPoint& xi,
                                        const BoundaryPoint& eta, const Isometry& g);

struct VisualRatioReport {
  double ratio_lower = 0.0;
  double ratio_upper = 0.0;
  double bound_lower = 0.0;  // b^{-(h_xi + h_eta)/2} / C(delta)
  double bound_upper = 0.0;  // C(delta) b^{-(h_xi + h_eta)/2}
  bool certified_violation = false;
};

// Checks the distortion bounds of the chain metric under an isometry with
// C(delta) = 4 b^{6 delta}; a violation is flagged only when the certified
// bracket lies strictly outside the bounds.
VisualRatioReport visual_ratio_check(const SpaceModel& s, const VisualConfig& vc,
                                     const Isometry& g, const BoundaryPoint& xi,
                                     const BoundaryPoint& eta, std::span<const BordPoint> net);

double distortion_constant(const SpaceModel& s, const VisualConfig& vc);  // C(delta)

// Stable h_xi(g x0) for boundary anchors and long half-plane products.
double horofunction_at_orbit(const SpaceModel& s, const BoundaryPoint& xi, const Isometry& g);

BoundaryPoint sample_boundary_point(const SpaceModel& s, const SamplerParams& params, Rng& rng);

std::optional<BoundaryPoint> boundary_point_parse(const SpaceModel& s, const std::string& text);

}  // namespace horolab
