#include "group/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace horolab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

GroupMetricContext::GroupMetricContext(const SpaceModel& space, VisualConfig vc,
                                       std::vector<BordPoint> probes)
    : space_(space), vc_(vc), probes_(std::move(probes)) {
  require(!probes_.empty(), Errc::invalid_net, "group metric needs a nonempty probe net");
  chain_ = probes_;
}

void GroupMetricContext::add_chain_points(std::span<const Isometry> isometries) {
  for (const auto& g : isometries) {
    Isometry gi = inverse(space_, g);
    for (const auto& p : probes_) {
      chain_.push_back(bord_action(space_, g, p));
      chain_.push_back(bord_action(space_, gi, p));
    }
  }
}

double GroupMetricContext::pair_upper(const BordPoint& x, const BordPoint& y) const {
  if (bord_points_equal(space_, x, y)) return 0.0;
  double rho = visual_quasimetric(space_, vc_, x, y, space_.basepoint);
  double upper = rho;
  if (space_.delta > 0.0 && !chain_.empty()) {
    // Dijkstra over the chain set; on 0-hyperbolic spaces rho already
    // satisfies the triangle inequality, so the direct edge is optimal.
    std::vector<BordPoint> pts = chain_;
    pts.push_back(x);
    pts.push_back(y);
    size_t n = pts.size();
    size_t src = n - 2, dst = n - 1;
    std::vector<double> dist(n, kInf);
    std::vector<bool> done(n, false);
    dist[src] = 0.0;
    for (size_t round = 0; round < n; ++round) {
      size_t u = n;
      double best = kInf;
      for (size_t i = 0; i < n; ++i)
        if (!done[i] && dist[i] < best) {
          best = dist[i];
          u = i;
        }
      if (u == n || u == dst) break;
      done[u] = true;
      for (size_t v = 0; v < n; ++v) {
        if (done[v]) continue;
        double w = visual_quasimetric(space_, vc_, pts[u], pts[v], space_.basepoint);
        if (dist[u] + w < dist[v]) dist[v] = dist[u] + w;
      }
    }
    upper = std::min(upper, dist[dst]);
  }
  if (!is_boundary(x) && !is_boundary(y)) {
    double d = std::log(vc_.base) * distance(space_, std::get<Point>(x), std::get<Point>(y));
    upper = std::min(upper, d);
  }
  return upper;
}

GroupMetricEstimate GroupMetricContext::estimate(const Isometry& g1, const Isometry& g2) const {
  GroupMetricEstimate est;
  est.net_size = probes_.size();
  est.refinement.reserve(probes_.size());
  Isometry g1i = inverse(space_, g1);
  Isometry g2i = inverse(space_, g2);
  double running = 0.0;
  for (const auto& p : probes_) {
    double forward = pair_upper(bord_action(space_, g1, p), bord_action(space_, g2, p));
    double backward = pair_upper(bord_action(space_, g1i, p), bord_action(space_, g2i, p));
    running = std::max(running, std::max(forward, backward));
    est.refinement.push_back(running);
  }
  est.value = running;
  return est;
}

GroupMetricEstimate group_metric_estimate(const SpaceModel& s, const VisualConfig& vc,
                                          const Isometry& g1, const Isometry& g2,
                                          std::span<const BordPoint> net) {
  GroupMetricContext ctx(s, vc, std::vector<BordPoint>(net.begin(), net.end()));
  std::vector<Isometry> gs{g1, g2};
  ctx.add_chain_points(gs);
  return ctx.estimate(g1, g2);
}

}  // namespace horolab
