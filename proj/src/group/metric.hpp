#pragma once

#include <span>
#include <vector>

#include "geom/boundary.hpp"

namespace horolab {

struct GroupMetricEstimate {
  double value = 0.0;
  size_t net_size = 0;
  std::vector<double> refinement;  // running max over net prefixes; nondecreasing
};

// Net-restricted estimate of the isometry-group metric
//   d_G(g1,g2) = max { sup_xi D_b(g1 xi, g2 xi), sup_xi D_b(g1^-1 xi, g2^-1 xi) }.
// The sup is replaced by a max over the declared probe net; chain upper bounds
// route through the probes, their orbit images and any extra chain points, so
// estimates computed within one context satisfy the triangle inequality.
class GroupMetricContext {
 public:
  GroupMetricContext(const SpaceModel& space, VisualConfig vc, std::vector<BordPoint> probes);

  // Extra chain points shared by every subsequent estimate (e.g. the orbit of
  // every isometry of a measure pair, so costs form a consistent metric).
  void add_chain_points(std::span<const Isometry> isometries);

  GroupMetricEstimate estimate(const Isometry& g1, const Isometry& g2) const;

  const SpaceModel& space() const { return space_; }
  const VisualConfig& visual() const { return vc_; }
  std::span<const BordPoint> probes() const { return probes_; }

 private:
  double pair_upper(const BordPoint& x, const BordPoint& y) const;

  const SpaceModel& space_;
  VisualConfig vc_;
  std::vector<BordPoint> probes_;
  std::vector<BordPoint> chain_;
};

GroupMetricEstimate group_metric_estimate(const SpaceModel& s, const VisualConfig& vc,
                                          const Isometry& g1, const Isometry& g2,
                                          std::span<const BordPoint> net);

}  // namespace horolab
