#pragma once

#include <vector>

#include "group/measure.hpp"
#include "group/metric.hpp"

namespace horolab {

// W_alpha(mu, nu): exact optimal transport on the joint support with cost
// d_G^alpha; equals the Holder-dual definition by Kantorovich duality since
// the alpha-snowflake of a metric is a metric.
double wasserstein_alpha(const GroupMetricContext& ctx, const FiniteSupportMeasure& mu,
                         const FiniteSupportMeasure& nu, double alpha);

double wasserstein_alpha(const SpaceModel& s, const VisualConfig& vc,
                         const FiniteSupportMeasure& mu, const FiniteSupportMeasure& nu,
                         double alpha, std::span<const BordPoint> net);

struct ConvolutionWassersteinReport {
  double product_lhs = 0.0;  // W(mu1 * mu2, nu1 * nu2)
  double product_rhs = 0.0;  // W(mu1, nu1) + C^a lambda^a W(mu2, nu2)
  double product_slack = 0.0;
  std::vector<double> power_lhs;    // W(mu1^n, nu1^n), n = 1..n_max
  std::vector<double> power_rhs;    // W(mu1, nu1) * sum_i (C lambda)^{i alpha}
  std::vector<double> power_slack;
  bool certified_violation = false;
};

ConvolutionWassersteinReport convolution_wasserstein_check(
    const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu1,
    const FiniteSupportMeasure& mu2, const FiniteSupportMeasure& nu1,
    const FiniteSupportMeasure& nu2, double alpha, double lambda, uint32_t power_max,
    uint64_t support_cap, std::span<const BordPoint> net);

}  // namespace horolab
