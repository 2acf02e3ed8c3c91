#include "group/wasserstein.hpp"

#include <cmath>

#include "core/error.hpp"
#include "group/transport.hpp"

namespace horolab {

namespace {

void check_alpha(double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_alpha, "alpha must lie in (0, 1]");
}

}  // namespace

double wasserstein_alpha(const GroupMetricContext& ctx, const FiniteSupportMeasure& mu,
                         const FiniteSupportMeasure& nu, double alpha) {
  check_alpha(alpha);
  require(mu.kind == nu.kind, Errc::invalid_measure, "measures live on different spaces");
  std::vector<double> cost(mu.size() * nu.size(), 0.0);
  for (size_t i = 0; i < mu.size(); ++i)
    for (size_t j = 0; j < nu.size(); ++j)
      cost[i * nu.size() + j] = std::pow(ctx.estimate(mu.atoms[i], nu.atoms[j]).value, alpha);
  return transport_cost(mu.weights, nu.weights, cost);
}

double wasserstein_alpha(const SpaceModel& s, const VisualConfig& vc,
                         const FiniteSupportMeasure& mu, const FiniteSupportMeasure& nu,
                         double alpha, std::span<const BordPoint> net) {
  GroupMetricContext ctx(s, vc, std::vector<BordPoint>(net.begin(), net.end()));
  ctx.add_chain_points(mu.atoms);
  ctx.add_chain_points(nu.atoms);
  return wasserstein_alpha(ctx, mu, nu, alpha);
}

ConvolutionWassersteinReport convolution_wasserstein_check(
    const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu1,
    const FiniteSupportMeasure& mu2, const FiniteSupportMeasure& nu1,
    const FiniteSupportMeasure& nu2, double alpha, double lambda, uint32_t power_max,
    uint64_t support_cap, std::span<const BordPoint> net) {
  check_alpha(alpha);
  for (const auto* m : {&mu1, &mu2, &nu1, &nu2})
    require(in_group_ball(s, vc.base, *m, lambda), Errc::lambda_violation,
            "a measure is not supported in the declared lambda ball");

  GroupMetricContext ctx(s, vc, std::vector<BordPoint>(net.begin(), net.end()));

  const FiniteSupportMeasure lhs_mu = convolve(s, mu1, mu2);
  const FiniteSupportMeasure lhs_nu = convolve(s, nu1, nu2);
  for (const FiniteSupportMeasure* m : {&mu1, &mu2, &nu1, &nu2, &lhs_mu, &lhs_nu})
    ctx.add_chain_points(m->atoms);

  double c_delta = distortion_constant(s, vc);
  double factor = std::pow(c_delta, alpha) * std::pow(lambda, alpha);

  ConvolutionWassersteinReport report;
  double w11 = wasserstein_alpha(ctx, mu1, nu1, alpha);
  double w22 = wasserstein_alpha(ctx, mu2, nu2, alpha);
  report.product_lhs = wasserstein_alpha(ctx, lhs_mu, lhs_nu, alpha);
  report.product_rhs = w11 + factor * w22;
  report.product_slack = report.product_rhs - report.product_lhs;

  FiniteSupportMeasure mu_n = mu1;
  FiniteSupportMeasure nu_n = nu1;
  double geometric = 1.0;  // sum_{i<n} (C lambda)^{i alpha}
  for (uint32_t n = 1; n <= power_max; ++n) {
    if (n > 1) {
      mu_n = convolve(s, mu_n, mu1);
      nu_n = convolve(s, nu_n, nu1);
      require(mu_n.size() <= support_cap && nu_n.size() <= support_cap, Errc::support_explosion,
              "convolution power exceeded the enumeration cap");
      GroupMetricContext power_ctx(s, vc, std::vector<BordPoint>(net.begin(), net.end()));
      power_ctx.add_chain_points(mu_n.atoms);
      power_ctx.add_chain_points(nu_n.atoms);
      report.power_lhs.push_back(wasserstein_alpha(power_ctx, mu_n, nu_n, alpha));
    } else {
      report.power_lhs.push_back(w11);
    }
    report.power_rhs.push_back(w11 * geometric);
    report.power_slack.push_back(report.power_rhs.back() - report.power_lhs.back());
    geometric += std::pow(c_delta * lambda, static_cast<double>(n) * alpha);
  }

  double scale = std::max(1.0, std::abs(report.product_rhs));
  report.certified_violation = report.product_slack < -1e-9 * scale;
  for (size_t i = 0; i < report.power_slack.size(); ++i) {
    double sc = std::max(1.0, std::abs(report.power_rhs[i]));
    if (report.power_slack[i] < -1e-9 * sc) report.certified_violation = true;
  }
  return report;
}

}  // namespace horolab
