#include "analysis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "group/wasserstein.hpp"

namespace horolab {

double furstenberg_drift(const SpaceModel& s, const FiniteSupportMeasure& mu,
                         const EmpiricalBoundaryMeasure& nu) {
  validate_measure(s, mu);
  require(!nu.atoms.empty(), Errc::invalid_measure, "empty boundary measure");
  double total = 0.0;
  for (size_t i = 0; i < mu.atoms.size(); ++i) {
    double inner = 0.0;
    for (size_t j = 0; j < nu.atoms.size(); ++j)
      inner += nu.weights[j] * horofunction_at_orbit(s, nu.atoms[j], mu.atoms[i]);
    total += mu.weights[i] * inner;
  }
  return total;
}

ContinuitySummary continuity_sweep(const SpaceModel& s, const VisualConfig& vc,
                                   const FiniteSupportMeasure& mu,
                                   std::span<const WeightTilt> tilts, double alpha,
                                   std::span<const BordPoint> net, double lambda,
                                   const WalkParams& walk, unsigned workers) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_alpha, "alpha must lie in (0,1]");
  require(in_group_ball(s, vc.base, mu, lambda), Errc::lambda_violation,
          "base measure is not lambda-supported");

  GroupMetricContext ctx(s, vc, std::vector<BordPoint>(net.begin(), net.end()));
  ctx.add_chain_points(mu.atoms);

  ContinuitySummary summary;
  DriftEstimate base = drift_estimate(s, mu, walk, {}, 0, workers);
  summary.base_drift = base.mean;
  summary.base_half_width = base.half_width;
  require(base.mean - base.half_width > 0.0, Errc::insufficient_escape,
          "base drift confidence interval does not exclude zero");

  for (size_t k = 0; k < tilts.size(); ++k) {
    const WeightTilt& tilt = tilts[k];
    require(tilt.up_index < mu.size() && tilt.down_index < mu.size() &&
                tilt.up_index != tilt.down_index,
            Errc::invalid_config, "tilt indices out of range");
    require(tilt.t < mu.weights[tilt.down_index], Errc::invalid_config,
            "tilt exceeds the donor weight");

    std::vector<double> weights = mu.weights;
    weights[tilt.up_index] += tilt.t;
    weights[tilt.down_index] -= tilt.t;
    FiniteSupportMeasure nudged = make_measure(s, mu.atoms, weights);
    require(in_group_ball(s, vc.base, nudged, lambda), Errc::lambda_violation,
            "tilted measure leaves the lambda ball");

    ContinuityRecord rec;
    {
      std::ostringstream os;
      os << "tilt[" << tilt.up_index << "<-" << tilt.down_index << "]t=" << tilt.t;
      rec.id = os.str();
    }
    rec.wasserstein = wasserstein_alpha(ctx, mu, nudged, alpha);

    WalkParams perturbed = walk;
    perturbed.seed = walk.seed + 1 + k;  // independent trials per perturbation
    DriftEstimate d = drift_estimate(s, nudged, perturbed, {}, 0, workers);
    rec.drift_delta = std::abs(d.mean - base.mean);
    rec.combined_ci = std::hypot(d.half_width, base.half_width);
    rec.included = rec.wasserstein >= 3.0 * rec.combined_ci && rec.wasserstein > 0.0;
    if (rec.included) {
      rec.ratio = rec.drift_delta / rec.wasserstein;
      summary.max_ratio = std::max(summary.max_ratio, rec.ratio);
      ++summary.included_count;
    }
    summary.records.push_back(std::move(rec));
  }
  return summary;
}

namespace {

RateFit fit_cells(double epsilon, std::vector<LdtCell> cells, double visual_base) {
  RateFit fit;
  fit.epsilon = epsilon;
  std::vector<double> xs, ys;
  for (const auto& cell : cells) {
    if (cell.censored) continue;
    xs.push_back(static_cast<double>(cell.steps));
    ys.push_back(std::log(cell.frequency));
  }
  fit.uncensored = xs.size();
  if (xs.size() >= 2) {
    LineFit line = least_squares(xs, ys);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.r2 = line.r2;
    fit.k_hat = -line.slope / (epsilon * epsilon * std::log(visual_base));
  }
  fit.cells = std::move(cells);
  return fit;
}

}  // namespace

LdtResult ldt_fit(const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu,
                  std::span<const double> epsilons, std::span<const uint32_t> n_grid,
                  uint32_t trials, uint64_t seed, const std::optional<BoundaryPoint>& probe,
                  uint32_t min_exceedances, unsigned workers) {
  require(!epsilons.empty(), Errc::invalid_config, "need at least one epsilon");
  require(!n_grid.empty(), Errc::invalid_config, "need a nonempty n grid");
  require(std::is_sorted(n_grid.begin(), n_grid.end()), Errc::invalid_config,
          "n grid must be increasing");
  require(trials >= 2, Errc::invalid_config, "need at least two trials");
  for (double eps : epsilons)
    require(eps > 0.0, Errc::invalid_config, "epsilon must be positive");

  const size_t grid = n_grid.size();
  // displacement/step (and optionally horofunction value/step) per trial, per grid point
  std::vector<std::vector<double>> disp(trials, std::vector<double>(grid, 0.0));
  std::vector<std::vector<double>> horo;
  if (probe) horo.assign(trials, std::vector<double>(grid, 0.0));

  walk_scan(s, mu, n_grid, trials, seed, workers,
            [&](size_t trial, size_t index, const Isometry& g) {
              double n = static_cast<double>(n_grid[index]);
              disp[trial][index] = displacement(s, g) / n;
              if (probe) horo[trial][index] = horofunction_at_orbit(s, *probe, g) / n;
            });

  LdtResult result;
  {
    double total = 0.0;
    for (uint32_t t = 0; t < trials; ++t) total += disp[t][grid - 1];
    result.drift_reference = total / static_cast<double>(trials);
  }

  auto build_fits = [&](const std::vector<std::vector<double>>& values,
                        double reference) {
    std::vector<RateFit> fits;
    for (double eps : epsilons) {
      std::vector<LdtCell> cells;
      for (size_t gi = 0; gi < grid; ++gi) {
        LdtCell cell;
        cell.epsilon = eps;
        cell.steps = n_grid[gi];
        cell.trials = trials;
        for (uint32_t t = 0; t < trials; ++t)
          if (std::abs(values[t][gi] - reference) > eps) ++cell.exceedances;
        cell.frequency = static_cast<double>(cell.exceedances) / static_cast<double>(trials);
        WilsonInterval w = wilson_interval(cell.exceedances, trials);
        cell.wilson_lo = w.lo;
        cell.wilson_hi = w.hi;
        cell.censored = cell.exceedances < min_exceedances;
        cells.push_back(cell);
      }
      fits.push_back(fit_cells(eps, std::move(cells), vc.base));
    }
    return fits;
  };

  result.displacement_fits = build_fits(disp, result.drift_reference);
  if (probe) {
    double total = 0.0;
    for (uint32_t t = 0; t < trials; ++t) total += horo[t][grid - 1];
    double href = total / static_cast<double>(trials);
    result.horofunction_fits = build_fits(horo, href);
  }

  bool any_usable = false;
  for (const auto& fit : result.displacement_fits)
    for (const auto& cell : fit.cells)
      if (!cell.censored) any_usable = true;
  require(any_usable, Errc::insufficient_trials,
          "every cell is censored; increase trials or shrink epsilon");
  return result;
}

BridgeReport comparison_bridge_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                     const BoundaryPoint& xi, const BoundaryPoint& eta,
                                     const WalkParams& walk, unsigned workers) {
  require(!bord_points_equal(s, bord(xi), bord(eta)), Errc::invalid_pair,
          "bridge check needs distinct boundary points");
  double product = extended_gromov_product(s, bord(xi), bord(eta), s.basepoint);
  BridgeReport report;
  report.constant = 2.0 * product + 4.0 * s.delta;
  report.tolerance = s.kind == SpaceKind::upper_half_plane ? 2.0 * s.delta + 1e-6 : 1e-9;
  report.samples = walk.trials;

  std::vector<double> lower(walk.trials, 0.0), upper(walk.trials, 0.0);
  std::vector<uint32_t> steps{walk.steps};
  walk_scan(s, mu, steps, walk.trials, walk.seed, workers,
            [&](size_t trial, size_t, const Isometry& g) {
              double d = displacement(s, g);
              double hx = horofunction_at_orbit(s, xi, g);
              double he = horofunction_at_orbit(s, eta, g);
              double m = std::max(hx, he);
              lower[trial] = m - d;                      // expect <= 0
              upper[trial] = d - m - report.constant;    // expect <= 0
            });
  report.max_lower_violation = *std::max_element(lower.begin(), lower.end());
  report.max_upper_violation = *std::max_element(upper.begin(), upper.end());
  report.holds = report.max_lower_violation <= report.tolerance &&
                 report.max_upper_violation <= report.tolerance;
  return report;
}

}  // namespace horolab
