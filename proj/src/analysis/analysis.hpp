#pragma once

#include <optional>
#include <string>
#include <vector>

#include "markov/markov.hpp"
#include "walk/walk.hpp"

namespace horolab {

// Exact double sum of the drift formula: sum_g sum_xi mu(g) nu(xi) h_xi(g x0).
double furstenberg_drift(const SpaceModel& s, const FiniteSupportMeasure& mu,
                         const EmpiricalBoundaryMeasure& nu);

struct ContinuityRecord {
  std::string id;
  double wasserstein = 0.0;
  double drift_delta = 0.0;   // |l(mu) - l(mu')|
  double combined_ci = 0.0;   // CI half-widths of the two drift estimates, combined
  double ratio = 0.0;         // drift_delta / wasserstein (when included)
  bool included = false;      // excluded when W < 3 * combined CI
};

struct ContinuitySummary {
  std::vector<ContinuityRecord> records;
  double max_ratio = 0.0;
  size_t included_count = 0;
  double base_drift = 0.0;
  double base_half_width = 0.0;
};

struct WeightTilt {
  size_t up_index = 0;    // atom whose weight grows by t
  size_t down_index = 0;  // atom whose weight shrinks by t
  double t = 0.0;
};

// Empirical local Lipschitz constant of the drift over a weight-tilt family.
ContinuitySummary continuity_sweep(const SpaceModel& s, const VisualConfig& vc,
                                   const FiniteSupportMeasure& mu,
                                   std::span<const WeightTilt> tilts, double alpha,
                                   std::span<const BordPoint> net, double lambda,
                                   const WalkParams& walk, unsigned workers);

struct LdtCell {
  double epsilon = 0.0;
  uint32_t steps = 0;
  uint32_t trials = 0;
  uint32_t exceedances = 0;
  double frequency = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  bool censored = false;
};

struct RateFit {
  double epsilon = 0.0;
  std::vector<LdtCell> cells;
  double slope = 0.0;      // per-step slope of log frequency (uncensored cells)
  double intercept = 0.0;
  double r2 = 0.0;
  double k_hat = 0.0;      // -slope / (eps^2 ln b)
  size_t uncensored = 0;
};

struct LdtResult {
  double drift_reference = 0.0;  // mean displacement/step at the largest grid n
  std::vector<RateFit> displacement_fits;
  std::vector<RateFit> horofunction_fits;  // present when a probe is given
};

// Exceedance frequencies of |d(w^n x0,x0)/n - l| > eps over the n grid, with
// Wilson intervals and a log-linear decay fit per epsilon. One walk per trial
// is scanned across the whole grid.
LdtResult ldt_fit(const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu,
                  std::span<const double> epsilons, std::span<const uint32_t> n_grid,
                  uint32_t trials, uint64_t seed, const std::optional<BoundaryPoint>& probe,
                  uint32_t min_exceedances, unsigned workers);

struct BridgeReport {
  double max_lower_violation = 0.0;  // max over samples of max_i h_i - d (expect <= tol)
  double max_upper_violation = 0.0;  // max over samples of d - max_i h_i - K
  double constant = 0.0;
  double tolerance = 0.0;
  uint32_t samples = 0;
  bool holds = false;
};

// Lemma-level check that max(h_xi, h_eta) brackets the displacement along
// sampled walks, within K = 2<xi,eta> + 4 delta (tolerance 2 delta + 1e-6 on
// the half-plane, exact elsewhere).
BridgeReport comparison_bridge_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                     const BoundaryPoint& xi, const BoundaryPoint& eta,
                                     const WalkParams& walk, unsigned workers);

}  // namespace horolab
