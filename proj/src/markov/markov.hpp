#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geom/boundary.hpp"
#include "group/measure.hpp"

namespace horolab {

struct EmpiricalBoundaryMeasure {
  std::vector<BoundaryPoint> atoms;
  std::vector<double> weights;
  struct Provenance {
    uint32_t steps = 0;
    uint32_t trials = 0;
    uint64_t seed = 0;
    std::string start;
  } provenance;
};

// Observables on the boundary used by the Markov operator and the
// stationarity diagnostics.
struct BoundaryObservable {
  enum class Kind { constant, visual_to_ref, horo_at_point };
  Kind kind = Kind::constant;
  double value = 1.0;       // constant
  BordPoint ref;            // visual_to_ref: b^{-alpha <xi, ref>}
  double alpha = 1.0;       // visual_to_ref exponent
  Point at;                 // horo_at_point: xi -> h_xi(at)
  std::string label;

  double eval(const SpaceModel& s, const VisualConfig& vc, const BoundaryPoint& xi) const;
  // Holder constant estimate max |f(xi)-f(eta)| / upper^alpha over a pair net.
  double holder_estimate(const SpaceModel& s, const VisualConfig& vc,
                         std::span<const std::pair<BoundaryPoint, BoundaryPoint>> pairs,
                         double holder_alpha) const;
};

BoundaryObservable constant_observable(double value);
BoundaryObservable visual_observable(BordPoint ref, double alpha, std::string label);
BoundaryObservable horo_observable(Point at, std::string label);

// (Q_mu f)(xi) = sum_g mu(g) f(g^-1 xi); iterating matches Q_{mu^n}.
double markov_apply(const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu,
                    const BoundaryObservable& f, const BoundaryPoint& xi);

EmpiricalBoundaryMeasure stationary_estimate(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                             uint32_t steps, uint32_t trials,
                                             const BoundaryPoint& start, uint64_t seed,
                                             unsigned workers);

struct DiscrepancyReport {
  double value = 0.0;
  double bias_bound = 0.0;  // truncation or binning slack on top of the value
  std::string method;
};

// Optimal-transport discrepancy between empirical boundary measures with cost
// min(1, rho_b)^alpha (exact on trees through the prefix trie; binned with
// shared-mass cancellation on the half-plane circle).
DiscrepancyReport stationary_discrepancy(const SpaceModel& s, const VisualConfig& vc,
                                         const EmpiricalBoundaryMeasure& a,
                                         const EmpiricalBoundaryMeasure& b, double alpha,
                                         uint32_t plane_bins = 1024);

// max_f |int Q_mu f - f dnu| over the observable battery.
double stationarity_residual(const SpaceModel& s, const VisualConfig& vc,
                             const FiniteSupportMeasure& mu, const EmpiricalBoundaryMeasure& nu,
                             std::span<const BoundaryObservable> battery);

using BoundaryPairNet = std::vector<std::pair<BoundaryPoint, BoundaryPoint>>;

struct KAlphaEstimate {
  double value = 0.0;           // matched upper/upper ratios
  double certified_low = 0.0;   // lower/upper
  double certified_high = 0.0;  // upper/lower
  bool exact = true;            // enumeration vs Monte Carlo expectation
  std::vector<double> per_pair;
};

// Average Holder constant k_alpha^n over the declared pair net.
KAlphaEstimate k_alpha_estimate(const SpaceModel& s, const VisualConfig& vc,
                                const FiniteSupportMeasure& mu, uint32_t n, double alpha,
                                const BoundaryPairNet& pairs, uint32_t mc_samples, uint64_t seed,
                                uint64_t support_cap);

struct SubmultiplicativityReport {
  double k_mn = 0.0;
  double k_m = 0.0;  // over the closure of the pair net under supp mu^n
  double k_n = 0.0;
  double slack = 0.0;  // k_m * k_n - k_mn, expected >= 0
  bool holds = false;
};

SubmultiplicativityReport submultiplicativity_check(const SpaceModel& s, const VisualConfig& vc,
                                                    const FiniteSupportMeasure& mu, double alpha,
                                                    uint32_t m, uint32_t n,
                                                    const BoundaryPairNet& pairs,
                                                    uint64_t support_cap);

// C(delta)^alpha * max over the horofunction net of E_{mu^n} b^{-alpha h(g x0)}.
double contraction_upper_bound(const SpaceModel& s, const VisualConfig& vc,
                               const FiniteSupportMeasure& mu, uint32_t n, double alpha,
                               std::span<const Horofunction> net, uint64_t support_cap,
                               uint32_t mc_samples, uint64_t seed, unsigned workers,
                               bool* exact = nullptr);

struct ContractionCell {
  double alpha = 0.0;
  uint32_t n = 0;
  double value = 0.0;
  bool exact = true;
};

struct ContractionSearch {
  std::vector<ContractionCell> cells;
  std::optional<ContractionCell> first_contracting;  // value < 1
};

ContractionSearch contraction_search(const SpaceModel& s, const VisualConfig& vc,
                                     const FiniteSupportMeasure& mu, uint32_t alpha_levels,
                                     uint32_t n_max, std::span<const Horofunction> net,
                                     uint64_t support_cap, uint32_t mc_samples, uint64_t seed,
                                     unsigned workers);

struct IrreducibilityReport {
  bool fixed_found = false;
  std::string witness;  // description of a fixed horofunction, when found
  size_t candidates_tested = 0;
};

// Sound "not irreducible" detector: searches declared candidates plus the
// structural ones (common fixed ends of all atoms, common matrix fixed
// points) for a horofunction fixed by every atom.
IrreducibilityReport irreducibility_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                          std::span<const Horofunction> candidates);

}  // namespace horolab
