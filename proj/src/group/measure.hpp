#pragma once

#include <cstdint>
#include <vector>

#include "geom/space.hpp"

namespace horolab {

// A finitely supported probability measure on the isometry group.
struct FiniteSupportMeasure {
  SpaceKind kind = SpaceKind::free_group_tree;
  std::vector<Isometry> atoms;
  std::vector<double> weights;

  size_t size() const { return atoms.size(); }
};

// Distinct-atom merge tolerance for half-plane matrices.
inline constexpr double kAtomMergeTol = 1e-9;

FiniteSupportMeasure make_measure(const SpaceModel& s, std::vector<Isometry> atoms,
                                  std::vector<double> weights);

void validate_measure(const SpaceModel& s, const FiniteSupportMeasure& mu);

FiniteSupportMeasure dirac(const SpaceModel& s, Isometry g);

// b^{d(g x0, x0)} < lambda for every atom.
bool in_group_ball(const SpaceModel& s, double visual_base, const FiniteSupportMeasure& mu,
                   double lambda);

FiniteSupportMeasure convolve(const SpaceModel& s, const FiniteSupportMeasure& mu,
                              const FiniteSupportMeasure& nu);

// n-fold convolution; throws SupportExplosion when the merged support passes cap.
FiniteSupportMeasure convolution_power(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                       uint32_t n, uint64_t support_cap);

// Mean displacement of one step: int d(g x0, x0) dmu(g).
double expected_displacement(const SpaceModel& s, const FiniteSupportMeasure& mu);

std::vector<double> cumulative_weights(const FiniteSupportMeasure& mu);

}  // namespace horolab
