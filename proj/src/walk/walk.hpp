#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "core/stats.hpp"
#include "geom/boundary.hpp"
#include "group/measure.hpp"

namespace horolab {

struct WalkParams {
  uint32_t steps = 1000;
  uint32_t trials = 100;
  uint64_t seed = 1;
  uint32_t checkpoints = 32;  // product snapshots every ceil(steps/checkpoints)
};

struct WalkSample {
  uint64_t seed = 0;
  uint64_t trial = 0;
  uint32_t steps = 0;
  Isometry product;
  std::vector<std::pair<uint32_t, Isometry>> checkpoints;
  double displacement = 0.0;
};

// One right random walk: the product g_0 g_1 ... g_{n-1} of i.i.d. atoms drawn
// from the per-trial stream (seed, trial).
WalkSample sample_walk(const SpaceModel& s, const FiniteSupportMeasure& mu, uint32_t steps,
                       uint64_t seed, uint64_t trial, uint32_t checkpoints = 32);

std::string walk_sample_fingerprint(const SpaceModel& s, const WalkSample& w);

struct DriftEstimate {
  double mean = 0.0;        // displacement per step at the final time
  double half_width = 0.0;  // 95% CI over trials
  uint32_t steps = 0;
  uint32_t trials = 0;
  uint64_t seed = 0;
  std::vector<uint32_t> checkpoint_steps;
  std::vector<double> checkpoint_means;       // mean displacement/step at each checkpoint
  std::vector<double> checkpoint_half_widths;
  std::vector<std::pair<uint32_t, double>> subadditive_bounds;  // (m, E d(mu^m)/m)
};

DriftEstimate drift_estimate(const SpaceModel& s, const FiniteSupportMeasure& mu,
                             const WalkParams& params, std::span<const uint32_t> fekete_orders,
                             uint64_t support_cap, unsigned workers);

// Boundary representative of the walk direction: on the tree the depth-k word
// prefix extended periodically, on the half-plane the attracting fixed point.
BoundaryPoint forward_limit(const SpaceModel& s, const WalkSample& walk, uint32_t depth);

struct HmetReport {
  double plus_mean = 0.0;   // (1/n) h_probe(w^n x0), averaged over trials
  double plus_half_width = 0.0;
  double minus_mean = 0.0;  // (1/m) h_limit(w^m x0) with the trial's own limit
  double minus_half_width = 0.0;
  uint32_t eval_step = 0;   // m
  uint32_t steps = 0;       // n
  uint32_t trials = 0;
  uint32_t skipped_trials = 0;  // insufficient escape at the checkpoint
  DriftEstimate drift;
  double tolerance = 0.05;
  bool plus_consistent = false;   // |plus - drift| <= tolerance
  bool minus_consistent = false;  // |minus + drift| <= tolerance
};

// Verifies the two-level horofunction filtration: a fixed probe anchored off
// the walk's limit sees growth +drift, the walk's own forward limit sees
// -drift. The limit is read from the endpoint; evaluation happens at the
// earlier checkpoint m = eval_fraction * n where its prefix has stabilized.
HmetReport hmet_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                      const BoundaryPoint& probe, const WalkParams& params, double eval_fraction,
                      double tolerance, unsigned workers);

// Runs `trials` independent walks, invoking observe(trial, index, product) at
// each step listed in observe_steps (sorted, ending at the walk length).
void walk_scan(const SpaceModel& s, const FiniteSupportMeasure& mu,
               std::span<const uint32_t> observe_steps, uint32_t trials, uint64_t seed,
               unsigned workers,
               const std::function<void(size_t, size_t, const Isometry&)>& observe);

// Attracting eigendirection of a normalized half-plane matrix.
std::pair<double, double> dominant_direction(const PlaneIso& m);

}  // namespace horolab
