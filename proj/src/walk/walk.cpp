#include "walk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace horolab {

namespace {

uint32_t checkpoint_stride(uint32_t steps, uint32_t checkpoints) {
  if (checkpoints == 0) checkpoints = 1;
  return std::max<uint32_t>(1, (steps + checkpoints - 1) / checkpoints);
}

// Accumulates a right product of atoms; tree words grow in place so a step
// costs O(atom length) instead of copying the whole product.
class ProductAccumulator {
 public:
  explicit ProductAccumulator(const SpaceModel& s) : space_(s), product_(identity(s)) {
    tree_ = std::holds_alternative<TreeIso>(product_);
  }

  void push(const Isometry& atom) {
    if (tree_) {
      Word& word = std::get<TreeIso>(product_).word;
      for (int32_t letter : std::get<TreeIso>(atom).word) word_push(word, letter);
      return;
    }
    product_ = compose(space_, product_, atom);
  }

  const Isometry& current() const { return product_; }

  double displacement_now() const { return displacement(space_, product_); }

 private:
  const SpaceModel& space_;
  Isometry product_;
  bool tree_ = false;
};

}  // namespace

WalkSample sample_walk(const SpaceModel& s, const FiniteSupportMeasure& mu, uint32_t steps,
                       uint64_t seed, uint64_t trial, uint32_t checkpoints) {
  validate_measure(s, mu);
  Rng rng = Rng::stream(seed, trial);
  auto cumulative = cumulative_weights(mu);

  WalkSample w;
  w.seed = seed;
  w.trial = trial;
  w.steps = steps;
  uint32_t stride = checkpoint_stride(steps, checkpoints);
  ProductAccumulator acc(s);
  for (uint32_t k = 1; k <= steps; ++k) {
    size_t pick = rng.categorical(cumulative);
    acc.push(mu.atoms[pick]);
    if (k % stride == 0 || k == steps) w.checkpoints.emplace_back(k, acc.current());
  }
  w.product = acc.current();
  w.displacement = displacement(s, w.product);
  return w;
}

std::string walk_sample_fingerprint(const SpaceModel& s, const WalkSample& w) {
  std::ostringstream os;
  os.precision(17);
  os << w.seed << "/" << w.trial << "/" << w.steps << ":" << isometry_format(s, w.product)
     << ":" << w.displacement;
  for (const auto& [step, g] : w.checkpoints) os << ";" << step << "=" << isometry_format(s, g);
  return os.str();
}

DriftEstimate drift_estimate(const SpaceModel& s, const FiniteSupportMeasure& mu,
                             const WalkParams& params, std::span<const uint32_t> fekete_orders,
                             uint64_t support_cap, unsigned workers) {
  require(params.steps >= 1, Errc::invalid_config, "drift needs at least one step");
  require(params.trials >= 2, Errc::invalid_config, "drift needs at least two trials");
  validate_measure(s, mu);

  uint32_t stride = checkpoint_stride(params.steps, params.checkpoints);
  std::vector<uint32_t> check_steps;
  for (uint32_t k = stride; k < params.steps; k += stride) check_steps.push_back(k);
  check_steps.push_back(params.steps);

  std::vector<std::vector<double>> per_trial(params.trials);
  walk_scan(s, mu, check_steps, params.trials, params.seed, workers,
            [&](size_t trial, size_t index, const Isometry& g) {
              auto& row = per_trial[trial];
              if (row.empty()) row.resize(check_steps.size(), 0.0);
              row[index] = displacement(s, g);
            });

  DriftEstimate est;
  est.steps = params.steps;
  est.trials = params.trials;
  est.seed = params.seed;
  est.checkpoint_steps = check_steps;
  std::vector<double> column(params.trials);
  for (size_t c = 0; c < check_steps.size(); ++c) {
    for (size_t t = 0; t < params.trials; ++t)
      column[t] = per_trial[t][c] / static_cast<double>(check_steps[c]);
    MeanCi ci = mean_ci(column);
    est.checkpoint_means.push_back(ci.mean);
    est.checkpoint_half_widths.push_back(ci.half_width);
  }
  est.mean = est.checkpoint_means.back();
  est.half_width = est.checkpoint_half_widths.back();

  for (uint32_t m : fekete_orders) {
    if (m == 0) continue;
    double projected = std::pow(static_cast<double>(mu.size()), static_cast<double>(m));
    if (projected > static_cast<double>(support_cap) * 8.0) break;
    try {
      FiniteSupportMeasure power = convolution_power(s, mu, m, support_cap);
      est.subadditive_bounds.emplace_back(m, expected_displacement(s, power) /
                                                 static_cast<double>(m));
    } catch (const Error& e) {
      if (e.code() != Errc::support_explosion) throw;
      break;
    }
  }
  return est;
}

BoundaryPoint forward_limit(const SpaceModel& s, const WalkSample& walk, uint32_t depth) {
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      const Word& w = std::get<TreeIso>(walk.product).word;
      require(depth >= 1 && w.size() >= depth, Errc::insufficient_escape,
              "walk displacement is below the requested depth");
      Word pre(w.begin(), w.begin() + static_cast<long>(depth));
      Word per{pre.back()};
      return *make_tree_end(std::move(pre), std::move(per));
    }
    case SpaceKind::upper_half_plane: {
      const auto& m = std::get<PlaneIso>(walk.product);
      require(walk.displacement > 0.0, Errc::insufficient_escape,
              "walk has not escaped the basepoint");
      double log_trace = std::log(std::abs(m.a + m.d)) + m.log_scale;
      if (log_trace > std::log(2.0) + 1e-12) {
        // attracting fixed point: the root of c x^2 + (d - a) x - b with the
        // larger |c x + d| (the eigenvalue of larger modulus)
        if (std::abs(m.c) > 1e-300) {
          double disc = (m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c;
          disc = std::max(disc, 0.0);
          double r = std::sqrt(disc);
          double x1 = ((m.a - m.d) + r) / (2.0 * m.c);
          double x2 = ((m.a - m.d) - r) / (2.0 * m.c);
          double ev1 = std::abs(m.c * x1 + m.d);
          double ev2 = std::abs(m.c * x2 + m.d);
          return PlaneEnd{ev1 >= ev2 ? x1 : x2, false};
        }
        // upper triangular: fixed points are infinity and b/(d-a)
        if (std::abs(m.a) >= std::abs(m.d)) return PlaneEnd{0.0, true};
        return PlaneEnd{m.b / (m.d - m.a), false};
      }
      // not certifiably hyperbolic: take the boundary point below the orbit
      double denom = m.c * m.c + m.d * m.d;
      if (denom <= 1e-300) return PlaneEnd{0.0, true};
      return PlaneEnd{(m.b * m.d + m.a * m.c) / denom, false};
    }
    case SpaceKind::star:
      fail(Errc::invalid_point, "star-space walks have no forward limit");
  }
  fail(Errc::invalid_point, "unsupported space");
}

std::pair<double, double> dominant_direction(const PlaneIso& m) {
  double vx = 0.6401843996644799, vy = 0.7682212798426174;  // generic direction
  for (int it = 0; it < 8; ++it) {
    double wx = m.a * vx + m.b * vy;
    double wy = m.c * vx + m.d * vy;
    double norm = std::hypot(wx, wy);
    if (norm < 1e-12) {  // started near the contracting direction
      double tmp = vx;
      vx = -vy;
      vy = tmp;
      continue;
    }
    vx = wx / norm;
    vy = wy / norm;
  }
  return {vx, vy};
}

void walk_scan(const SpaceModel& s, const FiniteSupportMeasure& mu,
               std::span<const uint32_t> observe_steps, uint32_t trials, uint64_t seed,
               unsigned workers,
               const std::function<void(size_t, size_t, const Isometry&)>& observe) {
  validate_measure(s, mu);
  require(!observe_steps.empty(), Errc::invalid_config, "no observation steps");
  std::vector<uint32_t> steps(observe_steps.begin(), observe_steps.end());
  require(std::is_sorted(steps.begin(), steps.end()), Errc::invalid_config,
          "observation steps must be sorted");
  uint32_t total = steps.back();

  run_indexed(trials, workers, [&](size_t trial) {
    Rng rng = Rng::stream(seed, trial);
    auto cumulative = cumulative_weights(mu);
    ProductAccumulator acc(s);
    size_t next_obs = 0;
    for (uint32_t k = 1; k <= total && next_obs < steps.size(); ++k) {
      size_t pick = rng.categorical(cumulative);
      acc.push(mu.atoms[pick]);
      while (next_obs < steps.size() && steps[next_obs] == k) {
        observe(trial, next_obs, acc.current());
        ++next_obs;
      }
    }
  });
}

HmetReport hmet_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                      const BoundaryPoint& probe, const WalkParams& params, double eval_fraction,
                      double tolerance, unsigned workers) {
  require(s.kind != SpaceKind::star, Errc::invalid_point,
          "star-space walks are excluded from drift experiments");
  require(eval_fraction > 0.0 && eval_fraction < 1.0, Errc::invalid_config,
          "eval fraction must lie in (0,1)");
  require(boundary_point_in_space(s, probe), Errc::invalid_point, "probe outside the space");

  uint32_t n = params.steps;
  uint32_t m = std::max<uint32_t>(1, static_cast<uint32_t>(eval_fraction * n));

  struct TrialOut {
    double plus = 0.0;
    double minus = 0.0;
    double disp = 0.0;
    bool ok = false;
  };
  std::vector<TrialOut> out(params.trials);

  run_indexed(params.trials, workers, [&](size_t trial) {
    Rng rng = Rng::stream(params.seed, trial);
    auto cumulative = cumulative_weights(mu);
    ProductAccumulator prefix_acc(s);
    for (uint32_t k = 0; k < m; ++k) prefix_acc.push(mu.atoms[rng.categorical(cumulative)]);
    Isometry prefix = prefix_acc.current();
    ProductAccumulator suffix_acc(s);
    for (uint32_t k = m; k < n; ++k) suffix_acc.push(mu.atoms[rng.categorical(cumulative)]);
    Isometry suffix = suffix_acc.current();
    Isometry full = compose(s, prefix, suffix);

    TrialOut& t = out[trial];
    t.disp = displacement(s, full) / static_cast<double>(n);
    t.plus = horofunction_at_orbit(s, probe, full) / static_cast<double>(n);

    if (s.kind == SpaceKind::free_group_tree) {
      const Word& endpoint = std::get<TreeIso>(full).word;
      if (endpoint.empty()) return;  // skipped, no escape
      // limit word read from the endpoint; h evaluated at the checkpoint
      WalkSample shell;
      shell.product = full;
      shell.displacement = displacement(s, full);
      BoundaryPoint limit = forward_limit(s, shell, static_cast<uint32_t>(endpoint.size()));
      t.minus = horofunction_at_orbit(s, limit, prefix) / static_cast<double>(m);
      t.ok = true;
    } else {
      // anchor at the attracting direction of the full product, evaluated at
      // the prefix: ||prefix^-1 v|| via the eigendirection of suffix*prefix.
      const auto& pm = std::get<PlaneIso>(prefix);
      PlaneIso rotated = std::get<PlaneIso>(compose(s, suffix, prefix));
      auto [ux, uy] = dominant_direction(rotated);
      double wx = pm.a * ux + pm.b * uy;
      double wy = pm.c * ux + pm.d * uy;
      double norm2 = wx * wx + wy * wy;
      if (norm2 <= 0.0) return;
      double h = -2.0 * (pm.log_scale + 0.5 * std::log(norm2));
      t.minus = h / static_cast<double>(m);
      t.ok = true;
    }
  });

  std::vector<double> plus, minus, disp;
  uint32_t skipped = 0;
  for (const auto& t : out) {
    plus.push_back(t.plus);
    disp.push_back(t.disp);
    if (t.ok)
      minus.push_back(t.minus);
    else
      ++skipped;
  }
  require(!minus.empty(), Errc::insufficient_escape, "no trial escaped far enough for a limit");

  HmetReport report;
  report.steps = n;
  report.eval_step = m;
  report.trials = params.trials;
  report.skipped_trials = skipped;
  report.tolerance = tolerance;

  MeanCi pci = mean_ci(plus);
  report.plus_mean = pci.mean;
  report.plus_half_width = pci.half_width;
  MeanCi mci = mean_ci(minus);
  report.minus_mean = mci.mean;
  report.minus_half_width = mci.half_width;

  MeanCi dci = mean_ci(disp);
  report.drift.mean = dci.mean;
  report.drift.half_width = dci.half_width;
  report.drift.steps = n;
  report.drift.trials = params.trials;
  report.drift.seed = params.seed;
  require(report.drift.mean - report.drift.half_width > 0.0, Errc::insufficient_escape,
          "drift confidence interval does not exclude zero");

  report.plus_consistent = std::abs(report.plus_mean - report.drift.mean) <= tolerance;
  report.minus_consistent = std::abs(report.minus_mean + report.drift.mean) <= tolerance;
  return report;
}

}  // namespace horolab
