#include "markov/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "group/transport.hpp"

namespace horolab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double circle_angle(const PlaneEnd& e) {
  if (e.at_infinity) return 3.141592653589793;
  return 2.0 * std::atan(e.at);
}

bool boundary_points_close(const SpaceModel& s, const BoundaryPoint& a, const BoundaryPoint& b,
                           double tol) {
  switch (s.kind) {
    case SpaceKind::free_group_tree:
      return std::get<TreeEnd>(a) == std::get<TreeEnd>(b);
    case SpaceKind::star:
      return std::get<StarEnd>(a) == std::get<StarEnd>(b);
    case SpaceKind::upper_half_plane: {
      double da = circle_angle(std::get<PlaneEnd>(a));
      double db = circle_angle(std::get<PlaneEnd>(b));
      double diff = std::abs(da - db);
      diff = std::min(diff, 2.0 * 3.141592653589793 - diff);
      return diff <= tol;
    }
  }
  return false;
}

// Upper bounds for the chain metric on a boundary pair set; chains route
// through the points of the set itself. On 0-hyperbolic spaces the direct
// edge is the chain infimum, so no search is needed.
std::vector<double> pair_uppers(const SpaceModel& s, const VisualConfig& vc,
                                const std::vector<BordPoint>& points,
                                const std::vector<std::pair<size_t, size_t>>& index_pairs) {
  std::vector<double> out;
  out.reserve(index_pairs.size());
  if (s.delta <= 0.0) {
    for (auto [i, j] : index_pairs)
      out.push_back(visual_quasimetric(s, vc, points[i], points[j], s.basepoint));
    return out;
  }
  auto matrix = chain_upper_matrix(s, vc, points);
  for (auto [i, j] : index_pairs) out.push_back(matrix[i][j]);
  return out;
}

struct IndexedPairs {
  std::vector<BordPoint> points;
  std::vector<std::pair<size_t, size_t>> pairs;
};

IndexedPairs index_pair_net(const SpaceModel& s, const BoundaryPairNet& net) {
  IndexedPairs out;
  std::unordered_map<std::string, size_t> index;
  auto find_or_add = [&](const BoundaryPoint& p) {
    auto key = bord_point_key(s, bord(p));
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    out.points.push_back(bord(p));
    index.emplace(std::move(key), out.points.size() - 1);
    return out.points.size() - 1;
  };
  for (const auto& [a, b] : net) {
    require(!bord_points_equal(s, bord(a), bord(b)), Errc::invalid_net,
            "pair net entries must be distinct boundary points");
    out.pairs.emplace_back(find_or_add(a), find_or_add(b));
  }
  return out;
}

}  // namespace

double BoundaryObservable::eval(const SpaceModel& s, const VisualConfig& vc,
                                const BoundaryPoint& xi) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::visual_to_ref: {
      double p = extended_gromov_product(s, bord(xi), ref, s.basepoint);
      if (p == kInf) return 0.0;
      return std::pow(vc.base, -alpha * p);
    }
    case Kind::horo_at_point:
      return horofunction_eval(s, Horofunction{bord(xi)}, at);
  }
  return 0.0;
}

double BoundaryObservable::holder_estimate(
    const SpaceModel& s, const VisualConfig& vc,
    std::span<const std::pair<BoundaryPoint, BoundaryPoint>> pairs, double holder_alpha) const {
  BoundaryPairNet net(pairs.begin(), pairs.end());
  IndexedPairs indexed = index_pair_net(s, net);
  auto uppers = pair_uppers(s, vc, indexed.points, indexed.pairs);
  double best = 0.0;
  for (size_t k = 0; k < indexed.pairs.size(); ++k) {
    auto [i, j] = indexed.pairs[k];
    double fi = eval(s, vc, std::get<BoundaryPoint>(indexed.points[i]));
    double fj = eval(s, vc, std::get<BoundaryPoint>(indexed.points[j]));
    if (uppers[k] > 0.0)
      best = std::max(best, std::abs(fi - fj) / std::pow(uppers[k], holder_alpha));
  }
  return best;
}

BoundaryObservable constant_observable(double value) {
  BoundaryObservable f;
  f.kind = BoundaryObservable::Kind::constant;
  f.value = value;
  f.label = "const";
  return f;
}

BoundaryObservable visual_observable(BordPoint ref, double alpha, std::string label) {
  BoundaryObservable f;
  f.kind = BoundaryObservable::Kind::visual_to_ref;
  f.ref = std::move(ref);
  f.alpha = alpha;
  f.label = std::move(label);
  return f;
}

BoundaryObservable horo_observable(Point at, std::string label) {
  BoundaryObservable f;
  f.kind = BoundaryObservable::Kind::horo_at_point;
  f.at = std::move(at);
  f.label = std::move(label);
  return f;
}

double markov_apply(const SpaceModel& s, const VisualConfig& vc, const FiniteSupportMeasure& mu,
                    const BoundaryObservable& f, const BoundaryPoint& xi) {
  validate_measure(s, mu);
  double total = 0.0;
  for (size_t i = 0; i < mu.atoms.size(); ++i) {
    Isometry gi = inverse(s, mu.atoms[i]);
    total += mu.weights[i] * f.eval(s, vc, boundary_action(s, gi, xi));
  }
  return total;
}

EmpiricalBoundaryMeasure stationary_estimate(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                             uint32_t steps, uint32_t trials,
                                             const BoundaryPoint& start, uint64_t seed,
                                             unsigned workers) {
  validate_measure(s, mu);
  require(boundary_point_in_space(s, start), Errc::invalid_point, "start outside the boundary");
  require(trials >= 1, Errc::invalid_config, "need at least one trial");

  std::vector<BoundaryPoint> finals(trials, start);
  run_indexed(trials, workers, [&](size_t trial) {
    Rng rng = Rng::stream(seed, trial);
    auto cumulative = cumulative_weights(mu);
    BoundaryPoint xi = start;
    for (uint32_t k = 0; k < steps; ++k) {
      const Isometry& g = mu.atoms[rng.categorical(cumulative)];
      xi = boundary_action(s, inverse(s, g), xi);
    }
    finals[trial] = xi;
  });

  EmpiricalBoundaryMeasure nu;
  nu.provenance = {steps, trials, seed, bord_point_format(s, bord(start))};
  double w = 1.0 / static_cast<double>(trials);
  std::unordered_map<std::string, size_t> index;
  for (const auto& xi : finals) {
    if (s.kind == SpaceKind::upper_half_plane) {
      nu.atoms.push_back(xi);
      nu.weights.push_back(w);
      continue;
    }
    auto key = bord_point_key(s, bord(xi));
    auto it = index.find(key);
    if (it != index.end()) {
      nu.weights[it->second] += w;
    } else {
      index.emplace(std::move(key), nu.atoms.size());
      nu.atoms.push_back(xi);
      nu.weights.push_back(w);
    }
  }
  return nu;
}

DiscrepancyReport stationary_discrepancy(const SpaceModel& s, const VisualConfig& vc,
                                         const EmpiricalBoundaryMeasure& a,
                                         const EmpiricalBoundaryMeasure& b, double alpha,
                                         uint32_t plane_bins) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_alpha, "alpha must lie in (0,1]");
  DiscrepancyReport report;
  switch (s.kind) {
    case SpaceKind::free_group_tree: {
      std::vector<TreeEnd> ea, eb;
      for (const auto& p : a.atoms) ea.push_back(std::get<TreeEnd>(p));
      for (const auto& p : b.atoms) eb.push_back(std::get<TreeEnd>(p));
      size_t depth = 64;
      auto r = tree_boundary_transport(ea, a.weights, eb, b.weights, vc.base, alpha, depth);
      report.value = r.value;
      report.bias_bound = r.truncation_bias;
      report.method = "tree-prefix-transport";
      return report;
    }
    case SpaceKind::star: {
      // distinct rays sit at visual distance 1, so this is total variation
      std::map<uint32_t, double> wa, wb;
      for (size_t i = 0; i < a.atoms.size(); ++i)
        wa[std::get<StarEnd>(a.atoms[i]).ray] += a.weights[i];
      for (size_t i = 0; i < b.atoms.size(); ++i)
        wb[std::get<StarEnd>(b.atoms[i]).ray] += b.weights[i];
      double tv = 0.0;
      std::set<uint32_t> rays;
      for (auto& [r, w] : wa) rays.insert(r);
      for (auto& [r, w] : wb) rays.insert(r);
      for (uint32_t r : rays) {
        double da = wa.count(r) ? wa[r] : 0.0;
        double db = wb.count(r) ? wb[r] : 0.0;
        tv += std::abs(da - db);
      }
      report.value = 0.5 * tv;
      report.method = "star-total-variation";
      return report;
    }
    case SpaceKind::upper_half_plane: {
      // Bin by boundary angle; the cost is a metric, so shared mass cancels
      // exactly and only the residuals are transported.
      require(plane_bins >= 2, Errc::invalid_config, "need at least two bins");
      const double pi = 3.141592653589793;
      std::vector<double> mass_a(plane_bins, 0.0), mass_b(plane_bins, 0.0);
      auto bin_of = [&](const BoundaryPoint& p) {
        double theta = circle_angle(std::get<PlaneEnd>(p));  // (-pi, pi]
        double u = (theta + pi) / (2.0 * pi);
        auto idx = static_cast<size_t>(u * plane_bins);
        return std::min<size_t>(idx, plane_bins - 1);
      };
      for (size_t i = 0; i < a.atoms.size(); ++i) mass_a[bin_of(a.atoms[i])] += a.weights[i];
      for (size_t i = 0; i < b.atoms.size(); ++i) mass_b[bin_of(b.atoms[i])] += b.weights[i];

      std::vector<double> res_a, res_b;
      std::vector<PlaneEnd> pts_a, pts_b;
      for (size_t k = 0; k < plane_bins; ++k) {
        double diff = mass_a[k] - mass_b[k];
        double theta = -pi + (static_cast<double>(k) + 0.5) * 2.0 * pi / plane_bins;
        PlaneEnd center = std::abs(theta - pi) < 1e-12 ? PlaneEnd{0.0, true}
                                                       : PlaneEnd{std::tan(theta / 2.0), false};
        if (diff > 0.0) {
          res_a.push_back(diff);
          pts_a.push_back(center);
        } else if (diff < 0.0) {
          res_b.push_back(-diff);
          pts_b.push_back(center);
        }
      }
      if (res_a.empty() || res_b.empty()) {
        report.value = 0.0;
      } else {
        // balance fp residue
        double sa = 0.0, sb = 0.0;
        for (double w : res_a) sa += w;
        for (double w : res_b) sb += w;
        double scale = sa > 0.0 ? sb / sa : 1.0;
        for (double& w : res_a) w *= scale;
        std::vector<double> cost(res_a.size() * res_b.size());
        for (size_t i = 0; i < pts_a.size(); ++i)
          for (size_t j = 0; j < pts_b.size(); ++j) {
            double rho = visual_quasimetric(s, vc, bord(BoundaryPoint{pts_a[i]}),
                                            bord(BoundaryPoint{pts_b[j]}), s.basepoint);
            cost[i * res_b.size() + j] = std::pow(std::min(1.0, rho), alpha);
          }
        report.value = transport_cost(res_a, res_b, cost);
      }
      // both marginals may move by one bin width
      double bin_angle = 2.0 * pi / plane_bins;
      report.bias_bound = 2.0 * std::pow(std::sin(bin_angle / 2.0), alpha * std::log(vc.base));
      report.method = "plane-binned-transport";
      return report;
    }
  }
  return report;
}

double stationarity_residual(const SpaceModel& s, const VisualConfig& vc,
                             const FiniteSupportMeasure& mu, const EmpiricalBoundaryMeasure& nu,
                             std::span<const BoundaryObservable> battery) {
  double worst = 0.0;
  for (const auto& f : battery) {
    double lhs = 0.0, rhs = 0.0;
    for (size_t i = 0; i < nu.atoms.size(); ++i) {
      lhs += nu.weights[i] * markov_apply(s, vc, mu, f, nu.atoms[i]);
      rhs += nu.weights[i] * f.eval(s, vc, nu.atoms[i]);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

namespace {

// Expectation over mu^n of per-pair ratio terms, exact when the convolution
// support fits the cap, Monte Carlo otherwise.
struct PairRatioAccumulator {
  std::vector<double> matched;
  std::vector<double> low;
  std::vector<double> high;
};

PairRatioAccumulator accumulate_ratios(const SpaceModel& s, const VisualConfig& vc,
                                       const FiniteSupportMeasure& mu, uint32_t n, double alpha,
                                       const IndexedPairs& indexed, uint32_t mc_samples,
                                       uint64_t seed, uint64_t support_cap, bool* exact_out) {
  const auto& points = indexed.points;
  const auto& pairs = indexed.pairs;
  auto den = pair_uppers(s, vc, points, pairs);
  std::vector<double> den_low(pairs.size());
  for (size_t k = 0; k < pairs.size(); ++k) {
    auto [i, j] = pairs[k];
    den_low[k] =
        visual_quasimetric(s, vc, points[i], points[j], s.basepoint) / 4.0;
    require(den[k] > 0.0, Errc::invalid_net, "pair net contains coincident points");
  }

  PairRatioAccumulator acc;
  acc.matched.assign(pairs.size(), 0.0);
  acc.low.assign(pairs.size(), 0.0);
  acc.high.assign(pairs.size(), 0.0);

  auto add_group_element = [&](const Isometry& g, double weight) {
    Isometry gi = inverse(s, g);
    std::vector<BordPoint> moved;
    moved.reserve(points.size());
    for (const auto& p : points) moved.push_back(bord_action(s, gi, p));
    auto num = pair_uppers(s, vc, moved, pairs);
    for (size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      double num_low = visual_quasimetric(s, vc, moved[i], moved[j], s.basepoint) / 4.0;
      acc.matched[k] += weight * std::pow(num[k] / den[k], alpha);
      acc.low[k] += weight * std::pow(num_low / den[k], alpha);
      acc.high[k] += weight * std::pow(num[k] / den_low[k], alpha);
    }
  };

  double projected = std::pow(static_cast<double>(mu.size()), static_cast<double>(n));
  bool exact = projected <= static_cast<double>(support_cap) * 4.0;
  if (exact) {
    try {
      FiniteSupportMeasure power = convolution_power(s, mu, n, support_cap);
      for (size_t i = 0; i < power.atoms.size(); ++i)
        add_group_element(power.atoms[i], power.weights[i]);
    } catch (const Error& e) {
      if (e.code() != Errc::support_explosion) throw;
      exact = false;
    }
  }
  if (!exact) {
    require(mc_samples >= 1, Errc::invalid_config, "Monte Carlo expectation needs samples");
    auto cumulative = cumulative_weights(mu);
    double w = 1.0 / static_cast<double>(mc_samples);
    for (uint32_t sample = 0; sample < mc_samples; ++sample) {
      Rng rng = Rng::stream(seed, sample);
      Isometry g = identity(s);
      for (uint32_t k = 0; k < n; ++k)
        g = compose(s, g, mu.atoms[rng.categorical(cumulative)]);
      add_group_element(g, w);
    }
  }
  if (exact_out) *exact_out = exact;
  return acc;
}

}  // namespace

KAlphaEstimate k_alpha_estimate(const SpaceModel& s, const VisualConfig& vc,
                                const FiniteSupportMeasure& mu, uint32_t n, double alpha,
                                const BoundaryPairNet& pairs, uint32_t mc_samples, uint64_t seed,
                                uint64_t support_cap) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_alpha, "alpha must lie in (0,1]");
  require(n >= 1, Errc::invalid_config, "k_alpha needs n >= 1");
  require(!pairs.empty(), Errc::invalid_net, "empty pair net");
  validate_measure(s, mu);

  IndexedPairs indexed = index_pair_net(s, pairs);
  KAlphaEstimate est;
  auto acc = accumulate_ratios(s, vc, mu, n, alpha, indexed, mc_samples, seed, support_cap,
                               &est.exact);
  est.per_pair = acc.matched;
  est.value = *std::max_element(acc.matched.begin(), acc.matched.end());
  est.certified_low = *std::max_element(acc.low.begin(), acc.low.end());
  est.certified_high = *std::max_element(acc.high.begin(), acc.high.end());
  return est;
}

SubmultiplicativityReport submultiplicativity_check(const SpaceModel& s, const VisualConfig& vc,
                                                    const FiniteSupportMeasure& mu, double alpha,
                                                    uint32_t m, uint32_t n,
                                                    const BoundaryPairNet& pairs,
                                                    uint64_t support_cap) {
  require(m >= 1 && n >= 1, Errc::invalid_config, "submultiplicativity needs m, n >= 1");
  FiniteSupportMeasure power_n = convolution_power(s, mu, n, support_cap);

  // k^m is evaluated on the closure of the pair net under supp mu^n, which is
  // what the splitting k^{m+n} <= k^m k^n uses in the middle step.
  BoundaryPairNet closure = pairs;
  for (const auto& g : power_n.atoms) {
    Isometry gi = inverse(s, g);
    for (const auto& [a, b] : pairs) {
      BoundaryPoint ma = boundary_action(s, gi, a);
      BoundaryPoint mb = boundary_action(s, gi, b);
      if (!bord_points_equal(s, bord(ma), bord(mb))) closure.emplace_back(ma, mb);
    }
  }

  SubmultiplicativityReport report;
  report.k_mn = k_alpha_estimate(s, vc, mu, m + n, alpha, pairs, 0, 0, support_cap).value;
  report.k_m = k_alpha_estimate(s, vc, mu, m, alpha, closure, 0, 0, support_cap).value;
  report.k_n = k_alpha_estimate(s, vc, mu, n, alpha, pairs, 0, 0, support_cap).value;
  report.slack = report.k_m * report.k_n - report.k_mn;
  report.holds = report.slack >= -1e-9 * std::max(1.0, report.k_mn);
  return report;
}

namespace {

double horofunction_orbit_value(const SpaceModel& s, const Horofunction& h, const Isometry& g) {
  if (is_boundary(h.anchor))
    return horofunction_at_orbit(s, std::get<BoundaryPoint>(h.anchor), g);
  const Point& anchor = std::get<Point>(h.anchor);
  switch (s.kind) {
    case SpaceKind::free_group_tree:
    case SpaceKind::star:
      return distance(s, apply(s, g, s.basepoint), anchor) - distance(s, anchor, s.basepoint);
    case SpaceKind::upper_half_plane: {
      const auto& m = std::get<PlaneIso>(g);
      const auto& z = std::get<PlanePoint>(anchor);
      // cosh d(M i, z) = e^{2 ls} [(a - x c)^2 + (b - x d)^2 + y^2 (c^2+d^2)] / (2y)
      double q = (m.a - z.x * m.c) * (m.a - z.x * m.c) +
                 (m.b - z.x * m.d) * (m.b - z.x * m.d) +
                 z.y * z.y * (m.c * m.c + m.d * m.d);
      double log_q = 2.0 * m.log_scale + std::log(q / (2.0 * z.y));
      double d = log_q > 40.0 ? log_q + std::log(2.0) : std::acosh(std::max(std::exp(log_q), 1.0));
      return d - distance(s, anchor, s.basepoint);
    }
  }
  return 0.0;
}

}  // namespace

double contraction_upper_bound(const SpaceModel& s, const VisualConfig& vc,
                               const FiniteSupportMeasure& mu, uint32_t n, double alpha,
                               std::span<const Horofunction> net, uint64_t support_cap,
                               uint32_t mc_samples, uint64_t seed, unsigned workers,
                               bool* exact_out) {
  require(alpha > 0.0 && alpha <= 1.0, Errc::invalid_alpha, "alpha must lie in (0,1]");
  require(n >= 1, Errc::invalid_config, "contraction bound needs n >= 1");
  require(!net.empty(), Errc::invalid_net, "empty horofunction net");
  validate_measure(s, mu);

  std::vector<double> sums(net.size(), 0.0);
  double projected = std::pow(static_cast<double>(mu.size()), static_cast<double>(n));
  bool exact = projected <= static_cast<double>(support_cap) * 4.0;
  if (exact) {
    try {
      FiniteSupportMeasure power = convolution_power(s, mu, n, support_cap);
      for (size_t i = 0; i < power.atoms.size(); ++i)
        for (size_t h = 0; h < net.size(); ++h)
          sums[h] += power.weights[i] *
                     std::pow(vc.base, -alpha * horofunction_orbit_value(s, net[h], power.atoms[i]));
    } catch (const Error& e) {
      if (e.code() != Errc::support_explosion) throw;
      exact = false;
    }
  }
  if (!exact) {
    require(mc_samples >= 1, Errc::invalid_config, "Monte Carlo expectation needs samples");
    std::vector<std::vector<double>> slots(mc_samples);
    auto cumulative = cumulative_weights(mu);
    run_indexed(mc_samples, workers, [&](size_t sample) {
      Rng rng = Rng::stream(seed, sample);
      Isometry g = identity(s);
      for (uint32_t k = 0; k < n; ++k)
        g = compose(s, g, mu.atoms[rng.categorical(cumulative)]);
      auto& row = slots[sample];
      row.resize(net.size());
      for (size_t h = 0; h < net.size(); ++h)
        row[h] = std::pow(vc.base, -alpha * horofunction_orbit_value(s, net[h], g));
    });
    for (const auto& row : slots)
      for (size_t h = 0; h < net.size(); ++h) sums[h] += row[h] / static_cast<double>(mc_samples);
  }
  if (exact_out) *exact_out = exact;
  double worst = *std::max_element(sums.begin(), sums.end());
  return std::pow(distortion_constant(s, vc), alpha) * worst;
}

ContractionSearch contraction_search(const SpaceModel& s, const VisualConfig& vc,
                                     const FiniteSupportMeasure& mu, uint32_t alpha_levels,
                                     uint32_t n_max, std::span<const Horofunction> net,
                                     uint64_t support_cap, uint32_t mc_samples, uint64_t seed,
                                     unsigned workers) {
  ContractionSearch search;
  std::vector<uint32_t> ns;
  for (uint32_t n = 1; n <= n_max; n *= 2) ns.push_back(n);
  if (ns.empty() || ns.back() != n_max) ns.push_back(n_max);
  for (uint32_t level = 1; level <= alpha_levels; ++level) {
    double alpha = std::pow(2.0, -static_cast<double>(level));
    for (uint32_t n : ns) {
      ContractionCell cell;
      cell.alpha = alpha;
      cell.n = n;
      cell.value = contraction_upper_bound(s, vc, mu, n, alpha, net, support_cap, mc_samples,
                                           seed, workers, &cell.exact);
      search.cells.push_back(cell);
      if (!search.first_contracting && cell.value < 1.0) search.first_contracting = cell;
    }
  }
  return search;
}

IrreducibilityReport irreducibility_check(const SpaceModel& s, const FiniteSupportMeasure& mu,
                                          std::span<const Horofunction> candidates) {
  validate_measure(s, mu);
  IrreducibilityReport report;

  std::vector<Horofunction> pool(candidates.begin(), candidates.end());

  bool all_identity = true;
  for (const auto& g : mu.atoms)
    if (!is_identity(s, g, 1e-12)) all_identity = false;
  if (all_identity) {
    report.fixed_found = true;
    report.witness = "every horofunction (all atoms are the identity)";
    return report;
  }

  switch (s.kind) {
    case SpaceKind::free_group_tree:
      for (const auto& g : mu.atoms) {
        auto ends = word_translation_ends(std::get<TreeIso>(g).word);
        if (!ends) continue;
        pool.push_back(Horofunction{bord(BoundaryPoint{ends->attracting})});
        pool.push_back(Horofunction{bord(BoundaryPoint{ends->repelling})});
      }
      break;
    case SpaceKind::upper_half_plane:
      for (const auto& g : mu.atoms) {
        const auto& m = std::get<PlaneIso>(g);
        if (std::abs(m.c) > 1e-14) {
          double disc = (m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c;
          if (disc >= 0.0) {
            double r = std::sqrt(disc);
            pool.push_back(
                Horofunction{bord(BoundaryPoint{PlaneEnd{((m.a - m.d) + r) / (2.0 * m.c), false}})});
            pool.push_back(
                Horofunction{bord(BoundaryPoint{PlaneEnd{((m.a - m.d) - r) / (2.0 * m.c), false}})});
          } else {
            // elliptic: interior fixed point
            double x = (m.a - m.d) / (2.0 * m.c);
            double y = std::sqrt(-disc) / (2.0 * std::abs(m.c));
            pool.push_back(Horofunction{bord(Point{PlanePoint{x, y}})});
          }
        } else {
          pool.push_back(Horofunction{bord(BoundaryPoint{PlaneEnd{0.0, true}})});
          if (std::abs(m.a - m.d) > 1e-14)
            pool.push_back(
                Horofunction{bord(BoundaryPoint{PlaneEnd{m.b / (m.d - m.a), false}})});
        }
      }
      break;
    case SpaceKind::star:
      pool.push_back(Horofunction{bord(s.basepoint)});
      break;
  }

  const double tol = s.kind == SpaceKind::upper_half_plane ? 1e-9 : 0.0;
  report.candidates_tested = pool.size();
  for (const auto& h : pool) {
    bool fixed_by_all = true;
    for (const auto& g : mu.atoms) {
      if (is_boundary(h.anchor)) {
        BoundaryPoint moved = boundary_action(s, g, std::get<BoundaryPoint>(h.anchor));
        if (!boundary_points_close(s, moved, std::get<BoundaryPoint>(h.anchor), tol)) {
          fixed_by_all = false;
          break;
        }
      } else {
        Point moved = apply(s, g, std::get<Point>(h.anchor));
        if (!points_equal(s, moved, std::get<Point>(h.anchor), tol)) {
          fixed_by_all = false;
          break;
        }
      }
    }
    if (fixed_by_all) {
      report.fixed_found = true;
      report.witness = "fixed horofunction anchored at " + bord_point_format(s, h.anchor);
      return report;
    }
  }
  return report;
}

}  // namespace horolab
