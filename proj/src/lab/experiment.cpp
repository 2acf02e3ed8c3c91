#include "lab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "group/wasserstein.hpp"

namespace horolab {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_failure, "cannot write " + tmp.string());
    out << content;
    if (!out.good()) fail(Errc::io_failure, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    require(row.size() == header_.size(), Errc::io_failure, "csv row width mismatch");
    rows_.push_back(std::move(row));
  }

  std::string render() const {
    std::ostringstream os;
    for (size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << "\n";
    for (const auto& row : rows_) {
      for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
      os << "\n";
    }
    return os.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Emitter {
  const ExperimentConfig& cfg;
  std::filesystem::path out_dir;
  uint64_t seed;

  ordered_json summary(const std::string& command) const {
    ordered_json j;
    j["command"] = command;
    j["space"] = space_kind_name(cfg.space.kind);
    j["config_hash"] = hash_hex(cfg.config_hash);
    j["seed"] = seed;
    return j;
  }

  void write(const std::string& command, const CsvTable& table, const ordered_json& json) const {
    atomic_write(out_dir / (command + ".csv"), table.render());
    atomic_write(out_dir / (command + ".json"), json.dump(2) + "\n");
  }
};

std::string fmt_bool(bool v) { return v ? "true" : "false"; }

// Effective settings after CLI overrides.
struct Effective {
  WalkParams walk;
  uint64_t cap;
  unsigned workers;
};

Effective effective(const ExperimentConfig& cfg, const RunOptions& options) {
  Effective e;
  e.walk = cfg.walk;
  if (options.seed_override) e.walk.seed = *options.seed_override;
  e.cap = options.cap_override ? *options.cap_override : cfg.enumeration_cap;
  e.workers = options.workers == 0 ? 1 : options.workers;
  return e;
}

std::vector<BoundaryObservable> default_battery(const ExperimentConfig& cfg) {
  std::vector<BoundaryObservable> battery;
  size_t refs = 0;
  for (const auto& b : cfg.nets.boundary) {
    if (refs >= 3) break;
    std::ostringstream label;
    label << "visual_ref" << refs;
    battery.push_back(visual_observable(bord(b), 0.5, label.str()));
    ++refs;
  }
  size_t pts = 0;
  for (const auto& p : cfg.nets.interior) {
    if (pts >= 2) break;
    std::ostringstream label;
    label << "horo_at" << pts;
    battery.push_back(horo_observable(p, label.str()));
    ++pts;
  }
  battery.push_back(constant_observable(1.0));
  return battery;
}

int run_validate_space(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.validate_space.has_value(), Errc::invalid_config,
          "config has no validate_space experiment");
  const auto& opt = *cfg.validate_space;
  double delta = opt.delta_override ? *opt.delta_override : cfg.space.delta;

  CsvTable table({"check", "samples", "statistic", "threshold", "pass"});
  ordered_json j = emit.summary("validate-space");
  bool ok = true;

  HyperbolicityReport rep =
      check_hyperbolicity(cfg.space, delta, opt.samples, eff.walk.seed, cfg.sampler, eff.workers);
  table.add_row({"four_point", std::to_string(rep.samples), format_double(rep.max_violation),
                 "0", fmt_bool(rep.holds)});
  j["four_point"] = {{"delta", delta},
                     {"samples", rep.samples},
                     {"max_violation", rep.max_violation},
                     {"holds", rep.holds}};
  ok = ok && rep.holds;

  if (opt.ratio_samples > 0) {
    require(cfg.nets.boundary.size() >= 2, Errc::invalid_net,
            "visual-ratio sampling needs a boundary net");
    Rng rng = Rng::stream(eff.walk.seed, 0xA11CE);
    uint64_t violations = 0;
    double worst_gap = 0.0;
    for (uint64_t i = 0; i < opt.ratio_samples; ++i) {
      BoundaryPoint xi = sample_boundary_point(cfg.space, cfg.sampler, rng);
      BoundaryPoint eta = sample_boundary_point(cfg.space, cfg.sampler, rng);
      if (bord_points_equal(cfg.space, bord(xi), bord(eta))) continue;
      Isometry g = sample_isometry(cfg.space, cfg.sampler, rng);
      std::vector<BordPoint> net{bord(xi), bord(eta)};
      for (const auto& p : cfg.nets.chain) net.push_back(p);
      VisualRatioReport r = visual_ratio_check(cfg.space, cfg.visual, g, xi, eta, net);
      if (r.certified_violation) ++violations;
      worst_gap = std::max(worst_gap, r.ratio_lower / std::max(r.bound_upper, 1e-300));
    }
    table.add_row({"visual_ratio", std::to_string(opt.ratio_samples),
                   std::to_string(violations), "0", fmt_bool(violations == 0)});
    j["visual_ratio"] = {{"samples", opt.ratio_samples}, {"certified_violations", violations}};
    ok = ok && violations == 0;
  }

  if (opt.comparison_samples > 0) {
    Rng rng = Rng::stream(eff.walk.seed, 0xC0B41);
    uint64_t violations = 0;
    double min_lower = 0.0, min_upper = 0.0;
    double tol = cfg.space.kind == SpaceKind::upper_half_plane ? 2.0 * cfg.space.delta + 1e-6
                                                               : 1e-9;
    for (uint64_t i = 0; i < opt.comparison_samples; ++i) {
      BoundaryPoint xi = sample_boundary_point(cfg.space, cfg.sampler, rng);
      BoundaryPoint eta = sample_boundary_point(cfg.space, cfg.sampler, rng);
      if (bord_points_equal(cfg.space, bord(xi), bord(eta))) continue;
      Isometry g = sample_isometry(cfg.space, cfg.sampler, rng);
      ComparisonReport r = comparison_bound_check(cfg.space, xi, eta, g);
      if (r.lower_slack < -tol || r.upper_slack < -tol) ++violations;
      min_lower = std::min(min_lower, r.lower_slack);
      min_upper = std::min(min_upper, r.upper_slack);
    }
    table.add_row({"comparison_bound", std::to_string(opt.comparison_samples),
                   std::to_string(violations), "0", fmt_bool(violations == 0)});
    j["comparison_bound"] = {{"samples", opt.comparison_samples},
                             {"certified_violations", violations},
                             {"min_lower_slack", min_lower},
                             {"min_upper_slack", min_upper},
                             {"tolerance", tol}};
    ok = ok && violations == 0;
  }

  j["pass"] = ok;
  emit.write("validate-space", table, j);
  return ok ? kExitOk : kExitViolation;
}

int run_drift(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.drift.has_value(), Errc::invalid_config, "config has no drift experiment");
  const auto& opt = *cfg.drift;
  DriftEstimate est = drift_estimate(cfg.space, cfg.measure(opt.measure), eff.walk,
                                     opt.fekete_orders, eff.cap, eff.workers);

  CsvTable table({"kind", "step", "trials", "mean", "half_width"});
  for (size_t i = 0; i < est.checkpoint_steps.size(); ++i)
    table.add_row({"checkpoint", std::to_string(est.checkpoint_steps[i]),
                   std::to_string(est.trials), format_double(est.checkpoint_means[i]),
                   format_double(est.checkpoint_half_widths[i])});
  for (const auto& [m, bound] : est.subadditive_bounds)
    table.add_row({"subadditive_bound", std::to_string(m), "0", format_double(bound), "0"});

  ordered_json j = emit.summary("drift");
  j["measure"] = opt.measure;
  j["steps"] = est.steps;
  j["trials"] = est.trials;
  j["mean"] = est.mean;
  j["half_width"] = est.half_width;
  ordered_json bounds = ordered_json::array();
  for (const auto& [m, bound] : est.subadditive_bounds)
    bounds.push_back({{"m", m}, {"bound", bound}});
  j["subadditive_bounds"] = bounds;
  emit.write("drift", table, j);
  return kExitOk;
}

int run_hmet(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.hmet.has_value(), Errc::invalid_config, "config has no hmet experiment");
  const auto& opt = *cfg.hmet;
  HmetReport rep = hmet_check(cfg.space, cfg.measure(opt.measure), opt.probe, eff.walk,
                              opt.eval_fraction, opt.tolerance, eff.workers);

  CsvTable table({"branch", "steps", "eval_step", "trials", "mean", "half_width", "consistent"});
  table.add_row({"probe", std::to_string(rep.steps), std::to_string(rep.steps),
                 std::to_string(rep.trials), format_double(rep.plus_mean),
                 format_double(rep.plus_half_width), fmt_bool(rep.plus_consistent)});
  table.add_row({"forward_limit", std::to_string(rep.steps), std::to_string(rep.eval_step),
                 std::to_string(rep.trials - rep.skipped_trials), format_double(rep.minus_mean),
                 format_double(rep.minus_half_width), fmt_bool(rep.minus_consistent)});

  ordered_json j = emit.summary("hmet");
  j["measure"] = opt.measure;
  j["probe"] = bord_point_format(cfg.space, bord(opt.probe));
  j["steps"] = rep.steps;
  j["eval_step"] = rep.eval_step;
  j["trials"] = rep.trials;
  j["skipped_trials"] = rep.skipped_trials;
  j["drift_mean"] = rep.drift.mean;
  j["drift_half_width"] = rep.drift.half_width;
  j["plus_mean"] = rep.plus_mean;
  j["plus_half_width"] = rep.plus_half_width;
  j["minus_mean"] = rep.minus_mean;
  j["minus_half_width"] = rep.minus_half_width;
  j["tolerance"] = rep.tolerance;
  bool ok = rep.plus_consistent && rep.minus_consistent;
  j["pass"] = ok;
  emit.write("hmet", table, j);
  return ok ? kExitOk : kExitViolation;
}

int run_stationary(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.stationary.has_value(), Errc::invalid_config, "config has no stationary experiment");
  const auto& opt = *cfg.stationary;
  const auto& mu = cfg.measure(opt.measure);

  std::vector<EmpiricalBoundaryMeasure> runs;
  for (const auto& start : opt.starts)
    runs.push_back(stationary_estimate(cfg.space, mu, opt.steps, opt.trials, start,
                                       eff.walk.seed, eff.workers));

  CsvTable table({"start", "atom", "weight"});
  for (size_t r = 0; r < runs.size(); ++r) {
    // deterministic listing: heaviest atoms first, formatted label as tie-break
    std::vector<size_t> order(runs[r].atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::string> labels(order.size());
    for (size_t i = 0; i < order.size(); ++i)
      labels[i] = bord_point_format(cfg.space, bord(runs[r].atoms[i]));
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (runs[r].weights[a] != runs[r].weights[b]) return runs[r].weights[a] > runs[r].weights[b];
      return labels[a] < labels[b];
    });
    size_t limit = std::min<size_t>(order.size(), 1000);
    for (size_t i = 0; i < limit; ++i)
      table.add_row({runs[r].provenance.start, labels[order[i]],
                     format_double(runs[r].weights[order[i]])});
  }

  ordered_json j = emit.summary("stationary");
  j["measure"] = opt.measure;
  j["steps"] = opt.steps;
  j["trials"] = opt.trials;
  j["alpha"] = opt.alpha;

  auto battery = default_battery(cfg);
  j["stationarity_residual"] = stationarity_residual(cfg.space, cfg.visual, mu, runs[0], battery);

  bool ok = true;
  if (runs.size() >= 2) {
    DiscrepancyReport d = stationary_discrepancy(cfg.space, cfg.visual, runs[0], runs[1],
                                                 opt.alpha, opt.plane_bins);
    j["discrepancy"] = {{"value", d.value},
                        {"bias_bound", d.bias_bound},
                        {"method", d.method},
                        {"tolerance", opt.tolerance}};
    ok = d.value <= opt.tolerance;
  }
  j["pass"] = ok;
  emit.write("stationary", table, j);
  return ok ? kExitOk : kExitViolation;
}

int run_contraction(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.contraction.has_value(), Errc::invalid_config,
          "config has no contraction experiment");
  const auto& opt = *cfg.contraction;
  const auto& mu = cfg.measure(opt.measure);
  require(!cfg.nets.horofunctions.empty(), Errc::invalid_net,
          "contraction needs a horofunction net");

  ContractionSearch search =
      contraction_search(cfg.space, cfg.visual, mu, opt.alpha_levels, opt.n_max,
                         cfg.nets.horofunctions, eff.cap, opt.mc_samples, eff.walk.seed,
                         eff.workers);

  CsvTable table({"kind", "alpha", "m", "n", "value", "slack", "pass"});
  for (const auto& cell : search.cells)
    table.add_row({cell.exact ? "cell_exact" : "cell_mc", format_double(cell.alpha), "0",
                   std::to_string(cell.n), format_double(cell.value), "0",
                   fmt_bool(cell.value < 1.0)});

  bool submult_ok = true;
  ordered_json submult = ordered_json::array();
  if (opt.submult_total >= 2) {
    require(!cfg.nets.pairs.empty(), Errc::invalid_net,
            "submultiplicativity needs a boundary pair net");
    for (uint32_t m = 1; m + 1 <= opt.submult_total; ++m)
      for (uint32_t n = 1; m + n <= opt.submult_total; ++n) {
        SubmultiplicativityReport rep = submultiplicativity_check(
            cfg.space, cfg.visual, mu, opt.submult_alpha, m, n, cfg.nets.pairs, eff.cap);
        table.add_row({"submultiplicative", format_double(opt.submult_alpha), std::to_string(m),
                       std::to_string(n), format_double(rep.k_mn), format_double(rep.slack),
                       fmt_bool(rep.holds)});
        submult.push_back({{"m", m},
                           {"n", n},
                           {"k_mn", rep.k_mn},
                           {"k_m_closure", rep.k_m},
                           {"k_n", rep.k_n},
                           {"slack", rep.slack},
                           {"holds", rep.holds}});
        submult_ok = submult_ok && rep.holds;
      }
  }

  ordered_json j = emit.summary("contraction");
  j["measure"] = opt.measure;
  j["distortion_constant"] = distortion_constant(cfg.space, cfg.visual);
  if (search.first_contracting) {
    j["contracting"] = {{"alpha", search.first_contracting->alpha},
                        {"n", search.first_contracting->n},
                        {"value", search.first_contracting->value},
                        {"exact", search.first_contracting->exact}};
  } else {
    j["contracting"] = nullptr;
  }
  j["submultiplicativity"] = submult;
  j["pass"] = submult_ok;
  emit.write("contraction", table, j);
  return submult_ok ? kExitOk : kExitViolation;
}

int run_furstenberg(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.furstenberg.has_value(), Errc::invalid_config,
          "config has no furstenberg experiment");
  const auto& opt = *cfg.furstenberg;
  const auto& mu = cfg.measure(opt.measure);

  CsvTable table({"case", "furstenberg", "drift", "abs_diff", "tolerance", "pass"});
  ordered_json j = emit.summary("furstenberg");
  j["measure"] = opt.measure;

  IrreducibilityReport irr = irreducibility_check(cfg.space, mu, cfg.nets.horofunctions);
  j["irreducibility"] = {{"fixed_found", irr.fixed_found},
                         {"witness", irr.witness},
                         {"candidates_tested", irr.candidates_tested}};

  bool ok = true;
  DriftEstimate drift = drift_estimate(cfg.space, mu, eff.walk, {}, 0, eff.workers);
  j["drift_mean"] = drift.mean;
  j["drift_half_width"] = drift.half_width;

  if (opt.stationary_steps) {
    EmpiricalBoundaryMeasure nu =
        stationary_estimate(cfg.space, mu, *opt.stationary_steps, opt.stationary_trials,
                            *opt.start, eff.walk.seed, eff.workers);
    double value = furstenberg_drift(cfg.space, mu, nu);
    double diff = std::abs(value - drift.mean);
    bool pass = diff <= opt.tolerance;
    table.add_row({"stationary_estimate", format_double(value), format_double(drift.mean),
                   format_double(diff), format_double(opt.tolerance), fmt_bool(pass)});
    j["stationary_case"] = {{"furstenberg", value},
                            {"drift", drift.mean},
                            {"abs_diff", diff},
                            {"tolerance", opt.tolerance},
                            {"pass", pass}};
    ok = ok && pass;
  }

  if (!opt.explicit_atoms.empty()) {
    EmpiricalBoundaryMeasure nu;
    double total = 0.0;
    for (const auto& [atom, weight] : opt.explicit_atoms) {
      nu.atoms.push_back(atom);
      nu.weights.push_back(weight);
      total += weight;
    }
    require(std::abs(total - 1.0) <= 1e-12, Errc::invalid_measure,
            "explicit stationary weights must sum to 1");
    double value = furstenberg_drift(cfg.space, mu, nu);
    double diff = std::abs(value - drift.mean);
    bool pass = diff <= opt.explicit_tolerance;
    table.add_row({"explicit", format_double(value), format_double(drift.mean),
                   format_double(diff), format_double(opt.explicit_tolerance), fmt_bool(pass)});
    j["explicit_case"] = {{"furstenberg", value},
                          {"drift", drift.mean},
                          {"abs_diff", diff},
                          {"tolerance", opt.explicit_tolerance},
                          {"pass", pass}};
    ok = ok && pass;
  }

  j["pass"] = ok;
  emit.write("furstenberg", table, j);
  return ok ? kExitOk : kExitViolation;
}

int run_continuity(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.continuity.has_value(), Errc::invalid_config, "config has no continuity experiment");
  const auto& opt = *cfg.continuity;
  const auto& mu = cfg.measure(opt.measure);
  double lambda = cfg.lambda_of(opt.measure);

  IrreducibilityReport irr = irreducibility_check(cfg.space, mu, cfg.nets.horofunctions);
  require(!irr.fixed_found, Errc::invalid_measure,
          "continuity sweep needs an irreducible base measure; found " + irr.witness);

  ContinuitySummary summary =
      continuity_sweep(cfg.space, cfg.visual, mu, opt.tilts, opt.alpha, cfg.nets.chain, lambda,
                       eff.walk, eff.workers);

  CsvTable table({"id", "wasserstein", "drift_delta", "combined_ci", "ratio", "included"});
  for (const auto& rec : summary.records)
    table.add_row({rec.id, format_double(rec.wasserstein), format_double(rec.drift_delta),
                   format_double(rec.combined_ci), format_double(rec.ratio),
                   fmt_bool(rec.included)});

  ordered_json j = emit.summary("continuity");
  j["measure"] = opt.measure;
  j["alpha"] = opt.alpha;
  j["base_drift"] = summary.base_drift;
  j["base_half_width"] = summary.base_half_width;
  j["max_ratio"] = summary.max_ratio;
  j["included_count"] = summary.included_count;

  bool ok = true;
  if (opt.convolution_power_max > 0) {
    ordered_json checks = ordered_json::array();
    for (const auto& tilt : opt.tilts) {
      std::vector<double> weights = mu.weights;
      weights[tilt.up_index] += tilt.t;
      weights[tilt.down_index] -= tilt.t;
      FiniteSupportMeasure nudged = make_measure(cfg.space, mu.atoms, weights);
      ConvolutionWassersteinReport rep = convolution_wasserstein_check(
          cfg.space, cfg.visual, mu, mu, nudged, nudged, opt.alpha, lambda,
          opt.convolution_power_max, eff.cap, cfg.nets.chain);
      ordered_json entry;
      entry["t"] = tilt.t;
      entry["product_lhs"] = rep.product_lhs;
      entry["product_rhs"] = rep.product_rhs;
      entry["product_slack"] = rep.product_slack;
      entry["power_slack"] = rep.power_slack;
      entry["certified_violation"] = rep.certified_violation;
      checks.push_back(entry);
      ok = ok && !rep.certified_violation;
    }
    j["convolution_checks"] = checks;
  }
  j["pass"] = ok;
  emit.write("continuity", table, j);
  return ok ? kExitOk : kExitViolation;
}

int run_ldt(const ExperimentConfig& cfg, const Emitter& emit, const Effective& eff) {
  require(cfg.ldt.has_value(), Errc::invalid_config, "config has no ldt experiment");
  const auto& opt = *cfg.ldt;
  LdtResult result = ldt_fit(cfg.space, cfg.visual, cfg.measure(opt.measure), opt.epsilons,
                             opt.n_grid, opt.trials, eff.walk.seed, opt.probe,
                             opt.min_exceedances, eff.workers);

  CsvTable table({"observable", "epsilon", "n", "trials", "exceedances", "frequency",
                  "wilson_lo", "wilson_hi", "censored"});
  auto emit_fits = [&](const std::string& name, const std::vector<RateFit>& fits,
                       ordered_json& out) {
    for (const auto& fit : fits) {
      for (const auto& cell : fit.cells)
        table.add_row({name, format_double(cell.epsilon), std::to_string(cell.steps),
                       std::to_string(cell.trials), std::to_string(cell.exceedances),
                       format_double(cell.frequency), format_double(cell.wilson_lo),
                       format_double(cell.wilson_hi), fmt_bool(cell.censored)});
      ordered_json f;
      f["epsilon"] = fit.epsilon;
      f["slope"] = fit.slope;
      f["intercept"] = fit.intercept;
      f["r2"] = fit.r2;
      f["k_hat"] = fit.k_hat;
      f["uncensored_cells"] = fit.uncensored;
      out.push_back(f);
    }
  };

  ordered_json j = emit.summary("ldt");
  j["measure"] = opt.measure;
  j["trials"] = opt.trials;
  j["drift_reference"] = result.drift_reference;
  ordered_json disp_fits = ordered_json::array();
  emit_fits("displacement", result.displacement_fits, disp_fits);
  j["displacement_fits"] = disp_fits;
  if (!result.horofunction_fits.empty()) {
    ordered_json horo_fits = ordered_json::array();
    emit_fits("horofunction", result.horofunction_fits, horo_fits);
    j["horofunction_fits"] = horo_fits;
  }
  emit.write("ldt", table, j);
  return kExitOk;
}

}  // namespace

static constexpr std::string_view kCommandNames[] = {
    "validate-space", "drift", "hmet", "stationary", "contraction", "furstenberg",
    "continuity",     "ldt"};

std::span<const std::string_view> command_names() { return kCommandNames; }

bool is_known_command(const std::string& command) {
  if (command == "all") return true;
  for (auto name : kCommandNames)
    if (name == command) return true;
  return false;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_command(const ExperimentConfig& cfg, const std::string& command,
                const std::filesystem::path& out_dir, const RunOptions& options) {
  require(is_known_command(command), Errc::invalid_config, "unknown command '" + command + "'");
  Effective eff = effective(cfg, options);
  Emitter emit{cfg, out_dir, eff.walk.seed};

  auto dispatch = [&](const std::string& cmd) -> int {
    if (cmd == "validate-space") return run_validate_space(cfg, emit, eff);
    if (cmd == "drift") return run_drift(cfg, emit, eff);
    if (cmd == "hmet") return run_hmet(cfg, emit, eff);
    if (cmd == "stationary") return run_stationary(cfg, emit, eff);
    if (cmd == "contraction") return run_contraction(cfg, emit, eff);
    if (cmd == "furstenberg") return run_furstenberg(cfg, emit, eff);
    if (cmd == "continuity") return run_continuity(cfg, emit, eff);
    if (cmd == "ldt") return run_ldt(cfg, emit, eff);
    fail(Errc::invalid_config, "unknown command '" + cmd + "'");
  };

  if (command != "all") return dispatch(command);

  int worst = kExitOk;
  auto configured = [&](const std::string& cmd) {
    if (cmd == "validate-space") return cfg.validate_space.has_value();
    if (cmd == "drift") return cfg.drift.has_value();
    if (cmd == "hmet") return cfg.hmet.has_value();
    if (cmd == "stationary") return cfg.stationary.has_value();
    if (cmd == "contraction") return cfg.contraction.has_value();
    if (cmd == "furstenberg") return cfg.furstenberg.has_value();
    if (cmd == "continuity") return cfg.continuity.has_value();
    if (cmd == "ldt") return cfg.ldt.has_value();
    return false;
  };
  for (auto name : kCommandNames) {
    std::string cmd(name);
    if (configured(cmd)) worst = std::max(worst, dispatch(cmd));
  }
  return worst;
}

}  // namespace horolab
