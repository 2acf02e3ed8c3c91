// Acceptance suite: runs the committed experiment configurations end to end
// and checks every desk-scale criterion, printing one PASS/FAIL line each.
// Every command is executed twice (1 worker and 8 workers, same seed) and the
// outputs must agree byte for byte.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lab/experiment.hpp"

using namespace horolab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int passed = 0;
  int failed = 0;
};

Outcome outcome;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (pass)
    ++outcome.passed;
  else
    ++outcome.failed;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunRecord {
  json summary;
  double seconds_serial = 0.0;
  double seconds_parallel = 0.0;
  bool deterministic = false;
  int exit_code = 0;
};

fs::path g_scratch;

// Runs the command at 1 and 8 workers with the same seed; outputs must match.
RunRecord run_pair(const ExperimentConfig& cfg, const std::string& command,
                   const std::string& tag, std::optional<uint64_t> seed = std::nullopt) {
  RunRecord rec;
  fs::path dir1 = g_scratch / (tag + "_w1");
  fs::path dir8 = g_scratch / (tag + "_w8");
  fs::remove_all(dir1);
  fs::remove_all(dir8);

  RunOptions serial;
  serial.workers = 1;
  serial.seed_override = seed;
  RunOptions parallel;
  parallel.workers = 8;
  parallel.seed_override = seed;

  auto t0 = std::chrono::steady_clock::now();
  int code1 = run_command(cfg, command, dir1, serial);
  auto t1 = std::chrono::steady_clock::now();
  int code8 = run_command(cfg, command, dir8, parallel);
  auto t2 = std::chrono::steady_clock::now();
  rec.seconds_serial = std::chrono::duration<double>(t1 - t0).count();
  rec.seconds_parallel = std::chrono::duration<double>(t2 - t1).count();
  rec.exit_code = std::max(code1, code8);

  rec.deterministic = code1 == code8;
  for (const auto& entry : fs::directory_iterator(dir1)) {
    fs::path other = dir8 / entry.path().filename();
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) rec.deterministic = false;
  }

  std::string base = command == "all" ? command : command;
  rec.summary = json::parse(slurp(dir1 / (command + ".json")));
  return rec;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <configs-dir> <scratch-dir>\n");
    return 64;
  }
  fs::path configs = argv[1];
  g_scratch = argv[2];
  fs::create_directories(g_scratch);

  ExperimentConfig f2 = load_config_file(configs / "f2_lab.json");
  ExperimentConfig halfplane = load_config_file(configs / "halfplane_lab.json");
  ExperimentConfig star = load_config_file(configs / "star_lab.json");
  ExperimentConfig deterministic = load_config_file(configs / "f2_deterministic.json");

  std::vector<RunRecord> all_runs;
  auto tracked = [&](const ExperimentConfig& cfg, const std::string& command,
                     const std::string& tag, std::optional<uint64_t> seed = std::nullopt) {
    RunRecord rec = run_pair(cfg, command, tag, seed);
    all_runs.push_back(rec);
    return rec;
  };

  // 1. Exact 4-point geometry on the tree and the star space.
  RunRecord tree_validate = tracked(f2, "validate-space", "f2_validate");
  RunRecord star_validate = tracked(star, "validate-space", "star_validate");
  {
    bool tree_ok = tree_validate.summary["four_point"]["holds"].get<bool>() &&
                   tree_validate.summary["four_point"]["samples"].get<uint64_t>() == 100000;
    bool star_ok = star_validate.summary["four_point"]["holds"].get<bool>() &&
                   star_validate.summary["four_point"]["samples"].get<uint64_t>() == 100000;
    bool fast = tree_validate.seconds_parallel < 10.0 && star_validate.seconds_parallel < 10.0;
    report(1, tree_ok && star_ok && fast,
           "tree/star 4-point exact on 1e5 quadruples (max defects " +
               fmt(tree_validate.summary["four_point"]["max_violation"].get<double>()) + ", " +
               fmt(star_validate.summary["four_point"]["max_violation"].get<double>()) + "; " +
               fmt(tree_validate.seconds_parallel) + " s, " +
               fmt(star_validate.seconds_parallel) + " s)");
  }

  // 2. The frozen half-plane delta survives 1e6 fresh quadruples.
  RunRecord hp_validate = tracked(halfplane, "validate-space", "hp_validate");
  {
    bool ok = hp_validate.summary["four_point"]["holds"].get<bool>() &&
              hp_validate.summary["four_point"]["samples"].get<uint64_t>() == 1000000 &&
              hp_validate.seconds_parallel < 60.0;
    report(2, ok,
           "half-plane delta=" + fmt(hp_validate.summary["four_point"]["delta"].get<double>()) +
               " max defect " +
               fmt(hp_validate.summary["four_point"]["max_violation"].get<double>()) + " over 1e6 (" +
               fmt(hp_validate.seconds_parallel) + " s)");
  }

  // 3. Drift of the uniform F2 walk against the birth-death value 1/2.
  RunRecord drift = tracked(f2, "drift", "f2_drift");
  {
    double mean = drift.summary["mean"].get<double>();
    bool ok = std::abs(mean - 0.5) < 0.02 && drift.seconds_parallel < 60.0;
    report(3, ok,
           "F2 drift " + fmt(mean) + " vs 0.5 (n=2000, 1000 trials, " +
               fmt(drift.seconds_parallel) + " s)");
  }

  // 4. HMET filtration: probe sees +drift, the walk's own limit sees -drift.
  RunRecord hmet = tracked(f2, "hmet", "f2_hmet");
  {
    double plus = hmet.summary["plus_mean"].get<double>();
    double minus = hmet.summary["minus_mean"].get<double>();
    bool ok = std::abs(plus - 0.5) <= 0.05 && std::abs(minus + 0.5) <= 0.05;
    report(4, ok, "HMET averages +" + fmt(plus) + " / " + fmt(minus) + " vs +-0.5");
  }

  // 5. Furstenberg formula cross-validation on three examples.
  RunRecord f2_furst = tracked(f2, "furstenberg", "f2_furstenberg");
  RunRecord hp_furst = tracked(halfplane, "furstenberg", "hp_furstenberg");
  RunRecord det_furst = tracked(deterministic, "furstenberg", "det_furstenberg");
  {
    double a = f2_furst.summary["stationary_case"]["abs_diff"].get<double>();
    double b = hp_furst.summary["stationary_case"]["abs_diff"].get<double>();
    double c = det_furst.summary["explicit_case"]["abs_diff"].get<double>();
    bool ok = a <= 0.05 && b <= 0.05 && c < 1e-12;
    report(5, ok,
           "Furstenberg vs sampled drift: F2 " + fmt(a) + ", half-plane " + fmt(b) +
               ", deterministic " + fmt(c));
  }

  // 6. Contraction of the boundary operator and submultiplicativity.
  RunRecord contraction = tracked(f2, "contraction", "f2_contraction");
  {
    bool found = !contraction.summary["contracting"].is_null();
    bool small_n = found && contraction.summary["contracting"]["n"].get<uint32_t>() <= 64;
    bool submult = contraction.summary["pass"].get<bool>();
    std::string where =
        found ? ("alpha=" + fmt(contraction.summary["contracting"]["alpha"].get<double>()) +
                 ", n=" + std::to_string(contraction.summary["contracting"]["n"].get<uint32_t>()) +
                 ", value=" + fmt(contraction.summary["contracting"]["value"].get<double>()))
              : std::string("none found");
    report(6, found && small_n && submult,
           "contraction " + where + "; submultiplicativity m+n<=6 " +
               (submult ? "holds" : "violated"));
  }

  // 7. Zero certified violations of the visual-ratio and comparison bounds.
  {
    bool ok = true;
    std::string detail = "certified violations:";
    for (auto* rec : {&tree_validate, &star_validate, &hp_validate}) {
      uint64_t rv = (*rec).summary["visual_ratio"]["certified_violations"].get<uint64_t>();
      uint64_t cv = (*rec).summary["comparison_bound"]["certified_violations"].get<uint64_t>();
      ok = ok && rv == 0 && cv == 0;
      detail += " " + (*rec).summary["space"].get<std::string>() + "=" + std::to_string(rv) +
                "/" + std::to_string(cv);
    }
    report(7, ok, detail + " over 1e4 instances each");
  }

  // 8. Convolution-Wasserstein inequality along the continuity pairs.
  RunRecord continuity = tracked(f2, "continuity", "f2_continuity");
  {
    bool ok = true;
    for (const auto& entry : continuity.summary["convolution_checks"])
      ok = ok && !entry["certified_violation"].get<bool>();
    report(8, ok, "convolution checks up to the 4th power on the tilt family");
  }

  // 9. Large-deviation decay shape for the uniform F2 walk.
  RunRecord ldt = tracked(f2, "ldt", "f2_ldt");
  {
    const auto& fits = ldt.summary["displacement_fits"];
    double slope01 = 0.0, slope02 = 0.0;
    bool shape = true;
    for (const auto& fit : fits) {
      double eps = fit["epsilon"].get<double>();
      double slope = fit["slope"].get<double>();
      double r2 = fit["r2"].get<double>();
      size_t cells = fit["uncensored_cells"].get<size_t>();
      if (cells >= 2) {
        shape = shape && slope < 0.0 && r2 >= 0.9;
        if (std::abs(eps - 0.1) < 1e-12) slope01 = slope;
        if (std::abs(eps - 0.2) < 1e-12) slope02 = slope;
      } else {
        shape = false;
      }
    }
    shape = shape && slope02 < slope01;
    bool fast = ldt.seconds_serial < 900.0 && ldt.seconds_parallel < 900.0;
    report(9, shape && fast,
           "LDT slopes " + fmt(slope01) + " (eps 0.1) vs " + fmt(slope02) +
               " (eps 0.2), 1e5 trials per cell (" + fmt(ldt.seconds_parallel) + " s)");
  }

  // 10. Continuity ratios bounded, and the bound is seed-stable within x2.
  {
    RunRecord reseeded = tracked(f2, "continuity", "f2_continuity_reseed",
                                 f2.walk.seed + 1000);
    double r1 = continuity.summary["max_ratio"].get<double>();
    double r2 = reseeded.summary["max_ratio"].get<double>();
    size_t included = continuity.summary["included_count"].get<size_t>();
    bool finite = std::isfinite(r1) && r1 > 0.0 && included >= 3;
    bool stable = r1 / r2 <= 2.0 && r2 / r1 <= 2.0;
    report(10, finite && stable,
           "continuity ratio bound " + fmt(r1) + " vs reseeded " + fmt(r2) + " (" +
               std::to_string(included) + " included pairs)");
  }

  // 11. Byte-identical outputs across reruns and worker counts 1 vs 8.
  {
    bool ok = true;
    for (const auto& rec : all_runs) ok = ok && rec.deterministic;
    report(11, ok,
           "outputs byte-identical across worker counts for " +
               std::to_string(all_runs.size()) + " command runs");
  }

  std::printf("acceptance: %d passed, %d failed\n", outcome.passed, outcome.failed);
  return outcome.failed == 0 ? 0 : 1;
}
