#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "horolab.h"
#include "lab/experiment.hpp"

using namespace horolab;

namespace {

const char* kQuickTreeConfig = R"json({
  "space": {"kind": "free_group_tree", "rank": 2},
  "visual": {"base": 2.0},
  "measures": {
    "uniform4": {"atoms": ["a", "A", "b", "B"], "weights": [0.25, 0.25, 0.25, 0.25], "lambda": 5.0},
    "det_ab": {"atoms": ["ab"], "weights": [1.0], "lambda": 5.0}
  },
  "nets": {
    "boundary": {"tree_depth": 2, "extra": ["(ab)", "(ba)"]},
    "interior": ["", "a", "b"],
    "pairs": {"max_pairs": 24},
    "horofunctions": {"boundary": ["(a)", "(A)", "(b)", "(B)", "(ab)"], "interior": ["a"]}
  },
  "walk": {"steps": 300, "trials": 120, "seed": 2024, "checkpoints": 16},
  "caps": {"enumeration": 1000000},
  "experiments": {
    "validate_space": {"samples": 4000, "ratio_samples": 400, "comparison_samples": 400},
    "drift": {"measure": "uniform4", "fekete_orders": [1, 2, 3]},
    "hmet": {"measure": "uniform4", "probe": "(a)", "eval_fraction": 0.5, "tolerance": 0.15},
    "stationary": {"measure": "uniform4", "steps": 30, "trials": 400, "starts": ["(a)", "(b)"],
                   "alpha": 0.5, "tolerance": 0.1},
    "contraction": {"measure": "uniform4", "alpha_levels": 4, "n_max": 8, "mc_samples": 2000,
                    "submult_total": 4, "submult_alpha": 0.5},
    "furstenberg": {"measure": "det_ab", "explicit_atoms": [["(BA)", 1.0]],
                    "explicit_tolerance": 1e-12},
    "continuity": {"measure": "uniform4", "alpha": 0.5,
                   "tilts": [{"up": 0, "down": 1, "t": 0.02}], "convolution_power_max": 2},
    "ldt": {"measure": "uniform4", "epsilons": [0.15], "n_grid": [40, 80, 160],
            "trials": 4000, "min_exceedances": 5}
  }
})json";

std::filesystem::path fresh_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("horolab_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing accepts the reference config") {
  ExperimentConfig cfg = load_config_text(kQuickTreeConfig);
  CHECK(cfg.space.kind == SpaceKind::free_group_tree);
  CHECK(cfg.visual.base == 2.0);
  CHECK(cfg.measures.size() == 2);
  CHECK(cfg.measure("uniform4").size() == 4);
  CHECK(cfg.lambda_of("uniform4") == 5.0);
  CHECK(cfg.nets.boundary.size() == 12 + 2);
  CHECK(cfg.nets.pairs.size() == 24);
  CHECK(cfg.nets.horofunctions.size() == 6);
  CHECK(cfg.walk.steps == 300);
  CHECK(cfg.drift.has_value());
  CHECK(cfg.ldt.has_value());
  CHECK(cfg.config_hash == fnv1a_hash(kQuickTreeConfig));
}

TEST_CASE("config validation rejects malformed input") {
  auto expect_config_error = [](const std::string& text) {
    CHECK_THROWS_AS(load_config_text(text), Error);
  };
  expect_config_error("not json at all");
  expect_config_error(R"({"space": {"kind": "free_group_tree", "rank": 2}, "bogus": 1})");
  expect_config_error(R"({"space": {"kind": "free_group_tree", "rank": 1}})");
  expect_config_error(R"({"space": {"kind": "unknown"}})");
  // weights that do not sum to one
  expect_config_error(R"({
    "space": {"kind": "free_group_tree", "rank": 2},
    "measures": {"bad": {"atoms": ["a", "b"], "weights": [0.5, 0.4]}}
  })");
  // atom outside the declared lambda ball
  expect_config_error(R"({
    "space": {"kind": "free_group_tree", "rank": 2},
    "measures": {"bad": {"atoms": ["ab"], "weights": [1.0], "lambda": 4.0}}
  })");
  // visual base above 2^(1/delta)
  expect_config_error(R"({
    "space": {"kind": "upper_half_plane", "delta": 0.75},
    "visual": {"base": 2.8}
  })");
  // walk experiments are rejected on the star space
  expect_config_error(R"({
    "space": {"kind": "star", "rays": 4},
    "measures": {"m": {"atoms": [[1, 0, 2, 3]], "weights": [1.0]}},
    "experiments": {"drift": {"measure": "m"}}
  })");
  // unreduced word
  expect_config_error(R"({
    "space": {"kind": "free_group_tree", "rank": 2},
    "measures": {"m": {"atoms": ["aA"], "weights": [1.0]}}
  })");
}

TEST_CASE("experiment outputs are deterministic across runs and worker counts") {
  ExperimentConfig cfg = load_config_text(kQuickTreeConfig);
  auto dir1 = fresh_dir("det1");
  auto dir2 = fresh_dir("det2");

  RunOptions one;
  one.workers = 1;
  RunOptions eight;
  eight.workers = 8;

  for (const char* cmd : {"drift", "hmet", "stationary", "ldt"}) {
    CHECK(run_command(cfg, cmd, dir1, one) == kExitOk);
    CHECK(run_command(cfg, cmd, dir2, eight) == kExitOk);
    CHECK(slurp(dir1 / (std::string(cmd) + ".csv")) == slurp(dir2 / (std::string(cmd) + ".csv")));
    CHECK(slurp(dir1 / (std::string(cmd) + ".json")) ==
          slurp(dir2 / (std::string(cmd) + ".json")));
  }

  // a different seed changes the outputs
  RunOptions reseeded;
  reseeded.workers = 4;
  reseeded.seed_override = 999;
  auto dir3 = fresh_dir("det3");
  CHECK(run_command(cfg, "drift", dir3, reseeded) == kExitOk);
  CHECK(slurp(dir1 / "drift.csv") != slurp(dir3 / "drift.csv"));
}

TEST_CASE("the full command set runs green on the quick config") {
  ExperimentConfig cfg = load_config_text(kQuickTreeConfig);
  auto dir = fresh_dir("all");
  RunOptions options;
  options.workers = 4;
  CHECK(run_command(cfg, "all", dir, options) == kExitOk);
  for (const char* cmd : {"validate-space", "drift", "hmet", "stationary", "contraction",
                          "furstenberg", "continuity", "ldt"}) {
    CHECK(std::filesystem::exists(dir / (std::string(cmd) + ".csv")));
    CHECK(std::filesystem::exists(dir / (std::string(cmd) + ".json")));
  }
  // outputs carry the config hash
  std::string json = slurp(dir / "drift.json");
  char expected[32];
  std::snprintf(expected, sizeof expected, "%016llx",
                static_cast<unsigned long long>(cfg.config_hash));
  CHECK(json.find(expected) != std::string::npos);
}

TEST_CASE("C API round trip") {
  CHECK(std::string(hl_version()) == "0.1.0");

  char err[512] = {0};
  hl_lab* bad = hl_lab_open_text("{\"space\": 3}", err, sizeof err);
  CHECK(bad == nullptr);
  CHECK(std::string(err).find("space") != std::string::npos);

  hl_lab* missing = hl_lab_open("/nonexistent/config.json", err, sizeof err);
  CHECK(missing == nullptr);

  hl_lab* lab = hl_lab_open_text(kQuickTreeConfig, err, sizeof err);
  REQUIRE(lab != nullptr);
  CHECK(hl_lab_config_hash(lab) == fnv1a_hash(kQuickTreeConfig));

  auto dir = fresh_dir("capi");
  hl_lab_set_workers(lab, 4);
  hl_lab_set_seed(lab, 4242);
  CHECK(hl_lab_run(lab, "drift", dir.string().c_str()) == HL_OK);
  CHECK(std::filesystem::exists(dir / "drift.csv"));

  CHECK(hl_lab_run(lab, "no-such-command", dir.string().c_str()) == HL_CONFIG_ERROR);
  CHECK(std::string(hl_lab_error(lab)).find("command") != std::string::npos);

  CHECK(hl_lab_run(nullptr, "drift", "x") == HL_BAD_ARGUMENT);
  hl_lab_close(lab);
}

TEST_CASE("violations surface as exit status one") {
  // an absurdly tight hmet tolerance cannot hold
  std::string text(kQuickTreeConfig);
  auto pos = text.find("\"tolerance\": 0.15");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 17, "\"tolerance\": 1e-9");
  char err[512];
  hl_lab* lab = hl_lab_open_text(text.c_str(), err, sizeof err);
  REQUIRE(lab != nullptr);
  auto dir = fresh_dir("violation");
  hl_lab_set_workers(lab, 4);
  CHECK(hl_lab_run(lab, "hmet", dir.string().c_str()) == HL_VIOLATION);
  hl_lab_close(lab);
}
