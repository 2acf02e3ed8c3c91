// Command-line front end; talks to the core exclusively through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "horolab.h"

int main(int argc, char** argv) {
  CLI::App app{"horolab — random walks and boundary geometry on model hyperbolic spaces"};
  app.set_version_flag("--version", std::string(hl_version()));

  std::string command;
  std::string config_path;
  std::string out_dir = "out";
  unsigned long long seed = 0;
  bool seed_set = false;
  unsigned workers = 0;
  unsigned long long cap = 0;
  bool cap_set = false;

  app.add_option("command", command,
                 "validate-space | drift | hmet | stationary | contraction | furstenberg | "
                 "continuity | ldt | all")
      ->required();
  app.add_option("--config", config_path, "experiment configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (CSV + JSON per command)");
  auto* seed_opt = app.add_option("--seed", seed, "override the configured master seed");
  app.add_option("--workers", workers, "worker threads (default: available parallelism)");
  auto* cap_opt = app.add_option("--cap", cap, "override the exact-enumeration support cap");

  CLI11_PARSE(app, argc, argv);
  seed_set = seed_opt->count() > 0;
  cap_set = cap_opt->count() > 0;

  char err[1024];
  hl_lab* lab = hl_lab_open(config_path.c_str(), err, sizeof err);
  if (!lab) {
    std::fprintf(stderr, "horolab: %s\n", err);
    return 2;
  }
  if (seed_set) hl_lab_set_seed(lab, seed);
  if (workers > 0) hl_lab_set_workers(lab, workers);
  if (cap_set) hl_lab_set_enumeration_cap(lab, cap);

  hl_status status = hl_lab_run(lab, command.c_str(), out_dir.c_str());
  int exit_code = 0;
  switch (status) {
    case HL_OK:
      std::printf("horolab: %s completed, outputs in %s\n", command.c_str(), out_dir.c_str());
      exit_code = 0;
      break;
    case HL_VIOLATION:
      std::fprintf(stderr, "horolab: %s reported a certified violation (see %s)\n",
                   command.c_str(), out_dir.c_str());
      exit_code = 1;
      break;
    default:
      std::fprintf(stderr, "horolab: %s\n", hl_lab_error(lab));
      exit_code = 2;
      break;
  }
  hl_lab_close(lab);
  return exit_code;
}
