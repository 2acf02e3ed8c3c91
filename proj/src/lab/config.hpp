#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "analysis/analysis.hpp"

namespace horolab {

struct NetConfig {
  std::vector<BordPoint> chain;              // interior + boundary chain/probe net
  std::vector<BoundaryPoint> boundary;       // boundary members of the net
  std::vector<Point> interior;               // interior members
  BoundaryPairNet pairs;                     // distinct boundary pairs
  std::vector<Horofunction> horofunctions;   // anchored horofunction net
};

struct ValidateSpaceOptions {
  uint64_t samples = 100000;
  uint64_t ratio_samples = 0;       // visual-ratio instances (0 = skip)
  uint64_t comparison_samples = 0;  // comparison-bound instances (0 = skip)
  std::optional<double> delta_override;
};

struct DriftOptions {
  std::string measure;
  std::vector<uint32_t> fekete_orders;
};

struct HmetOptions {
  std::string measure;
  BoundaryPoint probe;
  double eval_fraction = 0.5;
  double tolerance = 0.05;
};

struct StationaryOptions {
  std::string measure;
  uint32_t steps = 50;
  uint32_t trials = 5000;
  std::vector<BoundaryPoint> starts;
  double alpha = 0.5;
  double tolerance = 0.05;
  uint32_t plane_bins = 1024;
};

struct ContractionOptions {
  std::string measure;
  uint32_t alpha_levels = 8;
  uint32_t n_max = 64;
  uint32_t mc_samples = 20000;
  uint32_t submult_total = 6;  // check all m+n <= this by enumeration
  double submult_alpha = 0.5;
};

struct FurstenbergOptions {
  std::string measure;
  double tolerance = 0.05;
  std::optional<uint32_t> stationary_steps;
  uint32_t stationary_trials = 5000;
  std::optional<BoundaryPoint> start;
  std::vector<std::pair<BoundaryPoint, double>> explicit_atoms;
  double explicit_tolerance = 1e-12;
};

struct ContinuityOptions {
  std::string measure;
  double alpha = 0.5;
  std::vector<WeightTilt> tilts;
  uint32_t convolution_power_max = 4;  // 0 = skip the convolution check
};

struct LdtOptions {
  std::string measure;
  std::vector<double> epsilons;
  std::vector<uint32_t> n_grid;
  uint32_t trials = 100000;
  std::optional<BoundaryPoint> probe;
  uint32_t min_exceedances = 5;
};

struct ExperimentConfig {
  SpaceModel space;
  VisualConfig visual;
  SamplerParams sampler;
  std::map<std::string, FiniteSupportMeasure> measures;
  std::map<std::string, double> measure_lambda;
  NetConfig nets;
  WalkParams walk;
  uint64_t enumeration_cap = 1000000;

  std::optional<ValidateSpaceOptions> validate_space;
  std::optional<DriftOptions> drift;
  std::optional<HmetOptions> hmet;
  std::optional<StationaryOptions> stationary;
  std::optional<ContractionOptions> contraction;
  std::optional<FurstenbergOptions> furstenberg;
  std::optional<ContinuityOptions> continuity;
  std::optional<LdtOptions> ldt;

  uint64_t config_hash = 0;

  const FiniteSupportMeasure& measure(const std::string& name) const;
  double lambda_of(const std::string& name) const;
};

ExperimentConfig load_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

uint64_t fnv1a_hash(std::string_view bytes);

}  // namespace horolab
