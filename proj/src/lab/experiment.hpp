#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lab/config.hpp"

namespace horolab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitConfigError = 2;

struct RunOptions {
  std::optional<uint64_t> seed_override;
  std::optional<uint64_t> cap_override;
  unsigned workers = 1;
};

std::span<const std::string_view> command_names();  // without "all"

bool is_known_command(const std::string& command);

// Runs one experiment command, writing <command>.csv and <command>.json under
// out_dir (atomically). Returns kExitOk, or kExitViolation when a configured
// check certifies a violation. Configuration and I/O problems throw.
int run_command(const ExperimentConfig& cfg, const std::string& command,
                const std::filesystem::path& out_dir, const RunOptions& options);

std::string format_double(double v);  // shortest round-trip, stable across runs

}  // namespace horolab
