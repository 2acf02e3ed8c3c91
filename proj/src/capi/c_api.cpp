#include "horolab.h"

#include <cstring>
#include <string>

#include "core/parallel.hpp"
#include "lab/experiment.hpp"

using namespace horolab;

struct hl_lab {
  ExperimentConfig config;
  RunOptions options;
  std::string last_error;
};

namespace {

void copy_error(const std::string& message, char* err, size_t err_len) {
  if (!err || err_len == 0) return;
  size_t n = std::min(message.size(), err_len - 1);
  std::memcpy(err, message.data(), n);
  err[n] = '\0';
}

hl_lab* open_from(const std::function<ExperimentConfig()>& load, char* err, size_t err_len) {
  try {
    auto lab = new hl_lab;
    lab->config = load();
    lab->options.workers = default_workers();
    return lab;
  } catch (const std::exception& e) {
    copy_error(e.what(), err, err_len);
    return nullptr;
  }
}

}  // namespace

extern "C" {

const char* hl_version(void) { return "0.1.0"; }

hl_lab* hl_lab_open(const char* config_path, char* err, size_t err_len) {
  if (!config_path) {
    copy_error("config_path is null", err, err_len);
    return nullptr;
  }
  std::string path(config_path);
  return open_from([path] { return load_config_file(path); }, err, err_len);
}

hl_lab* hl_lab_open_text(const char* config_text, char* err, size_t err_len) {
  if (!config_text) {
    copy_error("config_text is null", err, err_len);
    return nullptr;
  }
  std::string text(config_text);
  return open_from([text] { return load_config_text(text); }, err, err_len);
}

void hl_lab_close(hl_lab* lab) { delete lab; }

void hl_lab_set_seed(hl_lab* lab, uint64_t seed) {
  if (lab) lab->options.seed_override = seed;
}

void hl_lab_set_workers(hl_lab* lab, unsigned workers) {
  if (lab) lab->options.workers = workers == 0 ? 1 : workers;
}

void hl_lab_set_enumeration_cap(hl_lab* lab, uint64_t cap) {
  if (lab) lab->options.cap_override = cap;
}

uint64_t hl_lab_config_hash(const hl_lab* lab) { return lab ? lab->config.config_hash : 0; }

hl_status hl_lab_run(hl_lab* lab, const char* command, const char* out_dir) {
  if (!lab) return HL_BAD_ARGUMENT;
  if (!command || !out_dir) {
    lab->last_error = "command and out_dir must be non-null";
    return HL_BAD_ARGUMENT;
  }
  try {
    lab->last_error.clear();
    int code = run_command(lab->config, command, out_dir, lab->options);
    return code == kExitOk ? HL_OK : HL_VIOLATION;
  } catch (const std::exception& e) {
    lab->last_error = e.what();
    return HL_CONFIG_ERROR;
  }
}

const char* hl_lab_error(const hl_lab* lab) {
  if (!lab) return "null lab handle";
  return lab->last_error.c_str();
}

}  // extern "C"
