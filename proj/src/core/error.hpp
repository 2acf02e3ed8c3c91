#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

enum class Errc {
  invalid_point,
  invalid_net,
  invalid_alpha,
  invalid_pair,
  invalid_measure,
  lambda_violation,
  support_explosion,
  insufficient_escape,
  insufficient_trials,
  invalid_config,
  io_failure,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_point: return "InvalidPoint";
    case Errc::invalid_net: return "InvalidNet";
    case Errc::invalid_alpha: return "InvalidAlpha";
    case Errc::invalid_pair: return "InvalidPair";
    case Errc::invalid_measure: return "InvalidMeasure";
    case Errc::lambda_violation: return "LambdaViolation";
    case Errc::support_explosion: return "SupportExplosion";
    case Errc::insufficient_escape: return "InsufficientEscape";
    case Errc::insufficient_trials: return "InsufficientTrials";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace horolab
