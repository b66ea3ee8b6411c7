#include "fracdu/error.hpp"

namespace fracdu {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::pole: return "pole";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::insufficient_samples: return "insufficient_samples";
    case ErrorKind::unsupported_profile: return "unsupported_profile";
    case ErrorKind::symmetry_violation: return "symmetry_violation";
    case ErrorKind::symbol_evaluation: return "symbol_evaluation";
    case ErrorKind::hypothesis_violation: return "hypothesis_violation";
    case ErrorKind::quadrature: return "quadrature";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::syntax: return "syntax";
    case ErrorKind::evaluation: return "evaluation";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error("[" + module + "] " + message),
      kind_(kind),
      module_(std::move(module)),
      message_(message) {}

}  // namespace fracdu
