#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracdu {

enum class ErrorKind {
  domain,
  pole,
  convergence,
  grid_mismatch,
  insufficient_samples,
  unsupported_profile,
  symmetry_violation,
  symbol_evaluation,
  hypothesis_violation,
  quadrature,
  config,
  io,
  syntax,
  evaluation,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library error. `module()` names the component that raised it so callers
/// (the CLI in particular) can report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string message_;
};

}  // namespace fracdu
