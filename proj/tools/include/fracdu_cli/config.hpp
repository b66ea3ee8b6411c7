#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fracdu/duhamel.hpp"
#include "fracdu_cli/expression.hpp"

namespace fracdu::cli {

/// Every schema violation found in a configuration, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct SourceSpec {
  struct Term {
    CatalogProfile profile;
    std::string profile_text;
    std::string shape;
  };
  std::vector<Term> terms;
  /// CSV of samples (columns t, x or x1,x2, re, im); resolved against the config's directory.
  std::optional<std::string> file;

  bool empty() const noexcept { return terms.empty() && !file; }
};

struct RunConfig {
  double alpha = 0.0;
  FractionalOrder order{1.0, 1};
  std::string symbol;
  ZeroModeRule zero_mode = ZeroModeRule::error;
  int dim = 1;
  std::array<int, 2> points{0, 1};
  std::array<double, 2> length{SpaceGrid::kDefaultLength, SpaceGrid::kDefaultLength};
  double t_end = 0.0;
  int steps = 0;
  int output_every = 1;
  std::vector<std::string> initial;
  SourceSpec source;
  SolveMethod method = SolveMethod::duhamel;
  double residual_tolerance = 1e-2;
  SolveOptions solver;
  std::string output_dir = "fracdu_out";
  std::string prefix = "run";
  std::optional<std::string> exact;
  /// The document as given, echoed into the metadata.
  std::string source_json;

  SpaceGrid space() const { return SpaceGrid(dim, points, length); }
  TimeGrid time() const { return TimeGrid::over(t_end, steps); }
};

/// Parses and validates a JSON configuration. `base_dir` resolves relative
/// sample-file paths. Throws ConfigError listing every violation.
RunConfig parse_config_text(const std::string& json_text, const std::string& base_dir = ".");
RunConfig parse_config(const std::string& path);

/// Symbol from its text: a registry name (laplacian, fractional_laplacian(s),
/// advection(c), constant(lambda), polynomial(c0, c1, ...)) or an expression
/// in xi (xi1, xi2 in 2-D, where xi is |xi|).
Symbol build_symbol(const std::string& text, int dim, ZeroModeRule rule = ZeroModeRule::error);

/// Field from an expression in x (x1, x2 in 2-D; x is x1).
Field build_field(const std::string& text, const SpaceGrid& grid);

/// Cauchy problem described by a configuration, with `steps` overriding the
/// configured number of time steps when positive.
CauchyProblem build_problem(const RunConfig& cfg, int steps = 0);

}  // namespace fracdu::cli
