#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracdu/error.hpp"
#include "fracdu_cli/config.hpp"

namespace fracdu::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverError = 3, kIoError = 4 };

/// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "FRACDU_OUTPUT_DIR";

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int exit_code_for(const Error& e) noexcept;

/// Runs `body`, reporting errors on `err` and mapping them to exit codes.
int guarded(Streams io, const std::function<int()>& body);

/// Output directory for a run: $FRACDU_OUTPUT_DIR when set, else the configured one.
std::string output_directory(const RunConfig& cfg);

/// Real sample points from "lo:hi:step", a comma list, or a single value.
std::vector<double> parse_range(const std::string& spec);

std::vector<std::string> demo_names();
/// Built-in configuration text of a demo; throws ConfigError for unknown names.
std::string demo_config(const std::string& name);

int run_solve(const std::string& config_path, Streams io);
int run_solve_config(const RunConfig& cfg, Streams io);
int run_ml(double alpha, double beta, const std::string& range, const std::optional<std::string>& out_path,
           Streams io);
int run_fracop(const std::string& op, double order, const std::string& in_path, const std::string& out_path,
               Streams io);
int run_convergence(const std::string& config_path, int levels, Streams io);
int run_demo(const std::string& name, Streams io);

}  // namespace fracdu::cli
