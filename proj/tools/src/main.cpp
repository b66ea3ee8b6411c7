#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fracdu_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace fracdu::cli;
  CLI::App app{"fracdu: time-fractional Cauchy problems on periodic grids"};
  app.require_subcommand(1);
  const Streams io{std::cout, std::cerr};
  int status = kOk;

  auto* solve = app.add_subcommand("solve", "solve the problem described by a JSON config");
  std::string config;
  solve->add_option("config", config, "config file")->required();
  solve->callback([&] { status = run_solve(config, io); });

  auto* ml = app.add_subcommand("ml", "tabulate E_{alpha,beta} on a real range");
  double alpha = 0.0, beta = 0.0;
  std::string range;
  std::optional<std::string> out;
  ml->add_option("alpha", alpha)->required();
  ml->add_option("beta", beta)->required();
  ml->add_option("range", range, "lo:hi:step, a comma list, or one value")->required();
  ml->add_option("-o,--out", out, "write CSV here instead of stdout");
  ml->callback([&] { status = run_ml(alpha, beta, range, out, io); });

  auto* fracop = app.add_subcommand("fracop", "apply J, caputo or rl to a sampled series");
  std::string op, in_path, out_path;
  double order = 0.0;
  fracop->add_option("op", op, "J | caputo | rl")->required();
  fracop->add_option("order", order)->required();
  fracop->add_option("in", in_path, "input CSV (t, re[, im])")->required();
  fracop->add_option("out", out_path, "output CSV")->required();
  fracop->callback([&] { status = run_fracop(op, order, in_path, out_path, io); });

  auto* conv = app.add_subcommand("convergence", "time-step refinement study");
  int levels = 0;
  conv->add_option("config", config)->required();
  conv->add_option("levels", levels)->required();
  conv->callback([&] { status = run_convergence(config, levels, io); });

  auto* demo = app.add_subcommand("demo", "run a built-in scenario (subdiffusion, superdiffusion)");
  std::string name;
  demo->add_option("name", name)->required();
  demo->callback([&] { status = run_demo(name, io); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  return status;
}
