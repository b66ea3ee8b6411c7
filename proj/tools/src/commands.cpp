#include "fracdu_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fracdu/mittag_leffler.hpp"
#include "fracdu_cli/csv.hpp"
#include "json.hpp"

namespace fracdu::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kModule = "cli_harness";

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string prepare_directory(const RunConfig& cfg) {
  const std::string dir = output_directory(cfg);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::io, kModule, "cannot create output directory '" + dir + "'");
  }
  return dir;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::io, kModule, "cannot open '" + path + "' for writing");
  os << doc.dump(2) << '\n';
  if (!os) throw Error(ErrorKind::io, kModule, "failed writing '" + path + "'");
}

CsvTable solution_table(const Solution& s, int output_every) {
  CsvTable t;
  t.header = {"t"};
  if (s.space.dim() == 2) {
    t.header.insert(t.header.end(), {"x1", "x2"});
  } else {
    t.header.push_back("x");
  }
  t.header.insert(t.header.end(), {"re", "im"});
  const int n_steps = s.grid.n_steps();
  for (int n = 0; n <= n_steps; ++n) {
    if (n % output_every != 0 && n != n_steps) continue;
    const Field f = s.field(n);
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      const auto x = s.space.node(j);
      std::vector<double> row{s.grid.node(n), x[0]};
      if (s.space.dim() == 2) row.push_back(x[1]);
      row.push_back(f.values[j].real());
      row.push_back(f.values[j].imag());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

double solution_sup(const Solution& s) {
  double m = 0.0;
  for (int n = 0; n <= s.grid.n_steps(); ++n) {
    for (const cplx& v : s.field(n).values) m = std::max(m, std::abs(v));
  }
  return m;
}

// Relative sup-norm distance between u(t_end) and the exact expression.
double exact_error(const Solution& s, const std::string& exact) {
  const ExprPtr e = parse_expression(exact);
  const Field u = s.field(s.grid.n_steps());
  const double t = s.grid.t_end();
  double err = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    const auto x = s.space.node(j);
    Bindings b{{"t", t}, {"x", x[0]}, {"x1", x[0]}};
    if (s.space.dim() == 2) b["x2"] = x[1];
    const cplx ref = evaluate(*e, b);
    err = std::max(err, std::abs(u.values[j] - ref));
    scale = std::max(scale, std::abs(ref));
  }
  return scale > 0.0 ? err / scale : err;
}

double final_gap(const Solution& a, const Solution& b) {
  const Field fa = a.field(a.grid.n_steps());
  const Field fb = b.field(b.grid.n_steps());
  double gap = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < fa.values.size(); ++j) {
    gap = std::max(gap, std::abs(fa.values[j] - fb.values[j]));
    scale = std::max(scale, std::abs(fb.values[j]));
  }
  return scale > 0.0 ? gap / scale : gap;
}

std::string forcing_name(const Solution& s) {
  switch (s.meta.method) {
    case MethodTag::duhamel_caputo: return "caputo";
    case MethodTag::duhamel_rl: return "riemann_liouville";
    default: return "";
  }
}

}  // namespace

int exit_code_for(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::config:
    case ErrorKind::syntax:
    case ErrorKind::evaluation:
    case ErrorKind::unsupported_profile: return kConfigError;
    case ErrorKind::io: return kIoError;
    default: return kSolverError;
  }
}

int guarded(Streams io, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kSolverError;
  }
}

std::string output_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return cfg.output_dir;
}

std::vector<double> parse_range(const std::string& spec) {
  auto number = [&](const std::string& s) {
    const ExprPtr e = parse_expression(s);
    check_identifiers(*e, {});
    const cplx v = evaluate(*e, {});
    if (v.imag() != 0.0) throw Error(ErrorKind::config, kModule, "range values must be real: '" + s + "'");
    return v.real();
  };
  std::vector<std::string> parts;
  char sep = spec.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (parts.empty()) throw Error(ErrorKind::config, kModule, "empty range");
  std::vector<double> out;
  if (sep == ',') {
    for (const std::string& p : parts) out.push_back(number(p));
    return out;
  }
  if (parts.size() != 3) throw Error(ErrorKind::config, kModule, "range must be lo:hi:step, got '" + spec + "'");
  const double lo = number(parts[0]);
  const double hi = number(parts[1]);
  const double step = number(parts[2]);
  if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::config, kModule, "range needs lo <= hi and step > 0");
  const double count = std::floor((hi - lo) / step * (1.0 + 1e-12)) + 1.0;
  if (count > 1e7) throw Error(ErrorKind::config, kModule, "range has too many points");
  for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(lo + i * step);
  return out;
}

std::vector<std::string> demo_names() { return {"subdiffusion", "superdiffusion"}; }

std::string demo_config(const std::string& name) {
  if (name == "subdiffusion") {
    // 0 < alpha < 1 with a source vanishing at t = 0: Caputo forcing.
    return R"json({
  "alpha": 0.5,
  "symbol": "laplacian",
  "grid": {"dim": 1, "points": 32},
  "time": {"t_end": 1.0, "steps": 400, "output_every": 40},
  "initial": ["cos(x)"],
  "source": {"terms": [{"profile": "t", "shape": "cos(x)"}]},
  "method": "duhamel",
  "tolerances": {"residual": 0.05},
  "output": {"prefix": "subdiffusion"}
})json";
  }
  if (name == "superdiffusion") {
    // 1 < alpha < 2 with a constant-in-time force: Riemann-Liouville forcing.
    return R"json({
  "alpha": 1.5,
  "symbol": "laplacian",
  "grid": {"dim": 1, "points": 32},
  "time": {"t_end": 1.0, "steps": 400, "output_every": 40},
  "initial": ["cos(x)", "sin(2*x)"],
  "source": {"terms": [{"profile": "1", "shape": "cos(x)"}]},
  "method": "duhamel",
  "tolerances": {"residual": 0.05},
  "output": {"prefix": "superdiffusion"}
})json";
  }
  std::string list;
  for (const std::string& n : demo_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError({"unknown demo '" + name + "' (available: " + list + ")"});
}

int run_solve_config(const RunConfig& cfg, Streams io) {
  const auto start = std::chrono::steady_clock::now();
  const CauchyProblem p = build_problem(cfg);
  const std::string dir = prepare_directory(cfg);
  const Solution s = full_solve(p, cfg.method, cfg.solver);
  const ResidualReport r = residual_norm(s, p);
  const double u_max = solution_sup(s);
  // The L1 scheme is least accurate at the first nodes when u ~ t^alpha, so the
  // tolerance applies to the discrete L2 norm; the sup norm is reported as well.
  const double scale_max = std::max(r.source_max, u_max);
  const double relative_max = scale_max > 0.0 ? r.max / scale_max : r.max;
  const double scale_rms = std::max(r.source_rms, u_max);
  const double relative = scale_rms > 0.0 ? r.rms / scale_rms : r.rms;
  std::vector<std::string> warnings = s.meta.warnings;
  if (!(relative <= cfg.residual_tolerance)) {
    warnings.push_back("relative residual " + format_number(relative) + " exceeds tolerance " +
                       format_number(cfg.residual_tolerance));
  }

  const fs::path base = fs::path(dir) / cfg.prefix;
  const std::string sol_path = base.string() + "_solution.csv";
  const std::string res_path = base.string() + "_residual.csv";
  const std::string meta_path = base.string() + "_meta.json";
  write_csv(sol_path, solution_table(s, cfg.output_every));
  CsvTable res;
  res.header = {"t", "residual_max"};
  for (std::size_t n = 0; n < r.time_max.size(); ++n) res.rows.push_back({s.grid.node(static_cast<int>(n) + 1), r.time_max[n]});
  write_csv(res_path, res);

  json meta;
  meta["config"] = json::parse(cfg.source_json);
  meta["alpha"] = cfg.alpha;
  meta["m"] = cfg.order.m;
  meta["method"] = std::string(to_string(cfg.method));
  meta["method_tag"] = std::string(to_string(s.meta.method));
  const std::string forcing = forcing_name(s);
  meta["forcing"] = forcing.empty() ? json(nullptr) : json(forcing);
  meta["hypothesis"] = s.meta.hypothesis;
  meta["quadrature"] = s.meta.quadrature;
  meta["time_step"] = s.meta.step;
  meta["truncation_estimate"] = finite_or_null(s.meta.truncation_estimate);
  meta["stability"] = {{"max_real_symbol", finite_or_null(s.meta.max_real_symbol)},
                       {"stable", s.meta.max_real_symbol <= 0.0}};
  meta["warnings"] = warnings;
  json initial = json::array();
  for (double v : r.initial) initial.push_back(finite_or_null(v));
  meta["residual"] = {{"max", finite_or_null(r.max)},
                      {"rms", finite_or_null(r.rms)},
                      {"source_max", finite_or_null(r.source_max)},
                      {"source_rms", finite_or_null(r.source_rms)},
                      {"solution_max", finite_or_null(u_max)},
                      {"relative_max", finite_or_null(relative_max)},
                      {"relative", finite_or_null(relative)},
                      {"tolerance", cfg.residual_tolerance},
                      {"within_tolerance", relative <= cfg.residual_tolerance},
                      {"initial", initial}};
  if (cfg.exact) meta["exact_error"] = finite_or_null(exact_error(s, *cfg.exact));
  meta["files"] = {{"solution", sol_path}, {"residual", res_path}, {"metadata", meta_path}};
  meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(meta_path, meta);

  io.out << "solution: " << sol_path << "\nresidual: " << res_path << "\nmetadata: " << meta_path << '\n';
  for (const std::string& w : warnings) io.err << "warning: " << w << '\n';
  return kOk;
}

int run_solve(const std::string& config_path, Streams io) {
  return guarded(io, [&] { return run_solve_config(parse_config(config_path), io); });
}

int run_ml(double alpha, double beta, const std::string& range, const std::optional<std::string>& out_path,
           Streams io) {
  return guarded(io, [&] {
    CsvTable t;
    t.header = {"z", "re", "im"};
    for (double z : parse_range(range)) {
      const cplx v = ml(alpha, beta, z);
      t.rows.push_back({z, v.real(), v.imag()});
    }
    if (out_path) {
      write_csv(*out_path, t);
    } else {
      write_csv(io.out, t);
    }
    return kOk;
  });
}

int run_fracop(const std::string& op, double order, const std::string& in_path, const std::string& out_path,
               Streams io) {
  return guarded(io, [&] {
    if (op != "J" && op != "caputo" && op != "rl") {
      throw ConfigError({"unknown operator '" + op + "' (available: J, caputo, rl)"});
    }
    const CsvTable in = read_csv(in_path);
    const int ct = in.column("t");
    int cre = in.column("re");
    if (cre < 0 && in.header.size() >= 2) cre = ct == 0 ? 1 : 0;
    const int cim = in.column("im");
    if (ct < 0 || cre < 0) throw ConfigError({"input needs a 't' column and a value column ('re' or second column)"});
    if (in.rows.size() < 2) throw ConfigError({"input needs at least two samples"});
    const int n_steps = static_cast<int>(in.rows.size()) - 1;
    const double t0 = in.rows.front()[ct];
    const double t_end = in.rows.back()[ct];
    if (t0 != 0.0) throw ConfigError({"time grid must start at t=0"});
    if (!(t_end > 0.0)) throw ConfigError({"time grid must be increasing"});
    const TimeGrid grid = TimeGrid::over(t_end, n_steps);
    std::vector<cplx> v(in.rows.size());
    for (int j = 0; j <= n_steps; ++j) {
      const double t = in.rows[j][ct];
      if (std::abs(t - grid.node(j)) > 1e-9 * t_end) {
        throw ConfigError({"non-uniform time grid at row " + std::to_string(j + 1) + " (t=" + format_number(t) + ")"});
      }
      v[j] = {in.rows[j][cre], cim >= 0 ? in.rows[j][cim] : 0.0};
    }
    const TimeSeries f(grid, std::move(v));
    TimeSeries g = f;
    if (op == "J") {
      g = frac_integral(f, order);
    } else if (op == "caputo") {
      g = caputo(f, FractionalOrder::from_alpha(order));
    } else {
      g = riemann_liouville(f, FractionalOrder::from_alpha(order));
    }
    CsvTable out;
    out.header = {"t", "re", "im"};
    for (int j = 0; j <= n_steps; ++j) out.rows.push_back({in.rows[j][ct], g.values[j].real(), g.values[j].imag()});
    write_csv(out_path, out);
    return kOk;
  });
}

int run_convergence(const std::string& config_path, int levels, Streams io) {
  return guarded(io, [&] {
    if (levels < 2 || levels > 12) throw ConfigError({"levels must be between 2 and 12"});
    const RunConfig cfg = parse_config(config_path);
    const std::string dir = prepare_directory(cfg);
    CsvTable t;
    t.header = {"steps", "dt", "error", "order"};
    std::vector<double> log_dt, log_err;
    double previous = std::nan("");
    for (int l = 0; l < levels; ++l) {
      const int steps = cfg.steps << l;
      const CauchyProblem p = build_problem(cfg, steps);
      const Solution s = full_solve(p, cfg.method, cfg.solver);
      double err;
      if (cfg.exact) {
        err = exact_error(s, *cfg.exact);
      } else {
        const SolveMethod other = cfg.method == SolveMethod::voc ? SolveMethod::duhamel : SolveMethod::voc;
        err = final_gap(s, full_solve(p, other, cfg.solver));
      }
      const double dt = p.horizon.dt();
      const double order = previous > 0.0 && err > 0.0 ? std::log2(previous / err) : std::nan("");
      t.rows.push_back({static_cast<double>(steps), dt, err, order});
      if (err > 0.0) {
        log_dt.push_back(std::log(dt));
        log_err.push_back(std::log(err));
      }
      previous = err;
    }
    double fitted = std::nan("");
    if (log_dt.size() >= 2) {
      const double n = static_cast<double>(log_dt.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < log_dt.size(); ++i) {
        sx += log_dt[i];
        sy += log_err[i];
        sxx += log_dt[i] * log_dt[i];
        sxy += log_dt[i] * log_err[i];
      }
      fitted = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    const std::string path = (fs::path(dir) / (cfg.prefix + "_convergence.csv")).string();
    write_csv(path, t);
    write_csv(io.out, t);
    io.out << "reference: " << (cfg.exact ? "exact" : "oracle gap") << "\nfitted_order: " << format_number(fitted)
           << "\nfile: " << path << '\n';
    return kOk;
  });
}

int run_demo(const std::string& name, Streams io) {
  return guarded(io, [&] {
    const RunConfig cfg = parse_config_text(demo_config(name));
    return run_solve_config(cfg, io);
  });
}

}  // namespace fracdu::cli
