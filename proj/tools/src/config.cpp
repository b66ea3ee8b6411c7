#include "fracdu_cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fracdu_cli/csv.hpp"
#include "fracdu_cli/profile.hpp"
#include "json.hpp"

namespace fracdu::cli {

namespace {

using nlohmann::json;

const char* const kModule = "cli_harness";

std::string join_lines(const std::vector<std::string>& v) {
  std::string out = "invalid configuration (" + std::to_string(v.size()) + " violation" + (v.size() == 1 ? "" : "s") + ")";
  for (const std::string& s : v) out += "\n  - " + s;
  return out;
}

std::vector<std::string> space_variables(int dim) {
  return dim == 2 ? std::vector<std::string>{"x", "x1", "x2"} : std::vector<std::string>{"x", "x1"};
}

std::vector<std::string> symbol_variables(int dim) {
  return dim == 2 ? std::vector<std::string>{"xi", "xi1", "xi2"} : std::vector<std::string>{"xi", "xi1"};
}

// Collects violations while reading typed fields out of a JSON object.
class Reader {
 public:
  std::vector<std::string> violations;

  void fail(const std::string& msg) { violations.push_back(msg); }

  void unknown_keys(const json& obj, const std::string& where, std::set<std::string> known) {
    if (!obj.is_object()) return;
    for (const auto& [key, value] : obj.items()) {
      if (!known.count(key)) fail("unknown key '" + where + key + "'");
    }
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) fail("missing required field '" + path + "'");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
      fail("'" + path + "' must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<int> integer(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) fail("missing required field '" + path + "'");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      fail("'" + path + "' must be an integer");
      return std::nullopt;
    }
    return v.get<int>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) fail("missing required field '" + path + "'");
      return std::nullopt;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
      fail("'" + path + "' must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  // Parses and binds an expression, recording any error as a violation.
  bool expression(const std::string& text, const std::string& path, const std::vector<std::string>& vars) {
    try {
      const ExprPtr e = parse_expression(text);
      check_identifiers(*e, vars);
      return true;
    } catch (const Error& err) {
      fail("'" + path + "': " + err.message());
      return false;
    }
  }
};

cplx json_complex(const json& v, Reader& r, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  r.fail("'" + path + "' must be a number or [re, im]");
  return 0.0;
}

std::optional<CatalogProfile> read_profile(const json& v, Reader& r, const std::string& path, std::string& text) {
  if (v.is_string()) {
    text = v.get<std::string>();
    try {
      return profile_from_expression(*parse_expression(text));
    } catch (const Error& e) {
      r.fail("'" + path + "': " + e.message());
      return std::nullopt;
    }
  }
  if (v.is_array()) {
    std::vector<Monomial> terms;
    bool ok = true;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = path + "[" + std::to_string(i) + "]";
      const json& m = v[i];
      if (!m.is_object()) {
        r.fail("'" + p + "' must be an object {power, coeff}");
        ok = false;
        continue;
      }
      r.unknown_keys(m, p + ".", {"power", "coeff"});
      const auto power = r.number(m, "power", p + ".power", true);
      if (power && !(*power >= 0.0)) {
        r.fail("'" + p + ".power' must be >= 0");
        ok = false;
      }
      cplx c = 1.0;
      if (m.contains("coeff")) c = json_complex(m.at("coeff"), r, p + ".coeff");
      if (!power) ok = false;
      if (ok) terms.push_back({*power, c});
    }
    text = v.dump();
    if (!ok) return std::nullopt;
    try {
      return CatalogProfile(std::move(terms));
    } catch (const Error& e) {
      r.fail("'" + path + "': " + e.message());
      return std::nullopt;
    }
  }
  r.fail("'" + path + "' must be an expression in t or a list of {power, coeff}");
  return std::nullopt;
}

const std::map<std::string, SolveMethod>& methods() {
  static const std::map<std::string, SolveMethod> m{
      {"duhamel", SolveMethod::duhamel}, {"neumann", SolveMethod::neumann}, {"voc", SolveMethod::voc}};
  return m;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorKind::config, kModule, join_lines(violations)), violations_(std::move(violations)) {}

RunConfig parse_config_text(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("malformed JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ConfigError({"configuration must be a JSON object"});

  Reader r;
  RunConfig cfg;
  cfg.source_json = doc.dump();
  r.unknown_keys(doc, "", {"alpha", "symbol", "zero_mode", "grid", "time", "initial", "source", "method",
                           "tolerances", "output", "exact"});

  // alpha and m
  bool have_m = false;
  if (const auto a = r.number(doc, "alpha", "alpha", true)) {
    if (*a > 0.0 && std::isfinite(*a)) {
      cfg.alpha = *a;
      cfg.order = FractionalOrder::from_alpha(*a);
      have_m = true;
    } else {
      r.fail("'alpha' must be > 0");
    }
  }

  // grid
  if (!doc.contains("grid")) {
    r.fail("missing required field 'grid'");
  } else if (const json& g = doc.at("grid"); !g.is_object()) {
    r.fail("'grid' must be an object");
  } else {
    r.unknown_keys(g, "grid.", {"dim", "points", "length"});
    if (const auto d = r.integer(g, "dim", "grid.dim", false)) {
      if (*d == 1 || *d == 2) {
        cfg.dim = *d;
      } else {
        r.fail("'grid.dim' must be 1 or 2");
      }
    }
    auto per_axis_int = [&](const json& v) -> std::vector<int> {
      if (v.is_number_integer()) return std::vector<int>(cfg.dim, v.get<int>());
      std::vector<int> out;
      if (v.is_array()) {
        for (const json& x : v) {
          if (!x.is_number_integer()) return {};
          out.push_back(x.get<int>());
        }
      }
      return out;
    };
    if (!g.contains("points")) {
      r.fail("missing required field 'grid.points'");
    } else {
      const auto pts = per_axis_int(g.at("points"));
      if (static_cast<int>(pts.size()) != cfg.dim) {
        r.fail("'grid.points' must be an integer or one integer per axis");
      } else {
        for (int a = 0; a < cfg.dim; ++a) {
          if (pts[a] < 4 || pts[a] % 2 != 0) {
            r.fail("'grid.points' must be even and >= 4 (got " + std::to_string(pts[a]) + ")");
          }
          cfg.points[a] = pts[a];
        }
      }
    }
    if (g.contains("length")) {
      const json& l = g.at("length");
      std::vector<double> lens;
      if (l.is_number()) lens.assign(cfg.dim, l.get<double>());
      if (l.is_array()) {
        for (const json& x : l) lens.push_back(x.is_number() ? x.get<double>() : -1.0);
      }
      if (static_cast<int>(lens.size()) != cfg.dim) {
        r.fail("'grid.length' must be a number or one number per axis");
      } else {
        for (int a = 0; a < cfg.dim; ++a) {
          if (!(lens[a] > 0.0) || !std::isfinite(lens[a])) r.fail("'grid.length' must be > 0");
          cfg.length[a] = lens[a];
        }
      }
    }
  }

  // time
  if (!doc.contains("time")) {
    r.fail("missing required field 'time'");
  } else if (const json& t = doc.at("time"); !t.is_object()) {
    r.fail("'time' must be an object");
  } else {
    r.unknown_keys(t, "time.", {"t_end", "steps", "output_every"});
    if (const auto te = r.number(t, "t_end", "time.t_end", true)) {
      if (*te > 0.0 && std::isfinite(*te)) {
        cfg.t_end = *te;
      } else {
        r.fail("'time.t_end' must be > 0");
      }
    }
    if (const auto s = r.integer(t, "steps", "time.steps", true)) {
      cfg.steps = *s;
      if (have_m && *s < cfg.order.m + 2) {
        r.fail("'time.steps' must be >= m+2 = " + std::to_string(cfg.order.m + 2) + " (got " + std::to_string(*s) +
               ")");
      }
    }
    if (const auto oe = r.integer(t, "output_every", "time.output_every", false)) {
      if (*oe >= 1) {
        cfg.output_every = *oe;
      } else {
        r.fail("'time.output_every' must be >= 1");
      }
    }
  }

  const auto xvars = space_variables(cfg.dim);

  // symbol
  if (const auto s = r.string(doc, "symbol", "symbol", true)) {
    cfg.symbol = *s;
    try {
      build_symbol(*s, cfg.dim);
    } catch (const Error& e) {
      r.fail("'symbol': " + e.message());
    }
  }
  if (const auto z = r.string(doc, "zero_mode", "zero_mode", false)) {
    if (*z == "zero") {
      cfg.zero_mode = ZeroModeRule::zero;
    } else if (*z != "error") {
      r.fail("'zero_mode' must be \"error\" or \"zero\"");
    }
  }

  // initial data
  if (!doc.contains("initial")) {
    r.fail("missing required field 'initial'");
  } else if (const json& init = doc.at("initial"); !init.is_array()) {
    r.fail("'initial' must be a list of expressions in x");
  } else {
    for (std::size_t i = 0; i < init.size(); ++i) {
      const std::string path = "initial[" + std::to_string(i) + "]";
      if (!init[i].is_string()) {
        r.fail("'" + path + "' must be a string");
        continue;
      }
      cfg.initial.push_back(init[i].get<std::string>());
      r.expression(cfg.initial.back(), path, xvars);
    }
    if (have_m && static_cast<int>(init.size()) != cfg.order.m) {
      r.fail("expected " + std::to_string(cfg.order.m) + " initial fields (m=" + std::to_string(cfg.order.m) +
             "), got " + std::to_string(init.size()));
    }
  }

  // source
  if (doc.contains("source") && !doc.at("source").is_null()) {
    const json& src = doc.at("source");
    if (!src.is_object()) {
      r.fail("'source' must be an object");
    } else {
      r.unknown_keys(src, "source.", {"terms", "file"});
      if (src.contains("terms") && src.contains("file")) r.fail("'source' takes either 'terms' or 'file', not both");
      if (src.contains("file")) {
        if (const auto f = r.string(src, "file", "source.file", true)) {
          const std::filesystem::path p(*f);
          cfg.source.file = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
        }
      } else if (!src.contains("terms")) {
        r.fail("'source' needs 'terms' or 'file'");
      } else if (const json& terms = src.at("terms"); !terms.is_array() || terms.empty()) {
        r.fail("'source.terms' must be a non-empty list");
      } else {
        for (std::size_t i = 0; i < terms.size(); ++i) {
          const std::string path = "source.terms[" + std::to_string(i) + "]";
          const json& term = terms[i];
          if (!term.is_object()) {
            r.fail("'" + path + "' must be an object {profile, shape}");
            continue;
          }
          r.unknown_keys(term, path + ".", {"profile", "shape"});
          SourceSpec::Term parsed;
          std::optional<CatalogProfile> prof;
          if (!term.contains("profile")) {
            r.fail("missing required field '" + path + ".profile'");
          } else {
            prof = read_profile(term.at("profile"), r, path + ".profile", parsed.profile_text);
          }
          const auto shape = r.string(term, "shape", path + ".shape", true);
          const bool shape_ok = shape && r.expression(*shape, path + ".shape", xvars);
          if (prof && shape_ok) {
            parsed.profile = *prof;
            parsed.shape = *shape;
            cfg.source.terms.push_back(std::move(parsed));
          }
        }
      }
    }
  }

  // method and tolerances
  if (const auto m = r.string(doc, "method", "method", false)) {
    if (const auto it = methods().find(*m); it != methods().end()) {
      cfg.method = it->second;
    } else {
      r.fail("'method' must be one of duhamel, neumann, voc (got \"" + *m + "\")");
    }
  }
  if (doc.contains("tolerances")) {
    const json& tol = doc.at("tolerances");
    if (!tol.is_object()) {
      r.fail("'tolerances' must be an object");
    } else {
      r.unknown_keys(tol, "tolerances.", {"residual", "neumann", "neumann_terms", "voc"});
      auto positive = [&](const char* key, double& out) {
        if (const auto v = r.number(tol, key, std::string("tolerances.") + key, false)) {
          if (*v > 0.0) {
            out = *v;
          } else {
            r.fail(std::string("'tolerances.") + key + "' must be > 0");
          }
        }
      };
      positive("residual", cfg.residual_tolerance);
      positive("neumann", cfg.solver.neumann_tolerance);
      positive("voc", cfg.solver.voc_tolerance);
      if (const auto n = r.integer(tol, "neumann_terms", "tolerances.neumann_terms", false)) {
        if (*n >= 1) {
          cfg.solver.neumann_terms = *n;
        } else {
          r.fail("'tolerances.neumann_terms' must be >= 1");
        }
      }
    }
  }

  // output
  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (!out.is_object()) {
      r.fail("'output' must be an object");
    } else {
      r.unknown_keys(out, "output.", {"dir", "prefix"});
      if (const auto d = r.string(out, "dir", "output.dir", false)) cfg.output_dir = *d;
      if (const auto p = r.string(out, "prefix", "output.prefix", false)) {
        if (p->empty() || p->find('/') != std::string::npos) {
          r.fail("'output.prefix' must be a non-empty file name prefix");
        } else {
          cfg.prefix = *p;
        }
      }
    }
  }

  if (const auto ex = r.string(doc, "exact", "exact", false)) {
    std::vector<std::string> vars = xvars;
    vars.push_back("t");
    if (r.expression(*ex, "exact", vars)) cfg.exact = *ex;
  }

  if (!r.violations.empty()) throw ConfigError(r.violations);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, kModule, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  const std::filesystem::path p(path);
  return parse_config_text(ss.str(), p.has_parent_path() ? p.parent_path().string() : ".");
}

Symbol build_symbol(const std::string& text, int dim, ZeroModeRule rule) {
  const ExprPtr e = parse_expression(text);
  auto constant_args = [&](std::size_t count) {
    if (count != static_cast<std::size_t>(-1) && e->args.size() != count) {
      throw Error(ErrorKind::config, kModule,
                  "symbol " + e->name + " takes " + std::to_string(count) + " argument(s)");
    }
    std::vector<cplx> v;
    for (const ExprPtr& a : e->args) {
      check_identifiers(*a, {});
      v.push_back(evaluate(*a, {}));
    }
    return v;
  };
  auto real_arg = [&](cplx v) {
    if (v.imag() != 0.0) throw Error(ErrorKind::config, kModule, "symbol " + e->name + " needs a real argument");
    return v.real();
  };

  std::optional<Symbol> sym;
  if (e->kind == Expr::Kind::ident && e->name == "laplacian") {
    sym = Symbol::laplacian();
  } else if (e->kind == Expr::Kind::call && e->name == "fractional_laplacian") {
    sym = Symbol::fractional_laplacian(real_arg(constant_args(1)[0]));
  } else if (e->kind == Expr::Kind::call && e->name == "advection") {
    sym = Symbol::advection(real_arg(constant_args(1)[0]));
  } else if (e->kind == Expr::Kind::call && e->name == "constant") {
    sym = Symbol::constant(constant_args(1)[0]);
  } else if (e->kind == Expr::Kind::call && e->name == "polynomial") {
    if (dim != 1) throw Error(ErrorKind::config, kModule, "polynomial symbols need a 1-D grid");
    sym = Symbol::polynomial(constant_args(static_cast<std::size_t>(-1)));
  } else {
    check_identifiers(*e, symbol_variables(dim));
    sym = Symbol::expression(print_expression(*e), [e, dim](const std::array<double, 2>& xi) {
      Bindings b;
      b["xi1"] = xi[0];
      if (dim == 2) {
        b["xi2"] = xi[1];
        b["xi"] = std::hypot(xi[0], xi[1]);
      } else {
        b["xi"] = xi[0];
      }
      try {
        return evaluate(*e, b);
      } catch (const Error&) {
        // Reported by Symbol as a non-finite value at this frequency.
        return cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
      }
    });
  }
  sym->with_zero_mode_rule(rule);
  return *sym;
}

Field build_field(const std::string& text, const SpaceGrid& grid) {
  const ExprPtr e = parse_expression(text);
  check_identifiers(*e, space_variables(grid.dim()));
  std::vector<cplx> v(grid.size());
  bool real = true;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto x = grid.node(j);
    Bindings b{{"x", x[0]}, {"x1", x[0]}};
    if (grid.dim() == 2) b["x2"] = x[1];
    v[j] = evaluate(*e, b);
    if (v[j].imag() != 0.0) real = false;
  }
  return Field(grid, std::move(v), real);
}

namespace {

SourceTerm read_sampled_source(const std::string& path, const SpaceGrid& space, const TimeGrid& time) {
  const CsvTable table = read_csv(path);
  const int ct = table.column("t");
  const int cx = space.dim() == 2 ? table.column("x1") : std::max(table.column("x"), table.column("x1"));
  const int cy = space.dim() == 2 ? table.column("x2") : -1;
  const int cre = table.column("re");
  const int cim = table.column("im");
  if (ct < 0 || cx < 0 || cre < 0 || (space.dim() == 2 && cy < 0)) {
    throw ConfigError({"source file '" + path + "' needs columns t, " +
                       std::string(space.dim() == 2 ? "x1, x2" : "x") + ", re[, im]"});
  }
  std::vector<std::vector<cplx>> values(time.size(), std::vector<cplx>(space.size()));
  std::vector<std::vector<bool>> seen(time.size(), std::vector<bool>(space.size(), false));
  auto index = [](double v, double h, int n, const char* what, const std::string& p) {
    const double j = std::round(v / h);
    if (j < 0 || j >= n || std::abs(v - j * h) > 1e-9 * std::max(1.0, h * n)) {
      throw ConfigError({"source file '" + p + "': " + what + "=" + format_number(v) + " is not a grid node"});
    }
    return static_cast<int>(j);
  };
  for (const auto& row : table.rows) {
    const int jt = index(row[ct], time.dt(), time.n_steps() + 1, "t", path);
    const int j0 = index(row[cx], space.length(0) / space.points(0), space.points(0), "x", path);
    const int j1 = cy >= 0 ? index(row[cy], space.length(1) / space.points(1), space.points(1), "x2", path) : 0;
    const std::size_t flat = space.flatten({j0, j1});
    values[jt][flat] = {row[cre], cim >= 0 ? row[cim] : 0.0};
    seen[jt][flat] = true;
  }
  for (const auto& s : seen) {
    for (bool b : s) {
      if (!b) throw ConfigError({"source file '" + path + "' does not cover every (t, x) node"});
    }
  }
  std::vector<Field> slices;
  for (auto& v : values) {
    const bool real = std::all_of(v.begin(), v.end(), [](cplx c) { return c.imag() == 0.0; });
    slices.emplace_back(space, std::move(v), real);
  }
  return SourceTerm::sampled(time, std::move(slices));
}

}  // namespace

CauchyProblem build_problem(const RunConfig& cfg, int steps) {
  const SpaceGrid space = cfg.space();
  const TimeGrid time = TimeGrid::over(cfg.t_end, steps > 0 ? steps : cfg.steps);
  std::vector<Field> initial;
  for (const std::string& s : cfg.initial) initial.push_back(build_field(s, space));
  std::optional<SourceTerm> source;
  if (cfg.source.file) {
    source = read_sampled_source(*cfg.source.file, space, time);
  } else if (!cfg.source.terms.empty()) {
    std::vector<SourceTerm::Term> terms;
    for (const SourceSpec::Term& t : cfg.source.terms) terms.push_back({t.profile, build_field(t.shape, space)});
    source = SourceTerm::catalog(std::move(terms));
  }
  return CauchyProblem{cfg.order, build_symbol(cfg.symbol, cfg.dim, cfg.zero_mode), std::move(initial),
                       std::move(source), time};
}

}  // namespace fracdu::cli
