#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracdu/duhamel.hpp"
#include "fracdu/error.hpp"
#include "fracdu/mittag_leffler.hpp"
#include "solver_detail.hpp"

namespace fracdu {

using detail::kModule;

namespace {

// lambda^n Gamma(p+1)/Gamma(p+e+1) t^{p+e} in log form, e = alpha (n + 1).
cplx neumann_term(cplx lambda, int n, double alpha, const Monomial& mono, double t) {
  const double e = alpha * (n + 1);
  if (n > 0 && lambda == cplx(0.0)) return 0.0;
  if (t == 0.0) return 0.0;
  double log_mag = std::lgamma(mono.power + 1.0) - std::lgamma(mono.power + e + 1.0) + (mono.power + e) * std::log(t);
  double phase = 0.0;
  if (n > 0) {
    log_mag += n * std::log(std::abs(lambda));
    phase = n * std::arg(lambda);
  }
  return mono.coeff * std::polar(std::exp(log_mag), phase);
}

// Primitives of G(s) = s^{alpha-1} E_{alpha,alpha}(lambda s^alpha) and s G(s) on the nodes.
std::vector<cplx> voc_primitives(double alpha, cplx lambda, const TimeGrid& grid) {
  const std::size_t n = grid.size();
  std::vector<cplx> out(2 * n, 0.0);
  for (int l = 1; l <= grid.n_steps(); ++l) {
    const double x = grid.node(l);
    const cplx z = lambda * std::pow(x, alpha);
    const double xa = std::pow(x, alpha);
    const cplx e1 = ml(alpha, alpha + 1.0, z);
    const cplx e2 = ml(alpha, alpha + 2.0, z);
    out[l] = xa * e1;
    out[n + l] = xa * x * (e1 - e2);
  }
  return out;
}

// sum over panels of int G(t_n - tau) f_lin(tau) dtau, using every `stride`-th node.
cplx voc_node(const std::vector<cplx>& prim, std::size_t n_nodes, const std::vector<cplx>& f, int n, int stride,
              double dt) {
  const double h = stride * dt;
  cplx acc = 0.0;
  for (int l = 0; l + stride <= n; l += stride) {
    const int ia = n - l - stride;  // s_a = ia * dt
    const int ib = n - l;
    const cplx i0 = prim[ib] - prim[ia];
    const cplx i1 = prim[n_nodes + ib] - prim[n_nodes + ia];
    const double sb = ib * dt;
    acc += f[l] * i0 + (f[l + stride] - f[l]) / h * (sb * i0 - i1);
  }
  return acc;
}

// Y_i(s) with Y_i^{(k)}(0) = delta_{ik} for w^{(m)} = lambda w.
cplx classical_fundamental(int m, int i, cplx lambda, double s) {
  if (s == 0.0) return i == 0 ? 1.0 : 0.0;
  const double root_mag = std::pow(std::abs(lambda), 1.0 / m);
  if (root_mag * s < 1.0) {
    cplx term = std::pow(s, i) / std::tgamma(i + 1.0);
    cplx sum = term;
    for (int n = 1; n < 200; ++n) {
      double denom = 1.0;
      for (int q = 1; q <= m; ++q) denom *= (m * (n - 1) + i + q);
      term *= lambda * std::pow(s, m) / denom;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  const double theta = std::arg(lambda);
  cplx sum = 0.0;
  for (int j = 0; j < m; ++j) {
    const cplx r = std::polar(root_mag, (theta + 2.0 * std::numbers::pi * j) / m);
    sum += std::pow(r, -i) * std::exp(r * s);
  }
  return sum / static_cast<double>(m);
}

}  // namespace

Solution neumann_series_solution(const CauchyProblem& p, int n_terms, const SolveOptions& opts) {
  p.validate();
  if (n_terms < 1) throw Error(ErrorKind::domain, kModule, "Neumann series needs at least one term");
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  Solution sol(p.horizon, p.space());
  sol.real = detail::problem_real(p) && table.hermitian;
  sol.meta.method = MethodTag::neumann;
  sol.meta.hypothesis = "series sum_n A^n J^{alpha n + alpha} f";
  sol.meta.series_terms = n_terms;
  detail::base_metadata(sol.meta, p, table);
  if (!p.source) return sol;

  const detail::SourceModes sm = detail::source_modes(*p.source, p.horizon);
  const TimeGrid& grid = p.horizon;
  const double alpha = p.order.alpha;
  double last = 0.0;
  double scale = 0.0;
  sol.meta.quadrature = sm.catalog ? "exact power rule" : "product trapezoid for J^alpha";
  for (std::size_t k = 0; k < sm.modes.size(); ++k) {
    if (table.zeroed[k] || !sm.modes[k].active) continue;
    const cplx lambda = table.values[k];
    if (sm.catalog) {
      for (int j = 0; j <= grid.n_steps(); ++j) {
        const double t = grid.node(j);
        cplx acc = 0.0;
        for (int n = 0; n < n_terms; ++n) {
          cplx term = 0.0;
          for (const Monomial& mono : sm.modes[k].profile.terms()) term += neumann_term(lambda, n, alpha, mono, t);
          acc += term;
          if (n == n_terms - 1) last = std::max(last, std::abs(term));
        }
        sol.modes[j][k] = acc;
        scale = std::max(scale, std::abs(acc));
      }
    } else {
      TimeSeries g = frac_integral(TimeSeries(grid, sm.modes[k].samples), alpha);
      std::vector<cplx> acc = g.values;
      cplx lambda_n = 1.0;
      for (int n = 1; n < n_terms && lambda != cplx(0.0); ++n) {
        g = frac_integral(g, alpha);
        lambda_n *= lambda;
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += lambda_n * g.values[j];
        if (n == n_terms - 1) {
          for (const cplx& v : g.values) last = std::max(last, std::abs(lambda_n * v));
        }
      }
      for (std::size_t j = 0; j < acc.size(); ++j) {
        sol.modes[j][k] = acc[j];
        scale = std::max(scale, std::abs(acc[j]));
      }
    }
  }
  sol.meta.truncation_estimate = last;
  if (!std::isfinite(last) || last > opts.neumann_tolerance * std::max(1.0, scale)) {
    sol.meta.warnings.push_back("Neumann series not converged after " + std::to_string(n_terms) +
                                " terms (last term " + std::to_string(last) + ")");
  }
  return sol;
}

Solution voc_oracle(const CauchyProblem& p, const SolveOptions& opts) {
  p.validate();
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  Solution sol(p.horizon, p.space());
  sol.real = detail::problem_real(p) && table.hermitian;
  sol.meta.method = MethodTag::voc_oracle;
  sol.meta.hypothesis = "variation of constants with kernel t^{alpha-1} E_{alpha,alpha}(A t^alpha)";
  sol.meta.quadrature = "product integration: source piecewise linear, kernel moments exact";
  detail::base_metadata(sol.meta, p, table);
  if (!p.source) return sol;

  const detail::SourceModes sm = detail::source_modes(*p.source, p.horizon);
  const TimeGrid& grid = p.horizon;
  const int n_steps = grid.n_steps();
  const std::size_t n_nodes = grid.size();
  const double dt = grid.dt();
  detail::LambdaCache prims;
  double gap = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < sm.modes.size(); ++k) {
    if (table.zeroed[k] || !sm.modes[k].active) continue;
    const cplx lambda = table.values[k];
    const auto& prim = prims.get(lambda, [&] { return voc_primitives(p.order.alpha, lambda, grid); });
    const std::vector<cplx> f = detail::mode_samples(sm.modes[k], sm.catalog, grid);
    for (int n = 1; n <= n_steps; ++n) {
      sol.modes[n][k] = voc_node(prim, n_nodes, f, n, 1, dt);
      scale = std::max(scale, std::abs(sol.modes[n][k]));
    }
    if (n_steps >= 4 && n_steps % 2 == 0) {
      gap = std::max(gap, std::abs(sol.modes[n_steps][k] - voc_node(prim, n_nodes, f, n_steps, 2, dt)));
    }
  }
  const double rel = scale > 0.0 ? gap / scale : 0.0;
  sol.meta.truncation_estimate = rel;
  if (rel > opts.voc_tolerance) {
    throw Error(ErrorKind::quadrature, kModule,
                "time step too coarse for the variation-of-constants quadrature (step-doubling gap " +
                    std::to_string(rel) + ")");
  }
  return sol;
}

ClassicCheckReport classic_duhamel_check(const CauchyProblem& p) {
  p.validate();
  if (!p.order.is_integer()) {
    throw Error(ErrorKind::domain, kModule, "classical Duhamel comparison needs an integer order");
  }
  const int m = p.order.m;
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  const TimeGrid& grid = p.horizon;
  const std::size_t n_k = p.space().size();

  std::vector<std::vector<cplx>> hats;
  for (const Field& f : p.initial) hats.push_back(detail::flushed_forward(f));
  std::vector<std::vector<cplx>> hom(grid.size(), std::vector<cplx>(n_k, 0.0));
  std::vector<std::vector<cplx>> duh(grid.size(), std::vector<cplx>(n_k, 0.0));
  std::optional<detail::SourceModes> sm;
  if (p.source) sm = detail::source_modes(*p.source, grid);

  for (std::size_t k = 0; k < n_k; ++k) {
    if (table.zeroed[k]) continue;
    const cplx lambda = table.values[k];
    for (int i = 0; i < m; ++i) {
      if (hats[i][k] == cplx(0.0)) continue;
      for (int n = 0; n <= grid.n_steps(); ++n) {
        hom[n][k] += classical_fundamental(m, i, lambda, grid.node(n)) * hats[i][k];
      }
    }
    if (sm && sm->modes[k].active) {
      std::vector<cplx> kernel(grid.size());
      for (int l = 0; l <= grid.n_steps(); ++l) kernel[l] = classical_fundamental(m, m - 1, lambda, grid.node(l));
      const detail::StageData data =
          detail::stage_data(sm->modes[k], sm->catalog, grid, 0.0, Forcing::riemann_liouville);
      const std::vector<cplx> v = detail::duhamel_convolution(kernel, data, grid.dt());
      for (int n = 0; n <= grid.n_steps(); ++n) duh[n][k] = v[n];
    }
  }

  const auto ref_hom = detail::homogeneous_modes(p, table);
  Solution ref_duh(grid, p.space());
  if (p.source) ref_duh = duhamel_solution(p, select_forcing(p));

  ClassicCheckReport report{0.0, 0.0, 0.0};
  std::vector<cplx> d_hom(n_k), d_duh(n_k), d_all(n_k);
  for (int n = 0; n <= grid.n_steps(); ++n) {
    for (std::size_t k = 0; k < n_k; ++k) {
      d_hom[k] = hom[n][k] - ref_hom[n][k];
      d_duh[k] = duh[n][k] - ref_duh.modes[n][k];
      d_all[k] = d_hom[k] + d_duh[k];
    }
    report.homogeneous_difference = std::max(report.homogeneous_difference, detail::physical_sup(p.space(), d_hom));
    report.duhamel_difference = std::max(report.duhamel_difference, detail::physical_sup(p.space(), d_duh));
    report.max_difference = std::max(report.max_difference, detail::physical_sup(p.space(), d_all));
  }
  return report;
}

ResidualReport residual_norm(const Solution& s, const CauchyProblem& p) {
  p.validate();
  const TimeGrid& grid = s.grid;
  const int m = p.order.m;
  if (grid.n_steps() < m + 2) {
    throw Error(ErrorKind::insufficient_samples, kModule,
                "residual needs at least " + std::to_string(m + 2) + " time steps");
  }
  if (!(s.space == p.space())) throw Error(ErrorKind::grid_mismatch, kModule, "solution and problem grids differ");
  const SymbolTable table = evaluate_symbol(p.symbol, s.space);
  const std::size_t n_k = s.space.size();
  const std::size_t n_t = grid.size();

  std::vector<std::vector<cplx>> res(n_t, std::vector<cplx>(n_k, 0.0));
  std::vector<std::vector<cplx>> src(n_t, std::vector<cplx>(n_k, 0.0));
  std::optional<detail::SourceModes> sm;
  if (p.source) sm = detail::source_modes(*p.source, grid);

  ResidualReport report;
  report.initial.assign(m, 0.0);
  std::vector<std::vector<cplx>> hats;
  for (const Field& f : p.initial) hats.push_back(forward(f).coeffs);
  std::vector<std::vector<cplx>> init_err(m, std::vector<cplx>(n_k, 0.0));

  for (std::size_t k = 0; k < n_k; ++k) {
    const std::vector<cplx> u = s.history(k);
    const cplx lambda = table.zeroed[k] ? cplx(0.0) : table.values[k];
    const TimeSeries d = caputo(TimeSeries(grid, u), p.order);
    std::vector<cplx> f(n_t, 0.0);
    if (sm && sm->modes[k].active) f = detail::mode_samples(sm->modes[k], sm->catalog, grid);
    for (std::size_t n = 0; n < n_t; ++n) {
      res[n][k] = d.values[n] - lambda * u[n] - f[n];
      src[n][k] = f[n];
    }
    for (int i = 0; i < m; ++i) init_err[i][k] = one_sided_derivative(u, grid.dt(), i) - hats[i][k];
  }

  double sum_r = 0.0;
  double sum_f = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 1; n + 1 < n_t; ++n) {
    const Field r = inverse(SpectralField(s.space, res[n], false));
    const Field f = inverse(SpectralField(s.space, src[n], false));
    double node_max = 0.0;
    for (std::size_t x = 0; x < n_k; ++x) {
      const double ar = std::abs(r.values[x]);
      const double af = std::abs(f.values[x]);
      node_max = std::max(node_max, ar);
      report.source_max = std::max(report.source_max, af);
      sum_r += ar * ar;
      sum_f += af * af;
      ++count;
    }
    report.time_max.push_back(node_max);
    report.max = std::max(report.max, node_max);
  }
  report.rms = std::sqrt(sum_r / static_cast<double>(count));
  report.source_rms = std::sqrt(sum_f / static_cast<double>(count));
  for (int i = 0; i < m; ++i) report.initial[i] = detail::physical_sup(s.space, init_err[i]);
  return report;
}

}  // namespace fracdu
