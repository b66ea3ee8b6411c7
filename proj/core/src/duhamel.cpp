#include "fracdu/duhamel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

#include "fracdu/error.hpp"
#include "fracdu/mittag_leffler.hpp"
#include "fracdu/special.hpp"
#include "solver_detail.hpp"

namespace fracdu {

using detail::kModule;

namespace {

constexpr double kFlush = 1e-14;

bool is_integer_power(double p) { return p >= 0.0 && std::floor(p) == p; }

// t^e with 0^0 = 1.
double power0(double t, double e) { return e == 0.0 ? 1.0 : std::pow(t, e); }

// Product-integration moments on [j, j+1]: a_j = int u^q (j+1-u) du, b_j = int u^q (u-j) du.
std::pair<std::vector<double>, std::vector<double>> product_moments(double q, int n) {
  std::vector<double> a(n), b(n);
  if (n == 0) return {a, b};
  a[0] = 1.0 / (q + 1.0) - 1.0 / (q + 2.0);
  b[0] = 1.0 / (q + 2.0);
  using boost::math::quadrature::gauss;
  for (int j = 1; j < n; ++j) {
    const double jd = j;
    a[j] = gauss<double, 20>::integrate([&](double s) { return std::pow(jd + s, q) * (1.0 - s); }, 0.0, 1.0);
    b[j] = gauss<double, 20>::integrate([&](double s) { return std::pow(jd + s, q) * s; }, 0.0, 1.0);
  }
  return {a, b};
}

std::string forcing_hypothesis(Forcing forcing, const FractionalOrder& order) {
  if (order.is_integer()) return "integer order: stage data is the source itself (classical Duhamel)";
  if (forcing == Forcing::caputo) {
    return "source vanishes to order m at t=0: stage data is the Caputo derivative of order m-alpha";
  }
  return "source need not vanish at t=0: stage data is the Riemann-Liouville derivative of order m-alpha";
}

void check_forcing(const CauchyProblem& p, Forcing forcing) {
  if (forcing == Forcing::caputo && p.source && !p.source->vanishing_initial(p.order.m)) {
    throw Error(ErrorKind::hypothesis_violation, kModule,
                "Caputo forcing needs d^k f/dt^k(0,x) = 0 for k < " + std::to_string(p.order.m) +
                    "; this source does not vanish at t=0, use Riemann-Liouville forcing");
  }
}

std::vector<cplx> stage_kernel(const FractionalOrder& order, cplx lambda, const TimeGrid& grid) {
  std::vector<cplx> k(grid.size());
  for (int l = 0; l <= grid.n_steps(); ++l) {
    const double s = grid.node(l);
    k[l] = power0(s, order.m - 1) * ml(order.alpha, order.m, lambda * std::pow(s, order.alpha));
  }
  return k;
}

}  // namespace

// --- names ------------------------------------------------------------------------

std::string_view to_string(Forcing f) noexcept {
  return f == Forcing::caputo ? "caputo" : "riemann_liouville";
}

std::string_view to_string(MethodTag m) noexcept {
  switch (m) {
    case MethodTag::homogeneous: return "homogeneous";
    case MethodTag::duhamel_caputo: return "duhamel_caputo";
    case MethodTag::duhamel_rl: return "duhamel_rl";
    case MethodTag::neumann: return "neumann";
    case MethodTag::voc_oracle: return "voc_oracle";
  }
  return "unknown";
}

std::string_view to_string(SolveMethod m) noexcept {
  switch (m) {
    case SolveMethod::duhamel: return "duhamel";
    case SolveMethod::neumann: return "neumann";
    case SolveMethod::voc: return "voc";
  }
  return "unknown";
}

// --- SourceTerm -------------------------------------------------------------------

SourceTerm SourceTerm::catalog(std::vector<Term> terms) {
  if (terms.empty()) throw Error(ErrorKind::domain, kModule, "catalog source needs at least one term");
  for (const Term& t : terms) {
    if (!(t.shape.grid == terms.front().shape.grid)) {
      throw Error(ErrorKind::grid_mismatch, kModule, "source shapes must share one grid");
    }
  }
  SourceTerm s;
  s.terms_ = std::move(terms);
  return s;
}

SourceTerm SourceTerm::sampled(TimeGrid grid, std::vector<Field> slices) {
  if (slices.size() != grid.size()) {
    throw Error(ErrorKind::grid_mismatch, kModule,
                "sampled source has " + std::to_string(slices.size()) + " slices for " +
                    std::to_string(grid.size()) + " time nodes");
  }
  for (const Field& f : slices) {
    if (!(f.grid == slices.front().grid)) {
      throw Error(ErrorKind::grid_mismatch, kModule, "source slices must share one grid");
    }
  }
  SourceTerm s;
  s.slices_.emplace(grid, std::move(slices));
  return s;
}

const SpaceGrid& SourceTerm::space() const {
  return is_catalog() ? terms_.front().shape.grid : slices_->second.front().grid;
}

bool SourceTerm::real() const noexcept {
  if (is_catalog()) {
    for (const Term& t : terms_) {
      if (!t.shape.real) return false;
      for (const Monomial& m : t.profile.terms()) {
        if (m.coeff.imag() != 0.0) return false;
      }
    }
    return true;
  }
  return std::all_of(slices_->second.begin(), slices_->second.end(), [](const Field& f) { return f.real; });
}

bool SourceTerm::vanishing_initial(int m) const {
  if (is_catalog()) {
    for (const Term& t : terms_) {
      const bool zero_shape =
          std::all_of(t.shape.values.begin(), t.shape.values.end(), [](cplx v) { return v == cplx(0.0); });
      if (!zero_shape && !t.profile.vanishes_at_zero(m)) return false;
    }
    return true;
  }
  const auto& [grid, slices] = *slices_;
  double scale = 0.0;
  for (const Field& f : slices) {
    for (const cplx& v : f.values) scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0) return true;
  const std::size_t n_x = slices.front().values.size();
  for (int k = 0; k < m; ++k) {
    const std::size_t need = static_cast<std::size_t>(k) + 2;
    if (slices.size() < need) return false;
    for (std::size_t x = 0; x < n_x; ++x) {
      std::vector<cplx> column(need);
      for (std::size_t j = 0; j < need; ++j) column[j] = slices[j].values[x];
      const double d = std::abs(one_sided_derivative(column, grid.dt(), k)) * std::pow(grid.t_end(), k);
      if (d > 1e-12 * scale) return false;
    }
  }
  return true;
}

Field SourceTerm::at(double t) const {
  if (is_catalog()) {
    const SpaceGrid& g = space();
    std::vector<cplx> v(g.size(), 0.0);
    for (const Term& term : terms_) {
      const cplx c = term.profile(t);
      for (std::size_t x = 0; x < v.size(); ++x) v[x] += c * term.shape.values[x];
    }
    return Field(g, std::move(v), real());
  }
  const auto& [grid, slices] = *slices_;
  const double j = std::round(t / grid.dt());
  if (j < 0 || j > grid.n_steps() || std::abs(t - grid.node(static_cast<int>(j))) > 1e-9 * grid.dt()) {
    throw Error(ErrorKind::domain, kModule, "sampled source is only defined on its time nodes");
  }
  return slices[static_cast<std::size_t>(j)];
}

// --- CauchyProblem / Solution -------------------------------------------------------

void CauchyProblem::validate() const {
  if (static_cast<int>(initial.size()) != order.m) {
    throw Error(ErrorKind::config, kModule,
                "expected " + std::to_string(order.m) + " initial fields (m=" + std::to_string(order.m) + "), got " +
                    std::to_string(initial.size()));
  }
  for (const Field& f : initial) {
    if (!(f.grid == initial.front().grid)) {
      throw Error(ErrorKind::grid_mismatch, kModule, "initial fields must share one grid");
    }
  }
  if (source) {
    if (!(source->space() == space())) {
      throw Error(ErrorKind::grid_mismatch, kModule, "source and initial fields live on different grids");
    }
    if (!source->is_catalog() && !(source->sample_grid() == horizon)) {
      throw Error(ErrorKind::grid_mismatch, kModule, "sampled source must use the problem's time grid");
    }
  }
}

Solution::Solution(TimeGrid g, SpaceGrid s)
    : grid(g), space(s), modes(g.size(), std::vector<cplx>(s.size(), 0.0)) {}

Field Solution::field(int n) const { return inverse(SpectralField(space, modes.at(n), real)); }

std::vector<cplx> Solution::history(std::size_t k) const {
  std::vector<cplx> h(modes.size());
  for (std::size_t n = 0; n < modes.size(); ++n) h[n] = modes[n][k];
  return h;
}

// --- detail ------------------------------------------------------------------------

namespace detail {

std::vector<cplx> flushed_forward(const Field& field) {
  std::vector<cplx> c = forward(field).coeffs;
  double scale = 0.0;
  for (const cplx& v : c) scale = std::max(scale, std::abs(v));
  for (cplx& v : c) {
    if (std::abs(v) <= kFlush * scale) v = 0.0;
  }
  return c;
}

SourceModes source_modes(const SourceTerm& source, const TimeGrid& horizon) {
  const std::size_t n_k = source.space().size();
  SourceModes out;
  out.catalog = source.is_catalog();
  out.modes.resize(n_k);
  if (source.is_catalog()) {
    for (const SourceTerm::Term& term : source.terms()) {
      const std::vector<cplx> hat = flushed_forward(term.shape);
      for (std::size_t k = 0; k < n_k; ++k) {
        if (hat[k] == cplx(0.0) || term.profile.empty()) continue;
        out.modes[k].profile = out.modes[k].profile + term.profile * hat[k];
        out.modes[k].active = !out.modes[k].profile.empty();
      }
    }
    return out;
  }
  const auto& slices = source.slices();
  std::vector<std::vector<cplx>> hats(slices.size());
  double scale = 0.0;
  for (std::size_t j = 0; j < slices.size(); ++j) {
    hats[j] = forward(slices[j]).coeffs;
    for (const cplx& v : hats[j]) scale = std::max(scale, std::abs(v));
  }
  for (std::size_t k = 0; k < n_k; ++k) {
    ModeSource& m = out.modes[k];
    m.samples.resize(horizon.size());
    for (std::size_t j = 0; j < slices.size(); ++j) {
      const cplx v = hats[j][k];
      m.samples[j] = std::abs(v) <= kFlush * scale ? cplx(0.0) : v;
      if (m.samples[j] != cplx(0.0)) m.active = true;
    }
  }
  return out;
}

std::vector<cplx> mode_samples(const ModeSource& m, bool catalog, const TimeGrid& horizon) {
  if (!catalog) return m.samples;
  std::vector<cplx> v(horizon.size());
  for (int j = 0; j <= horizon.n_steps(); ++j) v[j] = m.profile(horizon.node(j));
  return v;
}

StageData stage_data(const ModeSource& m, bool catalog, const TimeGrid& horizon, double gamma, Forcing forcing) {
  StageData out;
  out.smooth.assign(horizon.size(), 0.0);
  const DerivativeKind kind =
      forcing == Forcing::caputo ? DerivativeKind::caputo : DerivativeKind::riemann_liouville;
  if (catalog) {
    const CatalogProfile h = data_derivative(m.profile, gamma, kind);
    std::vector<Monomial> regular;
    for (const Monomial& mono : h.terms()) {
      if (is_integer_power(mono.power)) {
        regular.push_back(mono);
      } else {
        out.singular.push_back(mono);
      }
    }
    const CatalogProfile smooth(std::move(regular));
    if (!smooth.empty()) {
      for (int j = 0; j <= horizon.n_steps(); ++j) out.smooth[j] = smooth(horizon.node(j));
    }
    return out;
  }
  if (gamma == 0.0) {
    out.smooth = m.samples;
    return out;
  }
  const TimeSeries f(horizon, m.samples);
  out.smooth = data_derivative(f, gamma, DerivativeKind::caputo).values;
  if (forcing == Forcing::riemann_liouville && m.samples[0] != cplx(0.0)) {
    out.singular.push_back({-gamma, m.samples[0] * rgamma(1.0 - gamma)});
  }
  return out;
}

std::vector<cplx> duhamel_convolution(const std::vector<cplx>& kernel, const StageData& data, double dt) {
  const int n_steps = static_cast<int>(kernel.size()) - 1;
  std::vector<cplx> v(kernel.size(), 0.0);
  const bool any_smooth =
      std::any_of(data.smooth.begin(), data.smooth.end(), [](cplx c) { return c != cplx(0.0); });
  if (any_smooth) {
    const auto& s = data.smooth;
    for (int n = 1; n <= n_steps; ++n) {
      cplx acc = 0.5 * (kernel[n] * s[0] + kernel[0] * s[n]);
      for (int j = 1; j < n; ++j) acc += kernel[n - j] * s[j];
      v[n] = dt * acc;
    }
  }
  for (const Monomial& mono : data.singular) {
    const auto [a, b] = product_moments(mono.power, n_steps);
    const cplx scale = mono.coeff * std::pow(dt, mono.power + 1.0);
    for (int n = 1; n <= n_steps; ++n) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += kernel[n - j] * a[j] + kernel[n - j - 1] * b[j];
      v[n] += scale * acc;
    }
  }
  return v;
}

std::vector<std::vector<cplx>> homogeneous_modes(const CauchyProblem& p, const SymbolTable& table) {
  const TimeGrid& grid = p.horizon;
  const std::size_t n_k = p.space().size();
  const int m = p.order.m;
  std::vector<std::vector<cplx>> hats;
  for (const Field& f : p.initial) hats.push_back(flushed_forward(f));

  std::vector<std::vector<cplx>> out(grid.size(), std::vector<cplx>(n_k, 0.0));
  std::vector<LambdaCache> caches(m);
  for (std::size_t k = 0; k < n_k; ++k) {
    if (table.zeroed[k]) continue;
    const cplx lambda = table.values[k];
    for (int i = 0; i < m; ++i) {
      if (hats[i][k] == cplx(0.0)) continue;
      const auto& mult = caches[i].get(lambda, [&] {
        std::vector<cplx> w(grid.size());
        for (int n = 0; n <= grid.n_steps(); ++n) {
          const double t = grid.node(n);
          w[n] = power0(t, i) * ml(p.order.alpha, i + 1.0, lambda * std::pow(t, p.order.alpha));
        }
        return w;
      });
      for (int n = 0; n <= grid.n_steps(); ++n) out[n][k] += mult[n] * hats[i][k];
    }
  }
  return out;
}

bool problem_real(const CauchyProblem& p) {
  for (const Field& f : p.initial) {
    if (!f.real) return false;
  }
  return !p.source || p.source->real();
}

void base_metadata(SolutionMetadata& meta, const CauchyProblem& p, const SymbolTable& table) {
  meta.step = p.horizon.dt();
  meta.max_real_symbol = table.max_real_part;
  if (!table.stable()) {
    meta.warnings.push_back("symbol has Re A(xi) up to " + std::to_string(table.max_real_part) +
                            " > 0; the solution may grow in time");
  }
}

double physical_sup(const SpaceGrid& grid, const std::vector<cplx>& coeffs) {
  const Field f = inverse(SpectralField(grid, coeffs, false));
  double m = 0.0;
  for (const cplx& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

// --- solver ------------------------------------------------------------------------

Field homogeneous_solution(const CauchyProblem& p, double t) {
  p.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::domain, kModule, "time must be >= 0");
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  std::vector<std::vector<cplx>> hats;
  for (const Field& f : p.initial) hats.push_back(detail::flushed_forward(f));
  std::vector<cplx> u(p.space().size(), 0.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (table.zeroed[k]) continue;
    const cplx z = table.values[k] * std::pow(t, p.order.alpha);
    for (int i = 0; i < p.order.m; ++i) {
      if (hats[i][k] == cplx(0.0)) continue;
      u[k] += power0(t, i) * ml(p.order.alpha, i + 1.0, z) * hats[i][k];
    }
  }
  return inverse(SpectralField(p.space(), std::move(u), detail::problem_real(p) && table.hermitian));
}

Field stage_solution(const CauchyProblem& p, double tau, double t, Forcing forcing) {
  p.validate();
  if (!(tau >= 0.0) || !(t >= tau)) throw Error(ErrorKind::domain, kModule, "stage needs t >= tau >= 0");
  if (!p.source) return Field::zeros(p.space());
  check_forcing(p, forcing);
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  const detail::SourceModes sm = detail::source_modes(*p.source, p.horizon);
  const double gamma = p.order.m - p.order.alpha;
  const double s = t - tau;

  int node = -1;
  if (!sm.catalog) {
    const double j = std::round(tau / p.horizon.dt());
    if (j > p.horizon.n_steps() || std::abs(tau - p.horizon.node(static_cast<int>(j))) > 1e-9 * p.horizon.dt()) {
      throw Error(ErrorKind::domain, kModule, "sampled source: tau must be a time node");
    }
    node = static_cast<int>(j);
  }
  const DerivativeKind kind =
      forcing == Forcing::caputo ? DerivativeKind::caputo : DerivativeKind::riemann_liouville;

  std::vector<cplx> v(p.space().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (table.zeroed[k] || !sm.modes[k].active) continue;
    cplx h;
    if (sm.catalog) {
      h = data_derivative(sm.modes[k].profile, gamma, kind)(tau);
    } else {
      const detail::StageData d = detail::stage_data(sm.modes[k], false, p.horizon, gamma, forcing);
      h = d.smooth[node];
      for (const Monomial& mono : d.singular) h += mono.coeff * std::pow(tau, mono.power);
    }
    const cplx kernel =
        power0(s, p.order.m - 1) * ml(p.order.alpha, p.order.m, table.values[k] * std::pow(s, p.order.alpha));
    v[k] = kernel * h;
  }
  return inverse(SpectralField(p.space(), std::move(v), detail::problem_real(p) && table.hermitian));
}

Solution duhamel_solution(const CauchyProblem& p, Forcing forcing) {
  p.validate();
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  Solution sol(p.horizon, p.space());
  sol.real = detail::problem_real(p) && table.hermitian;
  sol.meta.method = forcing == Forcing::caputo ? MethodTag::duhamel_caputo : MethodTag::duhamel_rl;
  sol.meta.hypothesis = forcing_hypothesis(forcing, p.order);
  sol.meta.quadrature = "composite trapezoid; product integration for non-integer powers in the stage data";
  detail::base_metadata(sol.meta, p, table);
  if (!p.source) return sol;
  check_forcing(p, forcing);

  const detail::SourceModes sm = detail::source_modes(*p.source, p.horizon);
  const double gamma = p.order.m - p.order.alpha;
  detail::LambdaCache kernels;
  for (std::size_t k = 0; k < sm.modes.size(); ++k) {
    if (table.zeroed[k] || !sm.modes[k].active) continue;
    const cplx lambda = table.values[k];
    const auto& kernel = kernels.get(lambda, [&] { return stage_kernel(p.order, lambda, p.horizon); });
    const detail::StageData data = detail::stage_data(sm.modes[k], sm.catalog, p.horizon, gamma, forcing);
    const std::vector<cplx> v = detail::duhamel_convolution(kernel, data, p.horizon.dt());
    for (std::size_t n = 0; n < v.size(); ++n) sol.modes[n][k] = v[n];
  }
  return sol;
}

Forcing select_forcing(const CauchyProblem& p) {
  if (!p.source) return Forcing::caputo;
  return p.source->vanishing_initial(p.order.m) ? Forcing::caputo : Forcing::riemann_liouville;
}

Solution full_solve(const CauchyProblem& p, SolveMethod method, const SolveOptions& opts) {
  p.validate();
  const SymbolTable table = evaluate_symbol(p.symbol, p.space());
  Solution sol = [&] {
    if (!p.source) {
      Solution s(p.horizon, p.space());
      s.meta.method = MethodTag::homogeneous;
      s.meta.hypothesis = "no source: representation through Mittag-Leffler operator functions";
      s.meta.quadrature = "none (mesh-free in time)";
      detail::base_metadata(s.meta, p, table);
      return s;
    }
    switch (method) {
      case SolveMethod::neumann: return neumann_series_solution(p, opts.neumann_terms, opts);
      case SolveMethod::voc: return voc_oracle(p, opts);
      case SolveMethod::duhamel: break;
    }
    return duhamel_solution(p, select_forcing(p));
  }();
  const auto hom = detail::homogeneous_modes(p, table);
  for (std::size_t n = 0; n < hom.size(); ++n) {
    for (std::size_t k = 0; k < hom[n].size(); ++k) sol.modes[n][k] += hom[n][k];
  }
  sol.real = detail::problem_real(p) && table.hermitian;
  return sol;
}

}  // namespace fracdu
