#include "fracdu/frac_calc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "fracdu/error.hpp"
#include "fracdu/special.hpp"

namespace fracdu {

namespace {

const char* const kModule = "frac_time_calc";

bool is_integer(double x) { return std::floor(x) == x; }

cplx nan_cplx() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {nan, nan};
}

// Gamma(a) / Gamma(b) for a, b > 0 without intermediate overflow.
double gamma_ratio(double a, double b) {
  if (a < 170.0 && b < 170.0) return std::tgamma(a) * rgamma(b);
  return std::exp(std::lgamma(a) - std::lgamma(b));
}

// Gamma(p + 1) / Gamma(p - q + 1), the power-rule factor taking t^p to t^{p-q}.
// The denominator may sit at a pole, in which case the factor is zero.
double power_rule_factor(double p, double q) {
  const double num = p + 1.0;
  const double den = p - q + 1.0;
  if (den > 0.0) return gamma_ratio(num, den);
  return std::tgamma(num) * rgamma(den);
}

void require_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::domain, kModule, "integration order must be >= 0, got " + std::to_string(gamma));
  }
}

void require_samples(const TimeSeries& f, int needed) {
  if (f.grid.n_steps() < needed) {
    throw Error(ErrorKind::insufficient_samples, kModule,
                "need at least " + std::to_string(needed) + " steps, got " +
                    std::to_string(f.grid.n_steps()));
  }
}

// (1 + x)^p - 1 for |x| <= 1.
double pow1p_minus_one(double x, double p) {
  if (x == -1.0) return -1.0;
  return std::expm1(p * std::log1p(x));
}

// Product-trapezoid weights of J^gamma: interior a_l = (l+1)^{g+1} - 2 l^{g+1} + (l-1)^{g+1}.
std::vector<double> trapezoid_interior_weights(double gamma, int n) {
  const double p = gamma + 1.0;
  std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
  a[0] = 1.0;
  if (n >= 1) a[1] = std::pow(2.0, p) - 2.0;
  for (int l = 2; l <= n; ++l) {
    const double inv = 1.0 / l;
    a[l] = std::pow(static_cast<double>(l), p) * (pow1p_minus_one(inv, p) + pow1p_minus_one(-inv, p));
  }
  return a;
}

// End weight (n-1)^{g+1} - (n-g-1) n^g.
double trapezoid_end_weight(double gamma, int n) {
  const double p = gamma + 1.0;
  if (n == 1) return gamma;
  const double inv = 1.0 / n;
  return std::pow(static_cast<double>(n), p) * (pow1p_minus_one(-inv, p) + p * inv);
}

// L1 weights b_k = (k+1)^{1-a} - k^{1-a}.
std::vector<double> l1_weights(double a, int n) {
  const double p = 1.0 - a;
  std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
  b[0] = 1.0;
  for (int k = 1; k <= n; ++k) {
    b[k] = std::pow(static_cast<double>(k), p) * pow1p_minus_one(1.0 / k, p);
  }
  return b;
}

// L1 approximation of the Caputo derivative of order 0 < a <= 1.
std::vector<cplx> l1_scheme(std::span<const cplx> g, double dt, double a) {
  const int n_steps = static_cast<int>(g.size()) - 1;
  const std::vector<double> b = l1_weights(a, n_steps);
  std::vector<cplx> diff(g.size(), 0.0);
  for (int j = 0; j < n_steps; ++j) diff[j] = g[j + 1] - g[j];
  const double scale = std::pow(dt, -a) * rgamma(2.0 - a);
  std::vector<cplx> out(g.size(), 0.0);
  for (int n = 1; n <= n_steps; ++n) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += b[n - 1 - j] * diff[j];
    out[n] = scale * acc;
  }
  return out;
}

// Fornberg's recursion: weights for the derivative of order `k` at x = x0
// using nodes 0, 1, ..., n_points - 1 (unit spacing).
std::vector<double> fornberg_weights(int k, int n_points, double x0 = 0.0) {
  std::vector<std::vector<double>> c(n_points, std::vector<double>(k + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = -x0;
  for (int i = 1; i < n_points; ++i) {
    const int mn = std::min(i, k);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = i - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = static_cast<double>(i - j);
      c2 *= c3;
      if (j == i - 1) {
        for (int d = mn; d >= 1; --d) c[i][d] = c1 * (d * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int d = mn; d >= 1; --d) c[j][d] = (c4 * c[j][d] - d * c[j][d - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n_points);
  for (int i = 0; i < n_points; ++i) w[i] = c[i][k];
  return w;
}

// Derivative of order `times` at every node, second order accurate: a centred
// window in the interior and a one-sided window of the same width at the ends.
std::vector<cplx> repeated_derivative(std::span<const cplx> values, double dt, int times) {
  if (times == 0) return {values.begin(), values.end()};
  if (times == 1) return finite_difference_derivative(values, dt);
  const int width = times + 2 + (times % 2 == 0 ? 1 : 0);
  const int n = static_cast<int>(values.size());
  if (n < width) {
    throw Error(ErrorKind::insufficient_samples, kModule,
                "derivative of order " + std::to_string(times) + " needs at least " + std::to_string(width) +
                    " samples");
  }
  const double scale = std::pow(dt, -times);
  std::vector<std::vector<double>> stencils(width);
  for (int off = 0; off < width; ++off) stencils[off] = fornberg_weights(times, width, off);
  std::vector<cplx> d(n);
  for (int j = 0; j < n; ++j) {
    const int start = std::clamp(j - width / 2, 0, n - width);
    const std::vector<double>& w = stencils[j - start];
    cplx acc = 0.0;
    for (int i = 0; i < width; ++i) acc += w[i] * values[start + i];
    d[j] = scale * acc;
  }
  return d;
}

}  // namespace

// --- FractionalOrder / TimeGrid ------------------------------------------------

FractionalOrder FractionalOrder::from_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::domain, kModule, "fractional order must be positive, got " + std::to_string(alpha));
  }
  return {alpha, static_cast<int>(std::ceil(alpha))};
}

TimeGrid::TimeGrid(double dt, int n_steps) : dt_(dt), n_steps_(n_steps) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::domain, kModule, "time step must be positive, got " + std::to_string(dt));
  }
  if (n_steps < 1) {
    throw Error(ErrorKind::domain, kModule, "time grid needs at least one step");
  }
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> t(size());
  for (int j = 0; j <= n_steps_; ++j) t[j] = node(j);
  return t;
}

// --- CatalogProfile ------------------------------------------------------------

CatalogProfile::CatalogProfile(std::vector<Monomial> terms) {
  std::map<double, cplx> merged;
  for (const Monomial& t : terms) {
    if (!std::isfinite(t.power) || !(t.power > -1.0)) {
      throw Error(ErrorKind::unsupported_profile, kModule,
                  "monomial power must be finite and > -1, got " + std::to_string(t.power));
    }
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw Error(ErrorKind::unsupported_profile, kModule, "monomial coefficient must be finite");
    }
    merged[t.power] += t.coeff;
  }
  for (const auto& [p, c] : merged) {
    if (c != cplx(0.0)) terms_.push_back({p, c});
  }
}

cplx CatalogProfile::operator()(double t) const {
  cplx acc = 0.0;
  for (const Monomial& m : terms_) {
    if (t == 0.0) {
      if (m.power < 0.0) return nan_cplx();
      if (m.power == 0.0) acc += m.coeff;
      continue;
    }
    acc += m.coeff * std::pow(t, m.power);
  }
  return acc;
}

cplx CatalogProfile::derivative_at_zero(int k) const {
  cplx acc = 0.0;
  for (const Monomial& m : terms_) {
    if (m.power == static_cast<double>(k)) {
      acc += m.coeff * std::tgamma(k + 1.0);
    } else if (m.power < k && !is_integer(m.power)) {
      return {std::numeric_limits<double>::infinity(), 0.0};
    }
  }
  return acc;
}

bool CatalogProfile::vanishes_at_zero(int m) const {
  for (int k = 0; k < m; ++k) {
    if (derivative_at_zero(k) != cplx(0.0)) return false;
  }
  return true;
}

CatalogProfile CatalogProfile::operator+(const CatalogProfile& other) const {
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return CatalogProfile(std::move(all));
}

CatalogProfile CatalogProfile::operator*(cplx scale) const {
  std::vector<Monomial> out = terms_;
  for (Monomial& m : out) m.coeff *= scale;
  return CatalogProfile(std::move(out));
}

// --- TimeSeries ------------------------------------------------------------------

TimeSeries::TimeSeries(TimeGrid g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::grid_mismatch, kModule,
                "series has " + std::to_string(values.size()) + " values for " +
                    std::to_string(grid.size()) + " grid nodes");
  }
}

TimeSeries TimeSeries::sample(const CatalogProfile& f, const TimeGrid& grid) {
  std::vector<cplx> v(grid.size());
  for (int j = 0; j <= grid.n_steps(); ++j) v[j] = f(grid.node(j));
  return TimeSeries(grid, std::move(v));
}

// --- fractional integral -----------------------------------------------------------

CatalogProfile frac_integral(const CatalogProfile& f, double gamma) {
  require_gamma(gamma);
  if (gamma == 0.0) return f;
  std::vector<Monomial> out;
  out.reserve(f.terms().size());
  for (const Monomial& m : f.terms()) {
    out.push_back({m.power + gamma, m.coeff * gamma_ratio(m.power + 1.0, m.power + gamma + 1.0)});
  }
  return CatalogProfile(std::move(out));
}

TimeSeries frac_integral(const TimeSeries& f, double gamma) {
  require_gamma(gamma);
  if (gamma == 0.0) return f;
  const int n_steps = f.grid.n_steps();
  const std::vector<double> a = trapezoid_interior_weights(gamma, n_steps);
  const double scale = std::pow(f.grid.dt(), gamma) * rgamma(gamma + 2.0);
  std::vector<cplx> out(f.values.size(), 0.0);
  for (int n = 1; n <= n_steps; ++n) {
    cplx acc = trapezoid_end_weight(gamma, n) * f.values[0];
    for (int j = 1; j < n; ++j) acc += a[n - j] * f.values[j];
    acc += f.values[n];
    out[n] = scale * acc;
  }
  return TimeSeries(f.grid, std::move(out));
}

// --- derivatives -----------------------------------------------------------------

CatalogProfile caputo(const CatalogProfile& f, FractionalOrder order) {
  std::vector<Monomial> out;
  for (const Monomial& m : f.terms()) {
    if (m.power <= order.m - 1) {
      if (is_integer(m.power) && m.power >= 0.0) continue;  // annihilated
      throw Error(ErrorKind::unsupported_profile, kModule,
                  "Caputo derivative of order " + std::to_string(order.alpha) +
                      " needs f^(" + std::to_string(order.m) + "); power " + std::to_string(m.power) +
                      " is non-integer and <= " + std::to_string(order.m - 1));
    }
    out.push_back({m.power - order.alpha, m.coeff * power_rule_factor(m.power, order.alpha)});
  }
  return CatalogProfile(std::move(out));
}

TimeSeries caputo(const TimeSeries& f, FractionalOrder order) {
  require_samples(f, order.m + 1);
  const double dt = f.grid.dt();
  if (order.is_integer()) {
    return TimeSeries(f.grid, repeated_derivative(f.values, dt, order.m));
  }
  const std::vector<cplx> g = repeated_derivative(f.values, dt, order.m - 1);
  return TimeSeries(f.grid, l1_scheme(g, dt, order.alpha - (order.m - 1)));
}

CatalogProfile riemann_liouville(const CatalogProfile& f, FractionalOrder order) {
  CatalogProfile out = caputo(f, order);
  std::vector<Monomial> corrections;
  for (int k = 0; k < order.m; ++k) {
    const cplx fk = f.derivative_at_zero(k);
    if (fk == cplx(0.0)) continue;
    const double rg = rgamma(k - order.alpha + 1.0);
    if (rg == 0.0) continue;
    corrections.push_back({k - order.alpha, fk * rg});
  }
  return out + CatalogProfile(std::move(corrections));
}

TimeSeries riemann_liouville(const TimeSeries& f, FractionalOrder order) {
  TimeSeries out = caputo(f, order);
  const double dt = f.grid.dt();
  for (int k = 0; k < order.m; ++k) {
    const cplx fk = one_sided_derivative(f.values, dt, k);
    const double rg = rgamma(k - order.alpha + 1.0);
    if (fk == cplx(0.0) || rg == 0.0) continue;
    const double power = k - order.alpha;
    for (int j = 1; j <= f.grid.n_steps(); ++j) {
      out.values[j] += fk * rg * std::pow(f.grid.node(j), power);
    }
    if (power < 0.0) {
      out.values[0] = nan_cplx();
    } else if (power == 0.0) {
      out.values[0] += fk * rg;
    }
  }
  return out;
}

std::string_view to_string(DerivativeKind kind) noexcept {
  return kind == DerivativeKind::caputo ? "caputo" : "riemann_liouville";
}

CatalogProfile data_derivative(const CatalogProfile& f, double gamma, DerivativeKind kind) {
  if (gamma == 0.0) return f;
  const FractionalOrder order{gamma, static_cast<int>(std::ceil(gamma))};
  return kind == DerivativeKind::caputo ? caputo(f, order) : riemann_liouville(f, order);
}

TimeSeries data_derivative(const TimeSeries& f, double gamma, DerivativeKind kind) {
  if (gamma == 0.0) return f;
  const FractionalOrder order{gamma, static_cast<int>(std::ceil(gamma))};
  return kind == DerivativeKind::caputo ? caputo(f, order) : riemann_liouville(f, order);
}

ShiftRelationReport check_shift_relation(const CatalogProfile& f, FractionalOrder order, double beta,
                                         const TimeGrid& grid) {
  if (!(beta >= 0.0)) {
    throw Error(ErrorKind::domain, kModule, "shift beta must be >= 0");
  }
  const DerivativeKind kind =
      f.vanishes_at_zero(order.m) ? DerivativeKind::caputo : DerivativeKind::riemann_liouville;
  CatalogProfile lhs = frac_integral(f, beta + order.alpha);
  CatalogProfile rhs = frac_integral(data_derivative(f, order.m - order.alpha, kind), beta + order.m);
  double residual = 0.0;
  for (int j = 0; j <= grid.n_steps(); ++j) {
    const double t = grid.node(j);
    residual = std::max(residual, std::abs(lhs(t) - rhs(t)));
  }
  return {kind, residual, std::move(lhs), std::move(rhs)};
}

// --- finite differences --------------------------------------------------------------

cplx one_sided_derivative(std::span<const cplx> values, double dt, int k) {
  if (k == 0) return values.empty() ? cplx(0.0) : values[0];
  const int n_points = k + 2;
  if (static_cast<int>(values.size()) < n_points) {
    throw Error(ErrorKind::insufficient_samples, kModule,
                "one-sided derivative of order " + std::to_string(k) + " needs " +
                    std::to_string(n_points) + " samples");
  }
  const std::vector<double> w = fornberg_weights(k, n_points);
  cplx acc = 0.0;
  for (int i = 0; i < n_points; ++i) acc += w[i] * values[i];
  return acc / std::pow(dt, k);
}

std::vector<cplx> finite_difference_derivative(std::span<const cplx> values, double dt) {
  const std::size_t n = values.size();
  if (n < 3) {
    throw Error(ErrorKind::insufficient_samples, kModule, "finite differences need at least 3 samples");
  }
  std::vector<cplx> d(n);
  const double h2 = 2.0 * dt;
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / h2;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (values[j + 1] - values[j - 1]) / h2;
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / h2;
  return d;
}

}  // namespace fracdu
