#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace fracdu {

using cplx = std::complex<double>;

/// Order alpha > 0 with its integer bracket m: m - 1 < alpha <= m.
struct FractionalOrder {
  double alpha;
  int m;

  static FractionalOrder from_alpha(double alpha);
  bool is_integer() const noexcept { return alpha == static_cast<double>(m); }
};

/// Uniform grid t_j = j * dt, j = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid(double dt, int n_steps);
  static TimeGrid over(double t_end, int n_steps) { return TimeGrid(t_end / n_steps, n_steps); }

  double dt() const noexcept { return dt_; }
  int n_steps() const noexcept { return n_steps_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_steps_) + 1; }
  double node(int j) const noexcept { return j * dt_; }
  double t_end() const noexcept { return n_steps_ * dt_; }
  std::vector<double> nodes() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double dt_;
  int n_steps_;
};

/// coeff * t^power. Powers above -1 are admitted so that Riemann-Liouville
/// results (e.g. t^{-1/2}) stay in the catalog; user input uses power >= 0.
struct Monomial {
  double power;
  cplx coeff;
};

/// Finite sum of monomials, operated on exactly through the power rules.
class CatalogProfile {
 public:
  CatalogProfile() = default;
  explicit CatalogProfile(std::vector<Monomial> terms);

  static CatalogProfile constant(cplx c) { return CatalogProfile({{0.0, c}}); }
  static CatalogProfile monomial(double power, cplx coeff = 1.0) {
    return CatalogProfile({{power, coeff}});
  }

  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Value at t. Terms with negative power give NaN at t = 0.
  cplx operator()(double t) const;

  /// f^{(k)}(0). Infinite (NaN-free +inf magnitude) when some 0 < power < k is non-integer.
  cplx derivative_at_zero(int k) const;

  /// f^{(k)}(0) == 0 for k = 0..m-1, decided exactly.
  bool vanishes_at_zero(int m) const;

  CatalogProfile operator+(const CatalogProfile& other) const;
  CatalogProfile operator*(cplx scale) const;

 private:
  std::vector<Monomial> terms_;
};

/// Samples on a TimeGrid (one value per node).
struct TimeSeries {
  TimeGrid grid;
  std::vector<cplx> values;

  TimeSeries(TimeGrid g, std::vector<cplx> v);
  static TimeSeries sample(const CatalogProfile& f, const TimeGrid& grid);
};

/// J^gamma. Catalog input is exact; sampled input uses the product
/// trapezoidal rule (piecewise-linear f integrated exactly against the kernel).
CatalogProfile frac_integral(const CatalogProfile& f, double gamma);
TimeSeries frac_integral(const TimeSeries& f, double gamma);

/// Caputo derivative D_*^alpha f = J^{m-alpha} f^{(m)}.
/// Sampled input: L1 scheme on f^{(m-1)}; for integer alpha a second-order
/// finite-difference m-th derivative.
CatalogProfile caputo(const CatalogProfile& f, FractionalOrder order);
TimeSeries caputo(const TimeSeries& f, FractionalOrder order);

/// Riemann-Liouville derivative via
/// D_+^alpha f = D_*^alpha f + sum_{k<m} f^{(k)}(0) t^{k-alpha} / Gamma(k-alpha+1).
/// For sampled input the t = 0 node is NaN when a correction term is singular there.
CatalogProfile riemann_liouville(const CatalogProfile& f, FractionalOrder order);
TimeSeries riemann_liouville(const TimeSeries& f, FractionalOrder order);

/// Which derivative the shift relation used.
enum class DerivativeKind { caputo, riemann_liouville };
std::string_view to_string(DerivativeKind kind) noexcept;

struct ShiftRelationReport {
  DerivativeKind form;
  double residual;  // sup over the grid of |lhs - rhs|
  CatalogProfile lhs;
  CatalogProfile rhs;
};

/// Checks J^{beta+alpha} f = J^{beta+m} D^{m-alpha} f, with D the Caputo
/// derivative when f^{(k)}(0) = 0 for k < m and the Riemann-Liouville
/// derivative otherwise.
ShiftRelationReport check_shift_relation(const CatalogProfile& f, FractionalOrder order, double beta,
                                         const TimeGrid& grid);

/// Data derivative D^{gamma} f for 0 <= gamma < 1 (identity at gamma = 0).
CatalogProfile data_derivative(const CatalogProfile& f, double gamma, DerivativeKind kind);
TimeSeries data_derivative(const TimeSeries& f, double gamma, DerivativeKind kind);

/// k-th derivative at t_0 from a one-sided stencil of second-order accuracy.
cplx one_sided_derivative(std::span<const cplx> values, double dt, int k);

/// Second-order finite-difference first derivative at every node.
std::vector<cplx> finite_difference_derivative(std::span<const cplx> values, double dt);

}  // namespace fracdu
