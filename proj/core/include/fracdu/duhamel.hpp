#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracdu/frac_calc.hpp"
#include "fracdu/spectral.hpp"

namespace fracdu {

/// f(t, x): either a finite sum of profile(t) * shape(x) terms, or samples
/// on every node of a time grid.
class SourceTerm {
 public:
  struct Term {
    CatalogProfile profile;
    Field shape;
  };

  static SourceTerm catalog(std::vector<Term> terms);
  static SourceTerm sampled(TimeGrid grid, std::vector<Field> slices);

  bool is_catalog() const noexcept { return !slices_.has_value(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  const TimeGrid& sample_grid() const { return slices_->first; }
  const std::vector<Field>& slices() const { return slices_->second; }
  const SpaceGrid& space() const;
  bool real() const noexcept;

  /// d^k f/dt^k (0, x) = 0 for k < m. Exact for catalog terms (each profile
  /// is checked on its own); sampled data use one-sided differences relative
  /// to the data magnitude.
  bool vanishing_initial(int m) const;

  /// f(t, x) at a time node or, for catalog sources, any t >= 0.
  Field at(double t) const;

 private:
  std::vector<Term> terms_;
  std::optional<std::pair<TimeGrid, std::vector<Field>>> slices_;
};

/// D_*^alpha u = A(D_x) u + f, d^k u/dt^k (0) = phi_k for k < m.
struct CauchyProblem {
  FractionalOrder order;
  Symbol symbol;
  std::vector<Field> initial;
  std::optional<SourceTerm> source;
  TimeGrid horizon;

  const SpaceGrid& space() const { return initial.front().grid; }
  /// Throws Error(config / grid_mismatch) for an inconsistent problem.
  void validate() const;
};

enum class Forcing { caputo, riemann_liouville };
enum class MethodTag { homogeneous, duhamel_caputo, duhamel_rl, neumann, voc_oracle };
enum class SolveMethod { duhamel, neumann, voc };

std::string_view to_string(Forcing f) noexcept;
std::string_view to_string(MethodTag m) noexcept;
std::string_view to_string(SolveMethod m) noexcept;

struct SolutionMetadata {
  MethodTag method = MethodTag::homogeneous;
  /// Which forcing representation was used and the hypothesis it rests on.
  std::string hypothesis;
  std::string quadrature;
  double step = 0.0;
  /// Largest Re A(xi_k); positive values mean growing modes.
  double max_real_symbol = 0.0;
  /// Neumann: largest magnitude of the last summed term. VOC: step-doubling
  /// estimate at the final time. Zero otherwise.
  double truncation_estimate = 0.0;
  int series_terms = 0;
  std::vector<std::string> warnings;
};

/// Spectral history of u on every node of the time grid.
struct Solution {
  TimeGrid grid;
  SpaceGrid space;
  std::vector<std::vector<cplx>> modes;  // modes[n][k]
  bool real = true;
  SolutionMetadata meta;

  Solution(TimeGrid g, SpaceGrid s);
  Field field(int n) const;
  /// Per-mode time series of coefficient k.
  std::vector<cplx> history(std::size_t k) const;
};

struct SolveOptions {
  int neumann_terms = 30;
  /// Neumann divergence warning threshold, relative to the solution scale.
  double neumann_tolerance = 1e-8;
  /// VOC step-doubling estimate above this (relative) raises Error(quadrature).
  double voc_tolerance = 1e-2;
};

/// Sum_{k=1}^m t^{k-1} E_{alpha,k}(t^alpha A) phi_{k-1}, evaluated mesh-free at t.
Field homogeneous_solution(const CauchyProblem& p, double t);

/// V(t, tau) = (t - tau)^{m-1} E_{alpha,m}((t - tau)^alpha A) h(tau), with h the
/// Caputo or Riemann-Liouville derivative of order m - alpha of the source.
Field stage_solution(const CauchyProblem& p, double tau, double t, Forcing forcing);

/// v(t_n) = integral over [0, t_n] of V(t_n, tau) dtau on the problem's time grid.
Solution duhamel_solution(const CauchyProblem& p, Forcing forcing);

/// v = sum_{n < n_terms} A^n J^{alpha n + alpha} f.
Solution neumann_series_solution(const CauchyProblem& p, int n_terms, const SolveOptions& opts = {});

/// v(t) = integral of (t-s)^{alpha-1} E_{alpha,alpha}(A (t-s)^alpha) f(s) ds with
/// f piecewise linear and the kernel integrated exactly.
Solution voc_oracle(const CauchyProblem& p, const SolveOptions& opts = {});

/// Homogeneous part plus the chosen inhomogeneous representation. The Caputo
/// forcing is used when the source vanishes to order m at t = 0, the
/// Riemann-Liouville forcing otherwise.
Solution full_solve(const CauchyProblem& p, SolveMethod method, const SolveOptions& opts = {});

/// Forcing variant full_solve would select.
Forcing select_forcing(const CauchyProblem& p);

struct ClassicCheckReport {
  double homogeneous_difference;
  double duhamel_difference;
  double max_difference;
};

/// For integer alpha: compares full_solve(duhamel) with a solution built from
/// classical fundamental solutions of d^m w/dt^m = lambda w (exponentials of
/// the m-th roots of lambda). Differences are sup norms over time and space.
ClassicCheckReport classic_duhamel_check(const CauchyProblem& p);

struct ResidualReport {
  double max = 0.0;  // sup |D_*^alpha u - A u - f| over interior time nodes and space
  double rms = 0.0;  // discrete L2 (root mean square) of the same
  double source_max = 0.0;
  double source_rms = 0.0;
  /// max_x |d^k u/dt^k (0) - phi_k| for k < m, from one-sided differences.
  std::vector<double> initial;
  /// sup over space of the residual at t_1 .. t_{N-1}.
  std::vector<double> time_max;
};

/// Pointwise residual of the equation, using the L1 Caputo scheme in time.
ResidualReport residual_norm(const Solution& s, const CauchyProblem& p);

}  // namespace fracdu
