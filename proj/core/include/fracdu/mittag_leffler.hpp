#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace fracdu {

using cplx = std::complex<double>;

/// How a Mittag-Leffler value was obtained.
enum class MlRegime {
  zero,           // z == 0, exact 1/Gamma(beta)
  series_double,  // Taylor series, compensated double summation
  series_quad,    // Taylor series in 113-bit binary128 arithmetic
  asymptotic,     // exponential + algebraic expansion (exact for integer alpha, beta)
};

std::string_view to_string(MlRegime regime) noexcept;

struct MlResult {
  cplx value;
  /// A posteriori relative error estimate of the chosen regime.
  double error_estimate;
  MlRegime regime;
};

/// Two-parameter Mittag-Leffler function with diagnostics.
///
/// Regimes are tried in order of cost and accepted as soon as their own
/// error estimate drops below 1e-13 relative. Throws Error(domain) for
/// alpha <= 0, beta <= 0 or non-finite z, and Error(convergence) if no
/// regime gets below 1e-6. Results overflow to infinity where the function
/// itself exceeds the double range.
MlResult ml_evaluate(double alpha, double beta, cplx z);

/// E_{alpha,beta}(z) = sum_n z^n / Gamma(alpha n + beta).
cplx ml(double alpha, double beta, cplx z);

/// Elementwise `ml`; errors are rethrown with the offending index.
std::vector<cplx> ml_map(double alpha, double beta, std::span<const cplx> zs);

}  // namespace fracdu
