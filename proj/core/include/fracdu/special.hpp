#pragma once

namespace fracdu {

/// Gamma function. Throws Error(pole) at non-positive integers.
double gamma_fn(double x);

/// 1/Gamma(x), total on the reals: exactly 0 at non-positive integers.
double rgamma(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// True when x is a non-positive integer to within a few ulps.
bool is_gamma_pole(double x) noexcept;

/// log|1/Gamma(x)| together with the sign of 1/Gamma(x). The sign is 0 at
/// poles, in which case `log_abs` is -inf. Never overflows.
struct LogRGamma {
  double log_abs;
  int sign;
};
LogRGamma log_rgamma(double x);

}  // namespace fracdu
