#include "fracdu/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracdu/error.hpp"

namespace fracdu {

namespace {
// Largest argument for which std::tgamma stays finite.
constexpr double kGammaOverflow = 171.6;
}  // namespace

bool is_gamma_pole(double x) noexcept {
  if (x > 0.0) return false;
  const double r = std::round(x);
  return std::abs(x - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
}

double sin_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  if (r == 0.0) return 0.0;
  const double s = std::sin(std::numbers::pi * r);
  return std::fmod(n, 2.0) == 0.0 ? s : -s;
}

double gamma_fn(double x) {
  if (std::isnan(x)) {
    throw Error(ErrorKind::domain, "mittag_leffler", "gamma of NaN");
  }
  if (is_gamma_pole(x)) {
    throw Error(ErrorKind::pole, "mittag_leffler",
                "gamma has a pole at non-positive integer " + std::to_string(x));
  }
  return std::tgamma(x);
}

double rgamma(double x) {
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (is_gamma_pole(x)) return 0.0;
  if (x > 0.0) {
    if (x < kGammaOverflow) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  // Reflection: 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi.
  const double s = sin_pi(x) / std::numbers::pi;
  const double y = 1.0 - x;
  if (y < kGammaOverflow) return s * std::tgamma(y);
  return std::copysign(std::exp(std::lgamma(y) + std::log(std::abs(s))), s);
}

LogRGamma log_rgamma(double x) {
  if (is_gamma_pole(x)) return {-std::numeric_limits<double>::infinity(), 0};
  if (x > 0.0) {
    if (x < kGammaOverflow) {
      return {-std::log(std::tgamma(x)), 1};
    }
    return {-std::lgamma(x), 1};
  }
  const double s = sin_pi(x) / std::numbers::pi;
  const double y = 1.0 - x;
  const double lg = y < kGammaOverflow ? std::log(std::tgamma(y)) : std::lgamma(y);
  return {lg + std::log(std::abs(s)), s > 0.0 ? 1 : -1};
}

}  // namespace fracdu
