#include "fracdu/mittag_leffler.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "fracdu/error.hpp"
#include "fracdu/special.hpp"

namespace fracdu {

std::string_view to_string(MlRegime regime) noexcept {
  switch (regime) {
    case MlRegime::zero: return "zero";
    case MlRegime::series_double: return "series_double";
    case MlRegime::series_quad: return "series_quad";
    case MlRegime::asymptotic: return "asymptotic";
  }
  return "unknown";
}

namespace {

constexpr double kAccept = 1e-13;
constexpr double kGiveUp = 1e-6;

// Thresholds on R = |z|^(1/alpha), the location of the largest series term.
constexpr double kAsymptoticFirst = 20.0;
constexpr double kAsymptoticLast = 8.0;
constexpr double kDoubleSeriesMax = 120.0;
constexpr double kQuadSeriesMax = 60.0;

constexpr double kEpsDouble = std::numeric_limits<double>::epsilon();
constexpr double kEpsQuad = 1.925929944387235853e-34;  // 2^-112

constexpr int kMaxSeriesTerms = 200000;
constexpr int kMaxAsymptoticTerms = 4000;

bool is_integer(double x) { return std::floor(x) == x; }

// Neumaier summation on each component.
class CompensatedSum {
 public:
  void add(cplx v) {
    add_component(re_, re_c_, v.real());
    add_component(im_, im_c_, v.imag());
  }
  cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_component(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

double relative_estimate(double abs_error, cplx value) {
  const double mag = std::abs(value);
  if (abs_error == 0.0) return 0.0;
  if (mag == 0.0) return std::numeric_limits<double>::infinity();
  return abs_error / mag;
}

int first_useful_term(double alpha, double beta, double peak) {
  return static_cast<int>(std::ceil(std::max(0.0, (peak - beta) / alpha))) + 2;
}

MlResult series_double(double alpha, double beta, cplx z) {
  const double r = std::abs(z);
  const double log_r = std::log(r);
  const int n_min = first_useful_term(alpha, beta, std::pow(r, 1.0 / alpha));
  const cplx unit = z / r;

  CompensatedSum sum;
  double abs_sum = 0.0;
  double weighted = 0.0;
  cplx zn = 1.0;
  cplx un = 1.0;
  bool log_form = false;
  bool converged = false;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const double a = alpha * n + beta;
    if (!log_form && (a >= 170.0 || std::abs(zn) > 1e290)) log_form = true;
    cplx term;
    double weight;
    if (!log_form) {
      term = zn * rgamma(a);
      weight = n + 4.0;
      zn *= z;
    } else {
      const double lg = std::lgamma(a);
      term = un * std::exp(n * log_r - lg);
      weight = n * std::abs(log_r) + std::abs(lg) + 4.0;
    }
    un *= unit;
    sum.add(term);
    const double mag = std::abs(term);
    abs_sum += mag;
    weighted += weight * mag;
    if (n >= n_min && mag <= 1e-18 * abs_sum) {
      converged = true;
      break;
    }
  }
  const cplx value = sum.value();
  const double est = converged ? relative_estimate(kEpsDouble * weighted, value)
                               : std::numeric_limits<double>::infinity();
  return {value, est, MlRegime::series_double};
}

struct QuadComplex {
  __float128 re = 0;
  __float128 im = 0;
};

QuadComplex mul(const QuadComplex& a, const QuadComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

MlResult series_quad(double alpha, double beta, cplx z) {
  const double r = std::abs(z);
  const int n_min = first_useful_term(alpha, beta, std::pow(r, 1.0 / alpha));
  const QuadComplex zq{z.real(), z.imag()};
  const __float128 aq = alpha;
  const __float128 bq = beta;

  QuadComplex sum;
  QuadComplex zn{1, 0};
  __float128 abs_sum = 0;
  __float128 weighted = 0;
  bool converged = false;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    const __float128 a = aq * n + bq;
    const __float128 lg = lgammaq(a);
    const __float128 rg = a < 1700 ? 1 / tgammaq(a) : expq(-lg);
    const QuadComplex term{zn.re * rg, zn.im * rg};
    sum.re += term.re;
    sum.im += term.im;
    const __float128 mag = sqrtq(term.re * term.re + term.im * term.im);
    abs_sum += mag;
    weighted += (n + 4 + fabsq(lg)) * mag;
    if (n >= n_min && mag <= 1e-36Q * abs_sum) {
      converged = true;
      break;
    }
    zn = mul(zn, zq);
  }
  const cplx value{static_cast<double>(sum.re), static_cast<double>(sum.im)};
  const double est = converged ? relative_estimate(static_cast<double>(kEpsQuad * weighted), value)
                               : std::numeric_limits<double>::infinity();
  return {value, est, MlRegime::series_quad};
}

// E_{a,b}(z) ~ (1/a) sum_j Z_j^{1-b} exp(Z_j) - sum_{k>=1} z^{-k} / Gamma(b - a k),
// Z_j = |z|^{1/a} exp(i (arg z + 2 pi j) / a), over branches with |arg Z_j| <= pi.
// Branches sitting exactly on |arg Z_j| = pi carry weight 1/2; this makes the
// expansion exact for integer alpha and beta.
MlResult asymptotic(double alpha, double beta, cplx z) {
  using std::numbers::pi;
  const double r = std::abs(z);
  const double log_r = std::log(r);
  const double theta = std::atan2(z.imag(), z.real());
  const double log_big_r = log_r / alpha;
  const double big_r = std::exp(log_big_r);

  const double reach = alpha * pi;
  const double slack = 1e-12 * reach;
  const int j_lo = static_cast<int>(std::ceil((-reach - slack - theta) / (2.0 * pi)));
  const int j_hi = static_cast<int>(std::floor((reach + slack - theta) / (2.0 * pi)));

  cplx exponential = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double angle = theta + 2.0 * pi * j;
    const double weight = std::abs(angle) >= reach - slack ? 0.5 : 1.0;
    const double phi = angle / alpha;
    const double log_mag = big_r * std::cos(phi) + (1.0 - beta) * log_big_r - std::log(alpha);
    const double phase = big_r * std::sin(phi) + (1.0 - beta) * phi;
    const double mag = weight * std::exp(log_mag);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    exponential += cplx(c == 0.0 ? 0.0 : mag * c, s == 0.0 ? 0.0 : mag * s);
  }

  const cplx unit_inv = std::conj(z) / r;
  cplx u = 1.0;
  CompensatedSum algebraic;
  double omitted = 0.0;
  bool converged = false;

  if (is_integer(alpha) && is_integer(beta)) {
    // Only finitely many 1/Gamma(beta - alpha k) are non-zero.
    for (int k = 1; beta - alpha * k > 0.0; ++k) {
      u *= unit_inv;
      algebraic.add(-std::exp(-k * log_r) * rgamma(beta - alpha * k) * u);
    }
    converged = true;
  } else {
    double previous_envelope = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kMaxAsymptoticTerms; ++k) {
      u *= unit_inv;
      const double x = beta - alpha * k;
      // Magnitude envelope ignoring the |sin(pi x)| factor, so that terms
      // that are accidentally small near poles do not stop the sum early.
      const double envelope = x > 0.0 ? std::exp(-k * log_r - std::lgamma(x))
                                      : std::exp(-k * log_r + std::lgamma(1.0 - x)) / pi;
      if (x < 0.0 && envelope > previous_envelope) {
        omitted = envelope;
        converged = true;
        break;
      }
      previous_envelope = envelope;
      const LogRGamma lr = log_rgamma(x);
      if (lr.sign != 0) {
        algebraic.add(-static_cast<double>(lr.sign) * std::exp(-k * log_r + lr.log_abs) * u);
      }
      const double scale = std::abs(exponential + algebraic.value());
      if (x < 0.0 && envelope <= 1e-17 * scale) {
        omitted = envelope;
        converged = true;
        break;
      }
    }
  }

  const cplx value = exponential + algebraic.value();
  double est = converged ? relative_estimate(omitted, value) : std::numeric_limits<double>::infinity();
  if (converged && std::isinf(std::abs(value))) est = 0.0;
  return {value, est, MlRegime::asymptotic};
}

void validate(double alpha, double beta, cplx z) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::domain, "mittag_leffler", "alpha must be positive, got " + std::to_string(alpha));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::domain, "mittag_leffler", "beta must be positive, got " + std::to_string(beta));
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::domain, "mittag_leffler", "argument must be finite");
  }
}

MlResult evaluate_upper(double alpha, double beta, cplx z) {
  const double big_r = std::pow(std::abs(z), 1.0 / alpha);

  if (is_integer(alpha) && is_integer(beta) && big_r >= 2.0) {
    return asymptotic(alpha, beta, z);
  }

  std::optional<MlResult> best;
  auto accept = [&best](const MlResult& r) {
    if (!best || r.error_estimate < best->error_estimate) best = r;
    return r.error_estimate <= kAccept;
  };

  bool tried_asymptotic = false;
  if (big_r >= kAsymptoticFirst) {
    tried_asymptotic = true;
    if (accept(asymptotic(alpha, beta, z))) return *best;
  }
  if (big_r <= kDoubleSeriesMax && accept(series_double(alpha, beta, z))) return *best;
  if (big_r <= kQuadSeriesMax && accept(series_quad(alpha, beta, z))) return *best;
  if (!tried_asymptotic && big_r >= kAsymptoticLast && accept(asymptotic(alpha, beta, z))) {
    return *best;
  }
  if (best && best->error_estimate <= kGiveUp) return *best;

  std::string msg = "no regime converged for alpha=" + std::to_string(alpha) +
                    ", beta=" + std::to_string(beta) + ", |z|=" + std::to_string(std::abs(z));
  if (best) msg += " (best estimate " + std::to_string(best->error_estimate) + ")";
  throw Error(ErrorKind::convergence, "mittag_leffler", msg);
}

}  // namespace

MlResult ml_evaluate(double alpha, double beta, cplx z) {
  validate(alpha, beta, z);
  if (z == cplx(0.0, 0.0)) return {rgamma(beta), 0.0, MlRegime::zero};

  // Work in the closed upper half plane; E(conj z) = conj E(z) then holds exactly.
  const bool flip = z.imag() < 0.0;
  const cplx upper{z.real(), std::abs(z.imag())};
  MlResult r = evaluate_upper(alpha, beta, upper);
  if (flip) r.value = std::conj(r.value);
  return r;
}

cplx ml(double alpha, double beta, cplx z) { return ml_evaluate(alpha, beta, z).value; }

std::vector<cplx> ml_map(double alpha, double beta, std::span<const cplx> zs) {
  std::vector<cplx> out;
  out.reserve(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) {
    try {
      out.push_back(ml(alpha, beta, zs[i]));
    } catch (const Error& e) {
      throw Error(e.kind(), e.module(), e.message() + " (at index " + std::to_string(i) + ")");
    }
  }
  return out;
}

}  // namespace fracdu
