#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracdu/error.hpp"
#include "fracdu/frac_calc.hpp"
#include "oracles.hpp"

using fracdu::CatalogProfile;
using fracdu::cplx;
using fracdu::FractionalOrder;
using fracdu::TimeGrid;
using fracdu::TimeSeries;

namespace {

FractionalOrder order(double a) { return FractionalOrder::from_alpha(a); }

TimeSeries sample(double (*f)(double), const TimeGrid& g) {
  std::vector<cplx> v(g.size());
  for (int j = 0; j <= g.n_steps(); ++j) v[j] = f(g.node(j));
  return TimeSeries(g, v);
}

double sup_diff(const TimeSeries& a, const TimeSeries& b, std::size_t from = 0) {
  double d = 0.0;
  for (std::size_t j = from; j < a.values.size(); ++j) d = std::max(d, std::abs(a.values[j] - b.values[j]));
  return d;
}

double sup_diff(const TimeSeries& a, const CatalogProfile& f, std::size_t from = 0) {
  return sup_diff(a, TimeSeries::sample(f, a.grid), from);
}

}  // namespace

TEST_CASE("FractionalOrder brackets alpha") {
  CHECK(order(0.5).m == 1);
  CHECK(order(1.0).m == 1);
  CHECK(order(1.5).m == 2);
  CHECK(order(2.0).m == 2);
  CHECK(order(2.0).is_integer());
  CHECK_THROWS_AS(order(0.0), fracdu::Error);
  CHECK_THROWS_AS(order(-1.0), fracdu::Error);
}

TEST_CASE("TimeGrid and TimeSeries validate their shape") {
  CHECK_THROWS_AS(TimeGrid(0.0, 10), fracdu::Error);
  CHECK_THROWS_AS(TimeGrid(0.1, 0), fracdu::Error);
  const TimeGrid g = TimeGrid::over(1.0, 4);
  CHECK(g.size() == 5);
  CHECK(g.node(4) == doctest::Approx(1.0));
  CHECK_THROWS_AS(TimeSeries(g, std::vector<cplx>(4)), fracdu::Error);
}

TEST_CASE("catalog profiles merge terms and know their derivatives at zero") {
  const CatalogProfile f({{2.0, 3.0}, {0.0, 1.0}, {2.0, -1.0}, {1.5, 0.0}});
  CHECK(f.terms().size() == 2);
  CHECK(f(2.0) == cplx(9.0));
  CHECK(f.derivative_at_zero(0) == cplx(1.0));
  CHECK(f.derivative_at_zero(2) == cplx(4.0));
  CHECK_FALSE(f.vanishes_at_zero(1));
  CHECK(CatalogProfile::monomial(3.0).vanishes_at_zero(3));
  CHECK_FALSE(CatalogProfile::monomial(3.0).vanishes_at_zero(4));
  CHECK(std::isinf(std::abs(CatalogProfile::monomial(0.5).derivative_at_zero(1))));
  CHECK_THROWS_AS(CatalogProfile::monomial(-1.0), fracdu::Error);
}

TEST_CASE("frac_integral examples") {
  const CatalogProfile one = CatalogProfile::constant(1.0);
  CHECK(std::abs(fracdu::frac_integral(one, 1.0)(1.0) - 1.0) < 1e-15);
  CHECK(std::abs(fracdu::frac_integral(CatalogProfile::monomial(1.0), 0.5)(1.0) - 0.7522527780636751) < 1e-15);
  const CatalogProfile f({{0.0, 2.0}, {1.3, cplx(0, 1)}});
  const CatalogProfile same = fracdu::frac_integral(f, 0.0);
  CHECK(same(0.7) == f(0.7));
  CHECK_THROWS_AS(fracdu::frac_integral(one, -0.5), fracdu::Error);
}

TEST_CASE("sampled J^gamma matches a brute-force quadrature oracle") {
  const TimeGrid g = TimeGrid::over(1.0, 1000);
  for (double gamma : {0.3, 0.5, 1.2}) {
    const TimeSeries j = fracdu::frac_integral(sample([](double t) { return std::sin(t); }, g), gamma);
    for (int n : {1, 10, 500, 1000}) {
      const cplx want =
          oracle::riemann_liouville_integral([](double s) { return cplx(std::sin(s)); }, gamma, g.node(n));
      CHECK(std::abs(j.values[n] - want) < 1e-6);
    }
  }
}

TEST_CASE("sampled J^gamma is exact for piecewise linear data") {
  const TimeGrid g = TimeGrid::over(2.0, 40);
  const TimeSeries j = fracdu::frac_integral(sample([](double t) { return 3.0 * t - 1.0; }, g), 0.7);
  const CatalogProfile want = fracdu::frac_integral(CatalogProfile({{1.0, 3.0}, {0.0, -1.0}}), 0.7);
  CHECK(sup_diff(j, want) < 1e-13);
}

TEST_CASE("caputo examples") {
  CHECK(std::abs(fracdu::caputo(CatalogProfile::monomial(1.0), order(0.5))(1.0) - 1.1283791670955126) < 1e-15);
  for (double a : {0.2, 0.7, 1.0}) CHECK(fracdu::caputo(CatalogProfile::constant(4.0), order(a)).empty());
  CHECK(std::abs(fracdu::caputo(CatalogProfile::monomial(3.0), order(1.5))(1.0) - 4.513516668382050) < 1e-14);
}

TEST_CASE("catalog caputo rejects non-integer powers below m - 1") {
  CHECK_THROWS_AS(fracdu::caputo(CatalogProfile::monomial(0.5), order(1.5)), fracdu::Error);
  CHECK_NOTHROW(fracdu::caputo(CatalogProfile::monomial(1.5), order(1.5)));
}

TEST_CASE("L1 caputo of t^2 converges at order 2 - alpha") {
  const CatalogProfile f = CatalogProfile::monomial(2.0);
  const double want = fracdu::caputo(f, order(0.5))(1.0).real();
  std::vector<double> errs;
  for (int n : {250, 500, 1000}) {
    const TimeSeries d = fracdu::caputo(TimeSeries::sample(f, TimeGrid::over(1.0, n)), order(0.5));
    errs.push_back(std::abs(d.values.back() - want) / want);
  }
  CHECK(errs.back() <= 1e-3);
  CHECK(std::log2(errs[0] / errs[1]) >= 1.4);
  CHECK(std::log2(errs[1] / errs[2]) >= 1.4);
}

TEST_CASE("sampled caputo with 1 < alpha < 2") {
  const CatalogProfile f = CatalogProfile::monomial(3.0);
  const TimeSeries d = fracdu::caputo(TimeSeries::sample(f, TimeGrid::over(1.0, 1000)), order(1.5));
  CHECK(std::abs(d.values.back() - fracdu::caputo(f, order(1.5))(1.0)) < 5e-3);
}

TEST_CASE("integer order derivatives match central differences at second order") {
  const TimeGrid g = TimeGrid::over(1.0, 200);
  const TimeSeries f = sample([](double t) { return std::exp(t); }, g);
  const TimeSeries d1 = fracdu::caputo(f, order(1.0));
  const TimeSeries d2 = fracdu::caputo(f, order(2.0));
  for (int n = 1; n < g.n_steps(); ++n) {
    const double t = g.node(n);
    CHECK(std::abs(d1.values[n] - std::exp(t)) < 1e-4);
    CHECK(std::abs(d2.values[n] - std::exp(t)) < 1e-3);
  }
  const TimeSeries rl = fracdu::riemann_liouville(sample([](double t) { return t * t; }, g), order(1.0));
  CHECK(std::abs(rl.values.back() - 2.0) < 1e-10);
}

TEST_CASE("riemann_liouville examples") {
  CHECK(std::abs(fracdu::riemann_liouville(CatalogProfile::constant(1.0), order(0.5))(1.0) - 0.5641895835477563) <
        1e-15);
  const CatalogProfile t = CatalogProfile::monomial(1.0);
  CHECK(fracdu::riemann_liouville(t, order(0.5))(0.3) == fracdu::caputo(t, order(0.5))(0.3));
  CHECK(std::abs(fracdu::riemann_liouville(CatalogProfile::monomial(2.0), order(1.0))(1.0) - 2.0) < 1e-15);
}

TEST_CASE("sampled riemann_liouville flags the singular t = 0 node") {
  const TimeGrid g = TimeGrid::over(1.0, 1000);
  const TimeSeries d = fracdu::riemann_liouville(sample([](double) { return 1.0; }, g), order(0.5));
  CHECK(std::isnan(d.values[0].real()));
  for (int n : {1, 10, 1000}) {
    const double want = std::pow(g.node(n), -0.5) / std::tgamma(0.5);
    CHECK(std::abs(d.values[n] - want) / want < 1e-3);
  }
}

TEST_CASE("check_shift_relation fixtures") {
  const TimeGrid g = TimeGrid::over(2.0, 200);
  for (double a : {0.4, 1.0, 1.5, 2.0}) {
    const FractionalOrder o = order(a);
    const auto r = fracdu::check_shift_relation(CatalogProfile::monomial(o.m), o, 0.0, g);
    CHECK(r.residual <= 1e-10);
    CHECK(r.form == fracdu::DerivativeKind::caputo);
  }
  const auto constant = fracdu::check_shift_relation(CatalogProfile::constant(1.0), order(0.5), 0.5, g);
  CHECK(constant.residual <= 1e-10);
  CHECK(constant.form == fracdu::DerivativeKind::riemann_liouville);
  const auto square = fracdu::check_shift_relation(CatalogProfile::monomial(2.0), order(1.5), 1.0, g);
  CHECK(square.residual <= 1e-10);
  CHECK(square.form == fracdu::DerivativeKind::caputo);
  CHECK_THROWS_AS(fracdu::check_shift_relation(CatalogProfile::constant(1.0), order(0.5), -1.0, g), fracdu::Error);
}

TEST_CASE("semigroup property on catalog and sampled inputs") {
  const TimeGrid g = TimeGrid::over(1.0, 1000);
  const std::vector<double> gammas{0.3, 0.7, 1.2};
  const CatalogProfile f({{0.0, 1.0}, {1.0, -2.0}, {2.5, 0.5}});
  for (double g1 : gammas)
    for (double g2 : gammas) {
      const CatalogProfile lhs = fracdu::frac_integral(fracdu::frac_integral(f, g2), g1);
      const CatalogProfile rhs = fracdu::frac_integral(f, g1 + g2);
      for (double t : {0.1, 0.5, 1.0}) CHECK(std::abs(lhs(t) - rhs(t)) <= 1e-12);
      const auto gap = [&](const TimeGrid& grid) {
        const TimeSeries s = TimeSeries::sample(f, grid);
        return sup_diff(fracdu::frac_integral(fracdu::frac_integral(s, g2), g1), fracdu::frac_integral(s, g1 + g2));
      };
      const double fine = gap(g);
      if (g1 + g2 >= 1.0) {
        CHECK_MESSAGE(fine <= 5e-4, g1 << " " << g2);
      } else {
        // J^g2 of the samples behaves like t^g2, so the first nodes limit the rate to h^(g1+g2).
        const double rate = std::log2(gap(TimeGrid::over(1.0, 500)) / fine);
        CHECK_MESSAGE(rate >= g1 + g2 - 0.1, g1 << " " << g2 << " rate " << rate);
        CHECK(fine <= 5e-3);
      }
    }
}

TEST_CASE("left inverse J^alpha D^alpha f converges as dt shrinks") {
  const CatalogProfile f({{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}});
  const CatalogProfile taylor({{0.0, 1.0}});  // f(0) for alpha < 1
  double prev = 0.0;
  for (int n : {100, 200, 400}) {
    const TimeGrid g = TimeGrid::over(1.0, n);
    const TimeSeries s = TimeSeries::sample(f, g);
    const TimeSeries back = fracdu::frac_integral(fracdu::caputo(s, order(0.6)), 0.6);
    const double err = sup_diff(back, TimeSeries::sample(f + taylor * -1.0, g));
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.0);
    prev = err;
  }
}

TEST_CASE("operators are linear") {
  const TimeGrid g = TimeGrid::over(1.0, 300);
  const TimeSeries a = sample([](double t) { return std::cos(3 * t); }, g);
  const TimeSeries b = sample([](double t) { return t * t * t; }, g);
  std::vector<cplx> mix(g.size());
  const cplx c1(2.0, -1.0);
  const cplx c2(-0.5, 0.25);
  for (std::size_t j = 0; j < mix.size(); ++j) mix[j] = c1 * a.values[j] + c2 * b.values[j];
  const TimeSeries m(g, mix);
  const auto check = [&](auto op) {
    const TimeSeries lhs = op(m);
    const TimeSeries ra = op(a);
    const TimeSeries rb = op(b);
    for (std::size_t j = 1; j < mix.size(); ++j) {
      const cplx rhs = c1 * ra.values[j] + c2 * rb.values[j];
      CHECK(std::abs(lhs.values[j] - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  };
  check([](const TimeSeries& s) { return fracdu::frac_integral(s, 0.45); });
  check([](const TimeSeries& s) { return fracdu::caputo(s, order(0.45)); });
  check([](const TimeSeries& s) { return fracdu::caputo(s, order(1.45)); });
  check([](const TimeSeries& s) { return fracdu::riemann_liouville(s, order(0.45)); });
}

TEST_CASE("sampled results converge to catalog results with order >= 1") {
  const CatalogProfile f({{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.25}});
  const auto errors = [&](auto sampled, const CatalogProfile& exact) {
    std::vector<double> e;
    for (int n : {100, 200, 400}) {
      const TimeGrid g = TimeGrid::over(1.0, n);
      e.push_back(sup_diff(sampled(TimeSeries::sample(f, g)), exact, 1));
    }
    return e;
  };
  for (double a : {0.3, 0.8, 1.4}) {
    const auto e = errors([&](const TimeSeries& s) { return fracdu::caputo(s, order(a)); },
                          fracdu::caputo(f, order(a)));
    CHECK(std::log2(e[0] / e[1]) >= 1.0);
    CHECK(std::log2(e[1] / e[2]) >= 1.0);
    const auto ej = errors([&](const TimeSeries& s) { return fracdu::frac_integral(s, a); },
                           fracdu::frac_integral(f, a));
    CHECK(std::log2(ej[0] / ej[1]) >= 1.0);
  }
}

TEST_CASE("data_derivative is the identity at gamma = 0") {
  const CatalogProfile f({{0.0, 1.0}, {1.0, 2.0}});
  CHECK(fracdu::data_derivative(f, 0.0, fracdu::DerivativeKind::riemann_liouville)(0.5) == f(0.5));
  const auto rl = fracdu::data_derivative(f, 0.5, fracdu::DerivativeKind::riemann_liouville);
  CHECK(std::abs(rl(1.0) - (1.0 / std::tgamma(0.5) + 2.0 / std::tgamma(1.5))) < 1e-14);
}

TEST_CASE("one-sided derivatives are second-order accurate") {
  for (int k = 0; k <= 2; ++k) {
    double prev = 0.0;
    for (double dt : {1e-2, 5e-3}) {
      std::vector<cplx> v(10);
      for (int j = 0; j < 10; ++j) v[j] = std::exp(2.0 * j * dt);
      const double err = std::abs(fracdu::one_sided_derivative(v, dt, k) - std::pow(2.0, k));
      if (k == 0) CHECK(err == 0.0);
      if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.8);
      prev = err;
    }
  }
  CHECK_THROWS_AS(fracdu::one_sided_derivative(std::vector<cplx>(2), 0.1, 1), fracdu::Error);
  CHECK_THROWS_AS(fracdu::caputo(TimeSeries(TimeGrid(0.1, 1), std::vector<cplx>(2)), order(1.5)), fracdu::Error);
}
