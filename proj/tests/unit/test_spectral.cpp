#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracdu/error.hpp"
#include "fracdu/mittag_leffler.hpp"
#include "fracdu/spectral.hpp"
#include "oracles.hpp"

using fracdu::cplx;
using fracdu::Field;
using fracdu::SpaceGrid;
using fracdu::SpectralField;
using fracdu::Symbol;

namespace {

Field random_field(const SpaceGrid& g, unsigned seed, bool real) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> v(g.size());
  for (cplx& c : v) c = real ? cplx(n(rng)) : cplx(n(rng), n(rng));
  return Field(g, v, real);
}

double sup(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Field mode(const SpaceGrid& g, int k) {
  return Field::sample(g, [k](double x, double) { return std::exp(cplx(0, k * x)); }, false);
}

}  // namespace

TEST_CASE("SpaceGrid validates and indexes") {
  CHECK_THROWS_AS(SpaceGrid::line(6 - 1), fracdu::Error);
  CHECK_THROWS_AS(SpaceGrid::line(2), fracdu::Error);
  CHECK_THROWS_AS(SpaceGrid(3, {8, 8}), fracdu::Error);
  const SpaceGrid g = SpaceGrid::square(8);
  CHECK(g.size() == 64);
  CHECK(g.flatten(g.unflatten(37)) == 37);
  CHECK(g.wavenumber(0, 5) == -3);
  CHECK(g.wavenumber(0, 4) == -4);
  const auto f = g.frequency(g.flatten({1, 7}));
  CHECK(f[0] == doctest::Approx(1.0));
  CHECK(f[1] == doctest::Approx(-1.0));
  CHECK(g.mirror(g.flatten({1, 7})) == g.flatten({7, 1}));
}

TEST_CASE("forward examples") {
  const SpaceGrid g = SpaceGrid::line(16);
  const SpectralField c = fracdu::forward(Field::sample(g, [](double x, double) { return std::cos(x); }, true));
  for (std::size_t k = 0; k < 16; ++k) {
    const double want = (k == 1 || k == 15) ? 8.0 : 0.0;
    CHECK(std::abs(c.coeffs[k] - want) <= 1e-12);
  }
  const SpaceGrid sq = SpaceGrid::square(8);
  const SpectralField one = fracdu::forward(Field(sq, std::vector<cplx>(sq.size(), 1.0), true));
  CHECK(std::abs(one.coeffs[0] - 64.0) <= 1e-12);
  for (std::size_t k = 1; k < sq.size(); ++k) CHECK(std::abs(one.coeffs[k]) <= 1e-12);
}

TEST_CASE("forward matches a naive DFT oracle") {
  const SpaceGrid g = SpaceGrid::line(24);
  const Field f = random_field(g, 7, false);
  CHECK(sup(fracdu::forward(f).coeffs, oracle::naive_dft(f.values)) <= 1e-12);
}

TEST_CASE("2-D forward matches row-column naive DFTs") {
  const SpaceGrid g(2, {8, 6});
  const Field f = random_field(g, 11, false);
  std::vector<cplx> want = f.values;
  for (int r = 0; r < 8; ++r) {
    std::vector<cplx> row(want.begin() + r * 6, want.begin() + (r + 1) * 6);
    row = oracle::naive_dft(row);
    std::copy(row.begin(), row.end(), want.begin() + r * 6);
  }
  for (int c = 0; c < 6; ++c) {
    std::vector<cplx> col(8);
    for (int r = 0; r < 8; ++r) col[r] = want[r * 6 + c];
    col = oracle::naive_dft(col);
    for (int r = 0; r < 8; ++r) want[r * 6 + c] = col[r];
  }
  CHECK(sup(fracdu::forward(f).coeffs, want) <= 1e-12);
}

TEST_CASE("inverse round trip, zeros and realness") {
  for (const SpaceGrid& g : {SpaceGrid::line(32), SpaceGrid::square(16)}) {
    const Field f = random_field(g, 3, true);
    const Field back = fracdu::inverse(fracdu::forward(f));
    CHECK(sup(back.values, f.values) <= 1e-12);
    for (const cplx& v : back.values) CHECK(v.imag() == 0.0);
    const Field z = fracdu::inverse(SpectralField::zeros(g));
    for (const cplx& v : z.values) CHECK(v == cplx(0.0));
  }
}

TEST_CASE("asymmetric coefficients flagged real raise a symmetry violation") {
  const SpaceGrid g = SpaceGrid::line(8);
  std::vector<cplx> c(8, 0.0);
  c[1] = 1.0;
  try {
    fracdu::inverse(SpectralField(g, c, true));
    FAIL("expected an error");
  } catch (const fracdu::Error& e) {
    CHECK(e.kind() == fracdu::ErrorKind::symmetry_violation);
  }
  CHECK_NOTHROW(fracdu::inverse(SpectralField(g, c, false)));
}

TEST_CASE("Parseval holds for random fields") {
  for (const SpaceGrid& g : {SpaceGrid::line(64), SpaceGrid::square(16)}) {
    const Field f = random_field(g, 5, false);
    const double e = fracdu::energy(f);
    CHECK(std::abs(e - fracdu::energy(fracdu::forward(f))) <= 1e-12 * e);
  }
}

TEST_CASE("apply_symbol examples") {
  const SpaceGrid g = SpaceGrid::line(16);
  const SpectralField m1 = fracdu::forward(mode(g, 1));
  const SpectralField lap = fracdu::apply_symbol(m1, Symbol::laplacian());
  CHECK(sup(lap.coeffs, fracdu::forward(mode(g, 1)).coeffs) > 1.0);
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(lap.coeffs[k] + m1.coeffs[k]) <= 1e-12);
  const cplx lambda(0.5, -2.0);
  const SpectralField scaled = fracdu::apply_symbol(m1, Symbol::constant(lambda));
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(scaled.coeffs[k] - lambda * m1.coeffs[k]) <= 1e-12);
  const SpectralField m3 = fracdu::forward(mode(g, 3));
  const SpectralField frac = fracdu::apply_symbol(m3, Symbol::fractional_laplacian(1.0));
  CHECK(std::abs(frac.coeffs[3] + 3.0 * m3.coeffs[3]) <= 1e-12);
  const SpectralField id = fracdu::apply_symbol(m3, Symbol::constant(1.0));
  CHECK(sup(id.coeffs, m3.coeffs) == 0.0);
}

TEST_CASE("registry symbols evaluate as documented") {
  const std::array<double, 2> xi{2.0, 0.0};
  CHECK(Symbol::laplacian()(xi) == cplx(-4.0));
  CHECK(std::abs(Symbol::fractional_laplacian(1.5)(xi) + std::pow(2.0, 1.5)) < 1e-15);
  CHECK(Symbol::advection(0.5)(xi) == cplx(0.0, 1.0));
  CHECK(Symbol::polynomial({1.0, 0.0, -1.0})(xi) == cplx(-3.0));
  CHECK_THROWS_AS(fracdu::evaluate_symbol(Symbol::polynomial({1.0}), SpaceGrid::square(4)), fracdu::Error);
}

TEST_CASE("symbol tables report stability and hermitian structure") {
  const SpaceGrid g = SpaceGrid::line(16);
  const auto lap = fracdu::evaluate_symbol(Symbol::laplacian(), g);
  CHECK(lap.stable());
  CHECK(lap.hermitian);
  CHECK(lap.max_real_part == 0.0);
  const auto grow = fracdu::evaluate_symbol(Symbol::constant(1.0), g);
  CHECK_FALSE(grow.stable());
  const fracdu::SymbolTable adv = fracdu::evaluate_symbol(Symbol::advection(1.0), g);
  CHECK(adv.hermitian);
  CHECK(adv.values[8] == cplx(0.0));
  CHECK(adv.values[1] == cplx(0.0, 1.0));
  const auto skew = fracdu::evaluate_symbol(
      Symbol::expression("xi", [](const std::array<double, 2>& x) { return cplx(x[0]); }), g);
  CHECK_FALSE(skew.hermitian);
}

TEST_CASE("singular symbols follow the zero-mode rule") {
  const SpaceGrid g = SpaceGrid::line(8);
  const auto inv = [](const std::array<double, 2>& x) { return cplx(-1.0 / std::abs(x[0])); };
  try {
    fracdu::evaluate_symbol(Symbol::expression("-1/abs(xi)", inv), g);
    FAIL("expected an error");
  } catch (const fracdu::Error& e) {
    CHECK(e.kind() == fracdu::ErrorKind::symbol_evaluation);
  }
  Symbol s = Symbol::expression("-1/abs(xi)", inv);
  s.with_zero_mode_rule(fracdu::ZeroModeRule::zero);
  const auto table = fracdu::evaluate_symbol(s, g);
  CHECK(table.zeroed[0]);
  const SpectralField one = fracdu::forward(Field(g, std::vector<cplx>(8, 1.0), true));
  CHECK(fracdu::apply_symbol(one, s).coeffs[0] == cplx(0.0));
}

TEST_CASE("operator functions: heat semigroup, identity and composition") {
  const SpaceGrid g = SpaceGrid::line(16);
  const Field f = random_field(g, 9, true);
  const SpectralField fh = fracdu::forward(f);
  const double t = 0.3;
  const SpectralField heat =
      fracdu::apply_operator_function(fh, Symbol::laplacian(), [t](cplx a) { return fracdu::ml(1, 1, t * a); });
  for (std::size_t k = 0; k < 16; ++k) {
    const double xi = g.frequency(k)[0];
    CHECK(std::abs(heat.coeffs[k] - std::exp(-xi * xi * t) * fh.coeffs[k]) <= 1e-12 * std::abs(fh.coeffs[k]) + 1e-14);
  }
  CHECK(sup(fracdu::apply_operator_function(fh, Symbol::laplacian(), [](cplx) { return cplx(1.0); }).coeffs,
            fh.coeffs) == 0.0);
  const SpectralField at0 =
      fracdu::apply_operator_function(fh, Symbol::laplacian(), [](cplx a) { return fracdu::ml(0.6, 1, 0.0 * a); });
  CHECK(sup(at0.coeffs, fh.coeffs) == 0.0);

  const auto g1 = [](cplx a) { return fracdu::ml(0.7, 1, 0.2 * a); };
  const auto g2 = [](cplx a) { return std::exp(a * 0.1) + 1.0; };
  const SpectralField both = fracdu::apply_operator_function(fh, Symbol::laplacian(), [&](cplx a) { return g1(a) * g2(a); });
  const SpectralField chain = fracdu::apply_operator_function(
      fracdu::apply_operator_function(fh, Symbol::laplacian(), g1), Symbol::laplacian(), g2);
  for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(both.coeffs[k] - chain.coeffs[k]) <= 1e-13 * (1 + std::abs(both.coeffs[k])));
}

TEST_CASE("hermitian symbols keep real fields real") {
  const SpaceGrid g = SpaceGrid::square(8);
  const Field f = random_field(g, 21, true);
  for (const Symbol& s : {Symbol::laplacian(), Symbol::advection(0.7), Symbol::fractional_laplacian(0.8)}) {
    SpectralField applied = fracdu::apply_symbol(fracdu::forward(f), s);
    CHECK(applied.real);
    applied.real = false;
    const Field out = fracdu::inverse(applied);
    for (const cplx& v : out.values) CHECK(std::abs(v.imag()) <= 1e-10);
  }
}

TEST_CASE("operator function errors name the frequency") {
  const SpaceGrid g = SpaceGrid::line(8);
  const SpectralField fh = fracdu::forward(random_field(g, 1, true));
  try {
    fracdu::apply_operator_function(fh, Symbol::laplacian(), [](cplx a) -> cplx {
      if (a.real() < -3.0) throw fracdu::Error(fracdu::ErrorKind::domain, "test", "boom");
      return 1.0;
    });
    FAIL("expected an error");
  } catch (const fracdu::Error& e) {
    CHECK(e.message().find("xi") != std::string::npos);
  }
}
