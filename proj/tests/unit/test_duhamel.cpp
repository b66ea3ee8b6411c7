#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracdu/duhamel.hpp"
#include "fracdu/error.hpp"
#include "fracdu/mittag_leffler.hpp"
#include "oracles.hpp"

using namespace fracdu;

namespace {

const SpaceGrid kLine = SpaceGrid::line(16);

Field cos_field(int k = 1, const SpaceGrid& g = kLine) {
  return Field::sample(g, [k](double x, double) { return std::cos(k * x); }, true);
}

Field constant_field(cplx c, const SpaceGrid& g = kLine) {
  return Field(g, std::vector<cplx>(g.size(), c), c.imag() == 0.0);
}

CauchyProblem problem(double alpha, Symbol symbol, std::vector<Field> initial, std::optional<SourceTerm> source,
                      double t_end, int steps) {
  return {FractionalOrder::from_alpha(alpha), std::move(symbol), std::move(initial), std::move(source),
          TimeGrid::over(t_end, steps)};
}

std::vector<Field> zeros(int m, const SpaceGrid& g = kLine) { return std::vector<Field>(m, Field::zeros(g)); }

SourceTerm catalog(CatalogProfile p, Field shape) { return SourceTerm::catalog({{std::move(p), std::move(shape)}}); }

double sup_field(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

double sup_solution(const Solution& a, const Solution& b) {
  double d = 0.0;
  for (std::size_t n = 0; n < a.modes.size(); ++n) d = std::max(d, sup_field(a.field(static_cast<int>(n)), b.field(static_cast<int>(n))));
  return d;
}

}  // namespace

TEST_CASE("validate checks initial counts and grids") {
  CauchyProblem p = problem(1.5, Symbol::laplacian(), {cos_field()}, std::nullopt, 1.0, 10);
  try {
    p.validate();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(e.message().find("expected 2 initial fields (m=2)") != std::string::npos);
  }
  p.initial.push_back(cos_field(1, SpaceGrid::line(8)));
  CHECK_THROWS_AS(p.validate(), Error);
  CauchyProblem q = problem(0.5, Symbol::laplacian(), {cos_field()}, catalog(CatalogProfile::constant(1.0), cos_field(1, SpaceGrid::line(8))), 1.0, 10);
  CHECK_THROWS_AS(q.validate(), Error);
}

TEST_CASE("homogeneous_solution examples") {
  const CauchyProblem decay = problem(1.0, Symbol::constant(-1.0), {constant_field(1.0)}, std::nullopt, 1.0, 4);
  for (const cplx& v : homogeneous_solution(decay, 1.0).values) CHECK(std::abs(v - std::exp(-1.0)) < 1e-14);

  const CauchyProblem any = problem(1.3, Symbol::laplacian(), {cos_field(2), cos_field(1)}, std::nullopt, 1.0, 4);
  CHECK(sup_field(homogeneous_solution(any, 0.0), cos_field(2)) <= 1e-15);

  const CauchyProblem wave = problem(2.0, Symbol::laplacian(), {cos_field(3), Field::zeros(kLine)}, std::nullopt, 1.0, 4);
  for (double t : {0.1, 0.77, 2.0}) {
    const Field u = homogeneous_solution(wave, t);
    const Field want = Field::sample(kLine, [t](double x, double) { return std::cos(3 * t) * std::cos(3 * x); }, true);
    CHECK(sup_field(u, want) <= 1e-12);
  }
  const CauchyProblem sine = problem(2.0, Symbol::laplacian(), {Field::zeros(kLine), cos_field(3)}, std::nullopt, 1.0, 4);
  const Field u = homogeneous_solution(sine, 0.9);
  const Field want = Field::sample(kLine, [](double x, double) { return std::sin(3 * 0.9) / 3.0 * std::cos(3 * x); }, true);
  CHECK(sup_field(u, want) <= 1e-12);
}

TEST_CASE("stage_solution examples") {
  const double alpha = 0.6;
  const CatalogProfile f({{1.0, 1.0}, {2.0, 1.0}});
  const CauchyProblem p = problem(alpha, Symbol::laplacian(), zeros(1), catalog(f, cos_field()), 1.0, 10);
  const double tau = 0.4;
  const cplx h = caputo(f, FractionalOrder::from_alpha(1.0 - alpha))(tau);
  const Field v = stage_solution(p, tau, tau, Forcing::caputo);
  CHECK(sup_field(v, Field::sample(kLine, [&](double x, double) { return h * std::cos(x); }, true)) <= 1e-13);

  const CauchyProblem p2 = problem(1.5, Symbol::laplacian(), zeros(2), catalog(CatalogProfile::monomial(2.0), cos_field()), 1.0, 10);
  for (const cplx& x : stage_solution(p2, 0.3, 0.3, Forcing::caputo).values) CHECK(x == cplx(0.0));

  const CauchyProblem classic = problem(1.0, Symbol::constant(-2.0), zeros(1), catalog(CatalogProfile::monomial(1.0), constant_field(1.0)), 1.0, 10);
  const Field c = stage_solution(classic, 0.25, 0.75, Forcing::caputo);
  for (const cplx& x : c.values) CHECK(std::abs(x - std::exp(-2.0 * 0.5) * 0.25) < 1e-14);
}

TEST_CASE("Caputo forcing is rejected for sources that do not vanish at t = 0") {
  const CauchyProblem p = problem(0.5, Symbol::laplacian(), zeros(1), catalog(CatalogProfile::constant(1.0), cos_field()), 1.0, 10);
  CHECK_FALSE(p.source->vanishing_initial(1));
  CHECK(select_forcing(p) == Forcing::riemann_liouville);
  try {
    duhamel_solution(p, Forcing::caputo);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis_violation);
    CHECK(e.message().find("Riemann-Liouville") != std::string::npos);
  }
  CHECK_THROWS_AS(stage_solution(p, 0.1, 0.2, Forcing::caputo), Error);
  CHECK_THROWS_AS(stage_solution(p, 0.3, 0.2, Forcing::riemann_liouville), Error);
}

TEST_CASE("duhamel_solution examples") {
  const CauchyProblem rl = problem(0.5, Symbol::constant(0.0), zeros(1), catalog(CatalogProfile::constant(1.0), constant_field(1.0)), 1.0, 200);
  const Solution s = duhamel_solution(rl, Forcing::riemann_liouville);
  CHECK(s.meta.method == MethodTag::duhamel_rl);
  for (const cplx& v : s.field(200).values) CHECK(std::abs(v - 1.1283791670955126) < 1e-8);

  const CauchyProblem ode = problem(1.0, Symbol::constant(-1.0), zeros(1), catalog(CatalogProfile::constant(1.0), constant_field(1.0)), 1.0, 1000);
  const Solution o = duhamel_solution(ode, Forcing::riemann_liouville);
  for (const cplx& v : o.field(1000).values) CHECK(std::abs(v - (1.0 - std::exp(-1.0))) < 1e-6);

  const CauchyProblem none = problem(0.7, Symbol::laplacian(), zeros(1), catalog(CatalogProfile::constant(0.0), cos_field()), 1.0, 50);
  const Solution z = duhamel_solution(none, Forcing::caputo);
  for (const auto& row : z.modes)
    for (const cplx& v : row) CHECK(v == cplx(0.0));
}

TEST_CASE("Duhamel part starts from homogeneous Cauchy data") {
  const CauchyProblem p = problem(1.5, Symbol::laplacian(), zeros(2), catalog(CatalogProfile::constant(1.0), cos_field()), 1.0, 1000);
  const Solution s = duhamel_solution(p, Forcing::riemann_liouville);
  for (const cplx& v : s.modes[0]) CHECK(v == cplx(0.0));
  const double dt = p.horizon.dt();
  for (std::size_t k = 0; k < kLine.size(); ++k) {
    const auto h = s.history(k);
    for (int d = 0; d < 2; ++d) CHECK(std::abs(one_sided_derivative(h, dt, d)) / kLine.size() <= 10 * dt);
  }
}

TEST_CASE("neumann_series_solution examples") {
  const CatalogProfile f = CatalogProfile::monomial(2.0);
  const CauchyProblem zero = problem(0.5, Symbol::constant(0.0), zeros(1), catalog(f, constant_field(1.0)), 1.0, 20);
  const Solution z = neumann_series_solution(zero, 5);
  const CatalogProfile j = frac_integral(f, 0.5);
  for (int n = 0; n <= 20; ++n) CHECK(std::abs(z.field(n).values[3] - j(zero.horizon.node(n))) < 1e-14);

  const CauchyProblem ode = problem(1.0, Symbol::constant(-1.0), zeros(1), catalog(CatalogProfile::constant(1.0), constant_field(1.0)), 1.0, 10);
  const Solution o = neumann_series_solution(ode, 20);
  CHECK(o.meta.method == MethodTag::neumann);
  CHECK(o.meta.series_terms == 20);
  CHECK(std::abs(o.field(10).values[0] - (1.0 - std::exp(-1.0))) < 1e-9);

  const CauchyProblem cross = problem(0.5, Symbol::constant(-1.0), zeros(1), catalog(f, constant_field(1.0)), 1.0, 400);
  const Solution a = neumann_series_solution(cross, 40);
  const Solution b = voc_oracle(cross);
  CHECK(sup_solution(a, b) <= std::max(1e-6, a.meta.truncation_estimate + b.meta.truncation_estimate));
}

TEST_CASE("neumann series warns when it cannot converge") {
  const CauchyProblem p = problem(0.5, Symbol::constant(-400.0), zeros(1), catalog(CatalogProfile::monomial(1.0), constant_field(1.0)), 1.0, 20);
  const Solution s = neumann_series_solution(p, 10);
  CHECK_FALSE(s.meta.warnings.empty());
  CHECK(s.meta.truncation_estimate > 1e-8);
}

TEST_CASE("voc_oracle examples") {
  const CauchyProblem one = problem(0.5, Symbol::constant(0.0), zeros(1), catalog(CatalogProfile::constant(1.0), constant_field(1.0)), 1.0, 100);
  const Solution s = voc_oracle(one);
  CHECK(s.meta.method == MethodTag::voc_oracle);
  CHECK(std::abs(s.field(100).values[0] - 1.1283791670955126) < 1e-12);

  const double lambda = -3.0;
  const CauchyProblem exp_kernel = problem(1.0, Symbol::constant(lambda), zeros(1), catalog(CatalogProfile::monomial(2.0), constant_field(1.0)), 1.0, 2000);
  const Solution e = voc_oracle(exp_kernel);
  const cplx want = oracle::convolution([&](double r) { return cplx(std::exp(lambda * r)); },
                                        [](double s) { return cplx(s * s); }, 1.0);
  CHECK(std::abs(e.field(2000).values[0] - want) < 1e-7);

  const CauchyProblem none = problem(0.3, Symbol::laplacian(), zeros(1), catalog(CatalogProfile::constant(0.0), cos_field()), 1.0, 20);
  for (const auto& row : voc_oracle(none).modes)
    for (const cplx& v : row) CHECK(v == cplx(0.0));
}

TEST_CASE("voc_oracle matches a brute-force convolution with the Mittag-Leffler kernel") {
  const double alpha = 0.7;
  const double lambda = -4.0;
  const CauchyProblem p = problem(alpha, Symbol::constant(lambda), zeros(1), catalog(CatalogProfile({{0.0, 1.0}, {1.5, -2.0}}), constant_field(1.0)), 1.0, 1000);
  const Solution s = voc_oracle(p);
  // Substituting r = (t - s)^alpha removes the kernel singularity.
  const double t = 1.0;
  const cplx want = oracle::integrate(
      [&](double r) {
        const double u = std::pow(r, 1.0 / alpha);
        return ml(alpha, alpha, lambda * r) * cplx(1.0 - 2.0 * std::pow(t - u, 1.5)) / alpha;
      },
      0.0, std::pow(t, alpha), 400);
  CHECK(std::abs(s.field(1000).values[0] - want) < 1e-6);
}

TEST_CASE("full_solve composes the homogeneous and inhomogeneous parts") {
  const CauchyProblem free = problem(0.8, Symbol::laplacian(), {cos_field(2)}, std::nullopt, 1.0, 20);
  const Solution h = full_solve(free, SolveMethod::duhamel);
  CHECK(h.meta.method == MethodTag::homogeneous);
  for (int n = 0; n <= 20; ++n) CHECK(sup_field(h.field(n), homogeneous_solution(free, free.horizon.node(n))) <= 1e-14);

  const CauchyProblem forced = problem(0.8, Symbol::laplacian(), {cos_field(2)}, catalog(CatalogProfile::monomial(1.0), cos_field()), 1.0, 100);
  const Solution u = full_solve(forced, SolveMethod::duhamel);
  CHECK(u.meta.method == MethodTag::duhamel_caputo);
  CHECK(sup_field(u.field(0), cos_field(2)) <= 1e-10);
  const Solution v = duhamel_solution(forced, Forcing::caputo);
  for (int n : {0, 50, 100}) {
    Field sum = homogeneous_solution(forced, forced.horizon.node(n));
    const Field part = v.field(n);
    for (std::size_t x = 0; x < sum.values.size(); ++x) sum.values[x] += part.values[x];
    CHECK(sup_field(u.field(n), sum) <= 1e-13);
  }
  CHECK(full_solve(forced, SolveMethod::neumann).meta.method == MethodTag::neumann);
  CHECK(full_solve(forced, SolveMethod::voc).meta.method == MethodTag::voc_oracle);
}

TEST_CASE("unstable symbols solve with a warning") {
  const CauchyProblem p = problem(0.5, Symbol::constant(1.0), {cos_field()}, std::nullopt, 1.0, 10);
  const Solution s = full_solve(p, SolveMethod::duhamel);
  CHECK(s.meta.max_real_symbol == 1.0);
  CHECK_FALSE(s.meta.warnings.empty());
}

TEST_CASE("caputo and RL forcing agree for vanishing sources") {
  const CauchyProblem p = problem(1.4, Symbol::laplacian(), zeros(2), catalog(CatalogProfile({{2.0, 1.0}, {3.5, 1.0}}), cos_field()), 1.0, 400);
  CHECK(select_forcing(p) == Forcing::caputo);
  CHECK(sup_solution(duhamel_solution(p, Forcing::caputo), duhamel_solution(p, Forcing::riemann_liouville)) <= 1e-6);
}

TEST_CASE("full_solve is linear in initial data and source jointly") {
  const SpaceGrid g = SpaceGrid::line(8);
  const auto make = [&](cplx a, cplx b) {
    std::vector<Field> init{Field::sample(g, [a](double x, double) { return a * std::cos(x); }, a.imag() == 0.0),
                            Field::sample(g, [b](double x, double) { return b * std::sin(2 * x); }, b.imag() == 0.0)};
    SourceTerm src = SourceTerm::catalog({{CatalogProfile({{0.0, a}, {2.0, b}}), cos_field(3, g)}});
    return problem(1.6, Symbol::laplacian(), init, src, 1.0, 80);
  };
  const Solution u1 = full_solve(make(1.0, 0.0), SolveMethod::duhamel);
  const Solution u2 = full_solve(make(0.0, 1.0), SolveMethod::duhamel);
  const Solution both = full_solve(make(2.0, -3.0), SolveMethod::duhamel);
  for (std::size_t n = 0; n < both.modes.size(); ++n)
    for (std::size_t k = 0; k < g.size(); ++k)
      CHECK(std::abs(both.modes[n][k] - (2.0 * u1.modes[n][k] - 3.0 * u2.modes[n][k])) <= 1e-12 * (1.0 + std::abs(both.modes[n][k])));
}

TEST_CASE("single-mode problems decouple exactly") {
  // Four points and dyadic samples keep the transforms exact, so both solves see identical coefficients.
  const SpaceGrid g = SpaceGrid::line(4);
  const Field mix(g, {2.25, 0.75, 0.25, 0.75}, true);
  const Field only(g, {1.0, 0.0, -1.0, 0.0}, true);
  REQUIRE(fracdu::forward(mix).coeffs[1] == fracdu::forward(only).coeffs[1]);
  const auto make = [&](const Field& f) {
    return problem(0.7, Symbol::fractional_laplacian(1.3), {f}, SourceTerm::catalog({{CatalogProfile::monomial(1.0), f}}), 1.0, 60);
  };
  const Solution full = full_solve(make(mix), SolveMethod::duhamel);
  const Solution single = full_solve(make(only), SolveMethod::duhamel);
  for (std::size_t n = 0; n < full.modes.size(); ++n) {
    CHECK(full.modes[n][1] == single.modes[n][1]);
    CHECK(full.modes[n][3] == single.modes[n][3]);
  }
}

TEST_CASE("classic_duhamel_check for integer orders") {
  const CauchyProblem heat = problem(1.0, Symbol::laplacian(), {cos_field()}, catalog(CatalogProfile({{1.0, 1.0}, {2.0, 1.0}}), cos_field(2)), 1.0, 500);
  const ClassicCheckReport h = classic_duhamel_check(heat);
  CHECK(h.homogeneous_difference <= 1e-12);
  CHECK(h.duhamel_difference <= 1e-5);

  const CauchyProblem wave = problem(2.0, Symbol::laplacian(), zeros(2), catalog(CatalogProfile::monomial(2.0), cos_field()), 1.0, 1000);
  CHECK(classic_duhamel_check(wave).max_difference <= 1e-6);

  const CauchyProblem free = problem(2.0, Symbol::laplacian(), {cos_field(2), cos_field(1)}, std::nullopt, 1.0, 50);
  CHECK(classic_duhamel_check(free).max_difference <= 1e-12);

  const CauchyProblem frac = problem(0.5, Symbol::laplacian(), {cos_field()}, std::nullopt, 1.0, 50);
  CHECK_THROWS_AS(classic_duhamel_check(frac), Error);
}

TEST_CASE("residual_norm examples") {
  // u = t^2 cos x solves D^0.5 u = u_xx + f with f = (2/Gamma(2.5) t^1.5 + t^2) cos x.
  const CatalogProfile f({{1.5, 2.0 / std::tgamma(2.5)}, {2.0, 1.0}});
  const CauchyProblem p = problem(0.5, Symbol::laplacian(), zeros(1), catalog(f, cos_field()), 1.0, 1000);
  Solution exact(p.horizon, kLine);
  const SpectralField c = forward(cos_field());
  for (int n = 0; n <= 1000; ++n) {
    const double t = p.horizon.node(n);
    for (std::size_t k = 0; k < kLine.size(); ++k) exact.modes[n][k] = t * t * c.coeffs[k];
  }
  const ResidualReport r = residual_norm(exact, p);
  CHECK(r.max <= 5e-3 * r.source_max);
  CHECK(r.initial.size() == 1);
  CHECK(r.initial[0] <= 1e-15);

  const CauchyProblem heat = problem(1.0, Symbol::laplacian(), {cos_field()}, std::nullopt, 1.0, 1000);
  const ResidualReport hr = residual_norm(full_solve(heat, SolveMethod::duhamel), heat);
  CHECK(hr.max <= 1e-6);
  CHECK(hr.source_max == 0.0);

  const Solution zero(p.horizon, kLine);
  const ResidualReport zr = residual_norm(zero, p);
  CHECK(std::abs(zr.max - zr.source_max) <= 1e-14);
  CHECK(std::abs(zr.rms - zr.source_rms) <= 1e-14);
  CHECK(zr.time_max.size() == 999);

  const CauchyProblem tiny = problem(1.5, Symbol::laplacian(), zeros(2), std::nullopt, 1.0, 3);
  CHECK_THROWS_AS(residual_norm(Solution(tiny.horizon, kLine), tiny), Error);
}

TEST_CASE("sampled sources follow the catalog solution") {
  const TimeGrid grid = TimeGrid::over(1.0, 400);
  const CatalogProfile f({{0.0, 1.0}, {1.0, 1.0}});
  std::vector<Field> slices;
  for (int n = 0; n <= 400; ++n) {
    const double t = grid.node(n);
    slices.push_back(Field::sample(kLine, [&](double x, double) { return f(t) * std::cos(x); }, true));
  }
  CauchyProblem sampled = problem(0.6, Symbol::laplacian(), {cos_field()}, SourceTerm::sampled(grid, slices), 1.0, 400);
  CauchyProblem exact = problem(0.6, Symbol::laplacian(), {cos_field()}, catalog(f, cos_field()), 1.0, 400);
  CHECK_FALSE(sampled.source->vanishing_initial(1));
  const Solution a = full_solve(sampled, SolveMethod::duhamel);
  const Solution b = full_solve(exact, SolveMethod::duhamel);
  CHECK(a.meta.method == MethodTag::duhamel_rl);
  CHECK(sup_solution(a, b) <= 1e-4);
  CHECK(sup_solution(voc_oracle(sampled), voc_oracle(exact)) <= 1e-12);
}

TEST_CASE("method names") {
  CHECK(to_string(MethodTag::duhamel_caputo) == "duhamel_caputo");
  CHECK(to_string(MethodTag::duhamel_rl) == "duhamel_rl");
  CHECK(to_string(MethodTag::voc_oracle) == "voc_oracle");
  CHECK(to_string(SolveMethod::neumann) == "neumann");
  CHECK(to_string(Forcing::riemann_liouville) == "riemann_liouville");
}
