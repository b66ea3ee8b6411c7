#include "fracdu/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "fracdu/error.hpp"

namespace fracdu {

namespace {

const char* const kModule = "spectral_operator";

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-12;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::string format_xi(const SpaceGrid& grid, std::size_t flat) {
  const auto xi = grid.frequency(flat);
  std::ostringstream os;
  os << "xi=" << xi[0];
  if (grid.dim() == 2) os << "," << xi[1];
  return os.str();
}

// FFTW plans are created once per (shape, direction) and executed on fresh
// arrays through the new-array interface. Planning is not thread-safe in
// FFTW; execution is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const SpaceGrid& grid, int sign) {
    const auto key = std::make_tuple(grid.dim(), grid.points(0), grid.points(1), sign);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<cplx> in(grid.size()), out(grid.size());
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = grid.dim() == 1
                         ? fftw_plan_dft_1d(grid.points(0), pin, pout, sign, flags)
                         : fftw_plan_dft_2d(grid.points(0), grid.points(1), pin, pout, sign, flags);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

std::vector<cplx> transform(const SpaceGrid& grid, const std::vector<cplx>& in, int sign) {
  std::vector<cplx> out(in.size());
  fftw_plan plan = PlanCache::instance().get(grid, sign);
  // fftw_execute_dft never writes to the input for out-of-place plans.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

// --- SpaceGrid -----------------------------------------------------------------

SpaceGrid::SpaceGrid(int dim, std::array<int, 2> points, std::array<double, 2> length)
    : dim_(dim), points_(points), length_(length) {
  if (dim != 1 && dim != 2) {
    throw Error(ErrorKind::domain, kModule, "grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (dim == 1) points_[1] = 1;
  for (int a = 0; a < dim; ++a) {
    if (points_[a] < 4 || points_[a] % 2 != 0) {
      throw Error(ErrorKind::domain, kModule,
                  "points per axis must be even and >= 4, got " + std::to_string(points_[a]));
    }
    if (!(length_[a] > 0.0) || !std::isfinite(length_[a])) {
      throw Error(ErrorKind::domain, kModule, "axis length must be positive");
    }
  }
}

std::size_t SpaceGrid::size() const noexcept {
  return static_cast<std::size_t>(points_[0]) * static_cast<std::size_t>(points_[1]);
}

std::array<int, 2> SpaceGrid::unflatten(std::size_t flat) const noexcept {
  return {static_cast<int>(flat / points_[1]), static_cast<int>(flat % points_[1])};
}

std::size_t SpaceGrid::flatten(std::array<int, 2> idx) const noexcept {
  return static_cast<std::size_t>(idx[0]) * points_[1] + idx[1];
}

std::array<double, 2> SpaceGrid::node(std::size_t flat) const noexcept {
  const auto idx = unflatten(flat);
  std::array<double, 2> x{idx[0] * length_[0] / points_[0], 0.0};
  if (dim_ == 2) x[1] = idx[1] * length_[1] / points_[1];
  return x;
}

int SpaceGrid::wavenumber(int axis, int j) const noexcept {
  const int n = points_[axis];
  return j < n / 2 ? j : j - n;
}

std::array<double, 2> SpaceGrid::frequency(std::size_t flat) const noexcept {
  using std::numbers::pi;
  const auto idx = unflatten(flat);
  std::array<double, 2> xi{2.0 * pi * wavenumber(0, idx[0]) / length_[0], 0.0};
  if (dim_ == 2) xi[1] = 2.0 * pi * wavenumber(1, idx[1]) / length_[1];
  return xi;
}

std::size_t SpaceGrid::mirror(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  for (int a = 0; a < 2; ++a) idx[a] = (points_[a] - idx[a]) % points_[a];
  return flatten(idx);
}

// --- fields --------------------------------------------------------------------

Field::Field(SpaceGrid g, std::vector<cplx> v, bool is_real) : grid(g), values(std::move(v)), real(is_real) {
  if (values.size() != grid.size()) {
    throw Error(ErrorKind::grid_mismatch, kModule,
                "field has " + std::to_string(values.size()) + " values for " + std::to_string(grid.size()) +
                    " nodes");
  }
}

Field Field::sample(const SpaceGrid& g, const std::function<cplx(double, double)>& f, bool is_real) {
  std::vector<cplx> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto x = g.node(j);
    v[j] = f(x[0], x[1]);
    if (is_real) v[j].imag(0.0);
  }
  return Field(g, std::move(v), is_real);
}

SpectralField::SpectralField(SpaceGrid g, std::vector<cplx> c, bool is_real)
    : grid(g), coeffs(std::move(c)), real(is_real) {
  if (coeffs.size() != grid.size()) {
    throw Error(ErrorKind::grid_mismatch, kModule, "coefficient count does not match the grid");
  }
}

SpectralField forward(const Field& field) {
  return SpectralField(field.grid, transform(field.grid, field.values, FFTW_FORWARD), field.real);
}

Field inverse(const SpectralField& sf) {
  std::vector<cplx> c = sf.coeffs;
  if (sf.real) {
    double scale = 0.0;
    for (const cplx& v : c) scale = std::max(scale, std::abs(v));
    double asym = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      asym = std::max(asym, std::abs(sf.coeffs[k] - std::conj(sf.coeffs[sf.grid.mirror(k)])));
    }
    if (scale > 0.0 && asym > kSymmetryTolerance * scale) {
      std::ostringstream os;
      os << "coefficients flagged real are not conjugate-symmetric (relative asymmetry " << asym / scale << ")";
      throw Error(ErrorKind::symmetry_violation, kModule, os.str());
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
      c[k] = 0.5 * (sf.coeffs[k] + std::conj(sf.coeffs[sf.grid.mirror(k)]));
    }
  }
  std::vector<cplx> v = transform(sf.grid, c, FFTW_BACKWARD);
  const double inv_n = 1.0 / static_cast<double>(sf.grid.size());
  for (cplx& x : v) {
    x *= inv_n;
    if (sf.real) x.imag(0.0);
  }
  return Field(sf.grid, std::move(v), sf.real);
}

double energy(const Field& field) {
  double e = 0.0;
  for (const cplx& v : field.values) e += std::norm(v);
  return e;
}

double energy(const SpectralField& sf) {
  double e = 0.0;
  for (const cplx& v : sf.coeffs) e += std::norm(v);
  return e / static_cast<double>(sf.grid.size());
}

// --- symbols -------------------------------------------------------------------

Symbol Symbol::laplacian() {
  return Symbol(SymbolKind::laplacian, "laplacian",
                [](const std::array<double, 2>& xi) { return cplx(-(xi[0] * xi[0] + xi[1] * xi[1])); });
}

Symbol Symbol::fractional_laplacian(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::domain, kModule, "fractional Laplacian exponent must be positive");
  }
  std::ostringstream os;
  os << "fractional_laplacian(" << s << ")";
  return Symbol(SymbolKind::fractional_laplacian, os.str(), [s](const std::array<double, 2>& xi) {
    return cplx(-std::pow(std::hypot(xi[0], xi[1]), s));
  });
}

Symbol Symbol::advection(double c) {
  std::ostringstream os;
  os << "advection(" << c << ")";
  return Symbol(SymbolKind::advection, os.str(),
                [c](const std::array<double, 2>& xi) { return cplx(0.0, c * xi[0]); });
}

Symbol Symbol::constant(cplx lambda) {
  std::ostringstream os;
  os << "constant(" << lambda.real();
  if (lambda.imag() != 0.0) os << (lambda.imag() < 0 ? "" : "+") << lambda.imag() << "i";
  os << ")";
  return Symbol(SymbolKind::constant, os.str(), [lambda](const std::array<double, 2>&) { return lambda; });
}

Symbol Symbol::polynomial(std::vector<cplx> coeffs) {
  return Symbol(SymbolKind::polynomial, "polynomial", [coeffs = std::move(coeffs)](const std::array<double, 2>& xi) {
    cplx acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * xi[0] + *it;
    return acc;
  });
}

Symbol Symbol::expression(std::string text, Evaluator evaluator) {
  return Symbol(SymbolKind::expression, std::move(text), std::move(evaluator));
}

cplx Symbol::operator()(const std::array<double, 2>& xi) const {
  const cplx v = evaluator_(xi);
  if (!finite(v)) {
    std::ostringstream os;
    os << "symbol " << description_ << " is not finite at xi=(" << xi[0] << "," << xi[1] << ")";
    throw Error(ErrorKind::symbol_evaluation, kModule, os.str());
  }
  return v;
}

SymbolTable evaluate_symbol(const Symbol& a, const SpaceGrid& grid) {
  if (a.kind() == SymbolKind::polynomial && grid.dim() != 1) {
    throw Error(ErrorKind::domain, kModule, "polynomial symbols are defined on 1-D grids only");
  }
  const std::size_t n = grid.size();
  SymbolTable table;
  table.values.assign(n, 0.0);
  table.zeroed.assign(n, false);
  table.max_real_part = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const auto xi = grid.frequency(k);
    try {
      table.values[k] = a(xi);
    } catch (const Error& e) {
      if (k == 0 && a.zero_mode_rule() == ZeroModeRule::zero) {
        table.zeroed[k] = true;
        continue;
      }
      throw Error(ErrorKind::symbol_evaluation, kModule, e.message() + " (" + format_xi(grid, k) + ")");
    }
    table.max_real_part = std::max(table.max_real_part, table.values[k].real());
  }
  for (std::size_t k = 0; k < n && table.hermitian; ++k) {
    if (table.zeroed[k]) continue;
    auto xi = grid.frequency(k);
    xi[0] = -xi[0];
    xi[1] = -xi[1];
    cplx opposite;
    try {
      opposite = a(xi);
    } catch (const Error&) {
      table.hermitian = false;
      break;
    }
    const cplx here = table.values[k];
    if (std::abs(opposite - std::conj(here)) > kHermitianTolerance * std::max(1.0, std::abs(here))) {
      table.hermitian = false;
    }
  }
  // Nyquist frequencies alias to their own negatives on the grid, so a hermitian
  // symbol is symmetrized against the grid mirror; i*c*xi vanishes there.
  if (table.hermitian) {
    const std::vector<cplx> raw = table.values;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = grid.mirror(k);
      if (!table.zeroed[k] && !table.zeroed[m]) table.values[k] = 0.5 * (raw[k] + std::conj(raw[m]));
    }
  }
  return table;
}

SpectralField apply_symbol(const SpectralField& sf, const Symbol& a) {
  const SymbolTable table = evaluate_symbol(a, sf.grid);
  std::vector<cplx> c(sf.coeffs.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = table.zeroed[k] ? 0.0 : table.values[k] * sf.coeffs[k];
  return SpectralField(sf.grid, std::move(c), sf.real && table.hermitian);
}

SpectralField apply_operator_function(const SpectralField& sf, const Symbol& a,
                                      const std::function<cplx(cplx)>& g) {
  const SymbolTable table = evaluate_symbol(a, sf.grid);
  std::vector<cplx> c(sf.coeffs.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (table.zeroed[k]) continue;
    try {
      c[k] = g(table.values[k]) * sf.coeffs[k];
    } catch (const Error& e) {
      throw Error(e.kind(), e.module(), e.message() + " (" + format_xi(sf.grid, k) + ")");
    }
  }
  return SpectralField(sf.grid, std::move(c), sf.real && table.hermitian);
}

}  // namespace fracdu
