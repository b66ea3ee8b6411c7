#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace fracdu {

using cplx = std::complex<double>;

/// Periodic grid in 1 or 2 dimensions: x_j = j L / N per axis, N even and >= 4.
/// Values are stored row-major with axis 0 slowest.
class SpaceGrid {
 public:
  static constexpr double kDefaultLength = 6.283185307179586;

  SpaceGrid(int dim, std::array<int, 2> points, std::array<double, 2> length = {kDefaultLength, kDefaultLength});
  static SpaceGrid line(int n, double length = kDefaultLength) { return SpaceGrid(1, {n, 1}, {length, length}); }
  static SpaceGrid square(int n, double length = kDefaultLength) { return SpaceGrid(2, {n, n}, {length, length}); }

  int dim() const noexcept { return dim_; }
  int points(int axis) const noexcept { return points_[axis]; }
  double length(int axis) const noexcept { return length_[axis]; }
  std::size_t size() const noexcept;

  /// Axis index pair of a flat index.
  std::array<int, 2> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(std::array<int, 2> idx) const noexcept;

  /// Node coordinates of a flat index (second entry 0 in 1-D).
  std::array<double, 2> node(std::size_t flat) const noexcept;

  /// Integer wavenumber of storage index j on an axis, in [-N/2, N/2).
  int wavenumber(int axis, int j) const noexcept;
  /// Frequency vector xi_k = 2 pi k / L of a flat spectral index.
  std::array<double, 2> frequency(std::size_t flat) const noexcept;
  /// Flat spectral index of the frequency -k (wrapping -N/2 onto itself).
  std::size_t mirror(std::size_t flat) const noexcept;

  bool operator==(const SpaceGrid&) const = default;

 private:
  int dim_;
  std::array<int, 2> points_;
  std::array<double, 2> length_;
};

/// Samples of a spatial field. `real` promises vanishing imaginary parts.
struct Field {
  SpaceGrid grid;
  std::vector<cplx> values;
  bool real = false;

  Field(SpaceGrid g, std::vector<cplx> v, bool is_real);
  static Field zeros(const SpaceGrid& g) { return Field(g, std::vector<cplx>(g.size()), true); }
  static Field sample(const SpaceGrid& g, const std::function<cplx(double, double)>& f, bool is_real);
};

/// Unnormalized DFT coefficients, indexed like the grid (FFT ordering).
struct SpectralField {
  SpaceGrid grid;
  std::vector<cplx> coeffs;
  bool real = false;

  SpectralField(SpaceGrid g, std::vector<cplx> c, bool is_real);
  static SpectralField zeros(const SpaceGrid& g) { return SpectralField(g, std::vector<cplx>(g.size()), true); }
};

/// u_k = sum_j u_j exp(-i xi_k . x_j).
SpectralField forward(const Field& field);

/// Inverse DFT with the 1/N^dim factor. With the realness flag set the
/// coefficients are conjugate-symmetrized first; relative asymmetry above
/// 1e-10 throws Error(symmetry_violation).
Field inverse(const SpectralField& sf);

/// What to do at xi = 0 when the symbol is not finite there.
enum class ZeroModeRule { error, zero };

enum class SymbolKind { laplacian, fractional_laplacian, advection, constant, polynomial, expression };

/// The symbol A(xi) of a pseudo-differential operator A(D_x).
class Symbol {
 public:
  using Evaluator = std::function<cplx(const std::array<double, 2>&)>;

  static Symbol laplacian();
  static Symbol fractional_laplacian(double s);
  static Symbol advection(double c);
  static Symbol constant(cplx lambda);
  /// sum_j coeffs[j] xi^j, one-dimensional grids only.
  static Symbol polynomial(std::vector<cplx> coeffs);
  static Symbol expression(std::string text, Evaluator evaluator);

  SymbolKind kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }
  ZeroModeRule zero_mode_rule() const noexcept { return zero_rule_; }
  Symbol& with_zero_mode_rule(ZeroModeRule rule) {
    zero_rule_ = rule;
    return *this;
  }

  /// A(xi); throws Error(symbol_evaluation) if the value is not finite.
  cplx operator()(const std::array<double, 2>& xi) const;

 private:
  Symbol(SymbolKind kind, std::string description, Evaluator evaluator)
      : kind_(kind), description_(std::move(description)), evaluator_(std::move(evaluator)) {}

  SymbolKind kind_;
  std::string description_;
  Evaluator evaluator_;
  ZeroModeRule zero_rule_ = ZeroModeRule::error;
};

/// A(xi_k) on every grid frequency.
struct SymbolTable {
  std::vector<cplx> values;
  /// Modes removed by ZeroModeRule::zero; their coefficients are forced to 0.
  std::vector<bool> zeroed;
  /// sup_k Re A(xi_k) over the retained modes.
  double max_real_part = 0.0;
  /// A(-xi) == conj A(xi) on the grid, so real fields stay real.
  bool hermitian = true;

  bool stable() const noexcept { return max_real_part <= 0.0; }
};

SymbolTable evaluate_symbol(const Symbol& a, const SpaceGrid& grid);

/// u_k <- A(xi_k) u_k.
SpectralField apply_symbol(const SpectralField& sf, const Symbol& a);

/// u_k <- g(A(xi_k)) u_k; errors from g are reported with the frequency.
SpectralField apply_operator_function(const SpectralField& sf, const Symbol& a,
                                      const std::function<cplx(cplx)>& g);

/// sum_j |u_j|^2 and (1/N^dim) sum_k |u_k|^2, the two sides of Parseval.
double energy(const Field& field);
double energy(const SpectralField& sf);

}  // namespace fracdu
