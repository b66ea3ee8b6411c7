#pragma once

// Helpers shared by the Duhamel solver and its oracles.

#include <map>
#include <utility>
#include <vector>

#include "fracdu/duhamel.hpp"

namespace fracdu::detail {

inline const char* const kModule = "duhamel_solver";

/// Source restricted to one spatial mode.
struct ModeSource {
  bool active = false;
  CatalogProfile profile;     // catalog sources
  std::vector<cplx> samples;  // sampled sources, one per time node
};

struct SourceModes {
  bool catalog = true;
  std::vector<ModeSource> modes;
};

/// Per-mode time profiles of the source; coefficients below 1e-14 of the
/// largest one are flushed so roundoff modes do not feed the solvers.
SourceModes source_modes(const SourceTerm& source, const TimeGrid& horizon);

/// f_k at every node of the horizon.
std::vector<cplx> mode_samples(const ModeSource& m, bool catalog, const TimeGrid& horizon);

/// Forward transform with the same relative flush.
std::vector<cplx> flushed_forward(const Field& field);

/// Stage data h = D^{m-alpha} f_k split into a part sampled on the nodes
/// (integrated by the trapezoid rule) and monomials integrated exactly.
struct StageData {
  std::vector<cplx> smooth;
  std::vector<Monomial> singular;
};
StageData stage_data(const ModeSource& m, bool catalog, const TimeGrid& horizon, double gamma, Forcing forcing);

/// v_n = int_0^{t_n} K(t_n - tau) h(tau) dtau for kernel samples K_l = K(l dt):
/// trapezoid on the sampled part, product integration (K linear, tau^q exact)
/// on the monomials.
std::vector<cplx> duhamel_convolution(const std::vector<cplx>& kernel, const StageData& data, double dt);

/// Memo of per-lambda arrays.
class LambdaCache {
 public:
  template <class F>
  const std::vector<cplx>& get(cplx lambda, F&& make) {
    const auto key = std::make_pair(lambda.real(), lambda.imag());
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, make()).first;
    return it->second;
  }

 private:
  std::map<std::pair<double, double>, std::vector<cplx>> cache_;
};

/// Homogeneous part on every node: modes[n][k].
std::vector<std::vector<cplx>> homogeneous_modes(const CauchyProblem& p, const SymbolTable& table);

/// True when all inputs are real, so the solution is real for Hermitian symbols.
bool problem_real(const CauchyProblem& p);

/// Fills grid step, symbol bound and stability warning.
void base_metadata(SolutionMetadata& meta, const CauchyProblem& p, const SymbolTable& table);

/// Inverse transform of one coefficient vector, sup norm over space.
double physical_sup(const SpaceGrid& grid, const std::vector<cplx>& coeffs);

}  // namespace fracdu::detail
