#pragma once

#include "fracdu/frac_calc.hpp"
#include "fracdu_cli/expression.hpp"

namespace fracdu::cli {

/// Converts an expression in t into a catalog profile (a finite sum of
/// c * t^p with p >= 0). Anything that is not such a sum, e.g. sin(t), is
/// rejected with Error(unsupported_profile).
CatalogProfile profile_from_expression(const Expr& e);

}  // namespace fracdu::cli
