#include <cmath>

#include "fracdu_cli/profile.hpp"

namespace fracdu::cli {

namespace {

using Terms = std::vector<Monomial>;

Error unsupported(const Expr& e, const std::string& why) {
  return Error(ErrorKind::unsupported_profile, "cli_harness",
               why + " at offset " + std::to_string(e.offset) + "; time profiles must be sums of c*t^p with p >= 0");
}

Terms multiply(const Terms& a, const Terms& b) {
  Terms out;
  for (const Monomial& x : a) {
    for (const Monomial& y : b) out.push_back({x.power + y.power, x.coeff * y.coeff});
  }
  return CatalogProfile(out).terms();
}

bool is_constant(const Terms& t) { return t.empty() || (t.size() == 1 && t[0].power == 0.0); }
cplx constant_value(const Terms& t) { return t.empty() ? cplx(0.0) : t[0].coeff; }

Terms convert(const Expr& e) {
  if (!mentions(e, "t")) {
    const cplx v = evaluate(e, {});
    if (v == cplx(0.0)) return {};
    return {{0.0, v}};
  }
  switch (e.kind) {
    case Expr::Kind::ident: return {{1.0, 1.0}};
    case Expr::Kind::negate: {
      Terms t = convert(*e.args[0]);
      for (Monomial& m : t) m.coeff = -m.coeff;
      return t;
    }
    case Expr::Kind::binary: {
      const Terms l = convert(*e.args[0]);
      switch (e.op) {
        case '+':
        case '-': {
          Terms r = convert(*e.args[1]);
          Terms out = l;
          for (Monomial& m : r) out.push_back({m.power, e.op == '+' ? m.coeff : -m.coeff});
          return CatalogProfile(out).terms();
        }
        case '*': return multiply(l, convert(*e.args[1]));
        case '/': {
          const Terms r = convert(*e.args[1]);
          if (!is_constant(r)) throw unsupported(*e.args[1], "division by a function of t");
          if (constant_value(r) == cplx(0.0)) throw unsupported(*e.args[1], "division by zero");
          return multiply(l, {{0.0, 1.0 / constant_value(r)}});
        }
        case '^': {
          if (mentions(*e.args[1], "t")) throw unsupported(*e.args[1], "exponent depends on t");
          const cplx pc = evaluate(*e.args[1], {});
          if (pc.imag() != 0.0) throw unsupported(*e.args[1], "complex exponent");
          const double p = pc.real();
          if (l.size() == 1) {
            const Monomial m = l[0];
            const bool integer = std::floor(p) == p;
            if (!integer && !(m.coeff.imag() == 0.0 && m.coeff.real() > 0.0)) {
              throw unsupported(e, "non-integer power of a non-positive coefficient");
            }
            if (m.power * p < 0.0) throw unsupported(e, "negative power of t");
            const cplx c = integer ? std::pow(m.coeff, static_cast<int>(p)) : cplx(std::pow(m.coeff.real(), p));
            return {{m.power * p, c}};
          }
          if (std::floor(p) != p || p < 0.0 || p > 32.0) {
            throw unsupported(e, "power of a sum must be a small non-negative integer");
          }
          Terms out{{0.0, 1.0}};
          for (int i = 0; i < static_cast<int>(p); ++i) out = multiply(out, l);
          return out;
        }
      }
      break;
    }
    default: break;
  }
  throw unsupported(e, "'" + print_expression(e) + "' is not a polynomial in t");
}

}  // namespace

CatalogProfile profile_from_expression(const Expr& e) {
  check_identifiers(e, {"t"});
  Terms terms = convert(e);
  for (const Monomial& m : terms) {
    if (m.power < 0.0) throw unsupported(e, "negative power of t");
  }
  return CatalogProfile(std::move(terms));
}

}  // namespace fracdu::cli
