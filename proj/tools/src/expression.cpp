#include "fracdu_cli/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace fracdu::cli {

namespace {

const char* const kModule = "cli_harness";

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

struct Token {
  enum class Kind { number, ident, op, end } kind;
  std::size_t offset;
  std::string text;
  double value = 0.0;
};

std::string describe(const Token& t) {
  if (t.kind == Token::Kind::end) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= s_.size()) return {Token::Kind::end, start, ""};
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return {Token::Kind::ident, start, s_.substr(start, pos_ - start)};
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      ++pos_;
      return {Token::Kind::op, start, std::string(1, c)};
    }
    throw SyntaxError(start, {"number", "identifier", "'-'", "'('"}, std::string("'") + c + "'");
  }

 private:
  Token number(std::size_t start) {
    auto digits = [&] {
      const std::size_t from = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ - from;
    };
    std::size_t count = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw SyntaxError(start, {"digit"}, "'.'");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < s_.size() && (s_[look] == '+' || s_[look] == '-')) ++look;
      if (look < s_.size() && std::isdigit(static_cast<unsigned char>(s_[look]))) {
        pos_ = look;
        digits();
      }
    }
    Token t{Token::Kind::number, start, s_.substr(start, pos_ - start)};
    const auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, t.value);
    if (ec != std::errc() || ptr != s_.data() + pos_ || !std::isfinite(t.value)) {
      throw SyntaxError(start, {"finite number"}, "'" + t.text + "'");
    }
    return t;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { advance(); }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (cur_.kind != Token::Kind::end) {
      throw SyntaxError(cur_.offset, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"}, describe(cur_));
    }
    return e;
  }

 private:
  void advance() { cur_ = lexer_.next(); }
  bool at_op(char c) const { return cur_.kind == Token::Kind::op && cur_.text[0] == c; }

  static ExprPtr binary(char op, ExprPtr l, ExprPtr r, std::size_t offset) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::binary;
    e->op = op;
    e->offset = offset;
    e->args = {std::move(l), std::move(r)};
    return e;
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (at_op('+') || at_op('-')) {
      const char op = cur_.text[0];
      advance();
      left = binary(op, left, term(), left->offset);
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary();
    while (at_op('*') || at_op('/')) {
      const char op = cur_.text[0];
      advance();
      left = binary(op, left, unary(), left->offset);
    }
    return left;
  }

  ExprPtr unary() {
    if (at_op('-')) {
      const std::size_t offset = cur_.offset;
      advance();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::negate;
      e->offset = offset;
      e->args = {unary()};
      return e;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (at_op('^')) {
      advance();
      return binary('^', base, unary(), base->offset);
    }
    return base;
  }

  ExprPtr atom() {
    const Token t = cur_;
    if (t.kind == Token::Kind::number) {
      advance();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::number;
      e->offset = t.offset;
      e->number = t.value;
      return e;
    }
    if (t.kind == Token::Kind::ident) {
      advance();
      auto e = std::make_shared<Expr>();
      e->offset = t.offset;
      e->name = t.text;
      if (!at_op('(')) {
        e->kind = Expr::Kind::ident;
        return e;
      }
      advance();
      e->kind = Expr::Kind::call;
      e->args.push_back(expr());
      while (at_op(',')) {
        advance();
        e->args.push_back(expr());
      }
      if (!at_op(')')) throw SyntaxError(cur_.offset, {"','", "')'"}, describe(cur_));
      advance();
      return e;
    }
    if (at_op('(')) {
      advance();
      ExprPtr inner = expr();
      if (!at_op(')')) throw SyntaxError(cur_.offset, {"')'"}, describe(cur_));
      advance();
      return inner;
    }
    throw SyntaxError(t.offset, {"number", "identifier", "'-'", "'('"}, describe(t));
  }

  Lexer lexer_;
  Token cur_{Token::Kind::end, 0, ""};
};

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const std::map<std::string, int>& functions() {
  static const std::map<std::string, int> f{{"sin", 1}, {"cos", 1}, {"exp", 1}, {"abs", 1}, {"sqrt", 1}, {"pow", 2}};
  return f;
}

bool is_constant(const std::string& name) { return name == "pi" || name == "e" || name == "i"; }

Error eval_error(const Expr& e, const std::string& what) {
  return Error(ErrorKind::evaluation, kModule, what + " at offset " + std::to_string(e.offset));
}

cplx power(const Expr& e, cplx base, cplx exponent) {
  if (base == cplx(0.0)) {
    if (exponent.real() < 0.0) throw eval_error(e, "0 raised to a negative power");
    if (exponent == cplx(0.0)) return 1.0;
    return 0.0;
  }
  if (base.imag() == 0.0 && exponent.imag() == 0.0) {
    const double b = base.real();
    const double x = exponent.real();
    if (b > 0.0 || std::floor(x) == x) return std::pow(b, x);
  }
  return std::pow(base, exponent);
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorKind::syntax, kModule,
            "syntax error at offset " + std::to_string(offset) + ": found " + found + ", expected one of {" +
                join(expected) + "}"),
      offset_(offset),
      expected_(std::move(expected)) {}

ExprPtr parse_expression(const std::string& text) { return Parser(text).parse(); }

std::string print_expression(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::number: return format_number(e.number);
    case Expr::Kind::ident: return e.name;
    case Expr::Kind::negate: return "(-" + print_expression(*e.args[0]) + ")";
    case Expr::Kind::binary:
      return "(" + print_expression(*e.args[0]) + e.op + print_expression(*e.args[1]) + ")";
    case Expr::Kind::call: {
      std::string out = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ",";
        out += print_expression(*e.args[i]);
      }
      return out + ")";
    }
  }
  return "";
}

bool same_tree(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::number:
      if (a.number != b.number) return false;
      break;
    case Expr::Kind::ident:
    case Expr::Kind::call:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::binary:
      if (a.op != b.op) return false;
      break;
    case Expr::Kind::negate: break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!same_tree(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

void check_identifiers(const Expr& e, const std::vector<std::string>& variables) {
  if (e.kind == Expr::Kind::ident) {
    if (!is_constant(e.name) && std::find(variables.begin(), variables.end(), e.name) == variables.end()) {
      std::vector<std::string> allowed = variables;
      allowed.insert(allowed.end(), {"pi", "e", "i"});
      throw Error(ErrorKind::evaluation, kModule,
                  "unknown identifier '" + e.name + "' at offset " + std::to_string(e.offset) + " (allowed: " +
                      join(allowed) + ")");
    }
  }
  if (e.kind == Expr::Kind::call) {
    const auto it = functions().find(e.name);
    if (it == functions().end()) {
      throw Error(ErrorKind::evaluation, kModule,
                  "unknown function '" + e.name + "' at offset " + std::to_string(e.offset) +
                      " (available: sin, cos, exp, abs, sqrt, pow)");
    }
    if (static_cast<int>(e.args.size()) != it->second) {
      throw Error(ErrorKind::evaluation, kModule,
                  "function '" + e.name + "' at offset " + std::to_string(e.offset) + " takes " +
                      std::to_string(it->second) + " argument(s)");
    }
  }
  for (const ExprPtr& a : e.args) check_identifiers(*a, variables);
}

cplx evaluate(const Expr& e, const Bindings& vars) {
  switch (e.kind) {
    case Expr::Kind::number: return e.number;
    case Expr::Kind::ident: {
      if (const auto it = vars.find(e.name); it != vars.end()) return it->second;
      if (e.name == "pi") return std::numbers::pi;
      if (e.name == "e") return std::numbers::e;
      if (e.name == "i") return cplx(0.0, 1.0);
      throw eval_error(e, "unbound identifier '" + e.name + "'");
    }
    case Expr::Kind::negate: return -evaluate(*e.args[0], vars);
    case Expr::Kind::binary: {
      const cplx l = evaluate(*e.args[0], vars);
      const cplx r = evaluate(*e.args[1], vars);
      switch (e.op) {
        case '+': return l + r;
        case '-': return l - r;
        case '*': return l * r;
        case '/':
          if (r == cplx(0.0)) throw eval_error(*e.args[1], "division by zero");
          return l / r;
        case '^': return power(e, l, r);
      }
      break;
    }
    case Expr::Kind::call: {
      std::vector<cplx> a;
      for (const ExprPtr& arg : e.args) a.push_back(evaluate(*arg, vars));
      const auto want = functions().find(e.name);
      if (want == functions().end() || static_cast<int>(a.size()) != want->second) {
        throw eval_error(e, "bad call to '" + e.name + "'");
      }
      const bool real_arg = a[0].imag() == 0.0;
      if (e.name == "sin") return real_arg ? cplx(std::sin(a[0].real())) : std::sin(a[0]);
      if (e.name == "cos") return real_arg ? cplx(std::cos(a[0].real())) : std::cos(a[0]);
      if (e.name == "exp") return real_arg ? cplx(std::exp(a[0].real())) : std::exp(a[0]);
      if (e.name == "abs") return std::abs(a[0]);
      if (e.name == "sqrt") {
        if (a[0].imag() == 0.0 && a[0].real() >= 0.0) return std::sqrt(a[0].real());
        return std::sqrt(a[0]);
      }
      if (e.name == "pow") return power(e, a[0], a[1]);
      break;
    }
  }
  throw eval_error(e, "malformed expression");
}

bool mentions(const Expr& e, const std::string& name) {
  if (e.kind == Expr::Kind::ident && e.name == name) return true;
  return std::any_of(e.args.begin(), e.args.end(), [&](const ExprPtr& a) { return mentions(*a, name); });
}

}  // namespace fracdu::cli
