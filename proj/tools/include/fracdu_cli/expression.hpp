#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fracdu/error.hpp"

namespace fracdu::cli {

using cplx = std::complex<double>;

/// Syntax tree of the expression grammar
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ('^' unary)?
///   atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
/// so '^' is right-associative and binds tighter than unary minus.
struct Expr {
  enum class Kind { number, ident, negate, binary, call };

  Kind kind;
  std::size_t offset = 0;  // byte offset of the node's first token
  double number = 0.0;
  std::string name;  // identifier or function name
  char op = 0;       // '+', '-', '*', '/', '^'
  std::vector<std::shared_ptr<const Expr>> args;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Syntax error carrying the byte offset and the set of tokens that would
/// have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

ExprPtr parse_expression(const std::string& text);

/// Fully parenthesized rendering; parse(print(e)) reproduces e.
std::string print_expression(const Expr& e);

/// Structural equality, ignoring offsets.
bool same_tree(const Expr& a, const Expr& b);

/// Variable bindings for evaluation. pi, e and i are always available.
using Bindings = std::map<std::string, cplx>;

/// Throws Error(evaluation) naming the first identifier that is neither a
/// constant nor in `variables`, or a call to an unknown function or with the
/// wrong number of arguments.
void check_identifiers(const Expr& e, const std::vector<std::string>& variables);

/// Complex evaluation. Division by zero and 0 raised to a negative power
/// throw Error(evaluation) with the offending offset.
cplx evaluate(const Expr& e, const Bindings& vars);

/// True if the tree mentions identifier `name`.
bool mentions(const Expr& e, const std::string& name);

}  // namespace fracdu::cli
