#pragma once

// Complex-valued closed-form expressions.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | constant | variable | func '(' args ')' | '(' expr ')'
//
// Constants are i, pi and e. Functions: exp sin cos abs conj re im sqrt (one
// argument), min max (two real-valued arguments). There is no implicit
// multiplication: "2n" is rejected.

#include <complex>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace normpar {

using Complex = std::complex<double>;

enum class NodeKind { literal, constant, variable, unary_minus, binary, call };
enum class BinaryOp { add, sub, mul, div, pow };
enum class Builtin { exp, sin, cos, abs, conj, re, im, sqrt, min, max };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind;
  double number = 0.0;          // literal
  std::string name;             // constant or variable
  BinaryOp op = BinaryOp::add;  // binary
  Builtin fn = Builtin::exp;    // call
  std::vector<ExprPtr> children;

  static ExprPtr make_literal(double v);
  static ExprPtr make_constant(std::string name);
  static ExprPtr make_variable(std::string name);
  static ExprPtr make_negate(ExprPtr operand);
  static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
  static ExprPtr make_call(Builtin fn, std::vector<ExprPtr> args);
};

const char* builtin_name(Builtin fn);
std::size_t builtin_arity(Builtin fn);
char binary_symbol(BinaryOp op);

// Structural equality of two trees.
bool same_tree(const ExprNode& a, const ExprNode& b);

using Bindings = std::map<std::string, Complex, std::less<>>;

class Expression {
 public:
  // Throws ParseError.
  static Expression parse(std::string_view source, const std::set<std::string, std::less<>>& allowed_vars);

  // Wraps an already built tree; `source` is the printed form.
  static Expression from_tree(ExprPtr root);

  const std::string& source() const noexcept { return source_; }
  const ExprNode& root() const noexcept { return *root_; }
  ExprPtr root_ptr() const noexcept { return root_; }

  // Throws EvalError on division by zero, domain errors (including non-finite
  // results) and unbound variables.
  Complex evaluate(const Bindings& bindings) const;

  // Convenience for single-variable rules such as sequence definitions.
  Complex evaluate_at(std::string_view var, Complex value) const;

  // Fully parenthesized canonical form; re-parsing yields the same tree.
  std::string to_string() const;

  std::set<std::string> variables() const;

 private:
  std::string source_;
  ExprPtr root_;
};

std::string print_tree(const ExprNode& node);

// Parses "x1".."xk" names for a k-dimensional ball function.
std::set<std::string, std::less<>> coordinate_variables(std::size_t dim);

}  // namespace normpar
