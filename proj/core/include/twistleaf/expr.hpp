#pragma once

// Holomorphic expressions: parsing, printing and jet evaluation.
//
// Grammar (whitespace insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' exponent)*
//   exponent:= ['-' | '+'] INTEGER | '(' ['-' | '+'] INTEGER ')'
//   primary := NUMBER ['i'] | 'i' | FUNC '(' expr ')' | VAR | '(' expr ')'
//   FUNC    := exp | log | sqrt | sin | cos
//
// `^` takes integer exponents only; other powers go through exp/log so the
// branch in use is visible. log and sqrt are principal branches (sqrt(1) = 1).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistleaf/jet.hpp"
#include "twistleaf/types.hpp"

namespace twistleaf {

class HoloExpr {
 public:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Sqrt, Sin, Cos };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;
  struct Node {
    Op op = Op::Const;
    Complex value{};    // Const
    std::size_t var = 0;  // Var
    int exponent = 0;   // Pow
    NodePtr lhs, rhs;   // unary ops and Pow use lhs only
  };

  /// Parses `text` over the declared variable names (at most kMaxVars).
  /// Throws ParseError on syntax errors, unknown identifiers, or too many variables.
  static HoloExpr parse(std::string_view text, std::vector<std::string> vars);

  const std::vector<std::string>& vars() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  const Node& root() const noexcept { return *root_; }

  /// Value only. `point` holds one value per declared variable.
  Complex eval(std::span<const Complex> point) const;
  /// Value with exact first and second partials. Throws DomainError at poles
  /// and at the branch points of log/sqrt.
  Jet2 eval_jet2(std::span<const Complex> point) const;

  /// Re-parseable text; parse(to_string()) yields an alpha-equivalent tree for
  /// every tree produced by parse().
  std::string to_string() const;

  /// Same tree shape, operators, constants and variable positions. Variable
  /// names may differ.
  bool alpha_equivalent(const HoloExpr& other) const;

  /// HoloFn2 view of a one- or two-variable expression.
  HoloFn2 as_fn2() const;

 private:
  HoloExpr(NodePtr root, std::vector<std::string> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  NodePtr root_;
  std::vector<std::string> vars_;
};

}  // namespace twistleaf
