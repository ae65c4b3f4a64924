#pragma once

#include <memory>
#include <string>

namespace emfd {

/// Arithmetic expressions in the variables x and y, used for coefficient
/// fields in problem files.
///
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?              (right-associative)
///   primary := number | 'x' | 'y' | 'pi' | 'e'
///            | ('sin'|'cos'|'exp'|'sqrt'|'abs') '(' expr ')'
///            | 'iflt' '(' expr ',' expr ',' expr ',' expr ')'
///            | '(' expr ')'
///
/// iflt(a, b, p, q) evaluates p when a < b and q otherwise; only the taken
/// branch is evaluated. Any non-finite intermediate raises EvalError, so
/// evaluation is total on finite inputs. to_string() prints a fully
/// parenthesized form that parses back to the same expression.
class Expr {
 public:
  struct Node;

  Expr() = default;

  static Expr parse(const std::string& text);

  double eval(double x, double y) const;
  std::string to_string() const;
  bool valid() const { return root_ != nullptr; }

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace emfd
