#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace shishkin {

/**
 * Immutable arithmetic expression in the single variable x.
 *
 * Grammar (whitespace insignificant):
 *
 *   expr    = term , { ("+" | "-") , term } ;
 *   term    = unary , { ("*" | "/") , unary } ;
 *   unary   = "-" , unary | power ;
 *   power   = primary , [ "^" , unary ] ;
 *   primary = number | "x" | func , "(" , expr , ")" | "(" , expr , ")" ;
 *   func    = "sin" | "cos" | "exp" | "ln" | "sqrt" | "abs" ;
 *   number  = digits , [ "." , [ digits ] ] , [ exponent ]
 *           | "." , digits , [ exponent ] ;
 *   exponent = ("e" | "E") , [ "+" | "-" ] , digits ;
 *
 * So `^` is right-associative and binds tighter than unary minus:
 * `-x^2` is `-(x^2)`, `2^-x` is `2^(-x)`, `2^3^2` is `2^(3^2)`.
 *
 * Copies share the underlying tree; all operations are reentrant.
 */
class Expr {
 public:
  struct Node;

  /// Literal constant.
  static Expr constant(double value);
  /// The variable x.
  static Expr variable();

  /// True if the tree contains no reference to x.
  bool is_constant() const;

  const Node& node() const { return *node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend class ExprBuilder;
};

/// Parses `source`. Throws ParseError carrying the byte offset and the set of
/// tokens that would have been accepted there.
Expr parse(std::string_view source);

/// IEEE double evaluation at x. Throws DomainError on division by zero, ln or
/// sqrt outside their domain, a negative base raised to a non-integer power,
/// or a non-finite result; the message names the offending subexpression.
double eval(const Expr& expr, double x);

/// Canonical, fully parenthesised text. parse(to_string(e)) == e, and
/// literals print with 17 significant digits so values survive exactly.
std::string to_string(const Expr& expr);

}  // namespace shishkin
