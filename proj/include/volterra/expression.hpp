// Closed-form scalar functions of x on (0, inf) with exact symbolic
// differentiation.
//
// Expressions are immutable trees of shared nodes. Every weight, kernel
// coefficient and test function in the library is an Expression.
#ifndef VOLTERRA_EXPRESSION_HPP
#define VOLTERRA_EXPRESSION_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace volterra {

/// Syntax error; position() is the 1-based column of the offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A subexpression is invalid somewhere on (0, inf), or x <= 0 was requested.
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation produced inf or NaN.
class EvaluationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Differentiation produced a tree larger than Expression::kMaxNodes.
class ExpressionSizeError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Op { constant, variable, add, sub, mul, div, neg, pow, exp, log };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  double value = 0.0;  // constant value, or the exponent for Op::pow
  NodePtr lhs;
  NodePtr rhs;
  std::size_t size = 1;  // tree size counting shared subtrees with multiplicity
};

class Expression {
 public:
  static constexpr std::size_t kMaxNodes = 10000;

  Expression();  // the constant 0
  explicit Expression(NodePtr root);

  static Expression constant(double c);
  static Expression variable();

  /// Unchecked evaluation; x <= 0 or overflow yields whatever IEEE gives.
  double operator()(double x) const noexcept;

  struct Rounded {
    double value;
    double error;  // first-order bound on the accumulated rounding error
  };

  /// Evaluation with a running rounding-error bound.
  Rounded evaluate_rounded(double x) const noexcept;

  /// The value, or 0 when its rounding-error bound is at least as large.
  double significant(double x) const noexcept;

  std::size_t size() const noexcept { return root_->size; }
  const Node& root() const noexcept { return *root_; }
  const NodePtr& node() const noexcept { return root_; }

  bool is_constant() const noexcept { return root_->op == Op::constant; }
  bool is_zero() const noexcept { return is_constant() && root_->value == 0.0; }
  bool depends_on_x() const noexcept;

  /// Re-parseable text, fully parenthesised.
  std::string to_string() const;

 private:
  NodePtr root_;
};

// Builders. They fold constants and drop neutral elements; nothing else.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, double exponent);
Expression exp(const Expression& a);
Expression log(const Expression& a);

/// Parse the ASCII grammar: numbers, `x`, `+ - * / ^`, `exp()`, `log()`,
/// parentheses. `^` is right-associative and takes a constant exponent.
/// Divisions, logarithms and fractional powers are checked on 64 log-spaced
/// points of [1e-8, 1e8]; see validate_domain().
Expression parse(std::string_view source);

/// Throws DomainError if a denominator vanishes or changes sign, a log
/// argument is not positive, or a fractional power has a negative base on
/// the sample points.
void validate_domain(const Expression& e);

/// Checked evaluation: requires x > 0 and a finite result.
double evaluate(const Expression& e, double x);

/// Exact symbolic derivative of the given order. Throws ExpressionSizeError
/// when the result exceeds Expression::kMaxNodes nodes.
Expression differentiate(const Expression& e, int order = 1);

/// e * x^k.
Expression multiply_by_power(const Expression& e, int k);

}  // namespace volterra

#endif  // VOLTERRA_EXPRESSION_HPP
