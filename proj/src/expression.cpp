#include "volterra/expression.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace volterra {

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)),
      position_(position) {}

namespace {

std::size_t saturating_size(std::size_t a, std::size_t b) {
  const std::size_t s = a + b + 1;
  return s < a ? std::numeric_limits<std::size_t>::max() : s;
}

NodePtr make_node(Op op, double value, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->value = value;
  std::size_t size = 1;
  if (lhs) size = saturating_size(lhs->size, rhs ? rhs->size : 0);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  n->size = size;
  return n;
}

double eval(const Node& n, double x) noexcept {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return x;
    case Op::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Op::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Op::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Op::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Op::neg: return -eval(*n.lhs, x);
    case Op::pow: return std::pow(eval(*n.lhs, x), n.value);
    case Op::exp: return std::exp(eval(*n.lhs, x));
    case Op::log: return std::log(eval(*n.lhs, x));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

Expression::Rounded eval_rounded(const Node& n, double x) noexcept {
  using R = Expression::Rounded;
  auto round = [](double v, double e) { return R{v, e + kUnitRoundoff * std::fabs(v)}; };
  switch (n.op) {
    case Op::constant: return {n.value, 0.0};
    case Op::variable: return {x, 0.0};
    case Op::neg: {
      const R a = eval_rounded(*n.lhs, x);
      return {-a.value, a.error};
    }
    case Op::add:
    case Op::sub: {
      const R a = eval_rounded(*n.lhs, x), b = eval_rounded(*n.rhs, x);
      return round(n.op == Op::add ? a.value + b.value : a.value - b.value, a.error + b.error);
    }
    case Op::mul: {
      const R a = eval_rounded(*n.lhs, x), b = eval_rounded(*n.rhs, x);
      return round(a.value * b.value, std::fabs(a.value) * b.error + std::fabs(b.value) * a.error);
    }
    case Op::div: {
      const R a = eval_rounded(*n.lhs, x), b = eval_rounded(*n.rhs, x);
      const double q = a.value / b.value;
      return round(q, (a.error + std::fabs(q) * b.error) / std::fabs(b.value));
    }
    case Op::pow: {
      const R a = eval_rounded(*n.lhs, x);
      const double v = std::pow(a.value, n.value);
      const double slope = a.error == 0.0 ? 0.0 : std::fabs(n.value * std::pow(a.value, n.value - 1));
      return round(v, slope * a.error);
    }
    case Op::exp: {
      const R a = eval_rounded(*n.lhs, x);
      const double v = std::exp(a.value);
      return round(v, v * a.error);
    }
    case Op::log: {
      const R a = eval_rounded(*n.lhs, x);
      return round(std::log(a.value), a.error / std::fabs(a.value));
    }
  }
  return {std::numeric_limits<double>::quiet_NaN(), 0.0};
}

bool has_variable(const Node& n) noexcept {
  if (n.op == Op::variable) return true;
  if (n.lhs && has_variable(*n.lhs)) return true;
  if (n.rhs && has_variable(*n.rhs)) return true;
  return false;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0) return "(" + s + ")";
  return s;
}

void print(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::constant: out += format_number(n.value); break;
    case Op::variable: out += 'x'; break;
    case Op::add: binary("+"); break;
    case Op::sub: binary("-"); break;
    case Op::mul: binary("*"); break;
    case Op::div: binary("/"); break;
    case Op::neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case Op::pow:
      out += '(';
      print(*n.lhs, out);
      out += '^';
      out += n.value < 0 ? format_number(n.value) : "(" + format_number(n.value) + ")";
      out += ')';
      break;
    case Op::exp:
    case Op::log:
      out += n.op == Op::exp ? "exp(" : "log(";
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

bool is_const(const Expression& e, double c) { return e.is_constant() && e.root().value == c; }

}  // namespace

Expression::Expression() : root_(make_node(Op::constant, 0.0)) {}

Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::constant(double c) { return Expression(make_node(Op::constant, c)); }

Expression Expression::variable() { return Expression(make_node(Op::variable, 0.0)); }

double Expression::operator()(double x) const noexcept { return eval(*root_, x); }

Expression::Rounded Expression::evaluate_rounded(double x) const noexcept { return eval_rounded(*root_, x); }

double Expression::significant(double x) const noexcept {
  const Rounded r = eval_rounded(*root_, x);
  return std::isfinite(r.value) && std::fabs(r.value) <= r.error ? 0.0 : r.value;
}

bool Expression::depends_on_x() const noexcept { return has_variable(*root_); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return Expression::constant(a.root().value + b.root().value);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expression(make_node(Op::add, 0.0, a.node(), b.node()));
}

Expression operator-(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return Expression::constant(a.root().value - b.root().value);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expression(make_node(Op::sub, 0.0, a.node(), b.node()));
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant()) return Expression::constant(a.root().value * b.root().value);
  if (a.is_zero() || b.is_zero()) return Expression::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const(a, -1.0)) return -b;
  if (is_const(b, -1.0)) return -a;
  return Expression(make_node(Op::mul, 0.0, a.node(), b.node()));
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && b.root().value != 0.0)
    return Expression::constant(a.root().value / b.root().value);
  if (is_const(b, 1.0)) return a;
  if (a.is_zero() && !b.is_zero()) return Expression::constant(0.0);
  return Expression(make_node(Op::div, 0.0, a.node(), b.node()));
}

Expression operator-(const Expression& a) {
  if (a.is_constant()) return Expression::constant(-a.root().value);
  if (a.root().op == Op::neg) return Expression(a.root().lhs);
  return Expression(make_node(Op::neg, 0.0, a.node()));
}

Expression pow(const Expression& base, double exponent) {
  if (exponent == 0.0) return Expression::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant() && base.root().value > 0.0)
    return Expression::constant(std::pow(base.root().value, exponent));
  return Expression(make_node(Op::pow, exponent, base.node()));
}

Expression exp(const Expression& a) {
  if (a.is_constant()) return Expression::constant(std::exp(a.root().value));
  return Expression(make_node(Op::exp, 0.0, a.node()));
}

Expression log(const Expression& a) {
  if (a.is_constant() && a.root().value > 0.0) return Expression::constant(std::log(a.root().value));
  return Expression(make_node(Op::log, 0.0, a.node()));
}

double evaluate(const Expression& e, double x) {
  if (!(x > 0.0)) throw DomainError("evaluation point must be positive, got " + format_number(x));
  const double y = e(x);
  if (!std::isfinite(y))
    throw EvaluationError("non-finite value of " + e.to_string() + " at x = " + format_number(x));
  return y;
}

namespace {

Expression derive(const Expression& e) {
  const Node& n = e.root();
  const Expression x = Expression::variable();
  auto sub = [](const NodePtr& p) { return Expression(p); };
  switch (n.op) {
    case Op::constant: return Expression::constant(0.0);
    case Op::variable: return Expression::constant(1.0);
    case Op::add: return derive(sub(n.lhs)) + derive(sub(n.rhs));
    case Op::sub: return derive(sub(n.lhs)) - derive(sub(n.rhs));
    case Op::mul: {
      const Expression f = sub(n.lhs), g = sub(n.rhs);
      return derive(f) * g + f * derive(g);
    }
    case Op::div: {
      const Expression f = sub(n.lhs), g = sub(n.rhs);
      const Expression df = derive(f), dg = derive(g);
      if (dg.is_zero()) return df / g;
      return (df * g - f * dg) / pow(g, 2.0);
    }
    case Op::neg: return -derive(sub(n.lhs));
    case Op::pow: {
      const Expression f = sub(n.lhs);
      return Expression::constant(n.value) * pow(f, n.value - 1.0) * derive(f);
    }
    case Op::exp: return e * derive(sub(n.lhs));
    case Op::log: {
      const Expression f = sub(n.lhs);
      return derive(f) / f;
    }
  }
  return Expression::constant(0.0);
}

}  // namespace

Expression differentiate(const Expression& e, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  Expression d = e;
  for (int i = 0; i < order; ++i) {
    d = derive(d);
    if (d.size() > Expression::kMaxNodes)
      throw ExpressionSizeError("derivative of order " + std::to_string(i + 1) + " has " +
                                std::to_string(d.size()) + " nodes (cap " +
                                std::to_string(Expression::kMaxNodes) + ")");
  }
  return d;
}

Expression multiply_by_power(const Expression& e, int k) {
  if (k < 0) throw std::invalid_argument("power must be non-negative");
  if (k == 0) return e;
  return e * pow(Expression::variable(), static_cast<double>(k));
}

}  // namespace volterra
