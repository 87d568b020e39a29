#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "volterra/expression.hpp"

namespace volterra {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expression parse_all() {
    Expression e = parse_sum();
    skip_space();
    if (pos_ < src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_ + 1); }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expression parse_sum() {
    Expression e = parse_product();
    for (;;) {
      if (accept('+'))
        e = combine(Op::add, e, parse_product());
      else if (accept('-'))
        e = combine(Op::sub, e, parse_product());
      else
        return e;
    }
  }

  Expression parse_product() {
    Expression e = parse_unary();
    for (;;) {
      if (accept('*'))
        e = combine(Op::mul, e, parse_unary());
      else if (accept('/'))
        e = combine(Op::div, e, parse_unary());
      else
        return e;
    }
  }

  Expression parse_unary() {
    if (accept('-')) return negate(parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    skip_space();
    if (!accept('^')) return base;
    const std::size_t exponent_pos = pos_;
    Expression exponent = parse_unary();  // right-associative
    if (exponent.depends_on_x()) {
      pos_ = exponent_pos;
      fail("exponent must be a real constant");
    }
    const double p = exponent(1.0);
    if (!std::isfinite(p)) {
      pos_ = exponent_pos;
      fail("exponent is not finite");
    }
    return Expression(std::make_shared<Node>(Node{Op::pow, p, base.node(), nullptr, base.size() + 1}));
  }

  Expression parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      const std::string_view name = src_.substr(start, pos_ - start);
      if (name == "x") return Expression::variable();
      if (name == "exp" || name == "log") {
        expect('(');
        Expression arg = parse_sum();
        expect(')');
        const Op op = name == "exp" ? Op::exp : Op::log;
        return Expression(std::make_shared<Node>(Node{op, 0.0, arg.node(), nullptr, arg.size() + 1}));
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text == ".") {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    return Expression::constant(v);
  }

  // Raw nodes: parsing keeps the tree as written so that domain validation
  // sees every denominator the user typed.
  static Expression combine(Op op, const Expression& a, const Expression& b) {
    return Expression(std::make_shared<Node>(Node{op, 0.0, a.node(), b.node(), a.size() + b.size() + 1}));
  }

  static Expression negate(const Expression& a) {
    if (a.is_constant()) return Expression::constant(-a.root().value);
    return Expression(std::make_shared<Node>(Node{Op::neg, 0.0, a.node(), nullptr, a.size() + 1}));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

constexpr int kDomainSamples = 64;

enum class Requirement { nonvanishing, positive, nonnegative };

void check_samples(const Expression& sub, Requirement req, const char* what) {
  const double lo = std::log(1e-8), hi = std::log(1e8);
  int sign = 0;
  for (int i = 0; i < kDomainSamples; ++i) {
    const double x = std::exp(lo + (hi - lo) * i / (kDomainSamples - 1));
    const double y = sub(x);
    bool bad = std::isnan(y);
    switch (req) {
      case Requirement::nonvanishing: {
        const int s = y > 0 ? 1 : (y < 0 ? -1 : 0);
        bad = bad || s == 0 || (sign != 0 && s != sign);
        sign = s;
        break;
      }
      case Requirement::positive: bad = bad || !(y > 0); break;
      case Requirement::nonnegative: bad = bad || !(y >= 0); break;
    }
    if (bad) {
      char xs[32];
      std::snprintf(xs, sizeof xs, "%.6g", x);
      throw DomainError(std::string(what) + " " + sub.to_string() + " is invalid near x = " + xs);
    }
  }
}

void validate_node(const NodePtr& n) {
  if (n->lhs) validate_node(n->lhs);
  if (n->rhs) validate_node(n->rhs);
  switch (n->op) {
    case Op::div: check_samples(Expression(n->rhs), Requirement::nonvanishing, "denominator"); break;
    case Op::log: check_samples(Expression(n->lhs), Requirement::positive, "log argument"); break;
    case Op::pow: {
      const double p = n->value;
      const bool integer = p == std::floor(p);
      if (!integer)
        check_samples(Expression(n->lhs), p < 0 ? Requirement::positive : Requirement::nonnegative,
                      "base of fractional power");
      else if (p < 0)
        check_samples(Expression(n->lhs), Requirement::nonvanishing, "base of negative power");
      break;
    }
    default: break;
  }
}

}  // namespace

void validate_domain(const Expression& e) { validate_node(e.node()); }

Expression parse(std::string_view source) {
  Expression e = Parser(source).parse_all();
  validate_domain(e);
  return e;
}

}  // namespace volterra
