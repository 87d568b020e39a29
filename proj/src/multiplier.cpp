#include "volterra/multiplier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "volterra/parallel.hpp"
#include "volterra/quadrature.hpp"

namespace volterra::mult {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// (phi x^k)^{(m)}
Expression derived(const Expression& phi, int k, int m) { return differentiate(multiply_by_power(phi, k), m); }

}  // namespace

void MultiplierProblem::validate() const {
  if (l < 1) throw std::invalid_argument("multiplier problem needs l >= 1");
  if (m < 0 || m > l) throw std::invalid_argument("multiplier problem needs 0 <= m <= l");
}

std::vector<ConditionValue> condition6(const MultiplierProblem& p, double tol) {
  p.validate();
  std::vector<ConditionValue> out(p.l);
  parallel_for(p.l, [&](std::size_t i) {
    const int k = static_cast<int>(i);
    const auto n = quad::weighted_l2_norm(derived(p.phi, k, p.m) * p.v, 0.0, quad::kInfinity,
                                          quad::Tolerance::relative(tol));
    if (n.status == quad::Status::max_subdivisions)
      throw EvaluationError("condition6 norm for k = " + std::to_string(k) + " did not converge");
    const bool finite = n.status == quad::Status::converged;
    out[i] = {k, finite ? n.value : kInf, finite};
  });
  return out;
}

std::vector<ConditionValue> condition7(const MultiplierProblem& p, const hardy::SearchConfig& search, double tol) {
  p.validate();
  std::vector<ConditionValue> out;
  for (int k = 0; k < p.l; ++k) {
    const int j = p.l - k - 1;
    const Expression u1 = j == 0 ? p.u : pow(Expression::variable(), -static_cast<double>(j)) * p.u;
    const auto r = hardy::hardy_constant(derived(p.phi, k, p.m) * p.v, u1, search, tol);
    const bool finite = r.verdict == hardy::Verdict::finite;
    out.push_back({k, r.supremum, finite});
  }
  return out;
}

ConditionValue condition8(const MultiplierProblem& p, const hardy::SamplingConfig& sampling) {
  p.validate();
  if (p.m != p.l) throw std::invalid_argument("condition8 applies only when m == l");
  const double sup = hardy::sup_norm(p.phi * p.v / p.u, sampling);
  return {p.l, sup, std::isfinite(sup)};
}

SideConditions side_conditions(const MultiplierProblem& p, const hardy::SamplingConfig& sampling) {
  SideConditions side;
  side.doubling = hardy::doubling_constant(pow(p.u, -2.0), p.delta, sampling);
  const Expression inv = Expression::constant(1.0) / p.v;
  bool all = true;
  for (double r : {1e-3, 1.0, 1e3}) {
    const auto n = quad::weighted_l2_norm(inv, 0.0, r, quad::Tolerance::relative(1e-8));
    const bool ok = n.status != quad::Status::diverges;
    side.v_inverse_l2.emplace_back(r, ok);
    all = all && ok;
  }
  side.satisfied = all && side.doubling.member;
  return side;
}

MultiplierReport multiplier_verdict(const MultiplierProblem& p, const hardy::SearchConfig& search,
                                    const hardy::SamplingConfig& sampling, double tol) {
  p.validate();
  MultiplierReport rep;
  rep.cond6 = condition6(p, tol);
  rep.cond7 = condition7(p, search, tol);
  if (p.m == p.l) rep.cond8 = condition8(p, sampling);
  rep.verdict = true;
  for (const auto& c : rep.cond6) rep.verdict = rep.verdict && c.finite;
  for (const auto& c : rep.cond7) rep.verdict = rep.verdict && c.finite;
  if (rep.cond8) rep.verdict = rep.verdict && rep.cond8->finite;
  rep.side = side_conditions(p, sampling);
  return rep;
}

op::OperatorSpec operator_from_multiplier(const Expression& phi, int l, int m) {
  MultiplierProblem{phi, Expression::constant(1.0), Expression::constant(1.0), l, m}.validate();
  std::vector<Expression> coeffs(l, Expression::constant(0.0));
  for (int k = 0; k < l; ++k) {
    const int j = l - k - 1;
    const double c = binomial(l - 1, k) * (j % 2 == 0 ? 1.0 : -1.0) / factorial(l - 1);
    coeffs[j] = Expression::constant(c) * derived(phi, k, m);
  }
  return op::OperatorSpec(std::move(coeffs));
}

double lemma2_residual(const Expression& phi, const Expression& g, int l, int m, const std::vector<double>& xs) {
  MultiplierProblem{phi, Expression::constant(1.0), Expression::constant(1.0), l, m}.validate();
  const Expression lhs = differentiate(phi * g, m);
  const Expression gl = differentiate(g, l);
  std::vector<Expression> terms;
  for (int k = 0; k < l; ++k) terms.push_back(derived(phi, k, m));

  double worst = 0.0;
  for (double x : xs) {
    double rhs = m == l ? evaluate(phi, x) * evaluate(gl, x) : 0.0;
    for (int k = 0; k < l; ++k) {
      const int j = l - k - 1;
      const quad::Integrand moment = [&gl, j](double t) { return std::pow(-t, j) * gl(t); };
      const auto mom = quad::integrate_finite(moment, 0.0, x, quad::Tolerance{1e-12, 1e-12});
      if (mom.status != quad::Status::converged)
        throw EvaluationError("moment integral of g^(l) failed: " + std::string(quad::to_string(mom.status)));
      rhs += binomial(l - 1, k) / factorial(l - 1) * evaluate(terms[k], x) * mom.value;
    }
    worst = std::max(worst, std::fabs(evaluate(lhs, x) - rhs));
  }
  return worst;
}

}  // namespace volterra::mult
