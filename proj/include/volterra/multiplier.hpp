// Pointwise multipliers between weighted Sobolev spaces W^{(l)}_{2,u} -> W^{(m)}_{2,v}
// on (0, inf) whose elements vanish at 0 to order l.
#ifndef VOLTERRA_MULTIPLIER_HPP
#define VOLTERRA_MULTIPLIER_HPP

#include <optional>
#include <utility>
#include <vector>

#include "volterra/expression.hpp"
#include "volterra/hardy.hpp"
#include "volterra/operator.hpp"

namespace volterra::mult {

struct MultiplierProblem {
  Expression phi;
  Expression u = Expression::constant(1.0);
  Expression v = Expression::constant(1.0);
  int l = 1;
  int m = 0;
  double delta = 0.0;  // doubling scale for the side condition on u^{-2}

  /// Throws std::invalid_argument unless l >= 1 and 0 <= m <= l.
  void validate() const;
};

struct ConditionValue {
  int k;
  double value;  // +inf when not finite
  bool finite;
};

struct SideConditions {
  hardy::DoublingReport doubling;                     // u^{-2} in B_delta
  std::vector<std::pair<double, bool>> v_inverse_l2;  // (r, 1/v in L2(0, r))
  bool satisfied = false;
};

struct MultiplierReport {
  std::vector<ConditionValue> cond6;
  std::vector<ConditionValue> cond7;
  std::optional<ConditionValue> cond8;  // only when m == l; k is unused
  bool verdict = false;
  SideConditions side;
};

/// ||(phi x^k)^{(m)} v||_{L2(0,inf)} for k = 0..l-1; tol is relative.
std::vector<ConditionValue> condition6(const MultiplierProblem& p, double tol = 1e-9);

/// sup_r ||(phi x^k)^{(m)} v||_{L2(r,inf)} ||x^{l-k-1} / u||_{L2(0,r)} for k = 0..l-1.
std::vector<ConditionValue> condition7(const MultiplierProblem& p, const hardy::SearchConfig& search = {},
                                       double tol = 1e-9);

/// sup |phi v / u|; requires m == l.
ConditionValue condition8(const MultiplierProblem& p, const hardy::SamplingConfig& sampling = {});

SideConditions side_conditions(const MultiplierProblem& p, const hardy::SamplingConfig& sampling = {});

MultiplierReport multiplier_verdict(const MultiplierProblem& p, const hardy::SearchConfig& search = {},
                                    const hardy::SamplingConfig& sampling = {}, double tol = 1e-9);

/// Kernel of g^{(l)} -> (phi g)^{(m)} - [m == l] phi g^{(l)} for g vanishing
/// at 0 to order l: coefficient of t^j, j = l-k-1, is
///   C(l-1, k) (-1)^j (phi x^k)^{(m)} / (l-1)!.
op::OperatorSpec operator_from_multiplier(const Expression& phi, int l, int m);

/// max over xs of |(phi g)^{(m)} - rhs| where rhs expands g by Taylor's
/// formula with the moments \int_0^x (-t)^{l-k-1} g^{(l)}(t) dt. g must satisfy
/// g^{(k)}(0) = 0 for k < l; this is not checked.
double lemma2_residual(const Expression& phi, const Expression& g, int l, int m, const std::vector<double>& xs);

}  // namespace volterra::mult

#endif  // VOLTERRA_MULTIPLIER_HPP
