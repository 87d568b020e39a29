// Weighted Hardy criterion and the doubling class.
//
// For weights v1, u1 the Hardy inequality
//   || v1(x) \int_0^x f ||_2 <= c || u1 f ||_2
// holds iff  sup_{r>0} F(r) < inf,  F(r) = ||v1||_{L2(r,inf)} ||1/u1||_{L2(0,r)}.
// The constants s_k of a kernel sum_k a_k(x) t^k are this supremum with
// v1 = a_k v and u1 = x^{-k} u.
#ifndef VOLTERRA_HARDY_HPP
#define VOLTERRA_HARDY_HPP

#include <optional>
#include <utility>
#include <vector>

#include "volterra/expression.hpp"
#include "volterra/quadrature.hpp"

namespace volterra::hardy {

enum class Verdict { finite, infinite };

const char* to_string(Verdict v) noexcept;

struct SearchConfig {
  double r_min = 1e-6;
  double r_max = 1e6;
  int r_count = 200;
  int golden_iterations = 40;
  // Boundary divergence: log-log growth of F over the end decade above this.
  double slope_threshold = 0.02;

  bool operator==(const SearchConfig&) const = default;
};

struct ProfileSample {
  double r;
  double value;
};

struct HardyResult {
  std::vector<ProfileSample> profile;
  double supremum = 0.0;  // +inf when verdict is infinite
  std::optional<double> argmax_r;
  Verdict verdict = Verdict::finite;
  // Growth rates of F toward r -> 0 and toward r -> inf (positive = growing).
  std::pair<double, double> boundary_slopes{0.0, 0.0};
  // Set when a factor norm diverged: which one and where it was observed.
  std::optional<quad::IntegralResult> divergent_factor;
};

/// F(r); +inf when either factor diverges (0 when the tail factor vanishes).
/// tol is relative; each factor is computed to tol / 10.
double hardy_profile(const Expression& v1, const Expression& u1, double r, double tol = 1e-9);

HardyResult hardy_constant(const Expression& v1, const Expression& u1, const SearchConfig& search = {},
                           double tol = 1e-9);

/// Criterion constant for the component a_k(x) \int_0^x t^k f(t) dt from
/// L_{2,u} to L_{2,v}.
HardyResult s_k(const Expression& u, const Expression& v, const Expression& a_k, int k,
                const SearchConfig& search = {}, double tol = 1e-9);

struct SamplingConfig {
  double center_min = 1e-6;
  double center_max = 1e6;
  int center_count = 60;
  double length_min = 1e-8;  // raised to delta when delta is larger
  double length_max = 1e6;
  int length_count = 60;
  double origin = 1e-12;  // left end of the (0, h) family
  double cap = 1e6;
  double slope_threshold = 0.02;
  // 2000-point grid for pointwise suprema of continuous functions.
  double sup_min = 1e-8;
  double sup_max = 1e8;
  int sup_count = 2000;

  bool operator==(const SamplingConfig&) const = default;
};

struct IntervalRatio {
  double center;
  double length;
  double ratio;
};

struct DoublingReport {
  double constant_estimate = 1.0;
  double delta = 0.0;
  bool member = true;
  IntervalRatio worst_interval{0.0, 0.0, 1.0};
  // Worst ratio per sampled length, in increasing length order.
  std::vector<IntervalRatio> per_length;
  // When member is false: the intervals over the final decade of lengths
  // whose ratios grow (or the first interval past the cap).
  std::vector<IntervalRatio> evidence;
};

/// Ratio of the integral of w over (c - L/2, c + L/2) to its integral over
/// the concentric half interval (c - L/4, c + L/4).
double doubling_ratio(const Expression& w, double center, double length);

DoublingReport doubling_constant(const Expression& w, double delta, const SamplingConfig& sampling = {});

/// Pointwise supremum of |g| on the sup grid with boundary growth analysis;
/// +inf when g grows at either end of the grid.
double sup_norm(const Expression& g, const SamplingConfig& sampling = {});

/// Log-spaced points, both ends included.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace volterra::hardy

#endif  // VOLTERRA_HARDY_HPP
