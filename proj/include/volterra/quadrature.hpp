// Adaptive Gauss-Kronrod quadrature on finite intervals and semi-infinite
// tails, with a divergence diagnosis for integrals that do not exist.
#ifndef VOLTERRA_QUADRATURE_HPP
#define VOLTERRA_QUADRATURE_HPP

#include <functional>
#include <limits>
#include <optional>

#include "volterra/expression.hpp"

namespace volterra::quad {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Status { converged, diverges, max_subdivisions };

const char* to_string(Status s) noexcept;

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // absolute
  Status status = Status::converged;
  // Set when status == diverges: log-log slope of dyadic increments, measured
  // toward the singular end. Divergence is declared above -0.05.
  std::optional<double> growth_exponent;
  int intervals = 0;

  bool finite() const noexcept { return status != Status::diverges; }
};

/// Convergence when error_estimate <= max(abs, rel * |value|).
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-12;

  static Tolerance absolute(double t) { return {t, 0.0}; }
  static Tolerance relative(double t) { return {0.0, t}; }
  double bound(double value) const noexcept;
};

inline constexpr int kMaxSubdivisions = 10000;
inline constexpr double kDivergenceSlope = -0.05;

using Integrand = std::function<double(double)>;

/// Integral over (a, b) with 0 <= a < b. a == 0 is the limit a -> 0+; an
/// integrand larger than 1e6 at 1e-12 is integrated after x = s^2.
IntegralResult integrate_finite(const Integrand& f, double a, double b, Tolerance tol = {});

/// Integral over (a, inf), a > 0, through x = a + a t / (1 - t).
IntegralResult integrate_tail(const Integrand& f, double a, Tolerance tol = {});

/// sqrt of the integral of g^2 over (a, b); b may be kInfinity, a may be 0.
IntegralResult weighted_l2_norm(const Integrand& g, double a, double b, Tolerance tol = {});

IntegralResult integrate_finite(const Expression& f, double a, double b, Tolerance tol = {});
IntegralResult integrate_tail(const Expression& f, double a, Tolerance tol = {});
IntegralResult weighted_l2_norm(const Expression& g, double a, double b, Tolerance tol = {});

/// Growth exponent of dyadic increments of the integral near an endpoint.
/// toward_infinity: blocks (a 2^(j-1), a 2^j); otherwise blocks
/// (b 2^-j, b 2^(1-j)), j = 1..40. Returns +inf when an increment overflows
/// and -inf when the increments vanish.
double dyadic_growth_exponent(const Integrand& f, double endpoint, bool toward_infinity);

}  // namespace volterra::quad

#endif  // VOLTERRA_QUADRATURE_HPP
