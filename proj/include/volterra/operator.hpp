// Volterra operators with polynomial-in-t kernels
//   (A f)(x) = \int_0^x sum_k a_k(x) t^k f(t) dt
// acting from L_{2,u} (norm ||u f||_2) to L_{2,v} on (0, inf).
#ifndef VOLTERRA_OPERATOR_HPP
#define VOLTERRA_OPERATOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "volterra/expression.hpp"
#include "volterra/hardy.hpp"

namespace volterra::op {

struct OperatorSpec {
  std::vector<Expression> coeffs;  // a_0 .. a_m

  OperatorSpec() = default;
  explicit OperatorSpec(std::vector<Expression> c);

  int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

  /// The single component a_k(x) \int_0^x t^k f(t) dt, as a spec of the same degree.
  OperatorSpec component(int k) const;

  /// A(x, t).
  double kernel(double x, double t) const noexcept;
};

enum class Spacing { log, linear };

struct GridSpec {
  double x_max = 1e2;
  int n = 512;
  Spacing spacing = Spacing::log;
  double x_min = 1e-12;  // first log cell edge; ignored for linear spacing

  bool operator==(const GridSpec&) const = default;
};

/// Cell midpoints and weights; n >= 16, 0 < x_min < x_max.
struct Grid {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

Grid make_grid(const GridSpec& spec);

/// X in {1e2, 1e3, 1e4} with n in {512, 1024, 2048}, log cells from 1e-12.
std::vector<GridSpec> default_ladder();

/// (A f)(x) by quadrature of the moments \int_0^x t^k f(t) dt, each to tol / (m+1).
double apply(const OperatorSpec& spec, const Expression& f, double x, double tol = 1e-9);

/// M[i][j] = sqrt(w_i) v(x_i) A(x_i, x_j) / u(x_j) sqrt(w_j) for j < i, half
/// that on the diagonal, zero above. Its largest singular value approximates
/// the norm of the operator truncated to the grid range.
Eigen::MatrixXd discretize(const OperatorSpec& spec, const Expression& u, const Expression& v, const GridSpec& grid);

struct NormEstimate {
  double value = 0.0;
  GridSpec grid;
  bool converged = false;
  int iterations = 0;
  // Per ladder level (grid, value); a single entry for a plain matrix estimate.
  std::vector<std::pair<GridSpec, double>> levels;
};

inline constexpr int kMaxPowerIterations = 10000;

/// Largest singular value by power iteration on M^T M from the all-ones
/// vector. converged is false when kMaxPowerIterations is reached first.
template <typename Derived>
NormEstimate norm_estimate(const Eigen::MatrixBase<Derived>& M, double rtol = 1e-6) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  NormEstimate est;
  Vector x = Vector::Ones(M.cols()) / std::sqrt(static_cast<Scalar>(M.cols()));
  Vector y(M.rows()), z(M.cols());
  Scalar sigma = 0;
  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    y.noalias() = M * x;
    z.noalias() = M.transpose() * y;
    const Scalar next = std::sqrt(std::max(Scalar(0), x.dot(z)));
    const Scalar zn = z.norm();
    est.iterations = it;
    if (zn == Scalar(0)) {
      sigma = 0;
      est.converged = true;
      break;
    }
    x = z / zn;
    if (std::abs(next - sigma) <= rtol * next) {
      sigma = next;
      est.converged = true;
      break;
    }
    sigma = next;
  }
  est.value = static_cast<double>(sigma);
  return est;
}

struct LadderOptions {
  double power_rtol = 1e-6;
  // Two consecutive ladder levels within this relative distance count as converged.
  double ladder_rtol = 0.01;

  bool operator==(const LadderOptions&) const = default;
};

/// Norm estimates over a ladder of grids; value and grid are the last level's.
NormEstimate ladder_norm(const OperatorSpec& spec, const Expression& u, const Expression& v,
                         const std::vector<GridSpec>& grids, const LadderOptions& options = {});

struct SplittingOptions {
  LadderOptions ladder;
  double tol = 1e-9;   // s_k search tolerance
  double delta = 0.0;  // doubling scale of u^{-2}; enables the side condition check when > 0
};

struct SplittingReport {
  std::vector<hardy::HardyResult> s_values;
  double sum_s = 0.0;
  NormEstimate whole_norm;
  std::vector<NormEstimate> component_norms;
  // ||A|| <= sum_k ||A_k|| <= 2 sum_k s_k, up to the ladder tolerance.
  bool sandwich_upper_ok = true;
  // ||A|| / sum s_k, the empirical lower constant (reported only).
  std::optional<double> lower_ratio;
  // (X, truncated norm) along the ladder when some s_k is infinite.
  std::vector<std::pair<double, double>> divergence_profile;
  std::optional<double> divergence_slope;
  // a_k v in L2(0, r) for k < m, checked when delta > 0.
  std::optional<bool> side_condition_ok;
};

SplittingReport splitting_report(const OperatorSpec& spec, const Expression& u, const Expression& v,
                                 const hardy::SearchConfig& search = {},
                                 const std::vector<GridSpec>& grids = default_ladder(),
                                 const SplittingOptions& options = {});

/// Least-squares slope of log(value) against log(X).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace volterra::op

#endif  // VOLTERRA_OPERATOR_HPP
