// Moment Gram matrices of u^{-1}, x u^{-1}, ..., x^m u^{-1} on (0, r).
#ifndef VOLTERRA_GRAM_HPP
#define VOLTERRA_GRAM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "volterra/expression.hpp"
#include "volterra/quadrature.hpp"

namespace volterra::gram {

class NotPositiveDefinite : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A moment integral failed (diverged or ran out of subdivisions).
class MomentError : public std::runtime_error {
 public:
  MomentError(const std::string& what, quad::Status status) : std::runtime_error(what), status_(status) {}
  quad::Status status() const noexcept { return status_; }

 private:
  quad::Status status_;
};

inline constexpr int kMaxDegree = 8;

struct MomentMatrix {
  double r = 0.0;
  int m = 0;
  Eigen::MatrixXd entries;  // G[i][j] = \int_0^r x^{i+j} u^{-2} dx
};

MomentMatrix moment_matrix(const Expression& u, double r, int m, double tol = 1e-12);

template <typename Derived>
using DenseOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// R[i][j] = G[i][j] / sqrt(G[i][i] G[j][j]).
template <typename Derived>
DenseOf<Derived> correlation(const Eigen::MatrixBase<Derived>& G) {
  if (G.rows() != G.cols() || G.rows() == 0) throw std::invalid_argument("Gram matrix must be square and non-empty");
  if (!(G.diagonal().array() > 0).all()) throw NotPositiveDefinite("Gram matrix has a non-positive diagonal entry");
  const auto d = G.diagonal().cwiseSqrt().cwiseInverse().eval();
  DenseOf<Derived> R = d.asDiagonal() * G * d.asDiagonal();
  R.diagonal().setOnes();
  return R;
}

namespace detail {

template <typename Matrix>
Matrix cholesky_factor(const Matrix& R) {
  Eigen::LLT<Matrix> llt(R);
  Matrix L = llt.matrixL();
  if (llt.info() != Eigen::Success || !(L.diagonal().array() > 0).all())
    throw NotPositiveDefinite("Cholesky factorization failed");
  return L;
}

}  // namespace detail

/// rho = sqrt(det R) in (0, 1]; 1 exactly when the edges are orthogonal.
template <typename Derived>
typename Derived::Scalar volume_ratio(const Eigen::MatrixBase<Derived>& G) {
  return detail::cholesky_factor(correlation(G)).diagonal().prod();
}

/// sin of the angle between edge 0 and the span of edges 1..m:
/// sqrt(det G / (G[0][0] det G_sub)). Needs at least two edges.
template <typename Derived>
typename Derived::Scalar subspace_angle(const Eigen::MatrixBase<Derived>& G) {
  const Eigen::Index n = G.rows();
  if (n < 2) throw std::invalid_argument("subspace_angle needs m >= 1");
  // Order edges 1..m, 0: the last Cholesky pivot is the normalized distance.
  Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
  for (Eigen::Index i = 0; i < n; ++i) P.indices()[i] = static_cast<int>((i + n - 1) % n);
  const DenseOf<Derived> R = correlation(G);
  const DenseOf<Derived> moved = P * R * P.transpose();
  return detail::cholesky_factor(moved)(n - 1, n - 1);
}

/// log10 det G from the normalized factorization.
template <typename Derived>
typename Derived::Scalar log10_det(const Eigen::MatrixBase<Derived>& G) {
  using std::log10;
  const auto L = detail::cholesky_factor(correlation(G));
  return 2 * L.diagonal().array().log10().sum() + G.diagonal().array().log10().sum();
}

inline double volume_ratio(const MomentMatrix& G) { return volume_ratio(G.entries); }
inline double subspace_angle(const MomentMatrix& G) { return subspace_angle(G.entries); }

struct GramSample {
  double r;
  double rho;
  double sin_theta;  // 1 when m = 0
  double log10_det;
};

struct GramProfile {
  std::vector<GramSample> samples;
  double inf_ratio = 1.0;
  double suggested_r0 = 0.0;
};

/// Samples rho and sin(theta) at n log-spaced r in [r_lo, r_hi].
/// suggested_r0 is the smallest sampled r from which rho never falls below
/// 0.9 times its running minimum (0 when the first sample qualifies);
/// inf_ratio is the minimum of rho from there on.
GramProfile lemma1_scan(const Expression& u, int m, double r_lo, double r_hi, int n, double tol = 1e-12);

}  // namespace volterra::gram

#endif  // VOLTERRA_GRAM_HPP
