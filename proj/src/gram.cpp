#include "volterra/gram.hpp"

#include <algorithm>
#include <cmath>

#include "volterra/hardy.hpp"
#include "volterra/parallel.hpp"

namespace volterra::gram {

MomentMatrix moment_matrix(const Expression& u, double r, int m, double tol) {
  if (!(r > 0.0)) throw std::invalid_argument("moment_matrix requires r > 0");
  if (m < 0 || m > kMaxDegree) throw std::invalid_argument("moment_matrix requires 0 <= m <= 8");
  MomentMatrix G{r, m, Eigen::MatrixXd(m + 1, m + 1)};
  // One integral per distinct power i + j.
  for (int s = 0; s <= 2 * m; ++s) {
    const quad::Integrand f = [&u, s](double x) {
      const double w = u(x);
      return std::pow(x, s) / (w * w);
    };
    const auto res = quad::integrate_finite(f, 0.0, r, quad::Tolerance::relative(tol));
    if (res.status != quad::Status::converged)
      throw MomentError("moment x^" + std::to_string(s) + " u^-2 on (0, " + std::to_string(r) + "): " +
                            quad::to_string(res.status),
                        res.status);
    for (int i = std::max(0, s - m); i <= std::min(s, m); ++i) G.entries(i, s - i) = res.value;
  }
  return G;
}

GramProfile lemma1_scan(const Expression& u, int m, double r_lo, double r_hi, int n, double tol) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo) || n < 1) throw std::invalid_argument("lemma1_scan requires 0 < r_lo <= r_hi, n >= 1");
  const std::vector<double> rs = hardy::log_grid(r_lo, r_hi, n);
  GramProfile prof;
  prof.samples.resize(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    const MomentMatrix G = moment_matrix(u, rs[i], m, tol);
    prof.samples[i] = {rs[i], volume_ratio(G), m == 0 ? 1.0 : subspace_angle(G), log10_det(G.entries)};
  });

  const std::size_t count = prof.samples.size();
  std::size_t start = count - 1;
  for (std::size_t i = 0; i < count; ++i) {
    double running = prof.samples[i].rho;
    bool stable = true;
    for (std::size_t j = i + 1; j < count && stable; ++j) {
      stable = prof.samples[j].rho >= 0.9 * running;
      running = std::min(running, prof.samples[j].rho);
    }
    if (stable) {
      start = i;
      break;
    }
  }
  prof.suggested_r0 = start == 0 ? 0.0 : prof.samples[start].r;
  prof.inf_ratio = prof.samples[start].rho;
  for (std::size_t j = start; j < count; ++j) prof.inf_ratio = std::min(prof.inf_ratio, prof.samples[j].rho);
  return prof;
}

}  // namespace volterra::gram
