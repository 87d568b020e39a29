#include "volterra/operator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "volterra/parallel.hpp"
#include "volterra/quadrature.hpp"

namespace volterra::op {

OperatorSpec::OperatorSpec(std::vector<Expression> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) throw std::invalid_argument("operator needs at least one coefficient");
}

OperatorSpec OperatorSpec::component(int k) const {
  if (k < 0 || k > degree()) throw std::out_of_range("component index out of range");
  std::vector<Expression> c(coeffs.size(), Expression::constant(0.0));
  c[k] = coeffs[k];
  return OperatorSpec(std::move(c));
}

double OperatorSpec::kernel(double x, double t) const noexcept {
  double sum = 0.0, tk = 1.0;
  for (const auto& a : coeffs) {
    sum += a(x) * tk;
    tk *= t;
  }
  return sum;
}

Grid make_grid(const GridSpec& spec) {
  if (spec.n < 16) throw std::invalid_argument("grid needs n >= 16, got " + std::to_string(spec.n));
  if (!(spec.x_max > 0.0)) throw std::invalid_argument("grid needs x_max > 0");
  Grid g{Eigen::VectorXd(spec.n), Eigen::VectorXd(spec.n)};
  if (spec.spacing == Spacing::linear) {
    const double h = spec.x_max / spec.n;
    for (int i = 0; i < spec.n; ++i) {
      g.nodes[i] = (i + 0.5) * h;
      g.weights[i] = h;
    }
    return g;
  }
  if (!(spec.x_min > 0.0) || !(spec.x_min < spec.x_max))
    throw std::invalid_argument("log grid needs 0 < x_min < x_max");
  // Midpoints in log coordinates; dx = x ds.
  const double lo = std::log(spec.x_min);
  const double h = (std::log(spec.x_max) - lo) / spec.n;
  for (int i = 0; i < spec.n; ++i) {
    g.nodes[i] = std::exp(lo + (i + 0.5) * h);
    g.weights[i] = g.nodes[i] * h;
  }
  return g;
}

std::vector<GridSpec> default_ladder() {
  return {GridSpec{1e2, 512}, GridSpec{1e3, 1024}, GridSpec{1e4, 2048}};
}

double apply(const OperatorSpec& spec, const Expression& f, double x, double tol) {
  if (!(x > 0.0)) throw DomainError("apply requires x > 0");
  const int m = spec.degree();
  const quad::Tolerance each{tol / (m + 1), 1e-13};
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const Expression& a = spec.coeffs[k];
    if (a.is_zero()) continue;
    const quad::Integrand moment = [&f, k](double t) { return std::pow(t, k) * f(t); };
    const auto r = quad::integrate_finite(moment, 0.0, x, each);
    if (r.status != quad::Status::converged)
      throw EvaluationError("moment " + std::to_string(k) + " of " + f.to_string() + " on (0, x): " +
                            quad::to_string(r.status));
    sum += evaluate(a, x) * r.value;
  }
  return sum;
}

namespace {

Eigen::VectorXd sample(const Expression& e, const Eigen::VectorXd& xs, const char* what) {
  Eigen::VectorXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    out[i] = e(xs[i]);
    if (!std::isfinite(out[i]))
      throw EvaluationError(std::string(what) + " " + e.to_string() + " is not finite at x = " +
                            std::to_string(xs[i]));
  }
  return out;
}

}  // namespace

Eigen::MatrixXd discretize(const OperatorSpec& spec, const Expression& u, const Expression& v, const GridSpec& grid) {
  const Grid g = make_grid(grid);
  const Eigen::Index n = g.nodes.size();
  const Eigen::VectorXd uu = sample(u, g.nodes, "weight u");
  if ((uu.array() <= 0.0).any()) throw DomainError("weight u must be positive on the grid");
  const Eigen::VectorXd sw = g.weights.cwiseSqrt();
  const Eigen::VectorXd left = sw.cwiseProduct(sample(v, g.nodes, "weight v"));
  const Eigen::VectorXd right = sw.cwiseQuotient(uu);

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd tk = Eigen::VectorXd::Ones(n);
  for (int k = 0; k <= spec.degree(); ++k) {
    if (!spec.coeffs[k].is_zero()) K.noalias() += sample(spec.coeffs[k], g.nodes, "coefficient") * tk.transpose();
    tk = tk.cwiseProduct(g.nodes);
  }
  Eigen::MatrixXd M = left.asDiagonal() * K * right.asDiagonal();
  M.triangularView<Eigen::StrictlyUpper>().setZero();
  M.diagonal() *= 0.5;
  return M;
}

NormEstimate ladder_norm(const OperatorSpec& spec, const Expression& u, const Expression& v,
                         const std::vector<GridSpec>& grids, const LadderOptions& options) {
  if (grids.empty()) throw std::invalid_argument("empty grid ladder");
  std::vector<NormEstimate> levels(grids.size());
  parallel_for(grids.size(), [&](std::size_t i) {
    levels[i] = norm_estimate(discretize(spec, u, v, grids[i]), options.power_rtol);
  });
  NormEstimate out = levels.back();
  out.grid = grids.back();
  for (std::size_t i = 0; i < grids.size(); ++i) out.levels.emplace_back(grids[i], levels[i].value);
  if (grids.size() >= 2) {
    const double last = levels.back().value, prev = levels[levels.size() - 2].value;
    out.converged = levels.back().converged && std::fabs(last - prev) <= options.ladder_rtol * last;
  }
  return out;
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  const double n = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += std::log(x) / n;
    my += std::log(y) / n;
  }
  double sxy = 0, sxx = 0;
  for (const auto& [x, y] : points) {
    sxy += (std::log(x) - mx) * (std::log(y) - my);
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
  }
  return sxy / sxx;
}

SplittingReport splitting_report(const OperatorSpec& spec, const Expression& u, const Expression& v,
                                 const hardy::SearchConfig& search, const std::vector<GridSpec>& grids,
                                 const SplittingOptions& options) {
  const int m = spec.degree();
  SplittingReport rep;
  rep.s_values.resize(m + 1);
  for (int k = 0; k <= m; ++k) rep.s_values[k] = hardy::s_k(u, v, spec.coeffs[k], k, search, options.tol);

  bool all_finite = true;
  for (const auto& s : rep.s_values) {
    rep.sum_s += s.supremum;
    all_finite = all_finite && s.verdict == hardy::Verdict::finite;
  }

  // Whole operator first, then each component; levels run concurrently inside.
  rep.whole_norm = ladder_norm(spec, u, v, grids, options.ladder);
  rep.component_norms.resize(m + 1);
  for (int k = 0; k <= m; ++k) rep.component_norms[k] = ladder_norm(spec.component(k), u, v, grids, options.ladder);

  if (all_finite) {
    rep.sandwich_upper_ok = rep.whole_norm.value <= 2.0 * rep.sum_s * (1.0 + options.ladder.ladder_rtol);
    if (rep.sum_s > 0.0) rep.lower_ratio = rep.whole_norm.value / rep.sum_s;
  } else {
    for (const auto& [grid, value] : rep.whole_norm.levels) rep.divergence_profile.emplace_back(grid.x_max, value);
    if (rep.divergence_profile.size() >= 2) rep.divergence_slope = loglog_slope(rep.divergence_profile);
  }

  if (options.delta > 0.0) {
    bool ok = true;
    for (int k = 0; k < m && ok; ++k) {
      const Expression av = spec.coeffs[k] * v;
      for (double r : {1e-3, 1.0, 1e3}) {
        if (quad::weighted_l2_norm(av, 0.0, r, quad::Tolerance::relative(1e-8)).status == quad::Status::diverges) {
          ok = false;
          break;
        }
      }
    }
    rep.side_condition_ok = ok;
  }
  return rep;
}

}  // namespace volterra::op
