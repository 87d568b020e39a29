#include "volterra/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "volterra/parallel.hpp"

namespace volterra::hardy {

const char* to_string(Verdict v) noexcept { return v == Verdict::finite ? "finite" : "infinite"; }

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 1) throw std::invalid_argument("log_grid requires 0 < lo <= hi, n >= 1");
  std::vector<double> xs(n);
  if (n == 1) {
    xs[0] = lo;
    return xs;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) xs[i] = std::exp(a + (b - a) * i / (n - 1));
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ProfilePoint {
  double value;
  std::optional<quad::IntegralResult> divergent;
};

ProfilePoint profile_point(const Expression& v1, const Expression& u1, double r, double tol) {
  const quad::Tolerance factor_tol = quad::Tolerance::relative(tol / 10);
  const auto tail = quad::weighted_l2_norm(v1, r, quad::kInfinity, factor_tol);
  if (tail.status == quad::Status::diverges) return {kInf, tail};
  if (tail.value == 0.0) return {0.0, std::nullopt};
  const quad::Integrand inverse = [&u1](double x) { return 1.0 / u1(x); };
  const auto head = quad::weighted_l2_norm(inverse, 0.0, r, factor_tol);
  if (head.status == quad::Status::diverges) return {kInf, head};
  return {tail.value * head.value, std::nullopt};
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Growth of |values| toward the low and high ends over one decade of the
// grid each; -inf when the values vanish there.
std::pair<double, double> end_growth(const std::vector<double>& grid, const std::vector<double>& values) {
  auto fit = [&](bool low) {
    std::vector<double> xs, ys;
    const double lo = grid.front() * 10, hi = grid.back() / 10;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const bool in = low ? grid[i] <= lo : grid[i] >= hi;
      if (!in || !(std::fabs(values[i]) > 0.0)) continue;
      xs.push_back(std::log(grid[i]));
      ys.push_back(std::log(std::fabs(values[i])));
    }
    if (xs.size() < 2) return -kInf;
    const double s = slope(xs, ys);
    return low ? -s : s;
  };
  return {fit(true), fit(false)};
}

}  // namespace

double hardy_profile(const Expression& v1, const Expression& u1, double r, double tol) {
  if (!(r > 0.0)) throw std::invalid_argument("hardy_profile requires r > 0");
  return profile_point(v1, u1, r, tol).value;
}

HardyResult hardy_constant(const Expression& v1, const Expression& u1, const SearchConfig& search, double tol) {
  if (search.r_count < 3) throw std::invalid_argument("search grid needs at least 3 points");
  const std::vector<double> rs = log_grid(search.r_min, search.r_max, search.r_count);
  std::vector<ProfilePoint> points(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) { points[i] = profile_point(v1, u1, rs[i], tol); });

  HardyResult result;
  std::vector<double> values(rs.size());
  result.profile.reserve(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    values[i] = points[i].value;
    result.profile.push_back({rs[i], values[i]});
    if (points[i].divergent && !result.divergent_factor) result.divergent_factor = points[i].divergent;
  }
  if (result.divergent_factor) {
    result.verdict = Verdict::infinite;
    result.supremum = kInf;
    result.boundary_slopes = {kInf, kInf};
    return result;
  }

  result.boundary_slopes = end_growth(rs, values);
  if (result.boundary_slopes.first > search.slope_threshold || result.boundary_slopes.second > search.slope_threshold) {
    result.verdict = Verdict::infinite;
    result.supremum = kInf;
    return result;
  }

  const std::size_t best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  double sup = values[best];
  double arg = rs[best];
  if (sup > 0.0) {
    // Golden-section refinement in log r over the neighbouring bracket.
    double lo = std::log(rs[best == 0 ? 0 : best - 1]);
    double hi = std::log(rs[std::min(best + 1, rs.size() - 1)]);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto eval = [&](double s) { return profile_point(v1, u1, std::exp(s), tol).value; };
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < search.golden_iterations; ++it) {
      if (fc >= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = eval(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = eval(d);
      }
    }
    if (fc > sup) {
      sup = fc;
      arg = std::exp(c);
    }
    if (fd > sup) {
      sup = fd;
      arg = std::exp(d);
    }
  }
  result.supremum = sup;
  result.argmax_r = arg;
  result.verdict = Verdict::finite;
  return result;
}

HardyResult s_k(const Expression& u, const Expression& v, const Expression& a_k, int k, const SearchConfig& search,
                double tol) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  const Expression v1 = a_k * v;
  const Expression u1 = k == 0 ? u : pow(Expression::variable(), -static_cast<double>(k)) * u;
  return hardy_constant(v1, u1, search, tol);
}

double doubling_ratio(const Expression& w, double center, double length) {
  // Integrate in the offset s = x - center so that the interval lengths are
  // exact even when length << center.
  const quad::Integrand folded = [&w, center](double s) { return w(center + s) + w(center - s); };
  const quad::Tolerance tol = quad::Tolerance::relative(1e-11);
  const auto whole = quad::integrate_finite(folded, 0.0, length / 2, tol);
  const auto half = quad::integrate_finite(folded, 0.0, length / 4, tol);
  return whole.value / half.value;
}

DoublingReport doubling_constant(const Expression& w, double delta, const SamplingConfig& sampling) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be non-negative");
  DoublingReport report;
  report.delta = delta;
  const double lmin = std::max(delta, sampling.length_min);
  const std::vector<double> lengths =
      lmin >= sampling.length_max ? std::vector<double>{lmin} : log_grid(lmin, sampling.length_max, sampling.length_count);
  const std::vector<double> centers = log_grid(sampling.center_min, sampling.center_max, sampling.center_count);

  std::vector<std::optional<IntervalRatio>> worst(lengths.size());
  parallel_for(lengths.size(), [&](std::size_t li) {
    const double L = lengths[li];
    std::optional<IntervalRatio> best;
    auto consider = [&](double c, double len) {
      const double ratio = doubling_ratio(w, c, len);
      if (std::isnan(ratio)) return;  // both integrals overflowed or vanished
      if (!best || ratio > best->ratio) best = IntervalRatio{c, len, ratio};
    };
    // The (0, h) family, h = L.
    if (L > sampling.origin) consider(0.5 * (sampling.origin + L), L - sampling.origin);
    for (double c : centers)
      if (c - L / 2 > 0.0) consider(c, L);
    worst[li] = best;
  });

  for (const auto& wl : worst)
    if (wl) report.per_length.push_back(*wl);
  for (const auto& p : report.per_length)
    if (p.ratio > report.worst_interval.ratio) report.worst_interval = p;
  report.constant_estimate = std::max(1.0, report.worst_interval.ratio);

  for (const auto& p : report.per_length) {
    if (p.ratio > sampling.cap) {
      report.member = false;
      report.evidence.push_back(p);
    }
  }
  if (!report.member) return report;

  // Growth over the last decade of usable lengths.
  if (report.per_length.size() >= 2) {
    const double last = report.per_length.back().length;
    std::vector<IntervalRatio> decade;
    for (const auto& p : report.per_length)
      if (p.length >= last / 10) decade.push_back(p);
    if (decade.size() >= 2) {
      bool increasing = true;
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < decade.size(); ++i) {
        if (i > 0 && !(decade[i].ratio > decade[i - 1].ratio)) increasing = false;
        xs.push_back(std::log(decade[i].length));
        ys.push_back(std::log(decade[i].ratio));
      }
      if (increasing && slope(xs, ys) > sampling.slope_threshold) {
        report.member = false;
        report.evidence = decade;
      }
    }
  }
  return report;
}

double sup_norm(const Expression& g, const SamplingConfig& sampling) {
  const std::vector<double> xs = log_grid(sampling.sup_min, sampling.sup_max, sampling.sup_count);
  std::vector<double> values(xs.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    values[i] = std::fabs(g(xs[i]));
    if (!std::isfinite(values[i])) return kInf;
    sup = std::max(sup, values[i]);
  }
  const auto [low, high] = end_growth(xs, values);
  if (low > sampling.slope_threshold || high > sampling.slope_threshold) return kInf;
  return sup;
}

}  // namespace volterra::hardy
