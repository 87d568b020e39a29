#include "volterra/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace volterra::quad {

const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::converged: return "converged";
    case Status::diverges: return "diverges";
    case Status::max_subdivisions: return "max_subdivisions";
  }
  return "unknown";
}

double Tolerance::bound(double value) const noexcept { return std::max(abs, rel * std::fabs(value)); }

namespace {

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a, b;
  double value;
  double error;
  bool splittable;
};

Segment kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double resabs = std::fabs(kronrod);
  bool finite = std::isfinite(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    finite = finite && std::isfinite(f1) && std::isfinite(f2);
    kronrod += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, kronrod * half, std::fabs((kronrod - gauss) * half), true};
  const double width = b - a;
  s.splittable = width > 8 * kEps * std::max(std::fabs(a), std::fabs(b)) && width > 1e-290 &&
                 center > a && center < b;
  if (!finite) {
    s.value = 0.0;
    s.error = std::numeric_limits<double>::infinity();
  } else if (s.error <= 50 * kEps * resabs * half) {
    s.splittable = false;  // at roundoff level
  }
  return s;
}

struct Adaptive {
  double value;
  double error;
  bool converged;
  int intervals;
};

// Exact re-summation in index order keeps totals free of cancellation drift.
void resum(const std::vector<Segment>& segments, double& value, double& error, double& frozen) {
  value = 0.0;
  error = 0.0;
  frozen = 0.0;
  for (const auto& s : segments) {
    value += s.value;
    error += s.error;
    if (!s.splittable) frozen += s.error;
  }
}

Adaptive adaptive(const Integrand& f, double a, double b, Tolerance tol) {
  std::vector<Segment> segments;
  segments.reserve(64);
  auto by_error = [&](std::size_t i, std::size_t j) { return segments[i].error < segments[j].error; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);

  segments.push_back(kronrod(f, a, b));
  if (segments[0].splittable) queue.push(0);
  double value = segments[0].value;
  double error = segments[0].error;
  // Error held by segments that cannot be split any further. Once it alone
  // exceeds the bound, convergence is out of reach.
  double frozen = segments[0].splittable ? 0.0 : error;

  while (!(error <= tol.bound(value)) && !(frozen > tol.bound(value)) && !queue.empty() &&
         segments.size() < static_cast<std::size_t>(kMaxSubdivisions)) {
    const std::size_t i = queue.top();
    queue.pop();
    const Segment parent = segments[i];
    const double mid = 0.5 * (parent.a + parent.b);
    Segment left = kronrod(f, parent.a, mid);
    Segment right = kronrod(f, mid, parent.b);
    segments[i] = left;
    segments.push_back(right);
    if (left.splittable) queue.push(i);
    if (right.splittable) queue.push(segments.size() - 1);
    value += left.value + right.value - parent.value;
    error += left.error + right.error - parent.error;
    if (!left.splittable) frozen += left.error;
    if (!right.splittable) frozen += right.error;
    if (segments.size() % 64 == 0 || error <= tol.bound(value) || !std::isfinite(error) || !std::isfinite(frozen))
      resum(segments, value, error, frozen);
  }
  resum(segments, value, error, frozen);
  return {value, error, error <= tol.bound(value), static_cast<int>(segments.size())};
}

IntegralResult from_adaptive(const Adaptive& r) {
  IntegralResult out;
  out.value = r.value;
  out.error_estimate = r.error;
  out.status = r.converged ? Status::converged : Status::max_subdivisions;
  out.intervals = r.intervals;
  return out;
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

constexpr int kDyadicBlocks = 40;

}  // namespace

double dyadic_growth_exponent(const Integrand& f, double endpoint, bool toward_infinity) {
  std::vector<double> logs;
  logs.reserve(kDyadicBlocks);
  for (int j = 1; j <= kDyadicBlocks; ++j) {
    double lo, hi;
    if (toward_infinity) {
      lo = std::ldexp(endpoint, j - 1);
      hi = std::ldexp(endpoint, j);
    } else {
      lo = std::ldexp(endpoint, -j);
      hi = std::ldexp(endpoint, 1 - j);
    }
    const Adaptive r = adaptive(f, lo, hi, Tolerance{0.0, 1e-6});
    if (!std::isfinite(r.value) || !std::isfinite(r.error)) return std::numeric_limits<double>::infinity();
    logs.push_back(std::log(std::fabs(r.value)));
  }
  // Slopes over the last ten and last five blocks; both must exceed the
  // threshold for the growth to count as stabilised.
  double worst = std::numeric_limits<double>::infinity();
  for (int window : {10, 5}) {
    std::vector<double> xs, ys;
    for (int j = kDyadicBlocks - window; j < kDyadicBlocks; ++j) {
      if (!std::isfinite(logs[j])) return -std::numeric_limits<double>::infinity();
      xs.push_back((j + 1) * std::log(2.0));
      ys.push_back(logs[j]);
    }
    worst = std::min(worst, ls_slope(xs, ys));
  }
  return worst;
}

IntegralResult integrate_finite(const Integrand& f, double a, double b, Tolerance tol) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b))
    throw std::invalid_argument("integrate_finite requires 0 <= a < b < inf");
  Adaptive r{};
  const double probe = a == 0.0 ? std::fabs(f(1e-12)) : 0.0;
  if (a == 0.0 && !(probe <= 1e6)) {
    const Integrand g = [&f](double s) { return 2.0 * s * f(s * s); };
    r = adaptive(g, 0.0, std::sqrt(b), tol);
  } else {
    r = adaptive(f, a, b, tol);
  }
  IntegralResult out = from_adaptive(r);
  if (!r.converged && a == 0.0) {
    const double growth = dyadic_growth_exponent(f, b, false);
    if (growth > kDivergenceSlope) {
      out.status = Status::diverges;
      out.value = kInfinity;
      out.growth_exponent = growth;
    }
  }
  return out;
}

IntegralResult integrate_tail(const Integrand& f, double a, Tolerance tol) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("integrate_tail requires a > 0");
  const Integrand g = [&f, a](double t) {
    const double s = 1.0 - t;
    const double x = a / s;
    double y = f(x);
    // inf * 0 artefacts of decaying integrands far beyond any sampled scale.
    if (std::isnan(y) && x > 1e15) y = 0.0;
    return y * (a / (s * s));
  };
  const Adaptive r = adaptive(g, 0.0, 1.0, tol);
  IntegralResult out = from_adaptive(r);
  if (!r.converged) {
    const double growth = dyadic_growth_exponent(f, a, true);
    if (growth > kDivergenceSlope) {
      out.status = Status::diverges;
      out.value = kInfinity;
      out.growth_exponent = growth;
    }
  }
  return out;
}

namespace {

IntegralResult combine(const IntegralResult& head, const IntegralResult& tail) {
  IntegralResult out;
  out.value = head.value + tail.value;
  out.error_estimate = head.error_estimate + tail.error_estimate;
  out.intervals = head.intervals + tail.intervals;
  if (head.status == Status::diverges || tail.status == Status::diverges) {
    out.status = Status::diverges;
    out.value = kInfinity;
    out.growth_exponent = head.status == Status::diverges ? head.growth_exponent : tail.growth_exponent;
  } else if (head.status == Status::max_subdivisions || tail.status == Status::max_subdivisions) {
    out.status = Status::max_subdivisions;
  }
  return out;
}

IntegralResult integrate_square(const Integrand& g, double a, double b, Tolerance tol) {
  const Integrand sq = [&g](double x) {
    const double y = g(x);
    return y * y;
  };
  if (std::isinf(b)) {
    if (a == 0.0) {
      // Split so the error budget is shared by both halves.
      const Tolerance half{tol.abs / 2, tol.rel};
      return combine(integrate_finite(sq, 0.0, 1.0, half), integrate_tail(sq, 1.0, half));
    }
    return integrate_tail(sq, a, tol);
  }
  return integrate_finite(sq, a, b, tol);
}

}  // namespace

IntegralResult weighted_l2_norm(const Integrand& g, double a, double b, Tolerance tol) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("weighted_l2_norm requires 0 <= a < b");
  // |d sqrt(I)| = |dI| / (2 sqrt(I)): relative error halves, absolute error
  // needs the norm itself, so refine once if the first pass misses.
  Tolerance inner{tol.abs, 2.0 * tol.rel};
  IntegralResult sq = integrate_square(g, a, b, inner);
  auto to_norm = [](const IntegralResult& r) {
    IntegralResult out = r;
    if (r.status == Status::diverges) return out;
    out.value = std::sqrt(std::max(0.0, r.value));
    out.error_estimate = out.value > 0.0 ? r.error_estimate / (2.0 * out.value) : std::sqrt(r.error_estimate);
    return out;
  };
  IntegralResult norm = to_norm(sq);
  if (norm.status == Status::converged && !(norm.error_estimate <= tol.bound(norm.value)) && norm.value > 0.0) {
    inner.abs = std::min(inner.abs, tol.abs * norm.value);
    norm = to_norm(integrate_square(g, a, b, inner));
  }
  if (norm.status == Status::converged && !(norm.error_estimate <= tol.bound(norm.value)))
    norm.status = Status::max_subdivisions;
  return norm;
}

// Expressions are integrated through their significant values so that
// cancellation noise left after the true integrand has decayed does not
// read as a non-decaying tail.

IntegralResult integrate_finite(const Expression& f, double a, double b, Tolerance tol) {
  return integrate_finite(Integrand([&f](double x) { return f.significant(x); }), a, b, tol);
}

IntegralResult integrate_tail(const Expression& f, double a, Tolerance tol) {
  return integrate_tail(Integrand([&f](double x) { return f.significant(x); }), a, tol);
}

IntegralResult weighted_l2_norm(const Expression& g, double a, double b, Tolerance tol) {
  return weighted_l2_norm(Integrand([&g](double x) { return g.significant(x); }), a, b, tol);
}

}  // namespace volterra::quad
