#include "jobs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "volterra/gram.hpp"
#include "volterra/hardy.hpp"
#include "volterra/multiplier.hpp"
#include "volterra/operator.hpp"

namespace volterra::cli {

namespace {

// 10 significant digits; integral values keep a trailing ".0".
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

Table profile_table(const std::vector<hardy::ProfileSample>& profile) {
  Table t{{"r", "value"}, {}};
  for (const auto& s : profile) t.rows.push_back({s.r, s.value});
  return t;
}

void describe(std::ostream& out, const hardy::HardyResult& r) {
  out << "verdict: " << hardy::to_string(r.verdict) << "\n";
  out << "supremum: " << num(r.supremum) << "\n";
  if (r.argmax_r) out << "argmax_r: " << num(*r.argmax_r) << "\n";
  out << "boundary_slopes: " << num(r.boundary_slopes.first) << ", " << num(r.boundary_slopes.second) << "\n";
  if (r.divergent_factor) {
    const auto& f = *r.divergent_factor;
    out << "divergent_factor: " << quad::to_string(f.status);
    if (f.growth_exponent) out << ", growth exponent " << num(*f.growth_exponent);
    out << "\n";
  }
}

JobResult run_hardy(const JobConfig& c) {
  const auto r = hardy::hardy_constant(parse(c.v1), parse(c.u1), c.search, c.tol);
  std::ostringstream out;
  out << "job: hardy\nv1: " << c.v1 << "\nu1: " << c.u1 << "\n";
  describe(out, r);
  JobResult res{out.str(), {{"profile.csv", profile_table(r.profile)}}, kExitOk};
  if (r.verdict == hardy::Verdict::infinite) res.exit_code = kExitDivergent;
  return res;
}

JobResult run_s_k(const JobConfig& c) {
  const auto r = hardy::s_k(parse(c.u), parse(c.v), parse(c.a), c.k, c.search, c.tol);
  std::ostringstream out;
  out << "job: s_k\nu: " << c.u << "\nv: " << c.v << "\na_" << c.k << ": " << c.a << "\nk: " << c.k << "\n";
  describe(out, r);
  JobResult res{out.str(), {{"profile.csv", profile_table(r.profile)}}, kExitOk};
  if (r.verdict == hardy::Verdict::infinite) res.exit_code = kExitDivergent;
  return res;
}

JobResult run_doubling(const JobConfig& c) {
  const auto r = hardy::doubling_constant(parse(c.w), c.delta, c.sampling);
  std::ostringstream out;
  out << "job: doubling\nw: " << c.w << "\ndelta: " << num(c.delta) << "\n";
  out << "member: " << yes_no(r.member) << "\n";
  out << "constant_estimate: " << num(r.constant_estimate) << "\n";
  out << "worst_interval: center " << num(r.worst_interval.center) << ", length " << num(r.worst_interval.length)
      << ", ratio " << num(r.worst_interval.ratio) << "\n";
  for (const auto& e : r.evidence)
    out << "evidence: center " << num(e.center) << ", length " << num(e.length) << ", ratio " << num(e.ratio) << "\n";
  Table t{{"length", "center", "ratio"}, {}};
  for (const auto& p : r.per_length) t.rows.push_back({p.length, p.center, p.ratio});
  JobResult res{out.str(), {}, r.member ? kExitOk : kExitDivergent};
  if (!t.rows.empty()) res.tables.emplace_back("per_length.csv", std::move(t));
  return res;
}

Table ladder_table(const op::NormEstimate& est) {
  Table t{{"x_max", "n", "value"}, {}};
  for (const auto& [g, v] : est.levels) t.rows.push_back({g.x_max, static_cast<double>(g.n), v});
  return t;
}

JobResult run_operator(const JobConfig& c) {
  std::vector<Expression> coeffs;
  for (const auto& e : c.coeffs) coeffs.push_back(parse(e));
  const op::OperatorSpec spec(std::move(coeffs));
  const op::SplittingOptions options{c.ladder, c.tol, c.delta};
  const auto r = op::splitting_report(spec, parse(c.u), parse(c.v), c.search, c.grids, options);

  std::ostringstream out;
  out << "job: operator\nu: " << c.u << "\nv: " << c.v << "\n";
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) out << "a_" << k << ": " << c.coeffs[k] << "\n";
  bool finite = true;
  for (std::size_t k = 0; k < r.s_values.size(); ++k) {
    out << "s_" << k << ": " << num(r.s_values[k].supremum) << " (" << hardy::to_string(r.s_values[k].verdict)
        << ")\n";
    finite = finite && r.s_values[k].verdict == hardy::Verdict::finite;
  }
  out << "sum_s: " << num(r.sum_s) << "\n";
  out << "norm_estimate: " << num(r.whole_norm.value) << "\n";
  out << "ladder_converged: " << yes_no(r.whole_norm.converged) << "\n";
  for (std::size_t k = 0; k < r.component_norms.size(); ++k)
    out << "component_norm_" << k << ": " << num(r.component_norms[k].value) << "\n";
  out << "sandwich_upper_ok: " << yes_no(r.sandwich_upper_ok) << "\n";
  if (r.lower_ratio) out << "lower_ratio: " << num(*r.lower_ratio) << "\n";
  if (r.divergence_slope) out << "divergence_slope: " << num(*r.divergence_slope) << "\n";
  if (r.side_condition_ok) out << "side_condition_ok: " << yes_no(*r.side_condition_ok) << "\n";
  out << "verdict: " << (finite ? "bounded" : "unbounded") << "\n";

  JobResult res{out.str(), {{"ladder.csv", ladder_table(r.whole_norm)}}, finite ? kExitOk : kExitDivergent};
  for (std::size_t k = 0; k < r.component_norms.size(); ++k)
    res.tables.emplace_back("ladder_component_" + std::to_string(k) + ".csv", ladder_table(r.component_norms[k]));
  for (std::size_t k = 0; k < r.s_values.size(); ++k)
    res.tables.emplace_back("profile_s_" + std::to_string(k) + ".csv", profile_table(r.s_values[k].profile));
  return res;
}

JobResult run_gram(const JobConfig& c) {
  const auto p = gram::lemma1_scan(parse(c.u), c.m, c.r_lo, c.r_hi, c.r_count, c.tol);
  std::ostringstream out;
  out << "job: gram\nu: " << c.u << "\nm: " << c.m << "\n";
  out << "inf_ratio: " << num(p.inf_ratio) << "\n";
  out << "suggested_r0: " << num(p.suggested_r0) << "\n";
  Table rho{{"r", "value"}, {}}, sin{{"r", "value"}, {}}, det{{"r", "value"}, {}};
  for (const auto& s : p.samples) {
    rho.rows.push_back({s.r, s.rho});
    sin.rows.push_back({s.r, s.sin_theta});
    det.rows.push_back({s.r, s.log10_det});
  }
  return {out.str(), {{"rho.csv", rho}, {"sin_theta.csv", sin}, {"log10_det.csv", det}}, kExitOk};
}

JobResult run_multiplier(const JobConfig& c) {
  const mult::MultiplierProblem p{parse(c.phi), parse(c.u), parse(c.v), c.l, c.m, c.delta};
  const auto r = mult::multiplier_verdict(p, c.search, c.sampling, c.tol);
  std::ostringstream out;
  out << "job: multiplier\nphi: " << c.phi << "\nu: " << c.u << "\nv: " << c.v << "\nl: " << c.l << "\nm: " << c.m
      << "\n";
  Table t{{"k", "cond6", "cond7"}, {}};
  for (std::size_t k = 0; k < r.cond6.size(); ++k) {
    out << "cond6_" << k << ": " << num(r.cond6[k].value) << "\n";
    out << "cond7_" << k << ": " << num(r.cond7[k].value) << "\n";
    t.rows.push_back({static_cast<double>(k), r.cond6[k].value, r.cond7[k].value});
  }
  if (r.cond8) out << "cond8: " << num(r.cond8->value) << "\n";
  out << "side_conditions: " << (r.side.satisfied ? "satisfied" : "not satisfied") << "\n";
  out << "u^-2 doubling: " << yes_no(r.side.doubling.member) << "\n";
  for (const auto& [radius, ok] : r.side.v_inverse_l2)
    out << "1/v in L2(0, " << radius << "): " << yes_no(ok) << "\n";
  out << "verdict: " << (r.verdict ? "accepted" : "rejected") << "\n";
  return {out.str(), {{"conditions.csv", t}}, r.verdict ? kExitOk : kExitDivergent};
}

JobResult run_lemma2(const JobConfig& c) {
  const Expression phi = parse(c.phi);
  const Expression g = parse(c.g);
  std::ostringstream out;
  out << "job: lemma2\nphi: " << c.phi << "\ng: " << c.g << "\nl: " << c.l << "\nm: " << c.m << "\n";
  Table t{{"x", "residual"}, {}};
  double worst = 0.0;
  for (double x : c.xs) {
    const double r = mult::lemma2_residual(phi, g, c.l, c.m, {x});
    t.rows.push_back({x, r});
    worst = std::max(worst, r);
  }
  out << "max_residual: " << num(worst) << "\n";
  return {out.str(), {{"residual.csv", t}}, kExitOk};
}

}  // namespace

JobResult run_job(const JobConfig& c) {
  switch (c.kind) {
    case JobKind::hardy: return run_hardy(c);
    case JobKind::s_k: return run_s_k(c);
    case JobKind::doubling: return run_doubling(c);
    case JobKind::op: return run_operator(c);
    case JobKind::gram: return run_gram(c);
    case JobKind::multiplier: return run_multiplier(c);
    case JobKind::lemma2: return run_lemma2(c);
  }
  throw std::logic_error("unhandled job kind");
}

void write_outputs(const JobResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + (dir / "report.txt").string() + "'");
    out << result.report;
  }
  for (const auto& [name, table] : result.tables)
    if (!table.rows.empty()) emit_csv(dir / name, table);
}

}  // namespace volterra::cli
