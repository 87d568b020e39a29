#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "volterra/expression.hpp"

namespace volterra::cli {

namespace {

const std::map<std::string, JobKind> kKinds{{"hardy", JobKind::hardy},   {"s_k", JobKind::s_k},
                                           {"doubling", JobKind::doubling}, {"operator", JobKind::op},
                                           {"gram", JobKind::gram},       {"multiplier", JobKind::multiplier},
                                           {"lemma2", JobKind::lemma2}};

const std::set<std::string>& allowed_keys(JobKind kind) {
  static const std::map<JobKind, std::set<std::string>> keys{
      {JobKind::hardy, {"v1", "u1", "tol", "search"}},
      {JobKind::s_k, {"u", "v", "a", "k", "tol", "search"}},
      {JobKind::doubling, {"w", "delta", "sampling"}},
      {JobKind::op, {"coeffs", "u", "v", "delta", "tol", "search", "grids", "power_rtol", "ladder_rtol"}},
      {JobKind::gram, {"u", "m", "r_lo", "r_hi", "r_count", "tol"}},
      {JobKind::multiplier, {"phi", "u", "v", "l", "m", "delta", "tol", "search", "sampling"}},
      {JobKind::lemma2, {"phi", "g", "l", "m", "xs"}}};
  return keys.at(kind);
}

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_of(n)) + ": " + what);
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, "'" + key + "' must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, "'" + key + "' has an invalid value '" + n.Scalar() + "'");
  }
}

std::string expression(const YAML::Node& n, const std::string& key) {
  const auto text = scalar<std::string>(n, key);
  try {
    parse(text);
  } catch (const std::exception& e) {
    fail(n, "'" + key + "': " + e.what());
  }
  return text;
}

void check(bool ok, const YAML::Node& n, const std::string& what) {
  if (!ok) fail(n, what);
}

void read_search(const YAML::Node& n, hardy::SearchConfig& s) {
  if (!n.IsMap()) fail(n, "'search' must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& val = kv.second;
    if (key == "r_min") s.r_min = scalar<double>(val, key);
    else if (key == "r_max") s.r_max = scalar<double>(val, key);
    else if (key == "r_count") s.r_count = scalar<int>(val, key);
    else if (key == "golden_iterations") s.golden_iterations = scalar<int>(val, key);
    else if (key == "slope_threshold") s.slope_threshold = scalar<double>(val, key);
    else fail(kv.first, "unknown search key '" + key + "'");
  }
  check(s.r_min > 0 && s.r_max > s.r_min, n, "search needs 0 < r_min < r_max");
  check(s.r_count >= 3, n, "search needs r_count >= 3");
  check(s.golden_iterations >= 0, n, "search needs golden_iterations >= 0");
}

void read_sampling(const YAML::Node& n, hardy::SamplingConfig& s) {
  if (!n.IsMap()) fail(n, "'sampling' must be a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& val = kv.second;
    if (key == "center_min") s.center_min = scalar<double>(val, key);
    else if (key == "center_max") s.center_max = scalar<double>(val, key);
    else if (key == "center_count") s.center_count = scalar<int>(val, key);
    else if (key == "length_min") s.length_min = scalar<double>(val, key);
    else if (key == "length_max") s.length_max = scalar<double>(val, key);
    else if (key == "length_count") s.length_count = scalar<int>(val, key);
    else if (key == "origin") s.origin = scalar<double>(val, key);
    else if (key == "cap") s.cap = scalar<double>(val, key);
    else if (key == "slope_threshold") s.slope_threshold = scalar<double>(val, key);
    else if (key == "sup_min") s.sup_min = scalar<double>(val, key);
    else if (key == "sup_max") s.sup_max = scalar<double>(val, key);
    else if (key == "sup_count") s.sup_count = scalar<int>(val, key);
    else fail(kv.first, "unknown sampling key '" + key + "'");
  }
  check(s.center_min > 0 && s.center_max >= s.center_min && s.center_count >= 1, n, "invalid center range");
  check(s.length_min > 0 && s.length_max >= s.length_min && s.length_count >= 1, n, "invalid length range");
  check(s.origin > 0 && s.cap > 1, n, "sampling needs origin > 0 and cap > 1");
  check(s.sup_min > 0 && s.sup_max > s.sup_min && s.sup_count >= 3, n, "invalid sup range");
}

op::GridSpec read_grid(const YAML::Node& n) {
  if (!n.IsMap()) fail(n, "grid entries must be mappings");
  op::GridSpec g;
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& val = kv.second;
    if (key == "x_max") g.x_max = scalar<double>(val, key);
    else if (key == "n") g.n = scalar<int>(val, key);
    else if (key == "x_min") g.x_min = scalar<double>(val, key);
    else if (key == "spacing") {
      const auto s = scalar<std::string>(val, key);
      if (s == "log") g.spacing = op::Spacing::log;
      else if (s == "linear") g.spacing = op::Spacing::linear;
      else fail(val, "spacing must be log or linear");
    } else fail(kv.first, "unknown grid key '" + key + "'");
  }
  check(g.n >= 16, n, "grid needs n >= 16");
  check(g.x_max > 0, n, "grid needs x_max > 0");
  check(g.spacing == op::Spacing::linear || (g.x_min > 0 && g.x_min < g.x_max), n, "grid needs 0 < x_min < x_max");
  return g;
}

std::string shortest(double d) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* to_string(JobKind kind) noexcept {
  for (const auto& [name, k] : kKinds)
    if (k == kind) return name.c_str();
  return "?";
}

JobKind job_kind(const std::string& name) {
  const auto it = kKinds.find(name);
  if (it == kKinds.end())
    throw ConfigError("unknown job kind '" + name + "' (hardy, s_k, doubling, operator, gram, multiplier, lemma2)");
  return it->second;
}

JobConfig defaults(JobKind kind) {
  JobConfig c;
  c.kind = kind;
  switch (kind) {
    case JobKind::gram:
      c.m = 1;
      c.tol = 1e-12;
      break;
    case JobKind::multiplier:
      c.phi = "exp(-x)";
      c.m = 1;
      break;
    case JobKind::lemma2:
      c.phi = "x^2";
      c.m = 1;
      break;
    default:
      break;
  }
  return c;
}

JobConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping with a 'job' key");
  const YAML::Node job = root["job"];
  if (!job) throw ConfigError("config has no 'job' key");
  JobKind kind;
  try {
    kind = job_kind(scalar<std::string>(job, "job"));
  } catch (const ConfigError& e) {
    fail(job, e.what());
  }
  const std::string section = to_string(kind);
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (key != "job" && key != section) fail(kv.first, "unexpected top-level key '" + key + "'");
  }

  JobConfig c = defaults(kind);
  const YAML::Node body = root[section];
  if (!body) return c;
  if (!body.IsMap()) fail(body, "'" + section + "' must be a mapping");
  const auto& allowed = allowed_keys(kind);
  for (const auto& kv : body) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& val = kv.second;
    if (!allowed.count(key)) fail(kv.first, "key '" + key + "' does not apply to " + section + " jobs");
    if (key == "u") c.u = expression(val, key);
    else if (key == "v") c.v = expression(val, key);
    else if (key == "v1") c.v1 = expression(val, key);
    else if (key == "u1") c.u1 = expression(val, key);
    else if (key == "a") c.a = expression(val, key);
    else if (key == "w") c.w = expression(val, key);
    else if (key == "phi") c.phi = expression(val, key);
    else if (key == "g") c.g = expression(val, key);
    else if (key == "coeffs") {
      if (!val.IsSequence() || val.size() == 0) fail(val, "'coeffs' must be a non-empty list");
      c.coeffs.clear();
      for (const auto& e : val) c.coeffs.push_back(expression(e, key));
    } else if (key == "k") c.k = scalar<int>(val, key);
    else if (key == "l") c.l = scalar<int>(val, key);
    else if (key == "m") c.m = scalar<int>(val, key);
    else if (key == "delta") c.delta = scalar<double>(val, key);
    else if (key == "tol") c.tol = scalar<double>(val, key);
    else if (key == "search") read_search(val, c.search);
    else if (key == "sampling") read_sampling(val, c.sampling);
    else if (key == "grids") {
      if (!val.IsSequence() || val.size() == 0) fail(val, "'grids' must be a non-empty list");
      c.grids.clear();
      for (const auto& e : val) c.grids.push_back(read_grid(e));
    } else if (key == "power_rtol") c.ladder.power_rtol = scalar<double>(val, key);
    else if (key == "ladder_rtol") c.ladder.ladder_rtol = scalar<double>(val, key);
    else if (key == "r_lo") c.r_lo = scalar<double>(val, key);
    else if (key == "r_hi") c.r_hi = scalar<double>(val, key);
    else if (key == "r_count") c.r_count = scalar<int>(val, key);
    else if (key == "xs") {
      if (!val.IsSequence() || val.size() == 0) fail(val, "'xs' must be a non-empty list");
      c.xs.clear();
      for (const auto& e : val) {
        c.xs.push_back(scalar<double>(e, key));
        check(c.xs.back() > 0, e, "'xs' entries must be positive");
      }
    }
    if (key == "tol" || key == "power_rtol" || key == "ladder_rtol") check(scalar<double>(val, key) > 0, val, key + " must be positive");
    if (key == "delta") check(c.delta >= 0, val, "delta must be non-negative");
    if (key == "k") check(c.k >= 0, val, "k must be non-negative");
    if (key == "l") check(c.l >= 1, val, "l must be at least 1");
    if (key == "r_count") check(c.r_count >= 1, val, "r_count must be at least 1");
  }
  if (kind == JobKind::multiplier || kind == JobKind::lemma2)
    check(c.m >= 0 && c.m <= c.l, body, "need 0 <= m <= l");
  if (kind == JobKind::gram) {
    check(c.m >= 0 && c.m <= 8, body, "gram jobs need 0 <= m <= 8");
    check(c.r_lo > 0 && c.r_hi >= c.r_lo, body, "gram jobs need 0 < r_lo <= r_hi");
  }
  return c;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const JobConfig& c) {
  const auto& keys = allowed_keys(c.kind);
  YAML::Emitter out;
  out << YAML::BeginMap << YAML::Key << "job" << YAML::Value << to_string(c.kind);
  out << YAML::Key << to_string(c.kind) << YAML::Value << YAML::BeginMap;
  auto expr = [&](const char* key, const std::string& text) {
    if (keys.count(key)) out << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << text;
  };
  auto num = [&](const char* key, double d) {
    if (keys.count(key)) out << YAML::Key << key << YAML::Value << shortest(d);
  };
  auto integer = [&](const char* key, int i) {
    if (keys.count(key)) out << YAML::Key << key << YAML::Value << i;
  };
  expr("v1", c.v1);
  expr("u1", c.u1);
  expr("w", c.w);
  expr("phi", c.phi);
  expr("g", c.g);
  expr("u", c.u);
  expr("v", c.v);
  expr("a", c.a);
  if (keys.count("coeffs")) {
    out << YAML::Key << "coeffs" << YAML::Value << YAML::BeginSeq;
    for (const auto& e : c.coeffs) out << YAML::DoubleQuoted << e;
    out << YAML::EndSeq;
  }
  integer("k", c.k);
  integer("l", c.l);
  integer("m", c.m);
  num("delta", c.delta);
  num("tol", c.tol);
  num("r_lo", c.r_lo);
  num("r_hi", c.r_hi);
  integer("r_count", c.r_count);
  num("power_rtol", c.ladder.power_rtol);
  num("ladder_rtol", c.ladder.ladder_rtol);
  if (keys.count("xs")) {
    out << YAML::Key << "xs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double x : c.xs) out << shortest(x);
    out << YAML::EndSeq;
  }
  if (keys.count("grids")) {
    out << YAML::Key << "grids" << YAML::Value << YAML::BeginSeq;
    for (const auto& g : c.grids) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "x_max" << YAML::Value << shortest(g.x_max);
      out << YAML::Key << "n" << YAML::Value << g.n;
      out << YAML::Key << "spacing" << YAML::Value << (g.spacing == op::Spacing::log ? "log" : "linear");
      out << YAML::Key << "x_min" << YAML::Value << shortest(g.x_min);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  if (keys.count("search")) {
    const auto& s = c.search;
    out << YAML::Key << "search" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "r_min" << YAML::Value << shortest(s.r_min);
    out << YAML::Key << "r_max" << YAML::Value << shortest(s.r_max);
    out << YAML::Key << "r_count" << YAML::Value << s.r_count;
    out << YAML::Key << "golden_iterations" << YAML::Value << s.golden_iterations;
    out << YAML::Key << "slope_threshold" << YAML::Value << shortest(s.slope_threshold);
    out << YAML::EndMap;
  }
  if (keys.count("sampling")) {
    const auto& s = c.sampling;
    out << YAML::Key << "sampling" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "center_min" << YAML::Value << shortest(s.center_min);
    out << YAML::Key << "center_max" << YAML::Value << shortest(s.center_max);
    out << YAML::Key << "center_count" << YAML::Value << s.center_count;
    out << YAML::Key << "length_min" << YAML::Value << shortest(s.length_min);
    out << YAML::Key << "length_max" << YAML::Value << shortest(s.length_max);
    out << YAML::Key << "length_count" << YAML::Value << s.length_count;
    out << YAML::Key << "origin" << YAML::Value << shortest(s.origin);
    out << YAML::Key << "cap" << YAML::Value << shortest(s.cap);
    out << YAML::Key << "slope_threshold" << YAML::Value << shortest(s.slope_threshold);
    out << YAML::Key << "sup_min" << YAML::Value << shortest(s.sup_min);
    out << YAML::Key << "sup_max" << YAML::Value << shortest(s.sup_max);
    out << YAML::Key << "sup_count" << YAML::Value << s.sup_count;
    out << YAML::EndMap;
  }
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace volterra::cli
