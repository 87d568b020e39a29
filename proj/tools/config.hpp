#ifndef VOLTERRA_TOOLS_CONFIG_HPP
#define VOLTERRA_TOOLS_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "volterra/hardy.hpp"
#include "volterra/operator.hpp"

namespace volterra::cli {

enum class JobKind { hardy, s_k, doubling, op, gram, multiplier, lemma2 };

const char* to_string(JobKind kind) noexcept;
JobKind job_kind(const std::string& name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One job. Expression fields hold source text, validated on load.
struct JobConfig {
  JobKind kind = JobKind::hardy;

  std::string u = "1";
  std::string v = "1";
  std::string v1 = "x^(-1)";
  std::string u1 = "1";
  std::string a = "x^(-1)";  // s_k coefficient
  std::string w = "1";       // doubling weight
  std::string phi = "1";
  std::string g = "x^2";
  std::vector<std::string> coeffs{"x^(-1)"};

  int k = 0;
  int l = 1;
  int m = 0;
  double delta = 0.0;
  double tol = 1e-9;

  hardy::SearchConfig search;
  hardy::SamplingConfig sampling;
  std::vector<op::GridSpec> grids = op::default_ladder();
  op::LadderOptions ladder;

  double r_lo = 1e-3;
  double r_hi = 1e3;
  int r_count = 61;

  std::vector<double> xs{0.5, 1.0, 2.0, 4.0};

  bool operator==(const JobConfig&) const = default;
};

JobConfig defaults(JobKind kind);

/// Reads one job from YAML text; errors name the offending line.
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);

/// YAML holding exactly the fields the job kind reads.
std::string dump_config(const JobConfig& config);

}  // namespace volterra::cli

#endif
