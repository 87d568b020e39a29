#ifndef VOLTERRA_TOOLS_JOBS_HPP
#define VOLTERRA_TOOLS_JOBS_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "csv.hpp"

namespace volterra::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitDivergent = 2;

struct JobResult {
  std::string report;
  std::vector<std::pair<std::string, Table>> tables;  // file name, contents
  int exit_code = kExitOk;
};

JobResult run_job(const JobConfig& config);

/// Writes report.txt and every table into dir, creating it if needed.
void write_outputs(const JobResult& result, const std::filesystem::path& dir);

}  // namespace volterra::cli

#endif
