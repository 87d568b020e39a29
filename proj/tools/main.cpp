#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "config.hpp"
#include "jobs.hpp"

using namespace volterra::cli;

int main(int argc, char** argv) {
  CLI::App app{"Boundedness checks for Volterra operators between weighted L2 spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> tol;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run one job from a YAML config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--out", out_dir, "Output directory for report.txt and CSV files");
  run->add_option("--tol", tol, "Override the job tolerance")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "Do not print the report");

  std::string kind;
  auto* dump = app.add_subcommand("dump-defaults", "Print the default config of a job kind");
  dump->add_option("kind", kind, "hardy, s_k, doubling, operator, gram, multiplier or lemma2")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dump) {
      std::cout << dump_config(defaults(job_kind(kind)));
      return kExitOk;
    }
    JobConfig config = load_config(config_path);
    if (tol) config.tol = *tol;
    const JobResult result = run_job(config);
    write_outputs(result, out_dir);
    if (!quiet) std::cout << result.report;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
