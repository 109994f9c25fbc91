#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spavg/errors.hpp"
#include "spavg/experiment.hpp"
#include "spavg/version.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> config_path;
  std::vector<std::string> assignments;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "key=value config file (overridden by --set)");
  cmd->add_option("--set", flags.assignments, "override one config key=value")
      ->take_all();
  cmd->add_option("--seed", flags.seed, "override master_seed");
  cmd->add_option("--threads", flags.threads,
                  "worker threads (never changes output values)");
  cmd->add_option("--out", flags.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spavg: spatial averages of stochastic heat/wave equations"};
  app.set_version_flag("--version", std::string("spavg ") + spavg::kVersion);
  app.require_subcommand(1);

  bool inject_kernel_fault = false;
  CLI::App* kernels =
      app.add_subcommand("kernels-check", "verify closed-form kernel identities");
  kernels->add_flag("--inject-kernel-fault", inject_kernel_fault,
                    "perturb the heat kernel by 1e-3 (fault-injection hook)");

  CommonFlags flags_variance, flags_clt, flags_independence, flags_oracle;
  CLI::App* variance = app.add_subcommand(
      "variance-scaling", "empirical vs exact sigma_R with scaling slopes");
  add_common_flags(variance, flags_variance);
  CLI::App* clt = app.add_subcommand(
      "clt-rate", "Wasserstein distances of normalized averages per radius");
  add_common_flags(clt, flags_clt);
  CLI::App* independence = app.add_subcommand(
      "independence", "dependence tests between the average and the point value");
  add_common_flags(independence, flags_independence);
  CLI::App* oracle = app.add_subcommand(
      "oracle-compare", "solver moments vs exact law with z-scores");
  add_common_flags(oracle, flags_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (kernels->parsed()) {
    return spavg::experiment::cmd_kernels_check(inject_kernel_fault, std::cout);
  }

  const CommonFlags* flags = nullptr;
  bool needs_additive_sigma = false;
  int (*command)(const spavg::experiment::ExperimentConfig&, std::ostream&) =
      nullptr;
  if (variance->parsed()) {
    flags = &flags_variance;
    command = spavg::experiment::cmd_variance_scaling;
    needs_additive_sigma = true;
  } else if (clt->parsed()) {
    flags = &flags_clt;
    command = spavg::experiment::cmd_clt_rate;
  } else if (independence->parsed()) {
    flags = &flags_independence;
    command = spavg::experiment::cmd_independence;
  } else {
    flags = &flags_oracle;
    command = spavg::experiment::cmd_oracle_compare;
    needs_additive_sigma = true;
  }

  spavg::experiment::ExperimentConfig config;
  try {
    config = spavg::experiment::build_config(flags->config_path, flags->assignments,
                                             flags->seed, flags->out_dir,
                                             flags->threads);
    if (needs_additive_sigma && !config.sigma.is_constant_one()) {
      throw spavg::NonAdditiveSigma(
          "this command compares against the exact law and needs sigma = "
          "constant 1");
    }
  } catch (const spavg::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    return command(config, std::cout);
  } catch (const spavg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
