#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spavg/grid.hpp"
#include "spavg/sigma.hpp"
#include "spavg/solver.hpp"

namespace spavg::experiment {

// Flat key-value experiment description. Defaults depend on the equation:
// heat observes t = 0.5 on dx = 1/64, wave observes t = 1 on dx = 1/32.
struct ExperimentConfig {
  Equation equation = Equation::Heat;
  CovarianceModel noise = CovarianceModel::white();
  SigmaFunction sigma = SigmaFunction::constant(1.0);
  Boundary boundary = Boundary::Periodic;
  double t = 0.5;
  double dx = 1.0 / 64.0;
  double x0 = 0.5;
  std::vector<double> radii = {4.0, 8.0, 16.0, 32.0, 64.0};
  long replicas = 4000;
  int permutations = 199;
  std::uint64_t master_seed = 20260823;
  std::string out_dir = "out";
  int threads = 1;

  static ExperimentConfig defaults(Equation equation);

  // Applies one "key=value" assignment; throws ConfigError for unknown keys
  // or unparsable values.
  void apply(const std::string& key, const std::string& value);

  void validate() const;

  // Deterministic serialization of every state-affecting field, one
  // "key=value" line each, sorted by key. threads and out_dir are excluded:
  // they may not change any computed value.
  std::vector<std::string> canonical_lines() const;
  std::uint64_t config_hash() const;  // FNV-1a 64 over canonical_lines
  std::string config_hash_hex() const;

  GridSpec grid() const;
  SolverConfig solver_config() const;
};

// Builds a config from an optional file plus command-line assignments
// (applied after the file, so they win). seed/out/threads mirror the
// dedicated flags.
ExperimentConfig build_config(const std::optional<std::string>& config_path,
                              const std::vector<std::string>& assignments,
                              std::optional<std::uint64_t> seed,
                              const std::optional<std::string>& out_dir,
                              std::optional<int> threads);

using EnsembleMap = std::map<double, SampleSet>;

// Runs the config's ensemble once; all commands below consume this shape.
EnsembleMap run_config_ensemble(const ExperimentConfig& config);

struct VarianceScalingRow {
  double radius, sigma_oracle, sigma_empirical, se_empirical;
};
struct VarianceScalingResult {
  std::vector<VarianceScalingRow> rows;
  double slope_oracle = 0.0;
  double slope_empirical = 0.0;
};
VarianceScalingResult variance_scaling_rows(const ExperimentConfig& config,
                                            const EnsembleMap& ensembles);

struct CltRateRow {
  double radius, w1_marginal, w1_sliced_product, cov_f_u;
};
struct CltRateResult {
  std::vector<CltRateRow> rows;
  // Fits are present only when every value in the column is positive.
  std::optional<double> slope_w1_marginal;
  std::optional<double> slope_w1_sliced;
  std::optional<double> slope_cov;
};
CltRateResult clt_rate_rows(const ExperimentConfig& config,
                            const EnsembleMap& ensembles);

struct IndependenceRow {
  double radius, dcov, p_value, corr_empirical, corr_oracle;
};
struct IndependenceResult {
  std::vector<IndependenceRow> rows;
  bool smallest_radius_dependent = false;    // p <= 0.01 at the smallest R
  bool largest_radius_independent = false;   // p > 0.05 at the largest R
};
IndependenceResult independence_rows(const ExperimentConfig& config,
                                     const EnsembleMap& ensembles);

struct OracleCompareRow {
  double radius;
  double var_empirical, var_oracle, z_var;
  double cov_empirical, cov_oracle, z_cov;
  double corr_empirical, corr_oracle, z_corr;
};
std::vector<OracleCompareRow> oracle_compare_rows(const ExperimentConfig& config,
                                                  const EnsembleMap& ensembles);

struct KernelIdentityRow {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
std::vector<KernelIdentityRow> kernel_identity_suite(bool inject_kernel_fault);

// Command entry points: run, write <command>.csv and <command>.json under
// out_dir, print a summary. Return the process exit code.
int cmd_kernels_check(bool inject_kernel_fault, std::ostream& out);
int cmd_variance_scaling(const ExperimentConfig& config, std::ostream& out);
int cmd_clt_rate(const ExperimentConfig& config, std::ostream& out);
int cmd_independence(const ExperimentConfig& config, std::ostream& out);
int cmd_oracle_compare(const ExperimentConfig& config, std::ostream& out);

// 17-significant-digit decimal form used in every CSV and JSON cell.
std::string format_value(double v);

}  // namespace spavg::experiment
