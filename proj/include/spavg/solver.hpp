#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "spavg/grid.hpp"
#include "spavg/sigma.hpp"

namespace spavg {

struct SolverConfig {
  GridSpec grid;
  CovarianceModel noise = CovarianceModel::white();
  SigmaFunction sigma = SigmaFunction::constant(1.0);
  Boundary boundary = Boundary::Periodic;
};

// Which time levels to retain in the returned field. The final step is
// always kept.
struct SnapshotRequest {
  bool keep_all = false;
  std::vector<long> steps;

  static SnapshotRequest final_only() { return {}; }
  static SnapshotRequest all() { return {true, {}}; }
  static SnapshotRequest at_steps(std::vector<long> s) { return {false, std::move(s)}; }
};

struct SolutionField {
  GridSpec grid;
  SeedSpec seed;
  std::vector<long> snapshot_steps;         // ascending
  std::vector<std::vector<double>> values;  // values[i][j]: u at snapshot_steps[i], node j

  // Row at time t; throws OffGridTime if t is off-grid or was not retained.
  const std::vector<double>& at_time(double t) const;
};

struct ObservationPair {
  double spatial_average = 0.0;  // unnormalized integral of u - 1 over [-R, R]
  double point_deviation = 0.0;  // u(t, x0) - 1
};

struct SampleSet {
  double radius = 0.0;
  double time = 0.0;
  std::uint64_t master_seed = 0;
  std::uint64_t config_hash = 0;  // filled by callers that track run provenance
  std::vector<ObservationPair> pairs;
};

// Explicit schemes for u(0,.) = 1, one noise slice per step, reproducible
// from (master_seed, replica_index) alone.
SolutionField solve_heat_1d(const SolverConfig& config, std::uint64_t master_seed,
                            std::uint64_t replica_index,
                            const SnapshotRequest& snapshots = {});
SolutionField solve_wave_1d(const SolverConfig& config, std::uint64_t master_seed,
                            std::uint64_t replica_index,
                            const SnapshotRequest& snapshots = {});
SolutionField solve_1d(const SolverConfig& config, std::uint64_t master_seed,
                       std::uint64_t replica_index,
                       const SnapshotRequest& snapshots = {});

// Trapezoid integral of u - 1 over [-R, R] plus the deviation at the node
// nearest x0. R must be a whole number of cells and within the grid's
// validated radius.
ObservationPair observe(const SolutionField& field, double t, double R, double x0);

// Independent replicas observed at time t for each radius. Deterministic in
// (config, master_seed) regardless of thread count.
std::map<double, SampleSet> run_ensemble(const SolverConfig& config, long replicas,
                                         const std::vector<double>& radii, double t,
                                         std::uint64_t master_seed, int threads = 1);

}  // namespace spavg
