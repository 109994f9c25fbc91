#include "spavg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "spavg/noise.hpp"
#include "spavg/rng.hpp"

namespace spavg {
namespace {

constexpr long kNanCheckInterval = 256;

// Draws one noise slice per step into a caller buffer, scaled so the values
// play the role of per-cell integrals of the noise field: white slices are
// already cell integrals, cell-averaged colored slices gain a factor dx.
class SliceSource {
 public:
  SliceSource(const SolverConfig& config, std::uint64_t master_seed,
              std::uint64_t replica_index)
      : grid_(config.grid),
        master_(master_seed),
        replica_(replica_index),
        white_(config.noise.is_white()),
        white_sd_(std::sqrt(config.grid.step * config.grid.cell_width)),
        cell_scale_(config.grid.cell_width) {
    if (!white_) {
      sampler_.emplace(shared_colored_plan(config.grid, config.noise.alpha));
    }
  }

  void draw(long step, std::vector<double>& out) {
    const SeedSpec seed{master_, replica_, static_cast<std::uint64_t>(step)};
    if (white_) {
      rng::Stream stream(rng::stream_key(seed.master_seed, seed.replica_index,
                                         seed.step_index));
      stream.fill_normals(out.data(), grid_.cell_count, white_sd_);
    } else {
      sampler_->sample(seed, out.data());
      for (long j = 0; j < grid_.cell_count; ++j) out[j] *= cell_scale_;
    }
  }

 private:
  GridSpec grid_;
  std::uint64_t master_;
  std::uint64_t replica_;
  bool white_;
  double white_sd_;
  double cell_scale_;
  std::optional<ColoredSampler> sampler_;
};

class SnapshotWriter {
 public:
  SnapshotWriter(const SolverConfig& config, std::uint64_t master_seed,
                 std::uint64_t replica_index, const SnapshotRequest& request)
      : request_(request) {
    field_.grid = config.grid;
    field_.seed = {master_seed, replica_index, 0};
    if (!request_.keep_all) {
      std::sort(request_.steps.begin(), request_.steps.end());
      request_.steps.erase(
          std::unique(request_.steps.begin(), request_.steps.end()),
          request_.steps.end());
    }
  }

  bool wants(long step) const {
    if (request_.keep_all || step == field_.grid.step_count) return true;
    return std::binary_search(request_.steps.begin(), request_.steps.end(), step);
  }

  void offer(long step, const std::vector<double>& row) {
    if (!wants(step)) return;
    field_.snapshot_steps.push_back(step);
    field_.values.push_back(row);
  }

  SolutionField take() { return std::move(field_); }

 private:
  SnapshotRequest request_;
  SolutionField field_;
};

void check_finite(const std::vector<double>& u, long step) {
  for (double v : u) {
    if (!std::isfinite(v)) {
      throw NaNDetected("field left the finite range", step);
    }
  }
}

SolutionField run_heat(const SolverConfig& config, std::uint64_t master_seed,
                       std::uint64_t replica_index, const SnapshotRequest& snapshots) {
  const GridSpec& grid = config.grid;
  const long cells = grid.cell_count;
  const double r = 0.5 * grid.step / (grid.cell_width * grid.cell_width);
  const double inv_dx = 1.0 / grid.cell_width;
  const bool dirichlet = config.boundary == Boundary::Dirichlet;
  const SigmaFunction sigma = config.sigma;

  SliceSource source(config, master_seed, replica_index);
  SnapshotWriter writer(config, master_seed, replica_index, snapshots);

  std::vector<double> u(cells, 1.0);
  std::vector<double> unew(cells);
  std::vector<double> g(cells);
  writer.offer(0, u);

  for (long n = 0; n < grid.step_count; ++n) {
    source.draw(n, g);
    for (long j = 0; j < cells; ++j) g[j] *= sigma(u[j]) * inv_dx;
    if (dirichlet) {
      unew[0] = 1.0;
      for (long j = 1; j < cells; ++j) {
        const double right = j + 1 < cells ? u[j + 1] : 1.0;
        unew[j] = u[j] + r * (u[j - 1] + right - 2.0 * u[j]) + g[j];
      }
    } else {
      unew[0] = u[0] + r * (u[cells - 1] + u[1] - 2.0 * u[0]) + g[0];
      for (long j = 1; j < cells - 1; ++j) {
        unew[j] = u[j] + r * (u[j - 1] + u[j + 1] - 2.0 * u[j]) + g[j];
      }
      unew[cells - 1] =
          u[cells - 1] + r * (u[cells - 2] + u[0] - 2.0 * u[cells - 1]) + g[cells - 1];
    }
    u.swap(unew);
    const long step = n + 1;
    if (step % kNanCheckInterval == 0 || step == grid.step_count) {
      check_finite(u, step);
    }
    writer.offer(step, u);
  }
  return writer.take();
}

SolutionField run_wave(const SolverConfig& config, std::uint64_t master_seed,
                       std::uint64_t replica_index, const SnapshotRequest& snapshots) {
  const GridSpec& grid = config.grid;
  const long cells = grid.cell_count;
  const bool dirichlet = config.boundary == Boundary::Dirichlet;
  const SigmaFunction sigma = config.sigma;

  SliceSource source(config, master_seed, replica_index);
  SnapshotWriter writer(config, master_seed, replica_index, snapshots);

  std::vector<double> uprev(cells, 1.0);
  std::vector<double> u(cells, 1.0);
  std::vector<double> unew(cells);
  std::vector<double> g(cells);
  std::vector<double> s(cells);
  writer.offer(0, u);

  const auto smoothed = [&](long j) {
    const double left = j > 0 ? s[j - 1] : (dirichlet ? 0.0 : s[cells - 1]);
    const double right = j + 1 < cells ? s[j + 1] : (dirichlet ? 0.0 : s[0]);
    return 0.5 * s[j] + 0.25 * (left + right);
  };

  for (long n = 0; n < grid.step_count; ++n) {
    source.draw(n, g);
    for (long j = 0; j < cells; ++j) s[j] = sigma(u[j]) * g[j];
    if (n == 0) {
      // Leapfrog start from rest: only half of the first slice acts.
      for (long j = 0; j < cells; ++j) unew[j] = u[j] + 0.5 * smoothed(j);
      if (dirichlet) unew[0] = 1.0;
    } else if (dirichlet) {
      unew[0] = 1.0;
      for (long j = 1; j < cells; ++j) {
        const double right = j + 1 < cells ? u[j + 1] : 1.0;
        unew[j] = u[j - 1] + right - uprev[j] + smoothed(j);
      }
    } else {
      unew[0] = u[cells - 1] + u[1] - uprev[0] + smoothed(0);
      for (long j = 1; j < cells - 1; ++j) {
        unew[j] = u[j - 1] + u[j + 1] - uprev[j] +
                  (0.5 * s[j] + 0.25 * (s[j - 1] + s[j + 1]));
      }
      unew[cells - 1] = u[cells - 2] + u[0] - uprev[cells - 1] + smoothed(cells - 1);
    }
    uprev.swap(u);
    u.swap(unew);
    const long step = n + 1;
    if (step % kNanCheckInterval == 0 || step == grid.step_count) {
      check_finite(u, step);
    }
    writer.offer(step, u);
  }
  return writer.take();
}

}  // namespace

const std::vector<double>& SolutionField::at_time(double t) const {
  const long step = grid.step_of_time(t);
  const auto it =
      std::lower_bound(snapshot_steps.begin(), snapshot_steps.end(), step);
  if (it == snapshot_steps.end() || *it != step) {
    throw OffGridTime("no snapshot retained at the requested time");
  }
  return values[static_cast<std::size_t>(it - snapshot_steps.begin())];
}

SolutionField solve_heat_1d(const SolverConfig& config, std::uint64_t master_seed,
                            std::uint64_t replica_index,
                            const SnapshotRequest& snapshots) {
  if (config.grid.equation_tag != Equation::Heat) {
    throw ConfigError("grid was built for a different equation");
  }
  return run_heat(config, master_seed, replica_index, snapshots);
}

SolutionField solve_wave_1d(const SolverConfig& config, std::uint64_t master_seed,
                            std::uint64_t replica_index,
                            const SnapshotRequest& snapshots) {
  if (config.grid.equation_tag != Equation::Wave) {
    throw ConfigError("grid was built for a different equation");
  }
  return run_wave(config, master_seed, replica_index, snapshots);
}

SolutionField solve_1d(const SolverConfig& config, std::uint64_t master_seed,
                       std::uint64_t replica_index, const SnapshotRequest& snapshots) {
  return config.grid.equation_tag == Equation::Heat
             ? run_heat(config, master_seed, replica_index, snapshots)
             : run_wave(config, master_seed, replica_index, snapshots);
}

ObservationPair observe(const SolutionField& field, double t, double R, double x0) {
  const GridSpec& grid = field.grid;
  if (!(R > 0.0)) throw ConfigError("observe requires R > 0");
  if (R > grid.radius * (1.0 + 1e-12)) {
    throw OutOfDomain("averaging radius exceeds the radius the grid was sized for");
  }
  if (std::fabs(x0) > grid.half_width) {
    throw OutOfDomain("observation point lies outside the domain");
  }
  const double cells_per_R = R / grid.cell_width;
  if (std::fabs(cells_per_R - std::round(cells_per_R)) > 1e-9) {
    throw NonIntegerCount("averaging radius is not a whole number of cells");
  }
  const std::vector<double>& u = field.at_time(t);
  const long j_lo = grid.nearest_node(-R);
  const long j_hi = grid.nearest_node(R);
  double acc = 0.5 * (u[j_lo] - 1.0) + 0.5 * (u[j_hi] - 1.0);
  for (long j = j_lo + 1; j < j_hi; ++j) acc += u[j] - 1.0;

  ObservationPair pair;
  pair.spatial_average = acc * grid.cell_width;
  pair.point_deviation = u[grid.nearest_node(x0)] - 1.0;
  return pair;
}

std::map<double, SampleSet> run_ensemble(const SolverConfig& config, long replicas,
                                         const std::vector<double>& radii, double t,
                                         std::uint64_t master_seed, int threads) {
  if (replicas <= 0) throw ConfigError("run_ensemble requires replicas > 0");
  if (radii.empty()) throw ConfigError("run_ensemble requires at least one radius");
  const long step = config.grid.step_of_time(t);
  const SnapshotRequest request = SnapshotRequest::at_steps({step});

  std::map<double, SampleSet> result;
  for (double R : radii) {
    SampleSet set;
    set.radius = R;
    set.time = t;
    set.master_seed = master_seed;
    set.pairs.resize(static_cast<std::size_t>(replicas));
    result.emplace(R, std::move(set));
  }

  const int worker_count =
      std::max(1, std::min<int>(threads, static_cast<int>(replicas)));
  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto work = [&]() {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const long i = next.fetch_add(1);
        if (i >= replicas) break;
        SolutionField field =
            solve_1d(config, master_seed, static_cast<std::uint64_t>(i), request);
        for (auto& [R, set] : result) {
          set.pairs[static_cast<std::size_t>(i)] =
              observe(field, t, R, config.grid.observation_point);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!failed.exchange(true)) first_error = std::current_exception();
    }
  };

  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);
  return result;
}

}  // namespace spavg
