#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "spavg/oracle.hpp"
#include "spavg/solver.hpp"
#include "spavg/stats.hpp"

using namespace spavg;

namespace {

SolverConfig wave_config(double dx = 0.125, double R = 2.0, double x0 = 0.5,
                         Boundary boundary = Boundary::Periodic) {
  SolverConfig c;
  c.grid = make_default_grid(Equation::Wave, dx, 1.0, R, x0);
  c.boundary = boundary;
  return c;
}

SolverConfig heat_config(double dx = 1.0 / 16.0, double R = 1.0, double x0 = 0.0,
                         Boundary boundary = Boundary::Periodic) {
  SolverConfig c;
  c.grid = make_default_grid(Equation::Heat, dx, 0.5, R, x0);
  c.boundary = boundary;
  return c;
}

double ensemble_variance(const SampleSet& set, double sigma_R) {
  std::vector<double> f(set.pairs.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = set.pairs[i].spatial_average / sigma_R;
  }
  return stats::variance(f);
}

}  // namespace

TEST_CASE("solutions are pure functions of the seed pair") {
  const SolverConfig c = wave_config();
  const SolutionField a = solve_wave_1d(c, 42, 7);
  const SolutionField b = solve_wave_1d(c, 42, 7);
  const SolutionField d = solve_wave_1d(c, 42, 8);
  CHECK(a.values.back() == b.values.back());
  CHECK(a.values.back() != d.values.back());

  const SolverConfig h = heat_config();
  CHECK(solve_heat_1d(h, 1, 2).values.back() == solve_heat_1d(h, 1, 2).values.back());

  // the generic entry point dispatches on the grid's equation tag
  CHECK(solve_1d(c, 42, 7).values.back() == a.values.back());
  CHECK(solve_1d(h, 5, 0).values.back() == solve_heat_1d(h, 5, 0).values.back());
}

TEST_CASE("zero diffusion coefficient leaves the flat initial state") {
  SolverConfig c = wave_config();
  c.sigma = SigmaFunction::constant(0.0);
  const SolutionField f = solve_wave_1d(c, 9, 0);
  for (double v : f.values.back()) CHECK(v == 1.0);

  SolverConfig h = heat_config();
  h.sigma = SigmaFunction::constant(0.0);
  const SolutionField g = solve_heat_1d(h, 9, 0);
  for (double v : g.values.back()) CHECK(v == 1.0);
}

TEST_CASE("snapshot retention and time lookup") {
  const SolverConfig c = wave_config();
  const long steps = c.grid.step_count;

  const SolutionField last = solve_wave_1d(c, 3, 1);
  CHECK(last.snapshot_steps == std::vector<long>{steps});
  CHECK_THROWS_AS(last.at_time(0.5), OffGridTime);

  const SolutionField all = solve_wave_1d(c, 3, 1, SnapshotRequest::all());
  CHECK(all.snapshot_steps.size() == static_cast<std::size_t>(steps) + 1);
  CHECK(all.at_time(1.0) == last.at_time(1.0));
  for (double v : all.at_time(0.0)) CHECK(v == 1.0);

  const SolutionField some =
      solve_wave_1d(c, 3, 1, SnapshotRequest::at_steps({steps / 2}));
  CHECK(some.snapshot_steps == std::vector<long>{steps / 2, steps});
  CHECK(some.at_time(0.5) == all.at_time(0.5));
  CHECK_THROWS_AS(some.at_time(0.25), OffGridTime);
  CHECK_THROWS_AS(some.at_time(0.26), OffGridTime);
}

TEST_CASE("intermediate snapshots do not alter the trajectory") {
  const SolverConfig c = heat_config();
  const SolutionField plain = solve_heat_1d(c, 11, 4);
  const SolutionField traced = solve_heat_1d(c, 11, 4, SnapshotRequest::all());
  CHECK(plain.values.back() == traced.values.back());
}

TEST_CASE("observation reduces the field by trapezoid weights") {
  const GridSpec g = build_grid(4.0, 0.125, 1.0, 0.125, 2.0, 0.5, Equation::Wave);
  SolutionField field;
  field.grid = g;
  field.snapshot_steps = {g.step_count};
  std::vector<double> row(g.cell_count);
  for (long j = 0; j < g.cell_count; ++j) {
    row[j] = 1.0 + 2.0 + g.node(j);  // linear deviation: trapezoid is exact
  }
  field.values.push_back(row);

  const ObservationPair obs = observe(field, 1.0, 2.0, 0.5);
  // integral of (2 + x) over [-2, 2] is 8
  CHECK(obs.spatial_average == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(obs.point_deviation == doctest::Approx(2.5).epsilon(1e-13));

  CHECK_THROWS_AS(observe(field, 1.0, 0.3, 0.5), NonIntegerCount);
  CHECK_THROWS_AS(observe(field, 1.0, 3.0, 0.5), OutOfDomain);
  CHECK_THROWS_AS(observe(field, 1.0, -1.0, 0.5), Error);
  CHECK_THROWS_AS(observe(field, 1.0, 2.0, 9.0), OutOfDomain);
  CHECK_THROWS_AS(observe(field, 0.75, 2.0, 0.5), OffGridTime);
}

TEST_CASE("runaway diffusion coefficients are caught, not propagated") {
  SolverConfig h = heat_config(0.125, 1.0, 0.0);
  h.sigma = SigmaFunction::affine(0.0, 1e150);
  try {
    solve_heat_1d(h, 21, 0);
    CHECK(false);
  } catch (const NaNDetected& e) {
    CHECK(e.step_index >= 0);
    CHECK(e.step_index <= h.grid.step_count);
  }

  SolverConfig w = wave_config(0.125, 1.0, 0.0);
  w.sigma = SigmaFunction::affine(0.0, 1e150);
  CHECK_THROWS_AS(solve_wave_1d(w, 21, 0), NaNDetected);
}

TEST_CASE("boundary treatment cannot reach the observation window: cone model") {
  // domain margin exceeds the propagation range by x0 > 0, so the periodic
  // and pinned runs agree bit for bit on |x| <= R
  const SolverConfig periodic = wave_config(0.125, 2.0, 0.5, Boundary::Periodic);
  const SolverConfig pinned = wave_config(0.125, 2.0, 0.5, Boundary::Dirichlet);
  const SolutionField a = solve_wave_1d(periodic, 77, 5);
  const SolutionField b = solve_wave_1d(pinned, 77, 5);
  const GridSpec& g = periodic.grid;
  bool window_equal = true;
  bool anything_differs = false;
  for (long j = 0; j < g.cell_count; ++j) {
    const double x = g.node(j);
    if (std::fabs(x) <= 2.0) {
      window_equal = window_equal && (a.values.back()[j] == b.values.back()[j]);
    }
    anything_differs = anything_differs || (a.values.back()[j] != b.values.back()[j]);
  }
  CHECK(window_equal);
  CHECK(anything_differs);  // near the edges the treatments genuinely differ
}

TEST_CASE("boundary treatment cannot reach the observation window: gaussian model") {
  const SolverConfig periodic = heat_config(0.125, 1.0, 0.5, Boundary::Periodic);
  const SolverConfig pinned = heat_config(0.125, 1.0, 0.5, Boundary::Dirichlet);
  const SolutionField a = solve_heat_1d(periodic, 31, 2);
  const SolutionField b = solve_heat_1d(pinned, 31, 2);
  const GridSpec& g = periodic.grid;
  double sup = 0.0;
  for (long j = 0; j < g.cell_count; ++j) {
    if (std::fabs(g.node(j)) <= 1.0) {
      sup = std::max(sup, std::fabs(a.values.back()[j] - b.values.back()[j]));
    }
  }
  CHECK(sup < 1e-6);
}

TEST_CASE("ensembles are invariant under the thread count") {
  SolverConfig c = wave_config();
  const std::vector<double> radii = {1.0, 2.0};
  const auto one = run_ensemble(c, 40, radii, 1.0, 555, 1);
  const auto four = run_ensemble(c, 40, radii, 1.0, 555, 4);
  REQUIRE(one.size() == 2);
  for (const auto& [R, set] : one) {
    const SampleSet& other = four.at(R);
    REQUIRE(set.pairs.size() == 40);
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      CHECK(set.pairs[i].spatial_average == other.pairs[i].spatial_average);
      CHECK(set.pairs[i].point_deviation == other.pairs[i].point_deviation);
    }
  }

  c.noise = CovarianceModel::riesz(0.5);
  const auto c1 = run_ensemble(c, 24, radii, 1.0, 556, 1);
  const auto c3 = run_ensemble(c, 24, radii, 1.0, 556, 3);
  for (const auto& [R, set] : c1) {
    const SampleSet& other = c3.at(R);
    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
      CHECK(set.pairs[i].spatial_average == other.pairs[i].spatial_average);
    }
  }
}

TEST_CASE("ensemble bookkeeping and validation") {
  const SolverConfig c = wave_config();
  const auto sets = run_ensemble(c, 10, {2.0}, 1.0, 999, 2);
  const SampleSet& s = sets.at(2.0);
  CHECK(s.radius == 2.0);
  CHECK(s.time == 1.0);
  CHECK(s.master_seed == 999);
  CHECK(s.config_hash == 0);  // provenance is stamped by the experiment layer

  CHECK_THROWS_AS(run_ensemble(c, 10, {3.0}, 1.0, 1, 1), OutOfDomain);
  CHECK_THROWS_AS(run_ensemble(c, 10, {0.3}, 1.0, 1, 1), NonIntegerCount);
  CHECK_THROWS_AS(run_ensemble(c, 10, {2.0}, 0.77, 1, 1), OffGridTime);
}

TEST_CASE("ensemble failures surface the first error") {
  SolverConfig c = wave_config();
  c.sigma = SigmaFunction::affine(0.0, 1e150);
  CHECK_THROWS_AS(run_ensemble(c, 6, {2.0}, 1.0, 1, 3), NaNDetected);
}

// ---- weak accuracy against the exact laws ----

TEST_CASE("cone-model ensemble variance matches the oracle") {
  const SolverConfig c = wave_config(1.0 / 32.0, 2.0, 0.5);
  const auto sets = run_ensemble(c, 3000, {2.0}, 1.0, 2711, 1);
  const double sig = oracle::sigma_R_exact(oracle::ModelTag::wave_white(), 1.0, 2.0);
  const double v = ensemble_variance(sets.at(2.0), sig);
  // n = 3000 puts the 3-sigma sampling band near 8%; the scheme bias is ~-2%
  CHECK(std::fabs(v - 1.0) < 0.11);
}

TEST_CASE("gaussian-model ensemble variance matches the oracle") {
  const SolverConfig c = heat_config(1.0 / 16.0, 1.0, 0.0);
  const auto sets = run_ensemble(c, 1200, {1.0}, 0.5, 2712, 1);
  const double sig = oracle::sigma_R_exact(oracle::ModelTag::heat_white(), 0.5, 1.0);
  const double v = ensemble_variance(sets.at(1.0), sig);
  CHECK(std::fabs(v - 1.0) < 0.14);
}

TEST_CASE("colored cone-model ensemble variance matches the oracle") {
  SolverConfig c = wave_config(1.0 / 16.0, 1.0, 0.0);
  c.noise = CovarianceModel::riesz(0.5);
  const auto sets = run_ensemble(c, 1500, {1.0}, 1.0, 2713, 1);
  const double sig =
      oracle::sigma_R_exact(oracle::ModelTag::wave_riesz(0.5), 1.0, 1.0);
  const double v = ensemble_variance(sets.at(1.0), sig);
  CHECK(std::fabs(v - 1.0) < 0.15);
}

TEST_CASE("colored gaussian-model ensemble variance matches the oracle") {
  SolverConfig c = heat_config(1.0 / 16.0, 1.0, 0.0);
  c.noise = CovarianceModel::riesz(0.5);
  const auto sets = run_ensemble(c, 800, {1.0}, 0.5, 2714, 1);
  const double sig =
      oracle::sigma_R_exact(oracle::ModelTag::heat_riesz(0.5), 0.5, 1.0);
  const double v = ensemble_variance(sets.at(1.0), sig);
  CHECK(std::fabs(v - 1.0) < 0.17);
}

TEST_CASE("refining the mesh shrinks the variance bias") {
  const double exact_var = 0.5;  // sigma_R^2 at t = 1, R = 1 for the cone model
  const long n = 50000;
  double ratio[2];
  int idx = 0;
  for (double dx : {0.125, 0.0625}) {
    const SolverConfig c = wave_config(dx, 1.0, 0.0);
    const auto sets = run_ensemble(c, n, {1.0}, 1.0, 31337, 1);
    double acc = 0.0;
    for (const ObservationPair& p : sets.at(1.0).pairs) {
      acc += p.spatial_average * p.spatial_average;
    }
    ratio[idx++] = acc / n / exact_var;
  }
  // sampling error on each ratio is ~0.6%; the coarse-grid bias is several
  // times larger and must drop substantially under refinement
  CHECK(ratio[0] < 1.0);
  CHECK(ratio[1] < 1.0);
  CHECK(ratio[1] - ratio[0] > 0.01);
  CHECK(ratio[1] > ratio[0]);
}

TEST_CASE("pointwise deviation variance matches the oracle") {
  const SolverConfig c = wave_config(1.0 / 32.0, 2.0, 0.5);
  const auto sets = run_ensemble(c, 3000, {2.0}, 1.0, 888, 1);
  std::vector<double> u;
  for (const ObservationPair& p : sets.at(2.0).pairs) u.push_back(p.point_deviation);
  const double target = oracle::pointwise_cov(oracle::ModelTag::wave_white(), 1.0, 0.0);
  CHECK(std::fabs(stats::variance(u) / target - 1.0) < 0.13);
}
