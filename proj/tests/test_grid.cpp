#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spavg/grid.hpp"

using namespace spavg;

TEST_CASE("riesz model validates its exponent") {
  const CovarianceModel m = CovarianceModel::riesz(0.5);
  CHECK(m.beta() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(m.is_white());
  CHECK(CovarianceModel::white().beta() == 1.0);
  CHECK_THROWS_AS(CovarianceModel::riesz(0.0), ConfigError);
  CHECK_THROWS_AS(CovarianceModel::riesz(1.0), ConfigError);
  CHECK_THROWS_AS(CovarianceModel::riesz(-0.3), ConfigError);
}

TEST_CASE("explicit grid construction") {
  const GridSpec g = build_grid(4.0, 0.125, 1.0, 0.125, 2.0, 0.5, Equation::Wave);
  CHECK(g.cell_count == 64);
  CHECK(g.step_count == 8);
  CHECK(g.node(0) == doctest::Approx(-4.0));
  CHECK(g.node(32) == doctest::Approx(0.0));
  CHECK(g.nearest_node(0.5) == 36);
  CHECK(g.nearest_node(-4.0) == 0);
  CHECK(g.nearest_node(4.0) == 0);  // +L wraps to -L
  CHECK(g.step_of_time(0.0) == 0);
  CHECK(g.step_of_time(0.5) == 4);
  CHECK(g.step_of_time(1.0) == 8);
  CHECK_THROWS_AS(g.step_of_time(0.3), OffGridTime);
  CHECK_THROWS_AS(g.step_of_time(1.125), OffGridTime);
  CHECK_THROWS_AS(g.step_of_time(-0.125), OffGridTime);
}

TEST_CASE("grid validation errors") {
  // 2L/dx must be an even integer
  CHECK_THROWS_AS(build_grid(1.05, 0.2, 1.0, 0.2, 0.4, 0.0, Equation::Wave),
                  NonIntegerCount);
  // T/dt must be an integer
  CHECK_THROWS_AS(build_grid(4.0, 0.125, 1.03, 0.125, 2.0, 0.0, Equation::Wave),
                  NonIntegerCount);
  // wave scheme is locked to dt = dx
  CHECK_THROWS_AS(build_grid(4.0, 0.125, 1.0, 0.0625, 2.0, 0.0, Equation::Wave),
                  StabilityViolation);
  // heat scheme needs dt <= 0.45 dx^2
  CHECK_THROWS_AS(build_grid(8.0, 0.125, 1.0, 0.01, 1.0, 0.0, Equation::Heat),
                  StabilityViolation);
  // domain must cover radius + propagation margin
  CHECK_THROWS_AS(build_grid(2.0, 0.125, 1.0, 0.125, 1.5, 0.0, Equation::Wave),
                  DomainTooSmall);
  CHECK_THROWS_AS(build_grid(1.0, 0.0, 1.0, 0.125, 0.5, 0.0, Equation::Wave),
                  ConfigError);
}

TEST_CASE("default heat step divides T and respects stability") {
  for (double dx : {1.0 / 16.0, 1.0 / 64.0}) {
    for (double T : {0.5, 1.0}) {
      const double dt = heat_default_dt(dx, T);
      CHECK(dt <= 0.45 * dx * dx * (1.0 + 1e-12));
      const double steps = T / dt;
      CHECK(std::fabs(steps - std::round(steps)) < 1e-9);
    }
  }
}

TEST_CASE("default grids take the smallest node-aligned margin") {
  const GridSpec wave = make_default_grid(Equation::Wave, 1.0 / 32.0, 1.0, 64.0, 0.5);
  CHECK(wave.half_width == doctest::Approx(65.5).epsilon(1e-15));
  CHECK(wave.cell_count == 4192);
  CHECK(wave.step == wave.cell_width);
  CHECK(wave.step_count == 32);

  const GridSpec heat = make_default_grid(Equation::Heat, 1.0 / 64.0, 0.5, 64.0, 0.5);
  CHECK(heat.half_width == doctest::Approx(70.5).epsilon(1e-15));
  CHECK(heat.cell_count == 9024);
  CHECK(heat.step_count == 4552);
  CHECK(heat.step * heat.step_count == doctest::Approx(0.5).epsilon(1e-12));

  // asking for a slightly larger radius grows the domain by whole cells
  const GridSpec wave2 = make_default_grid(Equation::Wave, 1.0 / 32.0, 1.0, 128.0, 0.5);
  CHECK(wave2.half_width == doctest::Approx(129.5).epsilon(1e-15));
}
