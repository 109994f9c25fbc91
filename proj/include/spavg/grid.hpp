#pragma once

#include <cstdint>

#include "spavg/errors.hpp"

namespace spavg {

enum class Equation { Heat, Wave };
enum class Boundary { Periodic, Dirichlet };

struct CovarianceModel {
  enum class Kind { White, Riesz };
  Kind kind = Kind::White;
  double alpha = 0.0;  // Riesz exponent, 0 < alpha < 1

  static CovarianceModel white() { return {Kind::White, 0.0}; }
  static CovarianceModel riesz(double alpha);

  bool is_white() const { return kind == Kind::White; }
  // Covariance decay exponent: 1 - alpha for Riesz, 1 for white.
  double beta() const { return is_white() ? 1.0 : 1.0 - alpha; }
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;
  std::uint64_t step_index = 0;
};

struct GridSpec {
  double half_width;         // L: domain is [-L, L)
  double cell_width;         // dx
  double horizon;            // T
  double step;               // dt
  double radius;             // largest averaging radius observed on this grid
  double observation_point;  // x0
  long cell_count;           // 2L/dx, even; node j sits at -L + j dx
  long step_count;           // T/dt
  Equation equation_tag;

  double node(long j) const { return -half_width + j * cell_width; }
  long nearest_node(double x) const;
  long step_of_time(double t) const;  // throws OffGridTime if t is off-grid
};

GridSpec build_grid(double L, double dx, double T, double dt, double R, double x0,
                    Equation equation_tag);

// Largest stable explicit step for the heat scheme that divides T evenly.
double heat_default_dt(double dx, double T);

// Smallest node-aligned domain meeting the margin rule, with the default
// time step for the equation (heat: stability-maximal; wave: dt = dx).
GridSpec make_default_grid(Equation equation_tag, double dx, double T, double R_max,
                           double x0);

}  // namespace spavg
