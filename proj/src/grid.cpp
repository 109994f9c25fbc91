#include "spavg/grid.hpp"

#include <cmath>
#include <string>

namespace spavg {
namespace {

constexpr double kHeatStabilityFactor = 0.45;  // dt <= 0.45 dx^2 (0.9 * dx^2/2)

long checked_count(double ratio, const char* what) {
  const double rounded = std::round(ratio);
  if (std::fabs(ratio - rounded) > 1e-9 * std::max(1.0, std::fabs(ratio))) {
    throw NonIntegerCount(std::string(what) + " must be an integer, got " +
                          std::to_string(ratio));
  }
  return static_cast<long>(rounded);
}

}  // namespace

CovarianceModel CovarianceModel::riesz(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("Riesz alpha must lie in (0, 1)");
  }
  return {Kind::Riesz, alpha};
}

long GridSpec::nearest_node(double x) const {
  long j = std::lround((x + half_width) / cell_width);
  if (j < 0) j = 0;
  if (j >= cell_count) j -= cell_count;  // x = +L is the periodic image of -L
  return j;
}

long GridSpec::step_of_time(double t) const {
  const double ratio = t / step;
  const long n = std::lround(ratio);
  if (std::fabs(ratio - n) > 1e-9 * std::max(1.0, std::fabs(ratio))) {
    throw OffGridTime("time " + std::to_string(t) + " is not on the time grid");
  }
  if (n < 0 || n > step_count) {
    throw OffGridTime("time " + std::to_string(t) + " is outside [0, T]");
  }
  return n;
}

GridSpec build_grid(double L, double dx, double T, double dt, double R, double x0,
                    Equation equation_tag) {
  if (!(L > 0.0 && dx > 0.0 && T > 0.0 && dt > 0.0 && R > 0.0)) {
    throw ConfigError("build_grid requires L, dx, T, dt, R > 0");
  }
  const long cell_count = checked_count(2.0 * L / dx, "cell count 2L/dx");
  if (cell_count % 2 != 0) {
    throw NonIntegerCount("cell count must be even (L must be a node)");
  }
  const long step_count = checked_count(T / dt, "step count T/dt");

  if (equation_tag == Equation::Heat) {
    if (dt > kHeatStabilityFactor * dx * dx * (1.0 + 1e-12)) {
      throw StabilityViolation("heat scheme requires dt <= 0.45 dx^2, got dt = " +
                               std::to_string(dt));
    }
    const double margin = R + std::fabs(x0) + 6.0 * std::sqrt(2.0 * T);
    if (L < margin - 1e-9) {
      throw DomainTooSmall("heat domain requires L >= R + |x0| + 6 sqrt(2T) = " +
                           std::to_string(margin));
    }
  } else {
    if (std::fabs(dt - dx) > 1e-12 * dx) {
      throw StabilityViolation("wave scheme requires dt = dx exactly");
    }
    const double margin = R + T + std::fabs(x0);
    if (L < margin - 1e-9) {
      throw DomainTooSmall("wave domain requires L >= R + T + |x0| = " +
                           std::to_string(margin));
    }
  }
  return {L, dx, T, dt, R, x0, cell_count, step_count, equation_tag};
}

double heat_default_dt(double dx, double T) {
  const double dt_max = kHeatStabilityFactor * dx * dx;
  const long steps = static_cast<long>(std::ceil(T / dt_max - 1e-12));
  return T / static_cast<double>(steps);
}

GridSpec make_default_grid(Equation equation_tag, double dx, double T, double R_max,
                           double x0) {
  double margin;
  double dt;
  if (equation_tag == Equation::Heat) {
    margin = R_max + std::fabs(x0) + 6.0 * std::sqrt(2.0 * T);
    dt = heat_default_dt(dx, T);
  } else {
    margin = R_max + T + std::fabs(x0);
    dt = dx;
  }
  const long nodes = static_cast<long>(std::ceil(margin / dx - 1e-9));
  const double L = static_cast<double>(nodes) * dx;
  return build_grid(L, dx, T, dt, R_max, x0, equation_tag);
}

}  // namespace spavg
