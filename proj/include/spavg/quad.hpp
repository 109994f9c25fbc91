#pragma once

#include <functional>
#include <span>

#include "spavg/errors.hpp"

namespace spavg::quad {

struct IntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

struct Rect {
  double ax, bx;  // outer (x) interval
  double ay, by;  // inner (y) interval
};

// Adaptive Gauss-Kronrod 15(7) to absolute tolerance `tol`. Nodes are strictly
// interior, so integrable endpoint singularities converge under bisection.
// Throws QuadratureFailure (carrying the best estimate) if the tolerance is
// not met within `max_intervals` subdivisions, NonFiniteIntegrand if f returns
// a non-finite value.
IntegralResult quad_1d(const std::function<double(double)>& f, double a, double b,
                       double tol, int max_intervals = 4000);

// Same, with mandatory initial splits at the given interior points (kinks or
// interior singularities known to the caller).
IntegralResult quad_1d_split(const std::function<double(double)>& f, double a,
                             double b, std::span<const double> interior_points,
                             double tol, int max_intervals = 4000);

// Iterated adaptive 2-D integral over an axis-aligned rectangle. The inner
// (y) integral is resolved to a tolerance budgeted from `tol`; `evaluations`
// counts calls to f.
IntegralResult quad_2d(const std::function<double(double, double)>& f, Rect rect,
                       double tol, int max_intervals = 2000);

}  // namespace spavg::quad
