#include "spavg/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace spavg::quad {
namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate_segment(const std::function<double(double)>& f, double a,
                         double b, long& evaluations) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(center - half * kXgk[i]);
    fv[14 - i] = f(center + half * kXgk[i]);
  }
  fv[7] = f(center);
  evaluations += 15;
  for (int i = 0; i < 15; ++i) {
    if (!std::isfinite(fv[i])) {
      const double where =
          i < 7 ? center - half * kXgk[i] : (i == 7 ? center : center + half * kXgk[14 - i]);
      throw NonFiniteIntegrand("integrand returned a non-finite value", where);
    }
  }
  double result_kronrod = kWgk[7] * fv[7];
  double result_gauss = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    result_kronrod += kWgk[i] * (fv[i] + fv[14 - i]);
  }
  for (int i = 0; i < 3; ++i) {
    const int j = 2 * i + 1;
    result_gauss += kWg[i] * (fv[j] + fv[14 - j]);
  }
  Segment s;
  s.a = a;
  s.b = b;
  s.value = result_kronrod * half;
  // Conservative estimate: the Gauss/Kronrod discrepancy itself.
  s.error = std::fabs((result_kronrod - result_gauss) * half);
  return s;
}

IntegralResult run_adaptive(const std::function<double(double)>& f,
                            std::vector<Segment> initial, double tol,
                            int max_intervals, long evaluations) {
  std::priority_queue<Segment> heap;
  double total_value = 0.0;
  double total_error = 0.0;
  for (const Segment& s : initial) {
    total_value += s.value;
    total_error += s.error;
    heap.push(s);
  }
  int intervals = static_cast<int>(initial.size());
  std::vector<Segment> frozen;
  while (total_error > tol && intervals < max_intervals && !heap.empty()) {
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    // Below this width, halving would place quadrature nodes that round onto
    // the segment endpoints, so an endpoint singularity would be evaluated
    // exactly. Park the segment instead of refining it.
    const double floor_width =
        256.0 * std::numeric_limits<double>::epsilon() * std::fabs(mid);
    if (mid <= worst.a || mid >= worst.b || worst.b - worst.a <= floor_width) {
      frozen.push_back(worst);
      continue;
    }
    Segment left = evaluate_segment(f, worst.a, mid, evaluations);
    Segment right = evaluate_segment(f, mid, worst.b, evaluations);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Recompute sums from the heap to shed accumulated cancellation.
  double value = 0.0;
  double error = 0.0;
  for (const Segment& s : frozen) {
    value += s.value;
    error += s.error;
  }
  std::priority_queue<Segment> copy = heap;
  while (!copy.empty()) {
    value += copy.top().value;
    error += copy.top().error;
    copy.pop();
  }
  if (error > tol) {
    throw QuadratureFailure("adaptive quadrature did not reach tolerance", value,
                            error);
  }
  return {value, error, evaluations};
}

}  // namespace

IntegralResult quad_1d(const std::function<double(double)>& f, double a, double b,
                       double tol, int max_intervals) {
  return quad_1d_split(f, a, b, {}, tol, max_intervals);
}

IntegralResult quad_1d_split(const std::function<double(double)>& f, double a,
                             double b, std::span<const double> interior_points,
                             double tol, int max_intervals) {
  if (!(a < b)) throw ConfigError("quad_1d requires a < b");
  if (!(tol > 0.0)) throw ConfigError("quad_1d requires tol > 0");
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double p : interior_points) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  long evaluations = 0;
  std::vector<Segment> initial;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      initial.push_back(evaluate_segment(f, cuts[i], cuts[i + 1], evaluations));
    }
  }
  return run_adaptive(f, std::move(initial), tol, max_intervals, evaluations);
}

IntegralResult quad_2d(const std::function<double(double, double)>& f, Rect rect,
                       double tol, int max_intervals) {
  if (!(rect.ax < rect.bx) || !(rect.ay < rect.by)) {
    throw ConfigError("quad_2d requires a nonempty rectangle");
  }
  if (!(tol > 0.0)) throw ConfigError("quad_2d requires tol > 0");
  long inner_evaluations = 0;
  const double width = rect.bx - rect.ax;
  // Budget: inner integrals resolved so their accumulated contribution stays
  // below a quarter of tol; the outer integral gets half.
  const double inner_tol = 0.25 * tol / width;
  const auto outer = [&](double x) {
    IntegralResult inner = quad_1d([&](double y) { return f(x, y); }, rect.ay,
                                   rect.by, inner_tol, max_intervals);
    inner_evaluations += inner.evaluations;
    return inner.value;
  };
  IntegralResult out = quad_1d(outer, rect.ax, rect.bx, 0.5 * tol, max_intervals);
  return {out.value, out.abs_error_estimate + 0.25 * tol,
          inner_evaluations};
}

}  // namespace spavg::quad
