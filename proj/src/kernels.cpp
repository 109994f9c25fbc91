#include "spavg/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace spavg::kernels {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

void require_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ConfigError("beta must lie in (0, 1)");
  }
}

}  // namespace

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double heat_kernel(double t, double x, int d) {
  if (!(t > 0.0)) throw NonpositiveTime("heat_kernel requires t > 0");
  if (d < 1) throw ConfigError("heat_kernel requires d >= 1");
  return std::exp(-x * x / (2.0 * t)) /
         std::pow(2.0 * M_PI * t, 0.5 * static_cast<double>(d));
}

double wave_kernel(double t, double x) {
  if (!(t > 0.0)) throw NonpositiveTime("wave_kernel requires t > 0");
  return std::fabs(x) <= t ? 0.5 : 0.0;
}

quad::IntegralResult heat_semigroup_residual(double t, double s, double w) {
  if (!(t > 0.0) || !(s > 0.0)) {
    throw NonpositiveTime("heat_semigroup_residual requires t, s > 0");
  }
  // The integrand is a Gaussian in y centered at w*s/(t+s) with variance
  // t*s/(t+s); 12 standard deviations capture all mass to ~1e-33.
  const double center = w * s / (t + s);
  const double spread = std::sqrt(t * s / (t + s));
  quad::IntegralResult conv = quad::quad_1d(
      [&](double y) { return heat_kernel(t, w - y) * heat_kernel(s, y); },
      center - 12.0 * spread, center + 12.0 * spread, 1e-12);
  const double closed = heat_kernel(t + s, w);
  const double truncation = closed * std::erfc(12.0 / kSqrt2);
  return {std::fabs(conv.value - closed),
          conv.abs_error_estimate + truncation, conv.evaluations};
}

double heat_ball_kernel(double t, double s, double y, double R) {
  if (!(s >= 0.0 && s < t)) {
    throw BadTimeOrder("heat_ball_kernel requires 0 <= s < t");
  }
  const double sd = std::sqrt(t - s);
  return std_normal_cdf((R - y) / sd) - std_normal_cdf((-R - y) / sd);
}

double wave_ball_kernel(double t, double s, double y, double R) {
  if (!(s >= 0.0 && s < t)) {
    throw BadTimeOrder("wave_ball_kernel requires 0 <= s < t");
  }
  const double tau = t - s;
  const double lo = std::max(-R, y - tau);
  const double hi = std::min(R, y + tau);
  return 0.5 * std::max(0.0, hi - lo);
}

double wave_overlap_integral(double tau, double delta) {
  if (!(tau > 0.0)) throw NonpositiveTime("wave_overlap_integral requires tau > 0");
  if (!(delta >= 0.0)) throw ConfigError("wave_overlap_integral requires delta >= 0");
  return 0.25 * std::max(0.0, 2.0 * tau - delta);
}

quad::IntegralResult wave_colored_overlap(double tau, double delta, double beta) {
  if (!(tau > 0.0)) throw NonpositiveTime("wave_colored_overlap requires tau > 0");
  if (!(delta >= 0.0)) throw ConfigError("wave_colored_overlap requires delta >= 0");
  require_beta(beta);
  // Quarter of the double integral of |y - z|^(-beta) over
  // y in [-tau, tau], z in [delta - tau, delta + tau].
  const double tol = 1e-7;
  const double zlo = delta - tau;
  const double zhi = delta + tau;
  const double inner_tol = 0.25 * tol / (2.0 * tau);
  long inner_evaluations = 0;
  const auto inner = [&](double y) {
    // Integrate in v = z - y so the |v|^(-beta) singularity sits at exactly
    // zero; refinement toward it then never rounds a node onto it.
    const double vlo = zlo - y;
    const double vhi = zhi - y;
    const double cut[1] = {0.0};
    quad::IntegralResult r = quad::quad_1d_split(
        [&](double v) { return std::pow(std::fabs(v), -beta); }, vlo, vhi,
        (vlo < 0.0 && vhi > 0.0) ? std::span<const double>(cut, 1)
                                 : std::span<const double>(),
        inner_tol, 4000);
    inner_evaluations += r.evaluations;
    return r.value;
  };
  quad::IntegralResult outer = quad::quad_1d(inner, -tau, tau, 0.5 * tol, 4000);
  return {0.25 * outer.value,
          0.25 * (outer.abs_error_estimate + 0.25 * tol), inner_evaluations};
}

double wave_colored_overlap_exact(double tau, double delta, double beta) {
  if (!(tau > 0.0)) throw NonpositiveTime("wave_colored_overlap_exact requires tau > 0");
  if (!(delta >= 0.0)) throw ConfigError("wave_colored_overlap_exact requires delta >= 0");
  require_beta(beta);
  const double g = 2.0 - beta;
  const double a = std::pow(delta + 2.0 * tau, g);
  const double b = std::pow(std::fabs(delta - 2.0 * tau), g);
  const double c = delta > 0.0 ? std::pow(delta, g) : 0.0;
  return (a + b - 2.0 * c) / (4.0 * (1.0 - beta) * g);
}

quad::IntegralResult heat_colored_cov_integrand(double tau, double w, double beta) {
  if (!(tau > 0.0)) {
    throw NonpositiveTime("heat_colored_cov_integrand requires tau > 0");
  }
  require_beta(beta);
  const double v = std::sqrt(2.0 * tau);
  const double zstar = w / v;  // singular point in z
  const double scale = std::pow(v, -beta);
  const double half_width = 9.0;
  const double lo = std::min(-half_width, zstar - 2.0);
  const double hi = std::max(half_width, zstar + 2.0);
  const double tol = 1e-10;
  const double q = 1.0 / (1.0 - beta);
  const auto phi = [](double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); };

  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  const auto accumulate = [&](const quad::IntegralResult& r) {
    value += r.value;
    error += r.abs_error_estimate;
    evaluations += r.evaluations;
  };
  if (zstar > lo && zstar < hi) {
    // Right side: z = zstar + xi^q turns phi(z) * (z - zstar)^(-beta) dz into
    // q * phi(zstar + xi^q) dxi, a smooth integrand; same on the left.
    const double right = std::pow(hi - zstar, 1.0 - beta);
    const double left = std::pow(zstar - lo, 1.0 - beta);
    if (right > 0.0) {
      accumulate(quad::quad_1d(
          [&](double xi) { return q * phi(zstar + std::pow(xi, q)); }, 0.0,
          right, 0.5 * tol));
    }
    if (left > 0.0) {
      accumulate(quad::quad_1d(
          [&](double xi) { return q * phi(zstar - std::pow(xi, q)); }, 0.0,
          left, 0.5 * tol));
    }
  } else {
    accumulate(quad::quad_1d(
        [&](double z) { return phi(z) * std::pow(std::fabs(z - zstar), -beta); },
        lo, hi, tol));
  }
  // Truncation beyond [lo, hi]: the Gaussian factor is below phi(9) ~ 1e-18
  // and the kernel factor is bounded by the value 2 units from the singular
  // point, so the neglected mass is far below the quadrature tolerance.
  return {scale * value, scale * (error + 1e-15), evaluations};
}

}  // namespace spavg::kernels
