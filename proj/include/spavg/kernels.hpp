#pragma once

#include "spavg/quad.hpp"

namespace spavg::kernels {

double std_normal_cdf(double x);

// Gaussian density exp(-|x|^2 / 2t) / (2 pi t)^(d/2); x is the radial
// coordinate when d > 1. Throws NonpositiveTime.
double heat_kernel(double t, double x, int d = 1);

// 1/2 on the light cone |x| <= t, else 0. Throws NonpositiveTime.
double wave_kernel(double t, double x);

// |quadrature of convolution(heat(t), heat(s)) at w  -  heat(t+s, w)|.
// Stays below 1e-8 for t, s in [0.01, 2], |w| <= 5.
quad::IntegralResult heat_semigroup_residual(double t, double s, double w);

// Mass of heat(t-s, . - y) on [-R, R], in closed CDF form. Requires 0 <= s < t.
double heat_ball_kernel(double t, double s, double y, double R);

// Mass of wave(t-s, . - y) on [-R, R]: half the interval overlap. 0 <= s < t.
double wave_ball_kernel(double t, double s, double y, double R);

// Integral over y of wave(tau, a - y) * wave(tau, b - y) with delta = |a - b|:
// quarter of the positive part of (2 tau - delta).
double wave_overlap_integral(double tau, double delta);

// Double integral of wave(tau, a - y) * wave(tau, b - z) * |y - z|^(-beta)
// with delta = |a - b|, by nested adaptive quadrature with the inner interval
// split at the moving singularity. 0 < beta < 1.
quad::IntegralResult wave_colored_overlap(double tau, double delta, double beta);

// Closed form of the same integral (difference of power antiderivatives);
// cross-checked against the quadrature route by the test suite.
double wave_colored_overlap_exact(double tau, double delta, double beta);

// E |w - sqrt(2 tau) Z|^(-beta) for standard normal Z, by quadrature against
// the Gaussian density; the integrable singularity is removed by a power-law
// substitution on each side. 0 < beta < 1.
quad::IntegralResult heat_colored_cov_integrand(double tau, double w, double beta);

}  // namespace spavg::kernels
