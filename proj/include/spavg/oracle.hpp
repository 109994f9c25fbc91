#pragma once

#include "spavg/grid.hpp"

namespace spavg::oracle {

// One of the four equation x noise combinations handled exactly in the
// additive (sigma = 1) case.
struct ModelTag {
  Equation equation = Equation::Heat;
  CovarianceModel noise = CovarianceModel::white();

  static ModelTag heat_white() { return {Equation::Heat, CovarianceModel::white()}; }
  static ModelTag heat_riesz(double alpha) {
    return {Equation::Heat, CovarianceModel::riesz(alpha)};
  }
  static ModelTag wave_white() { return {Equation::Wave, CovarianceModel::white()}; }
  static ModelTag wave_riesz(double alpha) {
    return {Equation::Wave, CovarianceModel::riesz(alpha)};
  }

  double beta() const { return noise.beta(); }
  const char* name() const;
};

// Covariance matrix of (F_R(t), u(t, x0) - 1) with F_R normalized to unit
// variance: [[1, cov], [cov, var_u]].
struct JointLaw2 {
  double var_f = 1.0;
  double cov = 0.0;
  double var_u = 0.0;

  double correlation() const;
  bool positive_semidefinite() const { return cov * cov <= var_f * var_u * (1.0 + 1e-12); }
};

// Cov(u(t,x) - 1, u(t,x+w) - 1) in the additive case: the time integral of
// the model's kernel overlap at spatial offset w.
double pointwise_cov(const ModelTag& model, double t, double w);

// Exact standard deviation of the unnormalized spatial integral over
// [-R, R]: sqrt(2 * int_0^{2R} (2R - h) pointwise_cov(h) dh).
double sigma_R_exact(const ModelTag& model, double t, double R);

// Exact Cov(F_R(t), u(t,x0) - 1) with F_R normalized by sigma_R:
// (1/sigma_R) * int_{|x|<=R} pointwise_cov(x - x0) dx.
double cov_FRu_exact(const ModelTag& model, double t, double R, double x0);

JointLaw2 joint_gaussian_law(const ModelTag& model, double t, double R, double x0);

// W1 distance between centered normals with standard deviations s1, s2.
double gaussian_w1(double s1, double s2);

// --- slow reference routes retained for cross-checking the fast paths ---

// Time-quadrature route for pointwise_cov (integrates the kernel-overlap
// operations over s directly; for the colored heat model this is the nested
// expectation integral rather than the closed Fubini form used in
// production).
double pointwise_cov_by_time_quadrature(const ModelTag& model, double t, double w);

// Unreduced double integral of pointwise_cov over [-R, R]^2.
double sigma_R_brute(const ModelTag& model, double t, double R);

// Heat/white covariance of (F_R, u0) with the pointwise covariance computed
// by 2-D space-time quadrature of the kernel product (no convolution
// shortcut).
double cov_FRu_brute_heat_white(double t, double R, double x0);

}  // namespace spavg::oracle
