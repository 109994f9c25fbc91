#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "spavg/errors.hpp"

namespace spavg::stats {

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // ddof 1
double covariance(std::span<const double> xs, std::span<const double> ys);
double correlation(std::span<const double> xs, std::span<const double> ys);

// Standard normal quantile function, accurate to full double precision.
double inverse_normal_cdf(double p);

// How the spatial averages are brought to unit scale before distributional
// comparisons: by the exact standard deviation or by the sample one.
enum class SigmaMode { Oracle, Empirical };

std::vector<double> standardize(std::span<const double> xs, SigmaMode mode,
                                double oracle_sigma = 0.0);

// W1 distance from an (already standardized) sample to N(0, 1):
// mean |x_(i) - Phi^{-1}((i - 1/2) / n)|.
double w1_to_std_normal(std::span<const double> xs);

// W1 distance between two equally sized empirical laws (sorted matching).
double w1_empirical_pair(std::span<const double> a, std::span<const double> b);

// Reference laws for the joint cloud (f_i, u_i): a centered 2-D Gaussian
// with the given second moments, or the product law obtained by resampling
// the second coordinate.
struct JointGaussian {
  double var_f = 1.0;
  double cov = 0.0;
  double var_u = 1.0;
};
struct ProductResample {};
using JointReference = std::variant<JointGaussian, ProductResample>;

// Sliced W1 between the joint sample and a reference cloud of the same size,
// averaged over golden-angle directions theta_i = pi frac(i (sqrt(5)-1)/2).
double sliced_w1_joint(std::span<const double> f, std::span<const double> u,
                       const JointReference& reference, std::uint64_t seed,
                       int directions = 64);

// Distance covariance (square root of the double-centered V-statistic).
double distance_covariance(std::span<const double> xs, std::span<const double> ys);

struct TestResult {
  double statistic = 0.0;  // observed V-statistic
  double p_value = 1.0;
  int permutations = 0;
};

// Permutation test of independence built on the distance-covariance
// V-statistic; p = (1 + #{perm >= observed}) / (permutations + 1).
TestResult independence_test(std::span<const double> xs, std::span<const double> ys,
                             int permutations, std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_max = 0.0;  // worst absolute log-scale residual
};

// Least-squares fit of log y against log x.
RateFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace spavg::stats
