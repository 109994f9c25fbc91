#include "spavg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "spavg/rng.hpp"

namespace spavg::stats {
namespace {

void require_nonempty(std::span<const double> xs) {
  if (xs.empty()) throw EmptySample("statistic of an empty sample");
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw LengthMismatch("paired samples have different lengths");
  }
}

std::uint64_t bounded_u64(rng::Stream& stream, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = stream.next_u64();
  } while (draw >= limit);
  return draw % bound;
}

std::vector<std::size_t> random_permutation(std::size_t n, rng::Stream& stream) {
  std::vector<std::size_t> pi(n);
  std::iota(pi.begin(), pi.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(pi[i - 1], pi[bounded_u64(stream, i)]);
  }
  return pi;
}

// Double-centered distance matrix, row-major n x n.
std::vector<double> centered_distance_matrix(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<double> a(n * n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::fabs(xs[i] - xs[j]);
      a[i * n + j] = d;
      acc += d;
    }
    row_mean[i] = acc / static_cast<double>(n);
    grand += acc;
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a[i * n + j] += grand - row_mean[i] - row_mean[j];
    }
  }
  return a;
}

double matrix_inner_mean(const std::vector<double>& a, const std::vector<double>& b,
                         std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) acc += a[k] * b[k];
  return acc / (static_cast<double>(n) * static_cast<double>(n));
}

double sorted_projection_w1(std::vector<double>& pa, std::vector<double>& pb) {
  std::sort(pa.begin(), pa.end());
  std::sort(pb.begin(), pb.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) acc += std::fabs(pa[i] - pb[i]);
  return acc / static_cast<double>(pa.size());
}

}  // namespace

double mean(std::span<const double> xs) {
  require_nonempty(xs);
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw TooFewSamples("variance needs at least two samples");
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  if (xs.size() < 2) throw TooFewSamples("covariance needs at least two samples");
  const double mx = mean(xs);
  const double my = mean(ys);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += (xs[i] - mx) * (ys[i] - my);
  return acc / static_cast<double>(xs.size() - 1);
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
  const double vx = variance(xs);
  const double vy = variance(ys);
  if (vx == 0.0 || vy == 0.0) {
    throw ZeroVariance("correlation of a constant sample");
  }
  return covariance(xs, ys) / std::sqrt(vx * vy);
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError("quantile probability must lie in (0, 1)");
  }
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double err = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

std::vector<double> standardize(std::span<const double> xs, SigmaMode mode,
                                double oracle_sigma) {
  require_nonempty(xs);
  double scale;
  if (mode == SigmaMode::Oracle) {
    if (!(oracle_sigma > 0.0)) {
      throw NonpositiveValue("oracle standard deviation must be positive");
    }
    scale = oracle_sigma;
  } else {
    const double v = variance(xs);
    if (v == 0.0) throw ZeroVariance("cannot standardize a constant sample");
    scale = std::sqrt(v);
  }
  std::vector<double> out(xs.begin(), xs.end());
  for (double& x : out) x /= scale;
  return out;
}

double w1_to_std_normal(std::span<const double> xs) {
  require_nonempty(xs);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double q = inverse_normal_cdf((static_cast<double>(i) + 0.5) / n);
    acc += std::fabs(sorted[i] - q);
  }
  return acc / n;
}

double w1_empirical_pair(std::span<const double> a, std::span<const double> b) {
  require_same_length(a, b);
  require_nonempty(a);
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  return sorted_projection_w1(sa, sb);
}

double sliced_w1_joint(std::span<const double> f, std::span<const double> u,
                       const JointReference& reference, std::uint64_t seed,
                       int directions) {
  require_same_length(f, u);
  require_nonempty(f);
  if (directions <= 0) throw ConfigError("sliced_w1_joint needs directions > 0");
  const std::size_t n = f.size();

  std::vector<double> rf(n);
  std::vector<double> ru(n);
  rng::Stream stream(seed);
  if (const JointGaussian* law = std::get_if<JointGaussian>(&reference)) {
    if (!(law->var_f > 0.0) || !(law->var_u > 0.0)) {
      throw NonpositiveValue("joint Gaussian reference needs positive variances");
    }
    const double sf = std::sqrt(law->var_f);
    const double cross = law->cov / sf;
    const double resid2 = law->var_u - cross * cross;
    if (resid2 < 0.0) {
      throw NonpositiveValue("joint Gaussian reference is not positive definite");
    }
    const double resid = std::sqrt(resid2);
    for (std::size_t i = 0; i < n; ++i) {
      const double z1 = stream.next_normal();
      const double z2 = stream.next_normal();
      rf[i] = sf * z1;
      ru[i] = cross * z1 + resid * z2;
    }
  } else {
    const std::vector<std::size_t> pi = random_permutation(n, stream);
    for (std::size_t i = 0; i < n; ++i) {
      rf[i] = f[i];
      ru[i] = u[pi[i]];
    }
  }

  constexpr double kGoldenFraction = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  std::vector<double> pa(n);
  std::vector<double> pb(n);
  double acc = 0.0;
  for (int k = 0; k < directions; ++k) {
    const double theta =
        M_PI * std::fmod(static_cast<double>(k) * kGoldenFraction, 1.0);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (std::size_t i = 0; i < n; ++i) {
      pa[i] = ct * f[i] + st * u[i];
      pb[i] = ct * rf[i] + st * ru[i];
    }
    acc += sorted_projection_w1(pa, pb);
  }
  return acc / static_cast<double>(directions);
}

double distance_covariance(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  if (xs.size() < 2) throw TooFewSamples("distance covariance needs two samples");
  const std::vector<double> a = centered_distance_matrix(xs);
  const std::vector<double> b = centered_distance_matrix(ys);
  const double v = matrix_inner_mean(a, b, xs.size());
  return std::sqrt(std::max(0.0, v));
}

TestResult independence_test(std::span<const double> xs, std::span<const double> ys,
                             int permutations, std::uint64_t seed) {
  require_same_length(xs, ys);
  if (xs.size() < 2) throw TooFewSamples("independence test needs two samples");
  if (permutations <= 0) throw ConfigError("independence test needs permutations > 0");
  const std::size_t n = xs.size();
  const std::vector<double> a = centered_distance_matrix(xs);
  const std::vector<double> b = centered_distance_matrix(ys);
  const double observed = matrix_inner_mean(a, b, n);

  rng::Stream stream(seed);
  int at_least = 0;
  for (int rep = 0; rep < permutations; ++rep) {
    const std::vector<std::size_t> pi = random_permutation(n, stream);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* arow = a.data() + i * n;
      const double* brow = b.data() + pi[i] * n;
      for (std::size_t j = 0; j < n; ++j) acc += arow[j] * brow[pi[j]];
    }
    const double stat = acc / (static_cast<double>(n) * static_cast<double>(n));
    if (stat >= observed) ++at_least;
  }
  TestResult result;
  result.statistic = observed;
  result.p_value = (1.0 + at_least) / (static_cast<double>(permutations) + 1.0);
  result.permutations = permutations;
  return result;
}

RateFit loglog_fit(std::span<const double> xs, std::span<const double> ys) {
  require_same_length(xs, ys);
  if (xs.size() < 2) throw TooFewPoints("log-log fit needs at least two points");
  const std::size_t n = xs.size();
  std::vector<double> lx(n);
  std::vector<double> ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw NonpositiveValue("log-log fit needs positive coordinates");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw ZeroVariance("log-log fit needs distinct x values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residual_max = std::max(
        fit.residual_max, std::fabs(ly[i] - fit.intercept - fit.slope * lx[i]));
  }
  return fit;
}

}  // namespace spavg::stats
