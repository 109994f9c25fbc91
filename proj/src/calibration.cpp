#include "spavg/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spavg/errors.hpp"
#include "spavg/rng.hpp"
#include "spavg/stats.hpp"

namespace spavg::calibration {
namespace {

constexpr double kMarginalScale = 2.9;  // threshold = scale / sqrt(n)
constexpr double kSlicedScale = 3.05;

double interpolated_quantile(std::vector<double>& values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

FloorMeasurement summarize(std::vector<double> values) {
  FloorMeasurement m;
  m.mean = stats::mean(values);
  m.max = *std::max_element(values.begin(), values.end());
  m.p95 = interpolated_quantile(values, 0.95);
  m.p99 = interpolated_quantile(values, 0.99);
  return m;
}

}  // namespace

FloorSummary marginal_w1_floor_reference(long n) {
  if (n == 2000) return {0.030354, 0.053382, 0.061996};
  if (n == 10000) return {0.012851, 0.021839, 0.028381};
  throw ConfigError("marginal floor reference measured only at n = 2000, 10000");
}

FloorSummary sliced_w1_floor_reference(long n) {
  if (n == 2000) return {0.041086, 0.057367, 0.066503};
  if (n == 10000) return {0.018023, 0.025892, 0.029968};
  throw ConfigError("sliced floor reference measured only at n = 2000, 10000");
}

double marginal_w1_threshold(long n) {
  if (n <= 0) throw ConfigError("threshold needs n > 0");
  if (n == 2000) return 0.065;
  if (n == 10000) return 0.030;
  return kMarginalScale / std::sqrt(static_cast<double>(n));
}

double sliced_w1_threshold(long n) {
  if (n <= 0) throw ConfigError("threshold needs n > 0");
  if (n == 2000) return 0.070;
  if (n == 10000) return 0.032;
  return kSlicedScale / std::sqrt(static_cast<double>(n));
}

FloorMeasurement measure_marginal_w1_floor(long n, int reps, std::uint64_t seed) {
  if (n <= 1 || reps <= 0) throw ConfigError("floor measurement needs n > 1, reps > 0");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(reps));
  std::vector<double> sample(static_cast<std::size_t>(n));
  for (int rep = 0; rep < reps; ++rep) {
    rng::Stream stream(rng::stream_key(seed, static_cast<std::uint64_t>(rep), 0));
    stream.fill_normals(sample.data(), n, 1.0);
    values.push_back(stats::w1_to_std_normal(sample));
  }
  return summarize(std::move(values));
}

FloorMeasurement measure_sliced_w1_floor(long n, int reps, std::uint64_t seed) {
  if (n <= 1 || reps <= 0) throw ConfigError("floor measurement needs n > 1, reps > 0");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(reps));
  std::vector<double> f(static_cast<std::size_t>(n));
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int rep = 0; rep < reps; ++rep) {
    rng::Stream stream(rng::stream_key(seed, static_cast<std::uint64_t>(rep), 1));
    stream.fill_normals(f.data(), n, 1.0);
    stream.fill_normals(u.data(), n, 1.0);
    const std::uint64_t ref_seed =
        rng::stream_key(seed, static_cast<std::uint64_t>(rep), 2);
    values.push_back(stats::sliced_w1_joint(
        f, u, stats::JointGaussian{1.0, 0.0, 1.0}, ref_seed, 64));
  }
  return summarize(std::move(values));
}

}  // namespace spavg::calibration
