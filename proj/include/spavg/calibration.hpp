#pragma once

#include <cstdint>

namespace spavg::calibration {

// Sampling noise floors for the W1 statistics: even a perfectly Gaussian
// sample of size n sits this far from its target law. Reference values were
// measured on exact normal draws and are frozen here; thresholds round the
// p99 up and scale as 1/sqrt(n) between the measured sizes.

struct FloorSummary {
  double mean = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
};

FloorSummary marginal_w1_floor_reference(long n);  // measured at n = 2000, 10000
FloorSummary sliced_w1_floor_reference(long n);

double marginal_w1_threshold(long n);
double sliced_w1_threshold(long n);

struct FloorMeasurement {
  double mean = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

// Re-measures the floors from fresh normal draws (used to audit the frozen
// constants above).
FloorMeasurement measure_marginal_w1_floor(long n, int reps, std::uint64_t seed);
FloorMeasurement measure_sliced_w1_floor(long n, int reps, std::uint64_t seed);

}  // namespace spavg::calibration
