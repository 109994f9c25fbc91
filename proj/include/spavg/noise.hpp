#pragma once

#include <memory>
#include <vector>

#include "spavg/grid.hpp"

namespace spavg {

struct NoiseSlice {
  long step_index = 0;
  std::vector<double> values;  // one entry per spatial cell
};

// One time-step of white noise: independent N(0, dt dx) per cell, a pure
// function of (grid, seed_spec).
NoiseSlice white_slice(const GridSpec& grid, const SeedSpec& seed);

// Spectral density of the Riesz covariance |x|^(alpha - 1) in d = 1:
// c(alpha) |xi|^(-alpha) with c chosen so the inverse cosine transform
// reproduces the kernel. Throws ZeroFrequency at xi = 0.
double riesz_spectrum(double alpha, double xi);
double riesz_constant(double alpha);

// Cell-averaged Riesz covariance: (1/dx^2) * double integral of
// |y - z|^(alpha - 1) over two cells of width dx separated by lag cells.
// Closed antiderivative form; an asymptotic tail keeps large lags accurate.
double cell_avg_riesz(double alpha, double dx, long lag);

// Smallest even integer >= n with no prime factor above 7 (FFT-friendly
// circulant embedding size).
long smooth_even_at_least(long n);

// Clips negative entries to zero in place; returns clipped mass as a fraction
// of total absolute mass.
double clip_negative_spectrum(std::vector<double>& spectrum);

// Precomputed circulant embedding of the target covariance dt * k_alpha(lag)
// on a 2x-extended periodic domain. Immutable and cheap to copy.
class ColoredPlan {
 public:
  ColoredPlan(const GridSpec& grid, double alpha);

  long cell_count() const;
  long embedding_size() const;
  double clipped_fraction() const;

 private:
  friend class ColoredSampler;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Per-thread sampler holding FFT work buffers for a plan. Not shareable
// across threads; create one per worker.
class ColoredSampler {
 public:
  explicit ColoredSampler(const ColoredPlan& plan);
  ~ColoredSampler();
  ColoredSampler(ColoredSampler&&) noexcept;
  ColoredSampler& operator=(ColoredSampler&&) noexcept;

  // Writes cell_count values with covariance dt * k_alpha(lag); a pure
  // function of the seed triple.
  void sample(const SeedSpec& seed, double* out);

 private:
  std::shared_ptr<const ColoredPlan::Impl> plan_;
  struct Buffers;
  std::unique_ptr<Buffers> buffers_;
};

// Process-wide plan cache keyed by (cell_count, dx, dt, alpha).
ColoredPlan shared_colored_plan(const GridSpec& grid, double alpha);

// Convenience wrapper: one stationary Gaussian slice with covariance
// dt * k_alpha(lag). Plans are cached internally per (grid, alpha).
NoiseSlice colored_slice(const GridSpec& grid, double alpha, const SeedSpec& seed);

}  // namespace spavg
