#include "spavg/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "spavg/rng.hpp"

namespace spavg {
namespace {

// The FFTW planner is not thread-safe; all plan creation/destruction is
// serialized. Plans themselves may be executed concurrently via the
// new-array interface with per-thread buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

NoiseSlice white_slice(const GridSpec& grid, const SeedSpec& seed) {
  rng::Stream stream(
      rng::stream_key(seed.master_seed, seed.replica_index, seed.step_index));
  NoiseSlice slice;
  slice.step_index = static_cast<long>(seed.step_index);
  slice.values.resize(grid.cell_count);
  stream.fill_normals(slice.values.data(), slice.values.size(),
                      std::sqrt(grid.step * grid.cell_width));
  return slice;
}

double riesz_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("riesz alpha must lie in (0, 1)");
  }
  return 2.0 * std::tgamma(alpha) * std::cos(0.5 * M_PI * alpha);
}

double riesz_spectrum(double alpha, double xi) {
  const double c = riesz_constant(alpha);
  if (xi == 0.0) throw ZeroFrequency("riesz_spectrum is singular at xi = 0");
  return c * std::pow(std::fabs(xi), -alpha);
}

double cell_avg_riesz(double alpha, double dx, long lag) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("riesz alpha must lie in (0, 1)");
  }
  if (!(dx > 0.0)) throw ConfigError("cell_avg_riesz requires dx > 0");
  if (lag < 0) throw ConfigError("cell_avg_riesz requires lag >= 0");
  const double beta = 1.0 - alpha;
  const double gamma = 2.0 - beta;  // = 1 + alpha
  const double scale = std::pow(dx, -beta);
  const double denom = (1.0 - beta) * (2.0 - beta);
  if (lag == 0) {
    return scale * 2.0 / denom;
  }
  const double l = static_cast<double>(lag);
  if (lag <= 1000) {
    const double second_diff = std::pow(l + 1.0, gamma) - 2.0 * std::pow(l, gamma) +
                               std::pow(l - 1.0, gamma);
    return scale * second_diff / denom;
  }
  // Large lags: the finite second difference of l^gamma cancels
  // catastrophically; its asymptotic expansion is accurate to ~1e-12 here.
  return scale * std::pow(l, -beta) *
         (1.0 + beta * (beta + 1.0) / (12.0 * l * l));
}

long smooth_even_at_least(long n) {
  long m = std::max<long>(2, n + (n % 2));
  for (;; m += 2) {
    long r = m;
    for (long p : {2L, 3L, 5L, 7L}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

double clip_negative_spectrum(std::vector<double>& spectrum) {
  double total = 0.0;
  double clipped = 0.0;
  for (double& v : spectrum) {
    total += std::fabs(v);
    if (v < 0.0) {
      clipped += -v;
      v = 0.0;
    }
  }
  return total > 0.0 ? clipped / total : 0.0;
}

struct ColoredPlan::Impl {
  long cells = 0;
  long m = 0;
  double clipped_fraction = 0.0;
  // amplitude[k] scales the complex spectral coefficient at bin k so that the
  // inverse transform has covariance dt * k_alpha(lag) on the window.
  std::vector<double> amplitude;  // size m/2 + 1
  fftw_plan c2r = nullptr;
  std::unique_ptr<fftw_complex, FftwDeleter> plan_in;
  std::unique_ptr<double, FftwDeleter> plan_out;

  ~Impl() {
    if (c2r != nullptr) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(c2r);
    }
  }
};

ColoredPlan::ColoredPlan(const GridSpec& grid, double alpha) {
  auto impl = std::make_shared<Impl>();
  impl->cells = grid.cell_count;
  impl->m = smooth_even_at_least(2 * grid.cell_count);
  const long m = impl->m;

  // Covariance row of the periodic embedding.
  std::vector<double> row(m);
  for (long l = 0; l < m; ++l) {
    row[l] = grid.step * cell_avg_riesz(alpha, grid.cell_width, std::min(l, m - l));
  }

  // Eigenvalues of the circulant = DFT of the row (real by symmetry).
  std::vector<double> spectrum(m / 2 + 1);
  {
    std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(m));
    std::unique_ptr<fftw_complex, FftwDeleter> out(fftw_alloc_complex(m / 2 + 1));
    fftw_plan r2c;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      r2c = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.get(), out.get(),
                                 FFTW_ESTIMATE);
    }
    for (long l = 0; l < m; ++l) in.get()[l] = row[l];
    fftw_execute(r2c);
    for (long k = 0; k <= m / 2; ++k) spectrum[k] = out.get()[k][0];
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(r2c);
    }
  }

  impl->clipped_fraction = clip_negative_spectrum(spectrum);
  if (impl->clipped_fraction > 1e-6) {
    throw NegativeSpectrumClipped(
        "circulant embedding spectrum has clipped mass fraction " +
            std::to_string(impl->clipped_fraction),
        impl->clipped_fraction);
  }

  impl->amplitude.resize(m / 2 + 1);
  const double dm = static_cast<double>(m);
  impl->amplitude[0] = std::sqrt(spectrum[0] / dm);
  for (long k = 1; k < m / 2; ++k) {
    impl->amplitude[k] = std::sqrt(spectrum[k] / (2.0 * dm));
  }
  impl->amplitude[m / 2] = std::sqrt(spectrum[m / 2] / dm);

  impl->plan_in.reset(fftw_alloc_complex(m / 2 + 1));
  impl->plan_out.reset(fftw_alloc_real(m));
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl->c2r = fftw_plan_dft_c2r_1d(static_cast<int>(m), impl->plan_in.get(),
                                     impl->plan_out.get(), FFTW_ESTIMATE);
  }
  impl_ = std::move(impl);
}

long ColoredPlan::cell_count() const { return impl_->cells; }
long ColoredPlan::embedding_size() const { return impl_->m; }
double ColoredPlan::clipped_fraction() const { return impl_->clipped_fraction; }

struct ColoredSampler::Buffers {
  std::unique_ptr<fftw_complex, FftwDeleter> in;
  std::unique_ptr<double, FftwDeleter> out;
};

ColoredSampler::ColoredSampler(const ColoredPlan& plan)
    : plan_(plan.impl_), buffers_(std::make_unique<Buffers>()) {
  buffers_->in.reset(fftw_alloc_complex(plan_->m / 2 + 1));
  buffers_->out.reset(fftw_alloc_real(plan_->m));
}

ColoredSampler::~ColoredSampler() = default;
ColoredSampler::ColoredSampler(ColoredSampler&&) noexcept = default;
ColoredSampler& ColoredSampler::operator=(ColoredSampler&&) noexcept = default;

void ColoredSampler::sample(const SeedSpec& seed, double* out) {
  const long m = plan_->m;
  rng::Stream stream(
      rng::stream_key(seed.master_seed, seed.replica_index, seed.step_index));
  fftw_complex* in = buffers_->in.get();
  const double* amp = plan_->amplitude.data();
  in[0][0] = amp[0] * stream.next_normal();
  in[0][1] = 0.0;
  for (long k = 1; k < m / 2; ++k) {
    in[k][0] = amp[k] * stream.next_normal();
    in[k][1] = amp[k] * stream.next_normal();
  }
  in[m / 2][0] = amp[m / 2] * stream.next_normal();
  in[m / 2][1] = 0.0;
  fftw_execute_dft_c2r(plan_->c2r, in, buffers_->out.get());
  const double* full = buffers_->out.get();
  for (long j = 0; j < plan_->cells; ++j) out[j] = full[j];
}

ColoredPlan shared_colored_plan(const GridSpec& grid, double alpha) {
  using Key = std::tuple<long, double, double, double>;
  static std::mutex cache_mutex;
  static std::map<Key, ColoredPlan> cache;

  const Key key{grid.cell_count, grid.cell_width, grid.step, alpha};
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, ColoredPlan(grid, alpha)).first;
  }
  return it->second;
}

NoiseSlice colored_slice(const GridSpec& grid, double alpha, const SeedSpec& seed) {
  NoiseSlice slice;
  slice.step_index = static_cast<long>(seed.step_index);
  slice.values.resize(grid.cell_count);
  ColoredSampler sampler(shared_colored_plan(grid, alpha));
  sampler.sample(seed, slice.values.data());
  return slice;
}

}  // namespace spavg
