#include "spavg/rng.hpp"

#include <cmath>

namespace spavg::rng {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kMixA = 0xBF58476D1CE4E5B9ULL;
constexpr std::uint64_t kMixB = 0x94D049BB133111EBULL;

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// 256-layer ziggurat tables for the standard normal (Doornik layout).
// Tail cut and layer area are the standard constants for 256 layers.
struct ZigguratTables {
  static constexpr int kLayers = 256;
  static constexpr double kR = 3.6541528853610088;
  static constexpr double kV = 0.00492867323399;

  double x[kLayers + 1];
  double f[kLayers + 1];
  double ratio[kLayers];

  ZigguratTables() {
    auto density = [](double t) { return std::exp(-0.5 * t * t); };
    x[1] = kR;
    x[0] = kV / density(kR);
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + density(x[i - 1])));
    }
    x[kLayers] = 0.0;
    for (int i = 0; i <= kLayers; ++i) f[i] = density(x[i]);
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= kMixA;
  z ^= z >> 27;
  z *= kMixB;
  z ^= z >> 31;
  return z;
}

std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t replica_index,
                         std::uint64_t step_index) {
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ (replica_index + kGolden));
  k = mix64(k ^ (step_index + 0xD1B54A32D192ED03ULL));
  return k;
}

Stream::Stream(std::uint64_t key) {
  // Seed the four state words from the key with splitmix64; guards against
  // the all-zero state by construction (mix64 output of distinct inputs).
  std::uint64_t sm = key;
  for (auto& word : s_) {
    sm += kGolden;
    word = mix64(sm);
  }
}

std::uint64_t Stream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Stream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_unit_pos() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::next_normal() {
  const ZigguratTables& z = tables();
  for (;;) {
    const std::uint64_t bits = next_u64();
    const int layer = static_cast<int>(bits & 255u);
    // Signed uniform in (-1, 1) from the top 54 bits.
    const double u =
        static_cast<double>(static_cast<std::int64_t>(bits >> 10) -
                            (std::int64_t{1} << 53)) *
        0x1.0p-53;
    if (std::fabs(u) < z.ratio[layer]) {
      return u * z.x[layer];
    }
    if (layer == 0) {
      // Exact tail beyond kR (Marsaglia exponential method).
      for (;;) {
        const double ex = -std::log(next_unit_pos()) / ZigguratTables::kR;
        const double ey = -std::log(next_unit_pos());
        if (ey + ey > ex * ex) {
          return u < 0.0 ? -(ZigguratTables::kR + ex) : (ZigguratTables::kR + ex);
        }
      }
    }
    const double cand = u * z.x[layer];
    const double fc = std::exp(-0.5 * cand * cand);
    if (fc > z.f[layer + 1] + next_unit() * (z.f[layer] - z.f[layer + 1])) {
      return cand;
    }
  }
}

void Stream::fill_normals(double* out, std::size_t n, double sd) {
  for (std::size_t i = 0; i < n; ++i) out[i] = sd * next_normal();
}

}  // namespace spavg::rng
