#pragma once

#include <cstddef>
#include <cstdint>

namespace spavg::rng {

// Full-avalanche 64-bit finalizer (splitmix64 style).
std::uint64_t mix64(std::uint64_t z);

// Derives a stream key for the (master_seed, replica, step) counter triple.
// Distinct triples give statistically independent streams; the mapping is a
// pure function, so parallel callers get bit-identical streams regardless of
// scheduling.
std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t replica_index,
                         std::uint64_t step_index);

// xoshiro256++ with a ziggurat normal sampler. One instance per stream; not
// shared across threads.
class Stream {
 public:
  explicit Stream(std::uint64_t key);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_unit();

  // Uniform on (0, 1); never returns 0 (safe for log()).
  double next_unit_pos();

  // Standard normal via a 256-layer ziggurat with exact tail sampling.
  double next_normal();

  void fill_normals(double* out, std::size_t n, double sd = 1.0);

 private:
  std::uint64_t s_[4];
};

}  // namespace spavg::rng
