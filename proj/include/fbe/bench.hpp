#pragma once

#include <cstddef>
#include <cstdint>

#include "fbe/projector.hpp"

namespace fbe {

inline constexpr double kBytesPerMegabyte = 1024.0 * 1024.0;

// Bytes needed to store a projector with 32-bit floats:
//   lsh       4 M N
//   cbe       4 N
//   bp        4 (n1 m1 + n2 m2) with balanced factorizations of N and M
//   proposed  4 M + ceil(N / 8)   (seed vector plus sign bits; the permutation
//                                  is regenerated from a 64-bit seed)
std::uint64_t storage_bytes(Method method, std::uint64_t n, std::uint64_t m);

inline double bytes_to_megabytes(std::uint64_t bytes) { return static_cast<double>(bytes) / kBytesPerMegabyte; }

struct BenchConfig {
  Method method = Method::proposed;
  std::size_t n = 1 << 14;
  std::size_t m = 1 << 8;
  std::size_t repetitions = 7;
  std::size_t warmup = 3;
  std::uint64_t rng_seed = 0;
  // Each repetition embeds a batch of fresh vectors sized so the batch takes
  // at least this long; the reported time is per embedding.
  double min_batch_seconds = 2e-3;
};

struct TimingResult {
  double median_s = 0.0;
  double q1_s = 0.0;
  double q3_s = 0.0;
  std::size_t repetitions = 0;
  std::size_t batch = 0;
};

// Projector construction and input generation happen outside the timed
// region; only embedding is timed. Runs on the calling thread.
TimingResult time_embed(const BenchConfig& config);

}  // namespace fbe
