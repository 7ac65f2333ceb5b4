#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fbe {

// Name of the random stream. Bump the suffix whenever the sampling procedures
// below change, since every stored seed depends on them.
inline constexpr std::string_view kRngStreamName = "mt19937_64/fbe-1";

// Seedable generator with portable distributions.
//
// std::mt19937_64 output is fixed by the standard, but the standard library
// distributions are implementation-defined, so the bounded-integer and normal
// samplers are implemented here to keep experiments reproducible across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal (Marsaglia polar method).
  double normal();

  // -1.0 or +1.0 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Child seed for work item `index` of a run seeded with `base` (splitmix64
// finalizer over both inputs). Used so per-item randomness does not depend on
// how items are scheduled.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

}  // namespace fbe
