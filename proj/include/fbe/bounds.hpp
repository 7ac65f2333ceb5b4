#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fbe {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::uint64_t n, std::uint64_t k);

// Probability lower bound kept as an exact fraction alongside its double value.
struct ExactBound {
  Rational exact;
  double value = 0.0;

  std::string fraction() const;
};

// Generic concentration bound for a Gaussian matrix:
//   1 - 2 (12/delta)^K exp(-(delta^2/16 - delta^3/48) M),
// evaluated in log space and clamped to [0, 1]. Requires 0 < delta < 1.
double theorem1_lower_bound(std::size_t k, std::size_t m, double delta);

// P(fewer than f residue classes mod M receive two or more non-zeros of R x)
//   >= 1 - C(M, f) C(N/M, 2)^f C(N-2f, K-2f) / C(N, K),
// computed exactly and clamped at 0. Requires M | N and 1 <= f <= K/2.
ExactBound lemma1_exact_bound(std::size_t n, std::size_t m, std::size_t k, std::size_t f);

// Stirling relaxation of the above: 1 - (e K^2 / (2 M f))^f / sqrt(2 pi f), clamped to [0, 1].
double lemma1_stirling_bound(std::size_t m, std::size_t k, std::size_t f);

// Probability that Phi R is an exact isometry on a K-sparse x (the f = 1 case).
// K = 1 is allowed and gives exactly 1.
struct IsometryBound {
  ExactBound exact;
  double stirling = 0.0;
};
IsometryBound theorem2_bound(std::size_t n, std::size_t m, std::size_t k);

// One point of the {0,1}-signal distortion curve: with g = C(N/M, 2),
// delta = 2 g (f - 1) / K for f = 1 .. K/2.
struct BoundPoint {
  double delta = 0.0;
  std::size_t f = 1;
  ExactBound exact;     // running maximum over smaller f, so non-decreasing in delta
  double stirling = 0;  // same treatment
  double theorem1 = 0;  // Gaussian-matrix bound at this delta, 0 outside (0, 1)
};
std::vector<BoundPoint> theorem3_bound_curve(std::size_t n, std::size_t m, std::size_t k);

// Exhaustive count over all K-subsets of {0..N-1}: how many supports put two
// or more entries into exactly c residue classes mod M.
struct CollisionTable {
  static constexpr std::uint64_t kMaxSubsets = 10'000'000;

  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  BigInt total;
  std::vector<std::uint64_t> supports_with_collisions;  // indexed by c

  // P(E_f): fraction of supports with fewer than f colliding classes.
  Rational probability_fewer_than(std::size_t f) const;
};
CollisionTable enumerate_collision_oracle(std::size_t n, std::size_t m, std::size_t k);

}  // namespace fbe
