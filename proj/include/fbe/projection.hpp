#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fbe/binary_code.hpp"
#include "fbe/fft.hpp"
#include "fbe/projector.hpp"

namespace fbe {

// Random permutation composed with random sign flips: y[p(i)] = s_i * x[i].
// Both parts are generated from a single seed, so only the seed needs storing.
class Randomizer {
 public:
  Randomizer(std::size_t n, std::uint64_t seed);

  // Explicit construction (tests, degenerate embedders). Validates that
  // `permutation` is a bijection and every sign is +-1.
  static Randomizer from_parts(std::vector<std::uint32_t> permutation, std::vector<std::int8_t> signs);
  static Randomizer identity(std::size_t n);

  std::size_t n() const { return permutation_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::span<const std::uint32_t> permutation() const { return permutation_; }
  std::span<const std::int8_t> signs() const { return signs_; }

  std::vector<double> apply(std::span<const double> x) const;
  void apply_into(std::span<const double> x, std::span<double> y) const;

 private:
  Randomizer() = default;

  std::uint64_t seed_ = 0;
  std::vector<std::uint32_t> permutation_;
  std::vector<std::int8_t> signs_;
};

// The M x N 0/1 matrix summing coordinates by residue class mod M:
// out[k] = sum_i y[k + i*M]. Requires M | N.
class Downsampler {
 public:
  Downsampler(std::size_t n, std::size_t m);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  std::vector<double> apply(std::span<const double> y) const;
  void apply_into(std::span<const double> y, std::span<double> out) const;

 private:
  std::size_t n_;
  std::size_t m_;
};

// D = circ(d) with D(i, j) = d[(j - i) mod M]: row 0 is d and each following
// row is the previous one shifted right by one. D*v is the circular
// cross-correlation of d with v, i.e. IDFT(conj(DFT(d)) .* DFT(v)).
class CirculantProjector {
 public:
  explicit CirculantProjector(std::vector<double> seed_vector, std::uint64_t rng_seed = 0);

  // Seed vector with i.i.d. standard normal entries.
  static CirculantProjector gaussian(std::size_t m, std::uint64_t rng_seed);

  std::size_t m() const { return seed_vector_.size(); }
  std::uint64_t rng_seed() const { return rng_seed_; }
  std::span<const double> seed_vector() const { return seed_vector_; }
  // Full length-M forward DFT of the seed vector.
  std::span<const std::complex<double>> seed_spectrum() const { return seed_spectrum_; }

  std::vector<double> apply_fft(std::span<const double> v) const;
  std::vector<double> apply_naive(std::span<const double> v) const;

  // In-place on ws.real(), result left scaled by M (positive, so signs are unaffected).
  void apply_unnormalized(FftWorkspace& ws) const;

 private:
  std::vector<double> seed_vector_;
  std::vector<std::complex<double>> seed_spectrum_;
  std::shared_ptr<const RealFft> fft_;
  std::uint64_t rng_seed_;
};

// The proposed embedding h = sign(D * Phi * R * x).
//
// Inputs of dimension N with M not dividing N are zero-padded to
// M * ceil(N / M) internally; the randomizer acts on the padded length.
class Embedder final : public BinaryProjector {
 public:
  // Maximum number of entries materialize() will produce.
  static constexpr std::size_t kMaterializeCap = std::size_t{1} << 22;

  // Randomizer and circulant seed drawn from child seeds of `seed`.
  static Embedder create(std::size_t n, std::size_t m, std::uint64_t seed);

  Embedder(Randomizer randomizer, CirculantProjector circulant, std::size_t input_dim,
           std::uint64_t seed = 0);

  Method method() const override { return Method::proposed; }
  std::size_t input_dim() const override { return input_dim_; }
  std::size_t padded_dim() const { return downsampler_.n(); }
  std::size_t code_bits() const override { return downsampler_.m(); }
  std::uint64_t seed() const { return seed_; }

  const Randomizer& randomizer() const { return randomizer_; }
  const Downsampler& downsampler() const { return downsampler_; }
  const CirculantProjector& circulant() const { return circulant_; }

  std::vector<double> project(std::span<const double> x) const override;
  BinaryCode embed(std::span<const double> x) const override;

  // Phi * R * x, length M.
  std::vector<double> downsampled(std::span<const double> x) const;

  // Explicit M x N matrix built from the definitions of D, Phi and R
  // (independent of the fast path). Throws SizeError above kMaterializeCap.
  DenseMatrix materialize() const;

 private:
  void scatter(std::span<const double> x, std::span<double> out) const;

  Randomizer randomizer_;
  Downsampler downsampler_;
  CirculantProjector circulant_;
  std::size_t input_dim_;
  std::uint64_t seed_;
  // Fused R and Phi for the real (unpadded) coordinates: coordinate i lands in
  // bin_[i] with sign sign_[i].
  std::vector<std::uint32_t> bin_;
  std::vector<double> sign_;
};

// Smallest multiple of m that is >= n.
inline std::size_t padded_length(std::size_t n, std::size_t m) { return m * ((n + m - 1) / m); }

}  // namespace fbe
