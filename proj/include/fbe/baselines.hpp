#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbe/projection.hpp"
#include "fbe/projector.hpp"

namespace fbe {

// Full Gaussian projection: sign(G x) with G an M x N matrix of i.i.d. N(0, 1) entries.
class LshProjector final : public BinaryProjector {
 public:
  LshProjector(std::size_t n, std::size_t m, std::uint64_t seed);

  Method method() const override { return Method::lsh; }
  std::size_t input_dim() const override { return matrix_.cols; }
  std::size_t code_bits() const override { return matrix_.rows; }
  std::uint64_t seed() const { return seed_; }
  const DenseMatrix& matrix() const { return matrix_; }

  std::vector<double> project(std::span<const double> x) const override;

 private:
  DenseMatrix matrix_;
  std::uint64_t seed_;
};

// Circulant projection at full size N with Rademacher pre-flips; the code is
// the first M coordinates of circ(d) * (flips .* x). Always pays a length-N FFT.
class CbeProjector final : public BinaryProjector {
 public:
  CbeProjector(std::size_t n, std::size_t m, std::uint64_t seed, bool sign_flips = true);
  CbeProjector(CirculantProjector circulant, std::vector<double> flips, std::size_t m);

  Method method() const override { return Method::cbe; }
  std::size_t input_dim() const override { return circulant_.m(); }
  std::size_t code_bits() const override { return m_; }
  std::uint64_t seed() const { return seed_; }
  bool seeded() const { return seeded_; }
  bool has_sign_flips() const { return flips_enabled_; }
  const CirculantProjector& circulant() const { return circulant_; }
  std::span<const double> sign_flips() const { return flips_; }

  std::vector<double> project(std::span<const double> x) const override;
  BinaryCode embed(std::span<const double> x) const override;

 private:
  void fill_workspace(std::span<const double> x, FftWorkspace& ws) const;

  CirculantProjector circulant_;
  std::vector<double> flips_;
  std::size_t m_;
  std::uint64_t seed_ = 0;
  bool flips_enabled_ = true;
  bool seeded_ = true;
};

// Factor sizes for the bilinear projection: rows * cols == total with rows
// the largest divisor of total not exceeding sqrt(total).
struct Factorization {
  std::size_t rows = 1;
  std::size_t cols = 1;
};
Factorization balanced_factorization(std::size_t total);

// Bilinear projection. x is reshaped column-major into an n1 x n2 matrix X and
// mapped to L^T X R (m1 x m2), with L: n1 x m1 and R: n2 x m2 Gaussian. Code
// bit a + b*m1 is the sign of entry (a, b), so the code equals
// sign((R^T kron L^T) x).
class BpProjector final : public BinaryProjector {
 public:
  // Both factorizations follow balanced_factorization().
  BpProjector(std::size_t n, std::size_t m, std::uint64_t seed);
  BpProjector(Factorization input, Factorization output, std::uint64_t seed);
  BpProjector(DenseMatrix left, DenseMatrix right);

  Method method() const override { return Method::bp; }
  std::size_t input_dim() const override { return left_.rows * right_.rows; }
  std::size_t code_bits() const override { return left_.cols * right_.cols; }
  std::uint64_t seed() const { return seed_; }
  bool seeded() const { return seeded_; }
  Factorization input_factors() const { return {left_.rows, right_.rows}; }
  Factorization output_factors() const { return {left_.cols, right_.cols}; }
  const DenseMatrix& left() const { return left_; }
  const DenseMatrix& right() const { return right_; }

  std::vector<double> project(std::span<const double> x) const override;

 private:
  DenseMatrix left_;   // n1 x m1
  DenseMatrix right_;  // n2 x m2
  std::uint64_t seed_ = 0;
  bool seeded_ = true;
};

}  // namespace fbe
