#include "fbe/baselines.hpp"

#include <algorithm>
#include <string>

#include "fbe/errors.hpp"
#include "fbe/rng.hpp"

namespace fbe {

namespace {

void check_input(std::span<const double> x, std::size_t n) {
  if (x.size() != n) {
    throw ShapeError("projector input: expected length " + std::to_string(n) + ", got " +
                     std::to_string(x.size()));
  }
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix g(rows, cols);
  for (auto& v : g.data) v = rng.normal();
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// LSH

LshProjector::LshProjector(std::size_t n, std::size_t m, std::uint64_t seed) : seed_(seed) {
  if (n == 0 || m == 0) throw ConfigError("LSH dimensions must be positive");
  Rng rng(seed);
  matrix_ = gaussian_matrix(m, n, rng);
}

std::vector<double> LshProjector::project(std::span<const double> x) const {
  check_input(x, input_dim());
  return matrix_.multiply(x);
}

// ---------------------------------------------------------------------------
// CBE

CbeProjector::CbeProjector(std::size_t n, std::size_t m, std::uint64_t seed, bool sign_flips)
    : circulant_(CirculantProjector::gaussian(n, derive_seed(seed, 0))),
      flips_(n, 1.0),
      m_(m),
      seed_(seed),
      flips_enabled_(sign_flips) {
  if (m == 0 || m > n) throw ConfigError("CBE code length must be in [1, N]");
  if (sign_flips) {
    Rng rng(derive_seed(seed, 1));
    for (auto& f : flips_) f = rng.sign();
  }
}

CbeProjector::CbeProjector(CirculantProjector circulant, std::vector<double> flips, std::size_t m)
    : circulant_(std::move(circulant)), flips_(std::move(flips)), m_(m), seeded_(false) {
  if (flips_.size() != circulant_.m()) throw ConfigError("sign flips must match the circulant size");
  if (m == 0 || m > circulant_.m()) throw ConfigError("CBE code length must be in [1, N]");
  for (double f : flips_) {
    if (f != 1.0 && f != -1.0) throw ConfigError("sign flips must be +1 or -1");
  }
  flips_enabled_ = std::any_of(flips_.begin(), flips_.end(), [](double f) { return f < 0; });
}

void CbeProjector::fill_workspace(std::span<const double> x, FftWorkspace& ws) const {
  check_input(x, input_dim());
  auto buf = ws.real();
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = flips_[i] * x[i];
  circulant_.apply_unnormalized(ws);
}

std::vector<double> CbeProjector::project(std::span<const double> x) const {
  FftWorkspace ws(input_dim());
  fill_workspace(x, ws);
  const double scale = 1.0 / static_cast<double>(input_dim());
  std::vector<double> out(m_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = ws.real()[i] * scale;
  return out;
}

BinaryCode CbeProjector::embed(std::span<const double> x) const {
  FftWorkspace ws(input_dim());
  fill_workspace(x, ws);
  return BinaryCode::from_values(ws.real().first(m_));
}

// ---------------------------------------------------------------------------
// BP

Factorization balanced_factorization(std::size_t total) {
  if (total == 0) throw ConfigError("cannot factor zero");
  std::size_t best = 1;
  for (std::size_t d = 1; d * d <= total; ++d) {
    if (total % d == 0) best = d;
  }
  return {best, total / best};
}

BpProjector::BpProjector(std::size_t n, std::size_t m, std::uint64_t seed)
    : BpProjector(balanced_factorization(n), balanced_factorization(m), seed) {}

BpProjector::BpProjector(Factorization input, Factorization output, std::uint64_t seed) : seed_(seed) {
  if (input.rows == 0 || input.cols == 0 || output.rows == 0 || output.cols == 0) {
    throw ConfigError("BP factors must be positive");
  }
  Rng rng(seed);
  left_ = gaussian_matrix(input.rows, output.rows, rng);
  right_ = gaussian_matrix(input.cols, output.cols, rng);
}

BpProjector::BpProjector(DenseMatrix left, DenseMatrix right)
    : left_(std::move(left)), right_(std::move(right)), seeded_(false) {
  if (left_.rows == 0 || left_.cols == 0 || right_.rows == 0 || right_.cols == 0) {
    throw ConfigError("BP factors must be positive");
  }
}

std::vector<double> BpProjector::project(std::span<const double> x) const {
  check_input(x, input_dim());
  const std::size_t n1 = left_.rows;
  const std::size_t m1 = left_.cols;
  const std::size_t n2 = right_.rows;
  const std::size_t m2 = right_.cols;

  // T = L^T X, stored column-major m1 x n2.
  std::vector<double> t(m1 * n2, 0.0);
  for (std::size_t j = 0; j < n2; ++j) {
    const double* col = x.data() + j * n1;
    double* tcol = t.data() + j * m1;
    for (std::size_t i = 0; i < n1; ++i) {
      const double xij = col[i];
      const double* lrow = left_.data.data() + i * m1;
      for (std::size_t a = 0; a < m1; ++a) tcol[a] += lrow[a] * xij;
    }
  }
  // Y = T R, column-major m1 x m2.
  std::vector<double> y(m1 * m2, 0.0);
  for (std::size_t j = 0; j < n2; ++j) {
    const double* tcol = t.data() + j * m1;
    const double* rrow = right_.data.data() + j * m2;
    for (std::size_t b = 0; b < m2; ++b) {
      const double r = rrow[b];
      double* ycol = y.data() + b * m1;
      for (std::size_t a = 0; a < m1; ++a) ycol[a] += tcol[a] * r;
    }
  }
  return y;
}

}  // namespace fbe
