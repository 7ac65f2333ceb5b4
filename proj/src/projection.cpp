#include "fbe/projection.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fbe/errors.hpp"
#include "fbe/rng.hpp"

namespace fbe {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                     std::to_string(got));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Randomizer

Randomizer::Randomizer(std::size_t n, std::uint64_t seed) : seed_(seed) {
  if (n == 0) throw ConfigError("randomizer dimension must be positive");
  if (n > UINT32_MAX) throw ConfigError("randomizer dimension exceeds 32-bit index range");
  Rng rng(seed);
  permutation_.resize(n);
  std::iota(permutation_.begin(), permutation_.end(), 0U);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(permutation_[i], permutation_[rng.uniform_below(i + 1)]);
  }
  signs_.resize(n);
  for (auto& s : signs_) s = rng.sign() > 0 ? 1 : -1;
}

Randomizer Randomizer::from_parts(std::vector<std::uint32_t> permutation,
                                  std::vector<std::int8_t> signs) {
  if (permutation.empty()) throw ConfigError("randomizer dimension must be positive");
  if (permutation.size() != signs.size()) throw ConfigError("permutation and signs differ in length");
  std::vector<bool> seen(permutation.size(), false);
  for (auto p : permutation) {
    if (p >= permutation.size() || seen[p]) throw ConfigError("permutation is not a bijection");
    seen[p] = true;
  }
  for (auto s : signs) {
    if (s != 1 && s != -1) throw ConfigError("signs must be +1 or -1");
  }
  Randomizer r;
  r.permutation_ = std::move(permutation);
  r.signs_ = std::move(signs);
  return r;
}

Randomizer Randomizer::identity(std::size_t n) {
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  return from_parts(std::move(perm), std::vector<std::int8_t>(n, 1));
}

std::vector<double> Randomizer::apply(std::span<const double> x) const {
  std::vector<double> y(n());
  apply_into(x, y);
  return y;
}

void Randomizer::apply_into(std::span<const double> x, std::span<double> y) const {
  require_length(x.size(), n(), "randomizer input");
  require_length(y.size(), n(), "randomizer output");
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[permutation_[i]] = signs_[i] > 0 ? x[i] : -x[i];
  }
}

// ---------------------------------------------------------------------------
// Downsampler

Downsampler::Downsampler(std::size_t n, std::size_t m) : n_(n), m_(m) {
  if (m == 0) throw ConfigError("output dimension must be positive");
  if (n < m) throw ConfigError("input dimension must be at least the output dimension");
  if (n % m != 0) {
    throw ConfigError("output dimension " + std::to_string(m) + " does not divide input dimension " +
                      std::to_string(n) + "; pad the input first");
  }
}

std::vector<double> Downsampler::apply(std::span<const double> y) const {
  std::vector<double> out(m_);
  apply_into(y, out);
  return out;
}

void Downsampler::apply_into(std::span<const double> y, std::span<double> out) const {
  require_length(y.size(), n_, "downsampler input");
  require_length(out.size(), m_, "downsampler output");
  std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m_), out.begin());
  for (std::size_t base = m_; base < n_; base += m_) {
    for (std::size_t k = 0; k < m_; ++k) out[k] += y[base + k];
  }
}

// ---------------------------------------------------------------------------
// CirculantProjector

CirculantProjector::CirculantProjector(std::vector<double> seed_vector, std::uint64_t rng_seed)
    : seed_vector_(std::move(seed_vector)), rng_seed_(rng_seed) {
  if (seed_vector_.empty()) throw ConfigError("circulant dimension must be positive");
  fft_ = RealFft::of_size(seed_vector_.size());
  seed_spectrum_ = fft_->full_spectrum(seed_vector_);
}

CirculantProjector CirculantProjector::gaussian(std::size_t m, std::uint64_t rng_seed) {
  if (m == 0) throw ConfigError("circulant dimension must be positive");
  Rng rng(rng_seed);
  std::vector<double> seed(m);
  for (auto& d : seed) d = rng.normal();
  return CirculantProjector(std::move(seed), rng_seed);
}

void CirculantProjector::apply_unnormalized(FftWorkspace& ws) const {
  fft_->forward(ws);
  auto spec = ws.spectrum();
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= std::conj(seed_spectrum_[k]);
  fft_->inverse(ws);
}

std::vector<double> CirculantProjector::apply_fft(std::span<const double> v) const {
  require_length(v.size(), m(), "circulant input");
  FftWorkspace ws(m());
  std::copy(v.begin(), v.end(), ws.real().begin());
  apply_unnormalized(ws);
  const double scale = 1.0 / static_cast<double>(m());
  std::vector<double> out(m());
  std::transform(ws.real().begin(), ws.real().end(), out.begin(), [scale](double a) { return a * scale; });
  return out;
}

std::vector<double> CirculantProjector::apply_naive(std::span<const double> v) const {
  require_length(v.size(), m(), "circulant input");
  const std::size_t len = m();
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < len; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < len; ++j) acc += seed_vector_[(j + len - i) % len] * v[j];
    out[i] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embedder

Embedder Embedder::create(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw ConfigError("embedder dimensions must be positive");
  if (m > n) throw ConfigError("code length must not exceed input dimension");
  const std::size_t padded = padded_length(n, m);
  return Embedder(Randomizer(padded, derive_seed(seed, 0)),
                  CirculantProjector::gaussian(m, derive_seed(seed, 1)), n, seed);
}

Embedder::Embedder(Randomizer randomizer, CirculantProjector circulant, std::size_t input_dim,
                   std::uint64_t seed)
    : randomizer_(std::move(randomizer)),
      downsampler_(randomizer_.n(), circulant.m()),
      circulant_(std::move(circulant)),
      input_dim_(input_dim),
      seed_(seed) {
  if (input_dim_ == 0 || input_dim_ > randomizer_.n() ||
      padded_length(input_dim_, circulant_.m()) != randomizer_.n()) {
    throw ConfigError("randomizer length must be the input dimension padded to a multiple of M");
  }
  const auto m = static_cast<std::uint32_t>(circulant_.m());
  bin_.resize(input_dim_);
  sign_.resize(input_dim_);
  for (std::size_t i = 0; i < input_dim_; ++i) {
    bin_[i] = randomizer_.permutation()[i] % m;
    sign_[i] = randomizer_.signs()[i];
  }
}

void Embedder::scatter(std::span<const double> x, std::span<double> out) const {
  require_length(x.size(), input_dim_, "embedder input");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < input_dim_; ++i) out[bin_[i]] += sign_[i] * x[i];
}

std::vector<double> Embedder::downsampled(std::span<const double> x) const {
  std::vector<double> out(code_bits());
  scatter(x, out);
  return out;
}

std::vector<double> Embedder::project(std::span<const double> x) const {
  FftWorkspace ws(code_bits());
  scatter(x, ws.real());
  circulant_.apply_unnormalized(ws);
  const double scale = 1.0 / static_cast<double>(code_bits());
  std::vector<double> out(code_bits());
  std::transform(ws.real().begin(), ws.real().end(), out.begin(), [scale](double a) { return a * scale; });
  return out;
}

BinaryCode Embedder::embed(std::span<const double> x) const {
  FftWorkspace ws(code_bits());
  scatter(x, ws.real());
  circulant_.apply_unnormalized(ws);
  return BinaryCode::from_values(ws.real());
}

DenseMatrix Embedder::materialize() const {
  const std::size_t m = code_bits();
  const std::size_t n = input_dim_;
  if (m * n > kMaterializeCap) {
    throw SizeError("materialize: " + std::to_string(m) + "x" + std::to_string(n) +
                    " exceeds the entry cap");
  }
  // A(i, j) = sum_k D(i, k) Phi(k, p(j)) s_j, with Phi(k, c) = 1 iff (c - k) mod M == 0
  // and D(i, k) = d[(k - i) mod M].
  const auto d = circulant_.seed_vector();
  DenseMatrix a(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t col = randomizer_.permutation()[j];
    const double s = randomizer_.signs()[j];
    for (std::size_t k = 0; k < m; ++k) {
      if ((col + m - k % m) % m != 0) continue;
      for (std::size_t i = 0; i < m; ++i) a(i, j) += d[(k + m - i) % m] * s;
    }
  }
  return a;
}

}  // namespace fbe
