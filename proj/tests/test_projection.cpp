#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "fbe/errors.hpp"
#include "fbe/fft.hpp"
#include "fbe/projection.hpp"
#include "fbe/rng.hpp"
#include "oracles.hpp"

namespace fbe {
namespace {

TEST(Randomizer, IdentityLeavesInputAlone) {
  const auto r = Randomizer::identity(3);
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(r.apply(x), x);
}

TEST(Randomizer, SwapWithSignFlip) {
  const auto r = Randomizer::from_parts({1, 0}, {-1, 1});
  const std::vector<double> x{3, 5};
  EXPECT_EQ(r.apply(x), (std::vector<double>{5, -3}));
}

TEST(Randomizer, ZeroMapsToZero) {
  const Randomizer r(17, 5);
  const std::vector<double> zero(17, 0.0);
  for (double v : r.apply(zero)) EXPECT_EQ(v, 0.0);
}

TEST(Randomizer, RejectsInvalidParts) {
  EXPECT_THROW(Randomizer::from_parts({0, 0}, {1, 1}), ConfigError);
  EXPECT_THROW(Randomizer::from_parts({0, 2}, {1, 1}), ConfigError);
  EXPECT_THROW(Randomizer::from_parts({1, 0}, {1, 0}), ConfigError);
  EXPECT_THROW(Randomizer::from_parts({1, 0}, {1}), ConfigError);
}

TEST(Randomizer, RejectsWrongLength) {
  const Randomizer r(4, 1);
  const std::vector<double> x(5, 1.0);
  EXPECT_THROW(r.apply(x), ShapeError);
}

TEST(Randomizer, PreservesNormExactly) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + gen() % 500;
    const Randomizer r(n, gen());
    const auto x = oracle::gaussian_vector(n, gen);
    auto y = r.apply(x);
    // Same multiset of magnitudes, so the sorted squares (and their sum) agree bitwise.
    auto sq = [](std::vector<double> v) {
      for (auto& e : v) e = e * e;
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(sq(x), sq(y));
  }
}

TEST(Randomizer, PermutationIsUniformOverSmallGroup) {
  // All 6 permutations of 3 elements, 60000 draws.
  std::vector<int> counts(27, 0);
  for (std::uint64_t s = 0; s < 60000; ++s) {
    const Randomizer r(3, derive_seed(99, s));
    const auto p = r.permutation();
    ++counts[p[0] * 9 + p[1] * 3 + p[2]];
  }
  double chi2 = 0;
  int seen = 0;
  for (int c : counts) {
    if (c == 0) continue;
    ++seen;
    chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  }
  EXPECT_EQ(seen, 6);
  EXPECT_LT(chi2, 20.5);  // chi-square 5 dof, p = 0.001
}

TEST(Downsampler, SumsResidueClasses) {
  const Downsampler d(4, 2);
  EXPECT_EQ(d.apply(std::vector<double>{1, 2, 3, 4}), (std::vector<double>{4, 6}));
  const Downsampler d6(6, 3);
  EXPECT_EQ(d6.apply(std::vector<double>{1, 0, 0, 0, 0, 0}), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(d6.apply(std::vector<double>(6, 1.0)), (std::vector<double>{2, 2, 2}));
}

TEST(Downsampler, RequiresDivisibility) {
  EXPECT_THROW(Downsampler(10, 3), ConfigError);
  EXPECT_THROW(Downsampler(2, 4), ConfigError);
  EXPECT_THROW(Downsampler(4, 0), ConfigError);
}

TEST(Downsampler, MatchesExplicitMatrix) {
  std::mt19937_64 gen(3);
  for (auto [n, m] : {std::pair<std::size_t, std::size_t>{12, 4}, {30, 5}, {64, 64}, {64, 1}}) {
    const auto y = oracle::gaussian_vector(n, gen);
    const auto want = oracle::matvec(oracle::residue_sum_matrix(n, m), y);
    const auto got = Downsampler(n, m).apply(y);
    ASSERT_EQ(got.size(), m);
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(Downsampler, NormBoundedByClassSize) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + gen() % 32;
    const std::size_t n = m * (1 + gen() % 8);
    const auto y = oracle::gaussian_vector(n, gen);
    const auto z = Downsampler(n, m).apply(y);
    EXPECT_LE(oracle::sq_norm(z), static_cast<double>(n / m) * oracle::sq_norm(y) * (1 + 1e-12));
  }
}

TEST(Circulant, IdentitySeed) {
  const CirculantProjector c(std::vector<double>{1, 0});
  EXPECT_EQ(c.apply_naive(std::vector<double>{4, 5}), (std::vector<double>{4, 5}));
  const auto f = c.apply_fft(std::vector<double>{4, 5});
  EXPECT_NEAR(f[0], 4, 1e-12);
  EXPECT_NEAR(f[1], 5, 1e-12);
}

TEST(Circulant, TwoByTwo) {
  const double a = 1.5, b = -0.25, x = 2.0, y = 3.0;
  const CirculantProjector c(std::vector<double>{a, b});
  const std::vector<double> want{a * x + b * y, b * x + a * y};
  const std::vector<double> v{x, y};
  EXPECT_EQ(c.apply_naive(v), want);
  const auto f = c.apply_fft(v);
  EXPECT_NEAR(f[0], want[0], 1e-12);
  EXPECT_NEAR(f[1], want[1], 1e-12);
}

TEST(Circulant, FirstColumnOfThreeByThree) {
  const std::vector<double> d{1, 2, 3};
  const auto mat = oracle::circulant_by_shifting(d);
  const CirculantProjector c(d);
  const std::vector<double> e0{1, 0, 0};
  const auto got = c.apply_fft(e0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(got[i], mat(i, 0), 1e-12);
  // Rows are right shifts of d, so the first column is d[0], d[2], d[1].
  EXPECT_NEAR(got[1], 3.0, 1e-12);
  EXPECT_NEAR(got[2], 2.0, 1e-12);
}

TEST(Circulant, ShiftSeedShiftsInput) {
  const std::size_t m = 7;
  std::vector<double> d(m, 0.0);
  d[1] = 1.0;
  const auto mat = oracle::circulant_by_shifting(d);
  std::mt19937_64 gen(8);
  const auto v = oracle::gaussian_vector(m, gen);
  const auto want = oracle::matvec(mat, v);
  const auto got = CirculantProjector(d).apply_fft(v);
  for (std::size_t i = 0; i < m; ++i) {
    EXPECT_NEAR(got[i], want[i], 1e-12);
    EXPECT_NEAR(got[i], v[(i + 1) % m], 1e-12);
  }
}

TEST(Circulant, ZeroInputGivesZero) {
  const auto c = CirculantProjector::gaussian(16, 2);
  for (double v : c.apply_fft(std::vector<double>(16, 0.0))) EXPECT_EQ(v, 0.0);
  for (double v : c.apply_naive(std::vector<double>(16, 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(Circulant, NaiveMatchesShiftedRows) {
  std::mt19937_64 gen(21);
  for (std::size_t m : {1, 2, 3, 5, 8, 13, 32}) {
    const auto d = oracle::gaussian_vector(m, gen);
    const auto v = oracle::gaussian_vector(m, gen);
    const auto want = oracle::matvec(oracle::circulant_by_shifting(d), v);
    const auto got = CirculantProjector(d).apply_naive(v);
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(got[i], want[i], 1e-12);
  }
}

TEST(Circulant, FftMatchesNaiveOnRandomInstances) {
  std::mt19937_64 gen(1234);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 2 + gen() % 1023;
    const auto c = CirculantProjector::gaussian(m, gen());
    const auto v = oracle::gaussian_vector(m, gen);
    const auto a = c.apply_fft(v);
    const auto b = c.apply_naive(v);
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Circulant, RejectsWrongLength) {
  const auto c = CirculantProjector::gaussian(8, 1);
  EXPECT_THROW(c.apply_fft(std::vector<double>(7)), ShapeError);
  EXPECT_THROW(c.apply_naive(std::vector<double>(9)), ShapeError);
}

TEST(Fft, FullSpectrumMatchesDirectDft) {
  std::mt19937_64 gen(5);
  for (std::size_t n : {1, 2, 6, 9, 16}) {
    const auto x = oracle::gaussian_vector(n, gen);
    const auto spec = RealFft::of_size(n)->full_spectrum(x);
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> s = 0;
      for (std::size_t j = 0; j < n; ++j)
        s += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * j % n) / double(n));
      EXPECT_NEAR(std::abs(spec[k] - s), 0.0, 1e-10);
    }
  }
}

TEST(Embedder, ZeroInputGivesAllOnes) {
  const auto e = Embedder::create(64, 16, 3);
  const auto code = e.embed(std::vector<double>(64, 0.0));
  EXPECT_EQ(code.popcount(), 16U);
}

TEST(Embedder, PositiveScaleInvariance) {
  std::mt19937_64 gen(6);
  const auto e = Embedder::create(256, 32, 9);
  for (int t = 0; t < 50; ++t) {
    const auto x = oracle::gaussian_vector(256, gen);
    const auto base = e.embed(x);
    for (double alpha : {2.0, 0.5, 1024.0, 0x1p-20}) {
      auto y = x;
      for (auto& v : y) v *= alpha;
      EXPECT_EQ(e.embed(y), base);
    }
  }
}

TEST(Embedder, DeterministicFromSeed) {
  std::mt19937_64 gen(7);
  const auto a = Embedder::create(300, 30, 77);
  const auto b = Embedder::create(300, 30, 77);
  const auto c = Embedder::create(300, 30, 78);
  int differ = 0;
  for (int t = 0; t < 20; ++t) {
    const auto x = oracle::gaussian_vector(300, gen);
    EXPECT_EQ(a.embed(x), b.embed(x));
    differ += a.embed(x) == c.embed(x) ? 0 : 1;
  }
  EXPECT_GT(differ, 0);
}

// Explicit A = D * Phi * R from the three definition-level matrices.
DenseMatrix explicit_projection(const Embedder& e) {
  const auto& r = e.randomizer();
  const std::vector<std::uint32_t> perm(r.permutation().begin(), r.permutation().end());
  const std::vector<std::int8_t> signs(r.signs().begin(), r.signs().end());
  const std::vector<double> d(e.circulant().seed_vector().begin(), e.circulant().seed_vector().end());
  const auto full = oracle::matmul(
      oracle::circulant_by_shifting(d),
      oracle::matmul(oracle::residue_sum_matrix(e.padded_dim(), e.code_bits()),
                     oracle::signed_permutation_matrix(perm, signs)));
  DenseMatrix a(e.code_bits(), e.input_dim());
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) a(i, j) = full(i, j);
  return a;
}

TEST(Embedder, SmallInstanceMatchesExplicitProduct) {
  std::mt19937_64 gen(12);
  const auto e = Embedder::create(4, 2, 2024);
  const auto a = explicit_projection(e);
  for (int t = 0; t < 100; ++t) {
    const auto x = oracle::gaussian_vector(4, gen);
    const auto want = oracle::signs_of(oracle::matvec(a, x));
    const auto code = e.embed(x);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(code.bit(i), want[i]);
  }
}

TEST(Embedder, MaterializeMatchesExplicitProduct) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 1 + gen() % 16;
    const std::size_t n = m + gen() % 48;  // includes non-divisible sizes
    const auto e = Embedder::create(n, m, gen());
    const auto want = explicit_projection(e);
    const auto got = e.materialize();
    ASSERT_EQ(got.rows, m);
    ASSERT_EQ(got.cols, n);
    for (std::size_t i = 0; i < want.data.size(); ++i) EXPECT_NEAR(got.data[i], want.data[i], 1e-12);
  }
}

TEST(Embedder, MaterializeColumnsAreProjectedBasisVectors) {
  const auto e = Embedder::create(24, 6, 5);
  const auto a = e.materialize();
  for (std::size_t j = 0; j < 24; ++j) {
    std::vector<double> ej(24, 0.0);
    ej[j] = 1.0;
    const auto col = e.project(ej);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(col[i], a(i, j), 1e-12);
  }
}

TEST(Embedder, DegenerateEmbedderIsIdentity) {
  const std::size_t n = 5;
  std::vector<double> d(n, 0.0);
  d[0] = 1.0;
  const Embedder e(Randomizer::identity(n), CirculantProjector(d), n);
  const auto a = e.materialize();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(a(i, j), i == j ? 1.0 : 0.0);
}

TEST(Embedder, CodesMatchMaterializedSigns) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + gen() % 32;
    const std::size_t n = m + gen() % (65 - m);
    const auto e = Embedder::create(n, m, gen());
    const auto a = e.materialize();
    const auto x = oracle::gaussian_vector(n, gen);
    const auto want = oracle::signs_of(oracle::matvec(a, x));
    const auto code = e.embed(x);
    for (std::size_t i = 0; i < m; ++i) ASSERT_EQ(code.bit(i), want[i]) << "n=" << n << " m=" << m;
  }
}

TEST(Embedder, MaterializeCap) {
  const auto e = Embedder::create(1 << 14, 1 << 9, 1);
  EXPECT_THROW(e.materialize(), SizeError);
}

TEST(Embedder, NoCollisionMeansExactIsometry) {
  // x supported on coordinates whose images under R fall in distinct residue classes.
  std::mt19937_64 gen(15);
  const std::size_t n = 64, m = 16;
  const auto e = Embedder::create(n, m, 31);
  const auto perm = e.randomizer().permutation();
  std::vector<bool> used(m, false);
  std::vector<double> x(n, 0.0);
  std::normal_distribution<double> dist;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cls = perm[i] % m;
    if (!used[cls] && gen() % 2 == 0) {
      used[cls] = true;
      x[i] = dist(gen);
    }
  }
  const auto z = e.downsampled(x);
  auto sq = [](std::vector<double> v) {
    std::vector<double> a;
    for (double e : v)
      if (e != 0) a.push_back(e * e);
    std::sort(a.begin(), a.end());
    return a;
  };
  EXPECT_EQ(sq(x), sq(z));
}

TEST(Embedder, PaddedDimension) {
  const auto e = Embedder::create(10, 4, 1);
  EXPECT_EQ(e.input_dim(), 10U);
  EXPECT_EQ(e.padded_dim(), 12U);
  EXPECT_EQ(padded_length(12, 4), 12U);
  EXPECT_THROW(Embedder::create(3, 4, 1), ConfigError);
  EXPECT_THROW(e.embed(std::vector<double>(12)), ShapeError);
}

TEST(Embedder, ConcurrentEmbeddingMatchesSerial) {
  const auto e = Embedder::create(4096, 256, 3);
  std::mt19937_64 gen(16);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 64; ++i) xs.push_back(oracle::gaussian_vector(4096, gen));
  std::vector<BinaryCode> serial, threaded(xs.size());
  for (const auto& x : xs) serial.push_back(e.embed(x));
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < xs.size(); i += 4) threaded[i] = e.embed(xs[i]);
    });
  for (auto& t : pool) t.join();
  EXPECT_EQ(serial, threaded);
}

}  // namespace
}  // namespace fbe
