#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "fbe/errors.hpp"
#include "fbe/similarity.hpp"
#include "oracles.hpp"

namespace fbe {
namespace {

constexpr double kPi = std::numbers::pi;

BinaryCode random_code(std::size_t bits, std::mt19937_64& gen) {
  BinaryCode c(bits);
  for (std::size_t i = 0; i < bits; ++i) c.set(i, (gen() & 1U) != 0);
  return c;
}

TEST(Hamming, BasicValues) {
  std::mt19937_64 gen(1);
  const auto c = random_code(100, gen);
  EXPECT_EQ(hamming_normalized(c, c), 0.0);
  EXPECT_EQ(hamming_normalized(c, c.complement()), 1.0);
  BinaryCode a(8), b(8);
  b.set(2, true);
  b.set(7, true);
  EXPECT_EQ(hamming_distance(a, b), 2U);
  EXPECT_EQ(hamming_normalized(a, b), 0.25);
  EXPECT_THROW(hamming_normalized(a, BinaryCode(9)), ShapeError);
}

TEST(Hamming, IsAMetric) {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 500; ++t) {
    const std::size_t bits = 1 + gen() % 200;
    const auto a = random_code(bits, gen), b = random_code(bits, gen), c = random_code(bits, gen);
    EXPECT_EQ(hamming_distance(a, b), hamming_distance(b, a));
    EXPECT_LE(hamming_distance(a, c), hamming_distance(a, b) + hamming_distance(b, c));
    EXPECT_EQ(hamming_distance(a, b) == 0, a == b);
    std::size_t slow = 0;
    for (std::size_t i = 0; i < bits; ++i) slow += a.bit(i) != b.bit(i);
    EXPECT_EQ(hamming_distance(a, b), slow);
  }
}

TEST(Angle, AccurateNearEnds) {
  const std::vector<double> a{1, 0}, b{1, 1e-9};
  EXPECT_NEAR(angle_between(a, b), 1e-9, 1e-20);
  const std::vector<double> c{-1, 1e-9};
  EXPECT_NEAR(angle_between(a, c), kPi - 1e-9, 1e-15);
  EXPECT_THROW(angle_between(a, std::vector<double>{0, 0}), DomainError);
}

TEST(AnglePairs, HitRequestedAngle) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + gen() % 300;
    const std::size_t k = (t % 2 == 0) ? 0 : 2 + gen() % (n - 1);
    const double theta = kPi * static_cast<double>(gen() % 10001) / 10000.0;
    const auto pair = make_angle_pair(n, theta, k, gen());
    const double dot = std::inner_product(pair.x1.begin(), pair.x1.end(), pair.x2.begin(), 0.0);
    const double n1 = std::sqrt(oracle::sq_norm(pair.x1)), n2 = std::sqrt(oracle::sq_norm(pair.x2));
    // Independent check through the plain arccos of the normalized dot product.
    EXPECT_NEAR(std::acos(std::clamp(dot / (n1 * n2), -1.0, 1.0)), theta, 1e-6);
    EXPECT_NEAR(angle_between(pair.x1, pair.x2), theta, 1e-10);
    if (k > 0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (pair.x1[i] == 0.0) {
          EXPECT_EQ(pair.x2[i], 0.0);
        }
      }
      EXPECT_EQ(static_cast<std::size_t>(std::count_if(pair.x1.begin(), pair.x1.end(), [](double v) { return v != 0; })), k);
    }
  }
}

TEST(AnglePairs, SpecialAngles) {
  const auto same = make_angle_pair(50, 0.0, 0, 4);
  EXPECT_EQ(same.x1, same.x2);
  const auto right = make_angle_pair(50, kPi / 2, 10, 5);
  EXPECT_NEAR(std::inner_product(right.x1.begin(), right.x1.end(), right.x2.begin(), 0.0), 0.0, 1e-12);
  EXPECT_NO_THROW(make_angle_pair(50, kPi, 1, 6));
  EXPECT_THROW(make_angle_pair(50, 1.0, 1, 6), DomainError);
  EXPECT_THROW(make_angle_pair(50, 4.0, 0, 6), DomainError);
  EXPECT_THROW(make_angle_pair(50, 1.0, 51, 6), DomainError);
}

TEST(Charikar, IdenticalVectorsHaveZeroDistance) {
  CharikarParams p;
  p.m = 64;
  p.thetas = {0.0};
  p.replicates = 50;
  for (auto method : {Method::lsh, Method::proposed}) {
    p.method = method;
    p.n = method == Method::lsh ? 64 : 256;
    p.sparsity = method == Method::lsh ? 0 : 8;
    const auto stats = charikar_experiment(p);
    ASSERT_EQ(stats.size(), 1U);
    EXPECT_EQ(stats[0].mean_h, 0.0);
    EXPECT_EQ(stats[0].var_h, 0.0);
  }
}

TEST(Charikar, LshFollowsAngleLaw) {
  CharikarParams p;
  p.m = 200;
  p.n = 32;
  p.replicates = 600;
  p.thetas = {kPi / 8, kPi / 4, kPi / 2, 3 * kPi / 4};
  p.rng_seed = 11;
  for (const auto& s : charikar_experiment(p)) {
    EXPECT_DOUBLE_EQ(s.predicted_mean, s.theta / kPi);
    EXPECT_DOUBLE_EQ(s.predicted_var, s.theta * (kPi - s.theta) / (200 * kPi * kPi));
    EXPECT_LT(std::abs(s.mean_h - s.predicted_mean), 4 * std::sqrt(s.predicted_var / 600));
    EXPECT_GT(s.var_h, s.predicted_var / 2);
    EXPECT_LT(s.var_h, s.predicted_var * 2);
  }
}

TEST(Charikar, ProposedPreservesAngleOnSparseInputs) {
  CharikarParams p;
  p.method = Method::proposed;
  p.n = 2048;
  p.m = 256;
  p.sparsity = 16;
  p.replicates = 300;
  p.thetas = {kPi / 4, kPi / 2};
  p.rng_seed = 12;
  for (const auto& s : charikar_experiment(p)) EXPECT_LT(std::abs(s.mean_h - s.theta / kPi), 0.02) << s.theta;
}

TEST(Charikar, WorkerCountDoesNotMatter) {
  CharikarParams p;
  p.method = Method::proposed;
  p.n = 512;
  p.m = 64;
  p.sparsity = 8;
  p.replicates = 64;
  p.thetas = {0.3, 1.2};
  const auto a = charikar_experiment(p, 1);
  const auto b = charikar_experiment(p, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mean_h, b[i].mean_h);
    EXPECT_EQ(a[i].var_h, b[i].var_h);
  }
}

TEST(AveragePrecision, HandComputed) {
  EXPECT_DOUBLE_EQ(average_precision_at_k({{true, false, true}, 2}, 3), 5.0 / 6.0);
  EXPECT_EQ(average_precision_at_k({{true, true, true}, 10}, 3), 1.0);
  EXPECT_EQ(average_precision_at_k({{false, false, false}, 4}, 3), 0.0);
  EXPECT_EQ(average_precision_at_k({{false, false}, 0}, 2), 0.0);
  const std::vector<QueryRanking> two{{{true, false, true}, 2}, {{true, true, true}, 3}};
  EXPECT_DOUBLE_EQ(map_at_k(two, 3), (5.0 / 6.0 + 1.0) / 2.0);
  EXPECT_THROW(map_at_k(std::vector<QueryRanking>{}, 3), ConfigError);
  EXPECT_THROW(average_precision_at_k({{true}, 1}, 2), ConfigError);
}

TEST(AveragePrecision, PromotingARelevantItemNeverHurts) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t len = 2 + gen() % 20;
    QueryRanking r;
    r.relevant.resize(len);
    std::size_t rel = 0;
    for (std::size_t i = 0; i < len; ++i) rel += (r.relevant[i] = (gen() % 3 == 0));
    r.total_relevant = rel + gen() % 3;
    const std::size_t k = 1 + gen() % len;
    const std::size_t i = 1 + gen() % (len - 1);
    if (!r.relevant[i] || r.relevant[i - 1]) continue;
    auto better = r;
    better.relevant[i] = false;
    better.relevant[i - 1] = true;
    EXPECT_GE(average_precision_at_k(better, k), average_precision_at_k(r, k));
  }
}

TEST(Retrieval, AllRelevantAtFullDepth) {
  RetrievalParams p;
  p.n = 256;
  p.m = 32;
  p.corpus_size = 60;
  p.queries = 5;
  p.top_k = 60;
  p.clusters.clusters = 1;
  p.clusters.center_sparsity = 16;
  p.clusters.noise_sparsity = 4;
  const auto r = synthetic_retrieval(p);
  EXPECT_EQ(r.map_at_k, 1.0);
  EXPECT_EQ(r.angle_map_at_k, 1.0);
}

TEST(Retrieval, SmallRunIsSaneAndDeterministic) {
  RetrievalParams p;
  p.n = 512;
  p.m = 64;
  p.corpus_size = 400;
  p.queries = 30;
  p.top_k = 20;
  p.rng_seed = 3;
  const auto a = synthetic_retrieval(p, 1);
  const auto b = synthetic_retrieval(p, 3);
  EXPECT_EQ(a.map_at_k, b.map_at_k);
  EXPECT_GE(a.map_at_k, 0.0);
  EXPECT_GT(a.map_at_k, 0.5);
  EXPECT_EQ(a.k, 20U);
  EXPECT_EQ(a.queries, 30U);
}

TEST(Retrieval, Validation) {
  RetrievalParams p;
  p.corpus_size = 10;
  p.top_k = 20;
  EXPECT_THROW(synthetic_retrieval(p), ConfigError);
  p.top_k = 5;
  p.clusters.clusters = 0;
  EXPECT_THROW(synthetic_retrieval(p), ConfigError);
}

}  // namespace
}  // namespace fbe
