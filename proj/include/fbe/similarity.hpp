#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbe/binary_code.hpp"
#include "fbe/projector.hpp"

namespace fbe {

std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& b);

// Fraction of differing bits, in [0, 1]. Codes must have equal length.
double hamming_normalized(const BinaryCode& a, const BinaryCode& b);

// Angle between two non-zero vectors, computed as 2 atan2(|a^ - b^|, |a^ + b^|)
// on the normalized vectors, which stays accurate near 0 and pi.
double angle_between(std::span<const double> a, std::span<const double> b);

struct AnglePair {
  std::vector<double> x1;  // unit norm
  std::vector<double> x2;  // unit norm, at angle theta from x1
  double theta = 0.0;
};

// x1 is a random unit vector (K-sparse when sparsity > 0, dense when 0) and
// x2 = cos(theta) x1 + sin(theta) u with u a unit vector orthogonal to x1 on
// the same support. sparsity == 1 only admits theta in {0, pi}.
AnglePair make_angle_pair(std::size_t n, double theta, std::size_t sparsity, std::uint64_t seed);

struct HammingStats {
  double theta = 0.0;
  double mean_h = 0.0;
  double var_h = 0.0;  // unbiased sample variance over replicates
  std::size_t replicates = 0;
  double predicted_mean = 0.0;  // theta / pi
  double predicted_var = 0.0;   // theta (pi - theta) / (M pi^2)
};

struct CharikarParams {
  Method method = Method::lsh;
  std::size_t n = 64;
  std::size_t m = 1000;
  std::vector<double> thetas;
  std::size_t replicates = 2000;
  std::size_t sparsity = 0;  // 0 = dense inputs
  std::uint64_t rng_seed = 0;
};

// For each theta, every replicate draws a fresh angle pair and a fresh
// projector of the requested method, then records the normalized Hamming
// distance between the two codes.
std::vector<HammingStats> charikar_experiment(const CharikarParams& params, unsigned workers = 1);

// One query's ranked list: relevance of the returned items in rank order,
// plus the total number of relevant items in the corpus.
struct QueryRanking {
  std::vector<bool> relevant;
  std::size_t total_relevant = 0;
};

// AP@k = (sum over relevant ranks i <= k of precision@i) / min(k, total_relevant).
// 0 when the query has no relevant items.
double average_precision_at_k(const QueryRanking& ranking, std::size_t k);
double map_at_k(std::span<const QueryRanking> rankings, std::size_t k);

// Clustered sparse corpus. Each cluster has a K-sparse Gaussian center;
// members add noise_scale-weighted Gaussian noise on the center support plus
// noise_sparsity extra random coordinates.
struct ClusterSpec {
  std::size_t clusters = 10;
  std::size_t center_sparsity = 64;
  std::size_t noise_sparsity = 16;
  double noise_scale = 0.5;
};

struct RetrievalParams {
  Method method = Method::proposed;
  std::size_t n = 2048;
  std::size_t m = 256;
  std::size_t corpus_size = 5000;
  std::size_t queries = 200;
  std::size_t top_k = 50;
  ClusterSpec clusters;
  std::uint64_t rng_seed = 0;
};

struct RetrievalResult {
  double map_at_k = 0.0;
  std::size_t k = 0;
  std::size_t queries = 0;
  double angle_map_at_k = 0.0;  // same queries ranked by exact angle (ceiling)
};

// Ground truth is cluster membership. The corpus and queries depend only on
// rng_seed, so two methods run with the same seed see identical data; one
// projector (seeded from rng_seed) is used for the whole run.
RetrievalResult synthetic_retrieval(const RetrievalParams& params, unsigned workers = 1);

}  // namespace fbe
