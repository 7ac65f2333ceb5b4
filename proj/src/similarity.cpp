#include "fbe/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fbe/errors.hpp"
#include "fbe/parallel.hpp"
#include "fbe/rip.hpp"
#include "fbe/rng.hpp"

namespace fbe {

std::size_t hamming_distance(const BinaryCode& a, const BinaryCode& b) {
  if (a.size() != b.size()) throw ShapeError("codes differ in length");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t d = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

double hamming_normalized(const BinaryCode& a, const BinaryCode& b) {
  if (a.size() == 0) throw ShapeError("empty codes");
  return static_cast<double>(hamming_distance(a, b)) / static_cast<double>(a.size());
}

double angle_between(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("vectors differ in length");
  const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
  const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  if (na == 0.0 || nb == 0.0) throw DomainError("angle with the zero vector is undefined");
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double u = a[i] / na;
    const double v = b[i] / nb;
    diff += (u - v) * (u - v);
    sum += (u + v) * (u + v);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

namespace {

void normalize(std::vector<double>& v) {
  const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (auto& x : v) x /= norm;
}

double nonzero_normal(Rng& rng) {
  double v = 0.0;
  while (v == 0.0) v = rng.normal();
  return v;
}

}  // namespace

AnglePair make_angle_pair(std::size_t n, double theta, std::size_t sparsity, std::uint64_t seed) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw DomainError("theta must lie in [0, pi]");
  if (n == 0 || sparsity > n) throw DomainError("sparsity must be at most N");
  const std::size_t k = sparsity == 0 ? n : sparsity;
  const bool collinear = theta == 0.0 || theta == std::numbers::pi;
  if (k < 2 && !collinear) throw DomainError("a 1-sparse pair can only have angle 0 or pi");

  Rng rng(seed);
  std::vector<std::size_t> support(n);
  if (sparsity == 0) {
    std::iota(support.begin(), support.end(), std::size_t{0});
  } else {
    support = sample_support(n, k, rng);
  }

  AnglePair pair;
  pair.theta = theta;
  pair.x1.assign(n, 0.0);
  for (auto i : support) pair.x1[i] = nonzero_normal(rng);
  normalize(pair.x1);

  std::vector<double> u(n, 0.0);
  if (k >= 2) {
    for (auto i : support) u[i] = nonzero_normal(rng);
    for (int pass = 0; pass < 2; ++pass) {
      const double proj = std::inner_product(u.begin(), u.end(), pair.x1.begin(), 0.0);
      for (auto i : support) u[i] -= proj * pair.x1[i];
    }
    normalize(u);
  }

  const double c = std::cos(theta);
  const double s = std::sin(theta);
  pair.x2.resize(n);
  for (std::size_t i = 0; i < n; ++i) pair.x2[i] = c * pair.x1[i] + s * u[i];

  if (std::abs(angle_between(pair.x1, pair.x2) - theta) > 1e-10) {
    throw DomainError("constructed pair misses the requested angle");
  }
  return pair;
}

std::vector<HammingStats> charikar_experiment(const CharikarParams& params, unsigned workers) {
  if (params.replicates < 2) throw ConfigError("need at least two replicates");
  for (double t : params.thetas) {
    if (!(t >= 0.0 && t <= std::numbers::pi)) throw DomainError("theta must lie in [0, pi]");
  }
  const std::size_t reps = params.replicates;
  std::vector<double> h(params.thetas.size() * reps);
  parallel_for(h.size(), workers, [&](std::size_t idx) {
    const std::size_t a = idx / reps;
    const std::size_t r = idx % reps;
    const std::uint64_t base = derive_seed(params.rng_seed, a, r);
    const auto pair = make_angle_pair(params.n, params.thetas[a], params.sparsity, derive_seed(base, 0));
    const auto projector = make_projector(params.method, params.n, params.m, derive_seed(base, 1));
    h[idx] = hamming_normalized(projector->embed(pair.x1), projector->embed(pair.x2));
  });

  std::vector<HammingStats> out;
  out.reserve(params.thetas.size());
  for (std::size_t a = 0; a < params.thetas.size(); ++a) {
    const double theta = params.thetas[a];
    HammingStats st;
    st.theta = theta;
    st.replicates = reps;
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += h[a * reps + r];
    st.mean_h = sum / static_cast<double>(reps);
    double ss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) ss += (h[a * reps + r] - st.mean_h) * (h[a * reps + r] - st.mean_h);
    st.var_h = ss / static_cast<double>(reps - 1);
    st.predicted_mean = theta / std::numbers::pi;
    st.predicted_var = theta * (std::numbers::pi - theta) /
                       (static_cast<double>(params.m) * std::numbers::pi * std::numbers::pi);
    out.push_back(st);
  }
  return out;
}

double average_precision_at_k(const QueryRanking& ranking, std::size_t k) {
  if (ranking.relevant.size() < k) throw ConfigError("ranking shorter than the cutoff");
  const std::size_t denom = std::min(k, ranking.total_relevant);
  if (denom == 0) return 0.0;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!ranking.relevant[i]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(denom);
}

double map_at_k(std::span<const QueryRanking> rankings, std::size_t k) {
  if (rankings.empty()) throw ConfigError("no queries");
  if (k == 0) throw ConfigError("cutoff must be positive");
  double sum = 0.0;
  for (const auto& r : rankings) sum += average_precision_at_k(r, k);
  return sum / static_cast<double>(rankings.size());
}

// ---------------------------------------------------------------------------

namespace {

struct SparseItem {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
  std::size_t cluster = 0;
  double norm = 0.0;
};

SparseItem make_member(const std::vector<double>& center, std::span<const std::size_t> center_support,
                       std::size_t cluster, const ClusterSpec& spec, Rng& rng) {
  std::vector<double> x = center;
  for (auto i : center_support) x[i] += spec.noise_scale * rng.normal();
  if (spec.noise_sparsity > 0) {
    for (auto i : sample_support(x.size(), spec.noise_sparsity, rng)) x[i] += spec.noise_scale * rng.normal();
  }
  SparseItem item;
  item.cluster = cluster;
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    item.index.push_back(static_cast<std::uint32_t>(i));
    item.value.push_back(x[i]);
    sq += x[i] * x[i];
  }
  item.norm = std::sqrt(sq);
  return item;
}

std::vector<double> densify(const SparseItem& item, std::size_t n) {
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < item.index.size(); ++j) x[item.index[j]] = item.value[j];
  return x;
}

double cosine(const SparseItem& a, const SparseItem& b) {
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.index.size() && j < b.index.size()) {
    if (a.index[i] < b.index[j]) {
      ++i;
    } else if (a.index[i] > b.index[j]) {
      ++j;
    } else {
      dot += a.value[i++] * b.value[j++];
    }
  }
  return dot / (a.norm * b.norm);
}

template <typename Key>
QueryRanking rank_top_k(const std::vector<Key>& keys, const std::vector<SparseItem>& corpus,
                        std::size_t query_cluster, std::size_t total_relevant, std::size_t k) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                    [&](std::size_t a, std::size_t b) { return keys[a] < keys[b] || (keys[a] == keys[b] && a < b); });
  QueryRanking ranking;
  ranking.total_relevant = total_relevant;
  ranking.relevant.resize(k);
  for (std::size_t i = 0; i < k; ++i) ranking.relevant[i] = corpus[order[i]].cluster == query_cluster;
  return ranking;
}

}  // namespace

RetrievalResult synthetic_retrieval(const RetrievalParams& params, unsigned workers) {
  const auto& cs = params.clusters;
  if (params.top_k == 0 || params.corpus_size < params.top_k) throw ConfigError("need corpus_size >= top_k > 0");
  if (params.queries == 0) throw ConfigError("need at least one query");
  if (cs.clusters == 0 || cs.center_sparsity == 0 || cs.center_sparsity > params.n ||
      cs.noise_sparsity > params.n || !(cs.noise_scale >= 0.0)) {
    throw ConfigError("degenerate cluster spec");
  }

  Rng center_rng(derive_seed(params.rng_seed, 0));
  std::vector<std::vector<double>> centers(cs.clusters, std::vector<double>(params.n, 0.0));
  std::vector<std::vector<std::size_t>> supports(cs.clusters);
  for (std::size_t c = 0; c < cs.clusters; ++c) {
    supports[c] = sample_support(params.n, cs.center_sparsity, center_rng);
    for (auto i : supports[c]) centers[c][i] = nonzero_normal(center_rng);
  }

  std::vector<SparseItem> corpus(params.corpus_size);
  std::vector<SparseItem> queries(params.queries);
  parallel_for(corpus.size() + queries.size(), workers, [&](std::size_t idx) {
    const bool is_query = idx >= corpus.size();
    const std::size_t i = is_query ? idx - corpus.size() : idx;
    const std::size_t cluster = i % cs.clusters;
    Rng rng(derive_seed(params.rng_seed, is_query ? 2 : 1, i));
    (is_query ? queries[i] : corpus[i]) = make_member(centers[cluster], supports[cluster], cluster, cs, rng);
  });

  const auto projector = make_projector(params.method, params.n, params.m, derive_seed(params.rng_seed, 3));
  std::vector<BinaryCode> corpus_codes(corpus.size());
  parallel_for(corpus.size(), workers,
               [&](std::size_t i) { corpus_codes[i] = projector->embed(densify(corpus[i], params.n)); });

  std::vector<std::size_t> cluster_sizes(cs.clusters, 0);
  for (const auto& item : corpus) ++cluster_sizes[item.cluster];

  std::vector<QueryRanking> by_code(queries.size());
  std::vector<QueryRanking> by_angle(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t q) {
    const auto& query = queries[q];
    const auto code = projector->embed(densify(query, params.n));
    std::vector<std::size_t> dist(corpus.size());
    std::vector<double> neg_cos(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      dist[i] = hamming_distance(code, corpus_codes[i]);
      neg_cos[i] = -cosine(query, corpus[i]);
    }
    const std::size_t relevant = cluster_sizes[query.cluster];
    by_code[q] = rank_top_k(dist, corpus, query.cluster, relevant, params.top_k);
    by_angle[q] = rank_top_k(neg_cos, corpus, query.cluster, relevant, params.top_k);
  });

  RetrievalResult result;
  result.k = params.top_k;
  result.queries = queries.size();
  result.map_at_k = map_at_k(by_code, params.top_k);
  result.angle_map_at_k = map_at_k(by_angle, params.top_k);
  return result;
}

}  // namespace fbe
