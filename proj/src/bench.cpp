#include "fbe/bench.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "fbe/baselines.hpp"
#include "fbe/errors.hpp"
#include "fbe/rng.hpp"

namespace fbe {

std::uint64_t storage_bytes(Method method, std::uint64_t n, std::uint64_t m) {
  if (n == 0 || m == 0) throw ConfigError("dimensions must be positive");
  switch (method) {
    case Method::lsh:
      return 4 * m * n;
    case Method::cbe:
      return 4 * n;
    case Method::bp: {
      const auto in = balanced_factorization(n);
      const auto out = balanced_factorization(m);
      return 4 * (in.rows * out.rows + in.cols * out.cols);
    }
    case Method::proposed:
      return 4 * m + (n + 7) / 8;
  }
  throw ConfigError("unknown method");
}

namespace {

double quantile(std::vector<double> sorted, double q) {
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::vector<double> random_batch(std::size_t count, std::size_t n, Rng& rng) {
  std::vector<double> xs(count * n);
  for (auto& v : xs) v = rng.normal();
  return xs;
}

// Keeps the optimizer from discarding embeddings.
volatile std::uint64_t g_sink = 0;

double run_batch(const BinaryProjector& p, const std::vector<double>& xs, std::size_t count) {
  const std::size_t n = p.input_dim();
  std::uint64_t acc = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < count; ++i) {
    const auto code = p.embed(std::span<const double>(xs.data() + i * n, n));
    acc += code.words()[0];
  }
  const auto stop = std::chrono::steady_clock::now();
  g_sink = g_sink + acc;
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

TimingResult time_embed(const BenchConfig& config) {
  if (config.repetitions < 3) throw ConfigError("need at least 3 timed repetitions");
  if (config.warmup < 3) throw ConfigError("need at least 3 warmup runs");
  const auto projector = make_projector(config.method, config.n, config.m, config.rng_seed);
  Rng rng(derive_seed(config.rng_seed, 0xbe));

  // Calibrate the batch size, then run the warmup batches.
  constexpr std::size_t kMaxBatch = std::size_t{1} << 16;
  std::size_t batch = 1;
  while (batch < kMaxBatch) {
    const auto xs = random_batch(batch, config.n, rng);
    const double t = run_batch(*projector, xs, batch);
    if (t >= config.min_batch_seconds) break;
    const double grow = t > 0 ? 1.25 * config.min_batch_seconds / t : 64.0;
    batch = std::min(kMaxBatch, std::max(batch * 2, static_cast<std::size_t>(static_cast<double>(batch) * std::min(grow, 64.0))));
  }
  for (std::size_t w = 0; w < config.warmup; ++w) {
    const auto xs = random_batch(batch, config.n, rng);
    run_batch(*projector, xs, batch);
  }

  std::vector<double> per_embed;
  per_embed.reserve(config.repetitions);
  for (std::size_t r = 0; r < config.repetitions; ++r) {
    const auto xs = random_batch(batch, config.n, rng);
    per_embed.push_back(run_batch(*projector, xs, batch) / static_cast<double>(batch));
  }
  TimingResult out;
  out.repetitions = config.repetitions;
  out.batch = batch;
  out.median_s = quantile(per_embed, 0.5);
  out.q1_s = quantile(per_embed, 0.25);
  out.q3_s = quantile(per_embed, 0.75);
  return out;
}

}  // namespace fbe
