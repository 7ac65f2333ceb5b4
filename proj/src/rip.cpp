#include "fbe/rip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fbe/errors.hpp"
#include "fbe/parallel.hpp"
#include "fbe/projection.hpp"

namespace fbe {

std::string_view value_model_name(ValueModel model) {
  return model == ValueModel::binary01 ? "binary01" : "gaussian";
}

ValueModel parse_value_model(std::string_view name) {
  if (name == "binary01" || name == "binary") return ValueModel::binary01;
  if (name == "gaussian") return ValueModel::gaussian;
  throw ConfigError("unknown value model '" + std::string(name) + "'");
}

std::string_view matrix_kind_name(MatrixKind kind) {
  return kind == MatrixKind::gaussian ? "gaussian" : "proposed";
}

MatrixKind parse_matrix_kind(std::string_view name) {
  if (name == "gaussian") return MatrixKind::gaussian;
  if (name == "proposed") return MatrixKind::proposed;
  throw ConfigError("unknown matrix kind '" + std::string(name) + "'");
}

std::vector<std::size_t> sample_support(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw ConfigError("sparsity K exceeds dimension N");
  // Floyd's algorithm: K draws, uniform over K-subsets.
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> support;
  support.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.uniform_below(j + 1));
    const std::size_t pick = taken[t] ? j : t;
    taken[pick] = true;
    support.push_back(pick);
  }
  std::sort(support.begin(), support.end());
  return support;
}

std::vector<double> sample_sparse(std::size_t n, std::size_t k, ValueModel model, Rng& rng) {
  if (k < 1) throw ConfigError("sparsity K must be at least 1");
  const auto support = sample_support(n, k, rng);
  std::vector<double> x(n, 0.0);
  for (auto i : support) {
    if (model == ValueModel::binary01) {
      x[i] = 1.0;
    } else {
      double v = 0.0;
      while (v == 0.0) v = rng.normal();
      x[i] = v;
    }
  }
  return x;
}

std::vector<double> sample_sparse(const SparseSignalSpec& spec) {
  Rng rng(spec.rng_seed);
  return sample_sparse(spec.n, spec.k, spec.value_model, rng);
}

double distortion_from_norms(double projected_sq, double input_sq) {
  if (!(input_sq > 0.0)) throw DomainError("distortion is undefined for the zero vector");
  return std::abs(projected_sq / input_sq - 1.0);
}

double distortion(const std::function<std::vector<double>(std::span<const double>)>& apply,
                  std::span<const double> x) {
  const double input_sq = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  if (!(input_sq > 0.0)) throw DomainError("distortion is undefined for the zero vector");
  const auto y = apply(x);
  return distortion_from_norms(std::inner_product(y.begin(), y.end(), y.begin(), 0.0), input_sq);
}

// ---------------------------------------------------------------------------

RipEstimate RipEstimate::from_samples(const RipParams& params, std::vector<double> samples) {
  RipEstimate est;
  est.params = params;
  est.samples = std::move(samples);
  est.sorted_samples = est.samples;
  std::sort(est.sorted_samples.begin(), est.sorted_samples.end());
  double sum = 0.0;
  for (double s : est.samples) sum += s;
  est.mean_delta = est.samples.empty() ? 0.0 : sum / static_cast<double>(est.samples.size());
  return est;
}

double RipEstimate::cdf(double t) const {
  if (sorted_samples.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_samples.begin(), sorted_samples.end(), t);
  return static_cast<double>(it - sorted_samples.begin()) / static_cast<double>(sorted_samples.size());
}

double RipEstimate::zero_fraction() const {
  const auto zeros = std::count(samples.begin(), samples.end(), 0.0);
  return samples.empty() ? 0.0 : static_cast<double>(zeros) / static_cast<double>(samples.size());
}

std::optional<double> distortion_lattice_step(const RipParams& params) {
  if (params.kind != MatrixKind::proposed || params.value_model != ValueModel::binary01 || params.k == 0) {
    return std::nullopt;
  }
  return 2.0 / static_cast<double>(params.k);
}

std::vector<std::pair<double, double>> RipEstimate::cdf_grid(std::size_t max_points) const {
  std::vector<std::pair<double, double>> grid;
  if (sorted_samples.empty() || max_points == 0) return grid;
  const double top = sorted_samples.back();
  if (const auto step = distortion_lattice_step(params)) {
    const auto lattice_points = static_cast<std::size_t>(std::llround(top / *step)) + 1;
    const std::size_t stride = (lattice_points + max_points - 1) / max_points;
    for (std::size_t j = 0; j < lattice_points; j += stride) {
      // Evaluate halfway to the next lattice point so rounding never drops a sample.
      const double t = static_cast<double>(j) * *step;
      grid.emplace_back(t, cdf(t + 0.5 * *step));
    }
    if (grid.back().second < 1.0) grid.emplace_back(top, 1.0);
    return grid;
  }
  if (max_points == 1 || top == 0.0) {
    grid.emplace_back(top, 1.0);
    return grid;
  }
  for (std::size_t j = 0; j < max_points; ++j) {
    const double t = top * static_cast<double>(j) / static_cast<double>(max_points - 1);
    grid.emplace_back(t, j + 1 == max_points ? 1.0 : cdf(t));
  }
  return grid;
}

// ---------------------------------------------------------------------------

namespace {

double proposed_trial(const RipParams& p, Rng& rng) {
  const auto x = sample_sparse(p.n, p.k, p.value_model, rng);
  const Randomizer randomizer(p.n, rng.next_u64());
  const Downsampler downsampler(p.n, p.m);
  const auto folded = downsampler.apply(randomizer.apply(x));
  double in_sq = 0.0;
  for (double v : x) in_sq += v * v;
  double out_sq = 0.0;
  for (double v : folded) out_sq += v * v;
  return distortion_from_norms(out_sq, in_sq);
}

double gaussian_trial(const RipParams& p, Rng& rng, std::vector<double>& acc) {
  const auto support = sample_support(p.n, p.k, rng);
  std::vector<double> values(p.k, 1.0);
  if (p.value_model == ValueModel::gaussian) {
    for (auto& v : values) {
      v = 0.0;
      while (v == 0.0) v = rng.normal();
    }
  }
  // A x only sees the K columns on the support; columns are drawn in support order.
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.m));
  std::fill(acc.begin(), acc.end(), 0.0);
  for (std::size_t c = 0; c < support.size(); ++c) {
    const double xv = values[c] * scale;
    for (auto& a : acc) a += rng.normal() * xv;
  }
  double in_sq = 0.0;
  for (double v : values) in_sq += v * v;
  double out_sq = 0.0;
  for (double v : acc) out_sq += v * v;
  return distortion_from_norms(out_sq, in_sq);
}

}  // namespace

RipEstimate estimate_rip(const RipParams& params, unsigned workers) {
  if (params.trials < 1) throw ConfigError("trials must be at least 1");
  if (params.n == 0 || params.m == 0) throw ConfigError("dimensions must be positive");
  if (params.k < 1 || params.k > params.n) throw ConfigError("sparsity must satisfy 1 <= K <= N");
  if (params.kind == MatrixKind::proposed) (void)Downsampler(params.n, params.m);  // validates M | N

  std::vector<double> samples(params.trials);
  const std::size_t chunk = 256;
  const std::size_t chunks = (params.trials + chunk - 1) / chunk;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<double> acc(params.m);
    const std::size_t end = std::min(params.trials, (c + 1) * chunk);
    for (std::size_t t = c * chunk; t < end; ++t) {
      Rng rng(derive_seed(params.rng_seed, t));
      samples[t] = params.kind == MatrixKind::proposed ? proposed_trial(params, rng)
                                                        : gaussian_trial(params, rng, acc);
    }
  });
  return RipEstimate::from_samples(params, std::move(samples));
}

std::vector<HistogramBin> rip_histogram(const RipEstimate& estimate, std::size_t bins) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  const auto& sorted = estimate.sorted_samples;
  if (sorted.empty()) throw ConfigError("histogram of an empty estimate");
  const double top = sorted.back();
  std::vector<HistogramBin> out;

  if (const auto step = distortion_lattice_step(estimate.params)) {
    const auto lattice_points = static_cast<std::size_t>(std::llround(top / *step)) + 1;
    const std::size_t per_bin = (lattice_points + bins - 1) / bins;
    const std::size_t used = (lattice_points + per_bin - 1) / per_bin;
    const double width = static_cast<double>(per_bin) * *step;
    for (std::size_t b = 0; b < used; ++b) {
      const double lo = -0.5 * *step + static_cast<double>(b) * width;
      out.push_back({lo, lo + width, 0});
    }
    for (double s : sorted) {
      const auto point = static_cast<std::size_t>(std::llround(s / *step));
      ++out[std::min(point / per_bin, used - 1)].count;
    }
    return out;
  }

  if (top == 0.0) {
    out.push_back({0.0, 0.0, sorted.size()});
    return out;
  }
  const double width = top / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.push_back({static_cast<double>(b) * width, static_cast<double>(b + 1) * width, 0});
  }
  out.back().hi = top;
  for (double s : sorted) {
    const auto b = static_cast<std::size_t>(s / width);
    ++out[std::min(b, bins - 1)].count;
  }
  return out;
}

}  // namespace fbe
