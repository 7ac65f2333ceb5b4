#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "fbe/rng.hpp"

namespace fbe {

enum class ValueModel { binary01, gaussian };
enum class MatrixKind { gaussian, proposed };

std::string_view value_model_name(ValueModel model);
ValueModel parse_value_model(std::string_view name);
std::string_view matrix_kind_name(MatrixKind kind);
MatrixKind parse_matrix_kind(std::string_view name);

struct SparseSignalSpec {
  std::size_t n = 0;
  std::size_t k = 0;
  ValueModel value_model = ValueModel::binary01;
  std::uint64_t rng_seed = 0;
};

// K distinct positions drawn uniformly from {0..N-1}, in increasing order.
std::vector<std::size_t> sample_support(std::size_t n, std::size_t k, Rng& rng);

// Vector with exactly K non-zeros at uniformly chosen positions; values are 1
// (binary01) or standard normal draws (gaussian).
std::vector<double> sample_sparse(const SparseSignalSpec& spec);
std::vector<double> sample_sparse(std::size_t n, std::size_t k, ValueModel model, Rng& rng);

// |‖A x‖² / ‖x‖² - 1|. Throws DomainError for x == 0.
double distortion(const std::function<std::vector<double>(std::span<const double>)>& apply,
                  std::span<const double> x);
double distortion_from_norms(double projected_sq, double input_sq);

struct RipParams {
  MatrixKind kind = MatrixKind::proposed;
  std::size_t n = 4000;
  std::size_t m = 1000;
  std::size_t k = 25;
  ValueModel value_model = ValueModel::binary01;
  std::size_t trials = 100'000;
  std::uint64_t rng_seed = 0;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct RipEstimate {
  RipParams params;
  std::vector<double> samples;         // per-trial distortion, in trial order
  std::vector<double> sorted_samples;  // same values, ascending
  double mean_delta = 0.0;

  static RipEstimate from_samples(const RipParams& params, std::vector<double> samples);

  std::size_t trials() const { return samples.size(); }
  // Fraction of samples <= t.
  double cdf(double t) const;
  // Fraction of samples that are exactly zero.
  double zero_fraction() const;
  // CDF on a grid: lattice points when distortion_lattice_step() applies, otherwise evenly
  // spaced from 0 to the largest sample.
  std::vector<std::pair<double, double>> cdf_grid(std::size_t max_points = 101) const;
};

// Under Phi R, distortions of {0,1} signals are integer multiples of 2/K (each
// colliding pair contributes 2 s_i s_j to ‖Phi R x‖²). nullopt for Gaussian
// matrices and Gaussian values, where the distribution is continuous.
std::optional<double> distortion_lattice_step(const RipParams& params);

// Monte-Carlo estimate of the distortion distribution. Every trial draws a
// fresh matrix and a fresh K-sparse signal from derive_seed(rng_seed, t):
//   gaussian  entries N(0, 1/M); only the K columns on the support are drawn
//   proposed  Phi R with a fresh randomizer (no circulant stage); needs M | N
// Results do not depend on `workers`.
RipEstimate estimate_rip(const RipParams& params, unsigned workers = 1);

// Histogram with at most `bins` bins spanning the samples. When the samples
// live on the 2/K lattice the bin edges sit halfway between lattice points,
// so each bin holds whole lattice values.
std::vector<HistogramBin> rip_histogram(const RipEstimate& estimate, std::size_t bins);

}  // namespace fbe
