#include "fbe/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <utility>
#include <map>
#include <string>
#include <mutex>

#include "fbe/errors.hpp"

namespace fbe {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

FftWorkspace::FftWorkspace(std::size_t n) : n_(n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  real_ = fftw_alloc_real(n);
  spectrum_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(n / 2 + 1));
  if (real_ == nullptr || spectrum_ == nullptr) {
    fftw_free(real_);
    fftw_free(spectrum_);
    throw std::bad_alloc();
  }
}

FftWorkspace::~FftWorkspace() {
  fftw_free(real_);
  fftw_free(spectrum_);
}

FftWorkspace::FftWorkspace(FftWorkspace&& other) noexcept
    : n_(std::exchange(other.n_, 0)),
      real_(std::exchange(other.real_, nullptr)),
      spectrum_(std::exchange(other.spectrum_, nullptr)) {}

FftWorkspace& FftWorkspace::operator=(FftWorkspace&& other) noexcept {
  if (this != &other) {
    fftw_free(real_);
    fftw_free(spectrum_);
    n_ = std::exchange(other.n_, 0);
    real_ = std::exchange(other.real_, nullptr);
    spectrum_ = std::exchange(other.spectrum_, nullptr);
  }
  return *this;
}

RealFft::RealFft(std::size_t n) : n_(n) {
  FftWorkspace probe(n);
  const int len = static_cast<int>(n);
  auto* spec = reinterpret_cast<fftw_complex*>(probe.spectrum().data());
  // FFTW_ESTIMATE keeps plan selection, and therefore rounding, identical
  // from run to run.
  forward_plan_ = fftw_plan_dft_r2c_1d(len, probe.real().data(), spec, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(len, spec, probe.real().data(), FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw ConfigError("FFTW could not create a plan of length " + std::to_string(n));
  }
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::shared_ptr<const RealFft> RealFft::of_size(std::size_t n) {
  if (n == 0) throw ConfigError("FFT length must be positive");
  static std::map<std::size_t, std::shared_ptr<const RealFft>> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const RealFft> plan(new RealFft(n));
  cache.emplace(n, plan);
  return plan;
}

void RealFft::forward(FftWorkspace& ws) const {
  if (ws.size() != n_) throw ShapeError("workspace length does not match FFT length");
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), ws.real().data(),
                       reinterpret_cast<fftw_complex*>(ws.spectrum().data()));
}

void RealFft::inverse(FftWorkspace& ws) const {
  if (ws.size() != n_) throw ShapeError("workspace length does not match FFT length");
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(ws.spectrum().data()), ws.real().data());
}

std::vector<std::complex<double>> RealFft::full_spectrum(std::span<const double> x) const {
  if (x.size() != n_) throw ShapeError("input length does not match FFT length");
  FftWorkspace ws(n_);
  std::copy(x.begin(), x.end(), ws.real().begin());
  forward(ws);
  std::vector<std::complex<double>> out(n_);
  auto half = ws.spectrum();
  for (std::size_t k = 0; k < half.size(); ++k) out[k] = half[k];
  for (std::size_t k = half.size(); k < n_; ++k) out[k] = std::conj(half[n_ - k]);
  return out;
}

}  // namespace fbe
