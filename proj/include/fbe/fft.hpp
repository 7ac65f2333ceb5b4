#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fbe {

// Scratch buffers for one real transform of length n. Allocated with FFTW's
// aligned allocator so they can be passed to any plan of the same size.
class FftWorkspace {
 public:
  explicit FftWorkspace(std::size_t n);
  ~FftWorkspace();
  FftWorkspace(FftWorkspace&& other) noexcept;
  FftWorkspace& operator=(FftWorkspace&& other) noexcept;
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;

  std::size_t size() const { return n_; }
  std::span<double> real() { return {real_, n_}; }
  std::span<const double> real() const { return {real_, n_}; }
  std::span<std::complex<double>> spectrum() { return {spectrum_, n_ / 2 + 1}; }

 private:
  std::size_t n_ = 0;
  double* real_ = nullptr;
  std::complex<double>* spectrum_ = nullptr;
};

// Real-to-half-complex forward transform and its unnormalized inverse for a
// fixed length, backed by FFTW plans. Plans are created once per length and
// shared; execution is thread-safe as long as each thread uses its own
// workspace.
class RealFft {
 public:
  static std::shared_ptr<const RealFft> of_size(std::size_t n);

  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t spectrum_size() const { return n_ / 2 + 1; }

  // ws.real() -> ws.spectrum(). Leaves ws.real() intact.
  void forward(FftWorkspace& ws) const;
  // ws.spectrum() -> ws.real(), scaled by n (no normalization). Clobbers the spectrum.
  void inverse(FftWorkspace& ws) const;

  // Full length-n DFT of a real vector (Hermitian completion of the half spectrum).
  std::vector<std::complex<double>> full_spectrum(std::span<const double> x) const;

 private:
  explicit RealFft(std::size_t n);

  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace fbe
