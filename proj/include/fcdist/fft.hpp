#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fcdist {

/// Thin RAII wrapper over FFTW plans. Plans are created with FFTW_ESTIMATE
/// and FFTW_UNALIGNED so execution is deterministic and works on any buffer;
/// a single plan may be executed concurrently from several threads.
class FftPlan {
 public:
  enum class Kind { RealForward, ComplexForward, ComplexInverse };

  FftPlan(std::size_t n, Kind kind);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  /// Real -> half spectrum (n/2 + 1 bins). Unnormalized.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Complex -> complex in the plan's direction. Unnormalized.
  void execute(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

 private:
  std::size_t n_ = 0;
  Kind kind_;
  void* plan_ = nullptr;
};

/// Convenience: full complex DFT of a real sequence, X[k] = sum_t x[t] e^{-2 pi i k t / n}.
std::vector<std::complex<double>> real_dft(std::span<const double> x);

}  // namespace fcdist
