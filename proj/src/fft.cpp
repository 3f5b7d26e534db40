#include "fcdist/fft.hpp"

#include <mutex>
#include <utility>

#include <fftw3.h>

#include "fcdist/error.hpp"

namespace fcdist {
namespace {

// Only fftw_execute* is thread-safe; planning and destruction are not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(std::size_t n, Kind kind) : n_(n), kind_(kind) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "FFT length must be positive");
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (kind == Kind::RealForward) {
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(len, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                 flags);
  } else {
    std::vector<std::complex<double>> in(n), out(n);
    const int sign = kind == Kind::ComplexForward ? FFTW_FORWARD : FFTW_BACKWARD;
    plan_ = fftw_plan_dft_1d(len, reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), sign, flags);
  }
  if (plan_ == nullptr) fail(ErrorCode::InvalidArgument, "FFTW could not create a plan");
}

FftPlan::~FftPlan() {
  if (plan_ != nullptr) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

FftPlan::FftPlan(FftPlan&& other) noexcept
    : n_(other.n_), kind_(other.kind_), plan_(std::exchange(other.plan_, nullptr)) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
  if (this != &other) {
    if (plan_ != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
    n_ = other.n_;
    kind_ = other.kind_;
    plan_ = std::exchange(other.plan_, nullptr);
  }
  return *this;
}

void FftPlan::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (kind_ != Kind::RealForward || in.size() != n_ || out.size() != n_ / 2 + 1)
    fail(ErrorCode::ShapeMismatch, "real FFT buffer sizes do not match the plan");
  // r2c never writes to its input for out-of-place plans.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void FftPlan::execute(std::span<const std::complex<double>> in,
                      std::span<std::complex<double>> out) const {
  if (kind_ == Kind::RealForward || in.size() != n_ || out.size() != n_)
    fail(ErrorCode::ShapeMismatch, "complex FFT buffer sizes do not match the plan");
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::vector<std::complex<double>> real_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  FftPlan plan(n, FftPlan::Kind::RealForward);
  std::vector<std::complex<double>> half(n / 2 + 1);
  plan.forward(x, half);
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k < half.size(); ++k) full[k] = half[k];
  for (std::size_t k = half.size(); k < n; ++k) full[k] = std::conj(half[n - k]);
  return full;
}

}  // namespace fcdist
