#pragma once

#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "fcdist/error.hpp"
#include "fcdist/signal_model.hpp"
#include "fcdist/spectral.hpp"

namespace fcdist::test {

inline constexpr double kPi = 3.14159265358979323846;

/// Code of the fcdist::Error thrown by `f`, or nothing if it returns normally.
template <typename F>
std::optional<ErrorCode> error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Labels numbered(std::size_t n, const std::string& prefix = "C") {
  Labels out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

inline Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng);
  return m;
}

inline MultichannelRecord make_record(Matrix data, double fs) {
  MultichannelRecord r;
  r.channels = numbered(static_cast<std::size_t>(data.rows()));
  r.data = std::move(data);
  r.fs = fs;
  return r;
}

inline MultichannelRecord random_record(std::size_t channels, std::size_t samples, double fs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return make_record(gaussian_matrix(channels, samples, rng), fs);
}

/// Straight-line cross-spectrum: explicit DFT sums per segment, then the mean
/// of x_i(f) conj(x_j(f)) over segments.
inline std::vector<std::vector<std::vector<std::complex<double>>>> naive_bartlett(const Matrix& x,
                                                                                 std::size_t seg) {
  const std::size_t nc = static_cast<std::size_t>(x.rows());
  const std::size_t k_segments = static_cast<std::size_t>(x.cols()) / seg;
  const std::size_t n_freqs = seg / 2 - 1;
  std::vector<std::vector<std::vector<std::complex<double>>>> s(
      n_freqs, std::vector<std::vector<std::complex<double>>>(nc, std::vector<std::complex<double>>(nc)));
  for (std::size_t k = 0; k < k_segments; ++k) {
    std::vector<std::vector<std::complex<double>>> dft(nc, std::vector<std::complex<double>>(n_freqs));
    for (std::size_t c = 0; c < nc; ++c) {
      double m = 0.0;
      for (std::size_t t = 0; t < seg; ++t) m += x(c, k * seg + t);
      m /= static_cast<double>(seg);
      for (std::size_t f = 0; f < n_freqs; ++f) {
        std::complex<double> acc = 0.0;
        for (std::size_t t = 0; t < seg; ++t) {
          const double ang = -2.0 * kPi * static_cast<double>((f + 1) * t) / static_cast<double>(seg);
          acc += (x(c, k * seg + t) - m) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        dft[c][f] = acc * std::sqrt(2.0) / static_cast<double>(seg);
      }
    }
    for (std::size_t f = 0; f < n_freqs; ++f)
      for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j)
          s[f][i][j] += dft[i][f] * std::conj(dft[j][f]) / static_cast<double>(k_segments);
  }
  return s;
}

}  // namespace fcdist::test
