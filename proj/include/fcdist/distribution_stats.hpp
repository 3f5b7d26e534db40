#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fcdist/connectivity.hpp"
#include "fcdist/types.hpp"

namespace fcdist {

/// Strict upper triangle of a symmetric n x n matrix, row-major (i < j).
struct WeightVector {
  std::vector<double> w;
  std::size_t n_channels = 0;

  [[nodiscard]] std::size_t n_pairs() const noexcept { return w.size(); }
};

inline constexpr double kSymmetryTolerance = 1e-9;
inline constexpr std::size_t kDefaultBins = 100;

WeightVector upper_triangle_weights(const Matrix& m);
WeightVector upper_triangle_weights(const ConnectivityMatrix& m);

double mean(std::span<const double> w);
/// Population third standardized moment. Throws DegenerateDistribution when
/// the sample has no spread.
double skewness(std::span<const double> w);
/// Population fourth standardized moment; a normal law gives 3.
double kurtosis(std::span<const double> w);

/// Counts over `n_bins` equal-width bins of [0, 1]: bin k holds
/// [k/n_bins, (k+1)/n_bins), the last bin also holds 1.0. Throws
/// RangeViolation for any weight outside [0, 1].
std::vector<std::size_t> unit_histogram(std::span<const double> w, std::size_t n_bins);

/// Histogram entropy normalized by log2(n_bins), in [0, 1].
double shannon_entropy(std::span<const double> w, std::size_t n_bins = kDefaultBins);

/// Skewness and kurtosis are empty when the weights have zero spread.
struct DistributionSummary {
  double mcw = 0.0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
  double entropy = 0.0;
  std::size_t n_pairs = 0;
};

DistributionSummary summarize(const WeightVector& w, std::size_t n_bins = kDefaultBins);

}  // namespace fcdist
