#include "fcdist/distribution_stats.hpp"

#include <cmath>
#include <sstream>

#include "fcdist/error.hpp"

namespace fcdist {
namespace {

struct CentralMoments {
  double mean, m2, m3, m4;
};

CentralMoments central_moments(std::span<const double> w) {
  if (w.empty()) fail(ErrorCode::EmptyRequest, "weight vector is empty");
  const double n = static_cast<double>(w.size());
  CentralMoments c{mean(w), 0.0, 0.0, 0.0};
  for (double x : w) {
    const double d = x - c.mean;
    const double d2 = d * d;
    c.m2 += d2;
    c.m3 += d2 * d;
    c.m4 += d2 * d2;
  }
  c.m2 /= n;
  c.m3 /= n;
  c.m4 /= n;
  // Spread below rounding noise of the mean counts as none.
  if (!(c.m2 > 1e-30 * (1.0 + c.mean * c.mean)))
    fail(ErrorCode::DegenerateDistribution, "weights have zero variance");
  return c;
}

}  // namespace

WeightVector upper_triangle_weights(const Matrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::ShapeMismatch, "connectivity matrix is not square");
  if (m.rows() < 2) fail(ErrorCode::InvalidArgument, "need at least 2 channels for pairs");
  const Eigen::Index n = m.rows();
  WeightVector out;
  out.n_channels = static_cast<std::size_t>(n);
  out.w.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= kSymmetryTolerance)) {
        std::ostringstream os;
        os << "entries (" << i << "," << j << ") and (" << j << "," << i << ") differ by "
           << std::abs(m(i, j) - m(j, i));
        fail(ErrorCode::NotSymmetric, os.str());
      }
      out.w.push_back(m(i, j));
    }
  }
  return out;
}

WeightVector upper_triangle_weights(const ConnectivityMatrix& m) {
  return upper_triangle_weights(m.weights);
}

double mean(std::span<const double> w) {
  if (w.empty()) fail(ErrorCode::EmptyRequest, "weight vector is empty");
  double s = 0.0;
  for (double x : w) s += x;
  return s / static_cast<double>(w.size());
}

double skewness(std::span<const double> w) {
  const auto c = central_moments(w);
  return c.m3 / std::pow(c.m2, 1.5);
}

double kurtosis(std::span<const double> w) {
  const auto c = central_moments(w);
  return c.m4 / (c.m2 * c.m2);
}

std::vector<std::size_t> unit_histogram(std::span<const double> w, std::size_t n_bins) {
  if (n_bins < 2) fail(ErrorCode::InvalidArgument, "need at least 2 histogram bins");
  std::vector<std::size_t> counts(n_bins, 0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double x = w[k];
    if (!(x >= 0.0 && x <= 1.0)) {
      std::ostringstream os;
      os << "weight " << k << " = " << x << " lies outside [0, 1]";
      fail(ErrorCode::RangeViolation, os.str());
    }
    auto bin = static_cast<std::size_t>(x * static_cast<double>(n_bins));
    if (bin >= n_bins) bin = n_bins - 1;
    ++counts[bin];
  }
  return counts;
}

double shannon_entropy(std::span<const double> w, std::size_t n_bins) {
  if (w.empty()) fail(ErrorCode::EmptyRequest, "weight vector is empty");
  const auto counts = unit_histogram(w, n_bins);
  const double n = static_cast<double>(w.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(n_bins));
}

DistributionSummary summarize(const WeightVector& w, std::size_t n_bins) {
  DistributionSummary s;
  s.n_pairs = w.n_pairs();
  s.mcw = mean(w.w);
  s.entropy = shannon_entropy(w.w, n_bins);
  try {
    s.skewness = skewness(w.w);
    s.kurtosis = kurtosis(w.w);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateDistribution) throw;
    s.skewness.reset();
    s.kurtosis.reset();
  }
  return s;
}

}  // namespace fcdist
