#include "fcdist/connectivity.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <cmath>
#include <numbers>

#include "fcdist/error.hpp"

namespace fcdist {
namespace {

ConnectivityMatrix blank(Metric metric, const Band& band, const Labels& channels) {
  const auto n = static_cast<Eigen::Index>(channels.size());
  ConnectivityMatrix m;
  m.metric = metric;
  m.band = band;
  m.channels = channels;
  m.weights = Matrix::Zero(n, n);
  return m;
}

void require_pairs(std::size_t n_channels) {
  if (n_channels < 2) fail(ErrorCode::InvalidArgument, "connectivity needs at least 2 channels");
}

double wrap_phase(double d) {
  if (d > std::numbers::pi) return d - 2.0 * std::numbers::pi;
  if (d <= -std::numbers::pi) return d + 2.0 * std::numbers::pi;
  return d;
}

}  // namespace

std::string_view to_string(Metric m) noexcept {
  switch (m) {
    case Metric::COH: return "COH";
    case Metric::iCOH: return "iCOH";
    case Metric::PLV: return "PLV";
    case Metric::PLI: return "PLI";
    case Metric::AEC: return "AEC";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : all_metrics()) {
    const auto s = to_string(m);
    if (s.size() == name.size() &&
        std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
        }))
      return m;
  }
  fail(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::vector<Metric> all_metrics() {
  return {Metric::COH, Metric::iCOH, Metric::PLV, Metric::PLI, Metric::AEC};
}

WindowLayout window_layout(std::size_t n_samples, double fs, const WindowConfig& w) {
  if (!(w.window_seconds > 0.0) || !(w.overlap_seconds >= 0.0) ||
      !(w.overlap_seconds < w.window_seconds))
    fail(ErrorCode::InvalidArgument, "windows need 0 <= overlap < window");
  WindowLayout out;
  out.window = static_cast<std::size_t>(std::llround(w.window_seconds * fs));
  const auto overlap = static_cast<std::size_t>(std::llround(w.overlap_seconds * fs));
  if (out.window == 0 || overlap >= out.window)
    fail(ErrorCode::InvalidArgument, "window shorter than one sample step");
  out.step = out.window - overlap;
  if (n_samples < out.window)
    fail(ErrorCode::TooShort, "record of " + std::to_string(n_samples) +
                                  " samples is shorter than one window of " +
                                  std::to_string(out.window));
  out.count = (n_samples - out.window) / out.step + 1;
  return out;
}

ConnectivityMatrix coherence_matrix(const CoherencyMatrix& c, const Band& band) {
  require_pairs(c.channels.size());
  const auto idx = band_slice(c.freqs, band);
  auto out = blank(Metric::COH, band, c.channels);
  const Eigen::Index n = out.weights.rows();
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.weights(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (auto k : idx) acc += std::norm(c.mats[k](i, j));
      const double v = std::min(acc * inv, 1.0);
      out.weights(i, j) = v;
      out.weights(j, i) = v;
    }
  }
  return out;
}

ConnectivityMatrix icoh_matrix(const CoherencyMatrix& c, const Band& band, IcohBandMode mode) {
  require_pairs(c.channels.size());
  const auto idx = band_slice(c.freqs, band);
  auto out = blank(Metric::iCOH, band, c.channels);
  const Eigen::Index n = out.weights.rows();
  Matrix raw = Matrix::Zero(n, n);
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double sum = 0.0, sum_abs = 0.0;
      for (auto k : idx) {
        const double im = c.mats[k](i, j).imag();
        sum += im;
        sum_abs += std::abs(im);
      }
      raw(i, j) = sum * inv;
      raw(j, i) = -raw(i, j);
      const double w = std::min(mode == IcohBandMode::SignedMean ? std::abs(raw(i, j)) : sum_abs * inv, 1.0);
      out.weights(i, j) = w;
      out.weights(j, i) = w;
    }
  }
  out.signed_raw = std::move(raw);
  return out;
}

ConnectivityMatrix plv_matrix(const AnalyticRecord& a, const WindowConfig& w) {
  require_pairs(a.n_channels());
  const auto layout = window_layout(a.n_samples(), a.fs, w);
  auto out = blank(Metric::PLV, a.band, a.channels);
  const Eigen::Index n = out.weights.rows();
  const auto len = static_cast<Eigen::Index>(layout.window);
  const Matrix cos_ph = a.phase.array().cos().matrix();
  const Matrix sin_ph = a.phase.array().sin().matrix();

  Matrix acc = Matrix::Zero(n, n);
  Matrix re(n, n), im(n, n);
  for (std::size_t k = 0; k < layout.count; ++k) {
    const auto start = static_cast<Eigen::Index>(k * layout.step);
    const auto c = cos_ph.middleCols(start, len);
    const auto s = sin_ph.middleCols(start, len);
    // sum_t exp(i(phi_i - phi_j)) = sum_t (c_i c_j + s_i s_j) + i (s_i c_j - c_i s_j)
    re.noalias() = c * c.transpose();
    re.noalias() += s * s.transpose();
    im.noalias() = s * c.transpose();
    im.noalias() -= c * s.transpose();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j)
        acc(i, j) += std::hypot(re(i, j), im(i, j)) / static_cast<double>(len);
  }
  const double inv = 1.0 / static_cast<double>(layout.count);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.weights(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::min(acc(i, j) * inv, 1.0);
      out.weights(i, j) = v;
      out.weights(j, i) = v;
    }
  }
  return out;
}

ConnectivityMatrix pli_matrix(const AnalyticRecord& a, const WindowConfig& w) {
  require_pairs(a.n_channels());
  const auto layout = window_layout(a.n_samples(), a.fs, w);
  auto out = blank(Metric::PLI, a.band, a.channels);
  const Eigen::Index n = out.weights.rows();
  const double inv_len = 1.0 / static_cast<double>(layout.window);
  const double inv_count = 1.0 / static_cast<double>(layout.count);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* pi = a.phase.row(i).data();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double* pj = a.phase.row(j).data();
      double total = 0.0;
      for (std::size_t k = 0; k < layout.count; ++k) {
        const std::size_t start = k * layout.step;
        long long signs = 0;
        for (std::size_t t = start; t < start + layout.window; ++t) {
          const double d = wrap_phase(pi[t] - pj[t]);
          signs += (d > kPliZeroLagTolerance) - (d < -kPliZeroLagTolerance);
        }
        total += std::abs(static_cast<double>(signs)) * inv_len;
      }
      const double v = std::min(total * inv_count, 1.0);
      out.weights(i, j) = v;
      out.weights(j, i) = v;
    }
  }
  return out;
}

ConnectivityMatrix aec_matrix(const AnalyticRecord& a, const WindowConfig& w) {
  require_pairs(a.n_channels());
  const auto layout = window_layout(a.n_samples(), a.fs, w);
  auto out = blank(Metric::AEC, a.band, a.channels);
  const Eigen::Index n = out.weights.rows();
  const auto len = static_cast<Eigen::Index>(layout.window);

  Matrix sum = Matrix::Zero(n, n);
  Eigen::MatrixXi used = Eigen::MatrixXi::Zero(n, n);
  Matrix centred(n, len), cross(n, n);
  Eigen::VectorXd ss(n);
  std::vector<bool> flat(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < layout.count; ++k) {
    const auto start = static_cast<Eigen::Index>(k * layout.step);
    centred = a.envelope.middleCols(start, len);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mean = centred.row(i).mean();
      centred.row(i).array() -= mean;
      ss[i] = centred.row(i).squaredNorm();
      // Constant up to rounding relative to the envelope level.
      flat[static_cast<std::size_t>(i)] =
          !(ss[i] > 1e-24 * static_cast<double>(len) * std::max(mean * mean, 1e-300));
    }
    cross.noalias() = centred * centred.transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (flat[static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (flat[static_cast<std::size_t>(j)]) continue;
        const double r = cross(i, j) / std::sqrt(ss[i] * ss[j]);
        sum(i, j) += std::clamp(r, -1.0, 1.0);
        used(i, j) += 1;
      }
    }
  }
  Matrix raw = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.weights(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (used(i, j) == 0)
        fail(ErrorCode::DegenerateEnvelope, "envelopes of " + a.channels[static_cast<std::size_t>(i)] +
                                                " and " + a.channels[static_cast<std::size_t>(j)] +
                                                " are constant in every window");
      const double r = sum(i, j) / used(i, j);
      raw(i, j) = r;
      raw(j, i) = r;
      out.weights(i, j) = std::abs(r);
      out.weights(j, i) = std::abs(r);
    }
  }
  out.signed_raw = std::move(raw);
  return out;
}

}  // namespace fcdist
