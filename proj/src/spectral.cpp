#include "fcdist/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fcdist/error.hpp"
#include "fcdist/fft.hpp"

namespace fcdist {

void validate(const Band& band, double fs) {
  if (!(band.lo > 0.0 && band.lo < band.hi && band.hi < fs / 2.0)) {
    std::ostringstream os;
    os << "band '" << band.name << "' [" << band.lo << ", " << band.hi
       << "] Hz must satisfy 0 < lo < hi < " << fs / 2.0;
    fail(ErrorCode::BandOutOfRange, os.str());
  }
}

std::vector<Band> default_bands() {
  return {{"delta", 1.17, 4.0, false, true},
          {"theta", 4.0, 8.0, false, true},
          {"alpha", 8.0, 13.0},
          {"beta", 13.0, 19.14, true, false}};
}

Band band_by_name(std::string_view name) {
  for (auto& b : default_bands())
    if (b.name == name) return b;
  fail(ErrorCode::InvalidArgument, "unknown band '" + std::string(name) + "'");
}

std::vector<std::size_t> band_slice(std::span<const double> freqs, const Band& band) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const bool above = band.lo_open ? freqs[k] > band.lo + kBandEdgeTolerance
                                     : freqs[k] >= band.lo - kBandEdgeTolerance;
    const bool below = band.hi_open ? freqs[k] < band.hi - kBandEdgeTolerance
                                     : freqs[k] <= band.hi + kBandEdgeTolerance;
    if (above && below) idx.push_back(k);
  }
  if (idx.empty()) {
    std::ostringstream os;
    os << "band '" << band.name << "' [" << band.lo << ", " << band.hi
       << "] Hz contains no frequency bins";
    fail(ErrorCode::EmptyBand, os.str());
  }
  return idx;
}

CrossSpectrum bartlett_cross_spectrum(const MultichannelRecord& rec, std::size_t segment_samples) {
  validate(rec);
  if (segment_samples < 4) fail(ErrorCode::InvalidArgument, "segment length must be at least 4");
  const std::size_t n = rec.n_samples();
  const std::size_t n_seg = n / segment_samples;
  if (n_seg < 2)
    fail(ErrorCode::TooFewSegments, "record of " + std::to_string(n) + " samples holds " +
                                        std::to_string(n_seg) + " segment(s) of " +
                                        std::to_string(segment_samples) + "; need at least 2");
  const std::size_t n_ch = rec.n_channels();
  const std::size_t n_freq = segment_samples / 2 - 1;
  const auto nc = static_cast<Eigen::Index>(n_ch);

  CrossSpectrum cs;
  cs.n_segments = n_seg;
  cs.channels = rec.channels;
  cs.freqs.resize(n_freq);
  for (std::size_t k = 0; k < n_freq; ++k)
    cs.freqs[k] = static_cast<double>(k + 1) * rec.fs / static_cast<double>(segment_samples);
  cs.mats.assign(n_freq, ComplexMatrix::Zero(nc, nc));

  const FftPlan plan(segment_samples, FftPlan::Kind::RealForward);
  const double scale = std::sqrt(2.0) / static_cast<double>(segment_samples);
  std::vector<double> buf(segment_samples);
  std::vector<std::complex<double>> half(segment_samples / 2 + 1);
  // spectra(f, ch) for the current segment.
  ComplexMatrix spectra(static_cast<Eigen::Index>(n_freq), nc);

  for (std::size_t s = 0; s < n_seg; ++s) {
    for (std::size_t c = 0; c < n_ch; ++c) {
      const double* src = rec.data.row(static_cast<Eigen::Index>(c)).data() + s * segment_samples;
      double mean = 0.0;
      for (std::size_t t = 0; t < segment_samples; ++t) mean += src[t];
      mean /= static_cast<double>(segment_samples);
      for (std::size_t t = 0; t < segment_samples; ++t) buf[t] = src[t] - mean;
      plan.forward(buf, half);
      for (std::size_t k = 0; k < n_freq; ++k)
        spectra(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = half[k + 1] * scale;
    }
    for (std::size_t k = 0; k < n_freq; ++k) {
      auto& m = cs.mats[k];
      const auto row = spectra.row(static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < nc; ++i) {
        const auto xi = row[i];
        m(i, i) += std::norm(xi);
        for (Eigen::Index j = i + 1; j < nc; ++j) m(i, j) += xi * std::conj(row[j]);
      }
    }
  }

  const double inv_k = 1.0 / static_cast<double>(n_seg);
  for (auto& m : cs.mats) {
    for (Eigen::Index i = 0; i < nc; ++i) {
      m(i, i) = std::complex<double>(m(i, i).real() * inv_k, 0.0);
      for (Eigen::Index j = i + 1; j < nc; ++j) {
        m(i, j) *= inv_k;
        m(j, i) = std::conj(m(i, j));
      }
    }
  }
  return cs;
}

CoherencyMatrix coherency(const CrossSpectrum& cs) {
  CoherencyMatrix out;
  out.freqs = cs.freqs;
  out.channels = cs.channels;
  out.mats.reserve(cs.mats.size());
  for (std::size_t k = 0; k < cs.mats.size(); ++k) {
    const auto& s = cs.mats[k];
    const Eigen::Index n = s.rows();
    Eigen::VectorXd inv_sd(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = s(i, i).real();
      if (!(p > 0.0)) {
        std::ostringstream os;
        os << "channel " << (static_cast<std::size_t>(i) < cs.channels.size() ? cs.channels[i] : std::to_string(i))
           << " has zero power at " << cs.freqs[k] << " Hz";
        fail(ErrorCode::ZeroPowerChannel, os.str());
      }
      inv_sd[i] = 1.0 / std::sqrt(p);
    }
    ComplexMatrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      c(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        c(i, j) = s(i, j) * (inv_sd[i] * inv_sd[j]);
        c(j, i) = std::conj(c(i, j));
      }
    }
    out.mats.push_back(std::move(c));
  }
  return out;
}

double zero_phase_bandpass_gain(double f, double lo, double hi, int order) {
  f = std::abs(f);
  if (f == 0.0) return 0.0;
  const double x = (f * f - lo * hi) / (f * (hi - lo));
  return 1.0 / (1.0 + std::pow(x * x, order));
}

AnalyticRecord bandpass_analytic(const MultichannelRecord& rec, const Band& band, int order) {
  validate(rec);
  validate(band, rec.fs);
  const std::size_t n = rec.n_samples();
  const std::size_t n_ch = rec.n_channels();

  AnalyticRecord out;
  out.fs = rec.fs;
  out.band = band;
  out.channels = rec.channels;
  out.phase.resize(static_cast<Eigen::Index>(n_ch), static_cast<Eigen::Index>(n));
  out.envelope.resize(static_cast<Eigen::Index>(n_ch), static_cast<Eigen::Index>(n));

  // Combined band-pass and analytic-signal multiplier on bins 0 .. n/2.
  std::vector<double> weight(n / 2 + 1);
  for (std::size_t k = 0; k < weight.size(); ++k) {
    const double f = static_cast<double>(k) * rec.fs / static_cast<double>(n);
    const bool nyquist = n % 2 == 0 && k == n / 2;
    const double analytic = (k == 0 || nyquist) ? 1.0 : 2.0;
    weight[k] = analytic * zero_phase_bandpass_gain(f, band.lo, band.hi, order);
  }

  const FftPlan forward(n, FftPlan::Kind::RealForward);
  const FftPlan inverse(n, FftPlan::Kind::ComplexInverse);
  std::vector<std::complex<double>> half(n / 2 + 1), spectrum(n), z(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < n_ch; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    forward.forward(std::span<const double>(rec.data.row(ci).data(), n), half);
    for (std::size_t k = 0; k < half.size(); ++k) spectrum[k] = half[k] * weight[k];
    for (std::size_t k = half.size(); k < n; ++k) spectrum[k] = 0.0;
    inverse.execute(spectrum, z);
    double* ph = out.phase.row(ci).data();
    double* env = out.envelope.row(ci).data();
    for (std::size_t t = 0; t < n; ++t) {
      const std::complex<double> v = z[t] * inv_n;
      const double a = std::arg(v);
      ph[t] = a == -std::numbers::pi ? std::numbers::pi : a;
      env[t] = std::abs(v);
    }
  }
  return out;
}

}  // namespace fcdist
