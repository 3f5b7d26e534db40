#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcdist/signal_model.hpp"
#include "fcdist/types.hpp"

namespace fcdist {

/// Frequency interval in Hz, closed unless an end is marked open. Adjacent
/// named bands open their shared edge so no bin belongs to both.
struct Band {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
  bool hi_open = false;
};

/// Throws BandOutOfRange unless 0 < lo < hi < fs/2.
void validate(const Band& band, double fs);

/// delta [1.17, 4), theta [4, 8), alpha [8, 13], beta (13, 19.14].
std::vector<Band> default_bands();
Band band_by_name(std::string_view name);

/// Band edges are quoted to 0.01 Hz, so bins within this distance of an edge
/// are treated as on the edge (19.140625 Hz belongs to a band ending at 19.14).
inline constexpr double kBandEdgeTolerance = 5e-3;

/// Indices k with freqs[k] inside the band (edges up to kBandEdgeTolerance). Throws
/// EmptyBand when nothing falls inside.
std::vector<std::size_t> band_slice(std::span<const double> freqs, const Band& band);

/// Per-frequency Hermitian channel x channel matrices.
struct CrossSpectrum {
  std::vector<double> freqs;
  std::vector<ComplexMatrix> mats;
  std::size_t n_segments = 0;
  Labels channels;

  [[nodiscard]] std::size_t n_channels() const noexcept { return channels.size(); }
};

struct CoherencyMatrix {
  std::vector<double> freqs;
  std::vector<ComplexMatrix> mats;
  Labels channels;
};

/// Instantaneous phase (wrapped to (-pi, pi]) and amplitude envelope of the
/// band-limited analytic signal.
struct AnalyticRecord {
  Matrix phase;
  Matrix envelope;
  double fs = 0.0;
  Band band;
  Labels channels;

  [[nodiscard]] std::size_t n_channels() const noexcept { return static_cast<std::size_t>(phase.rows()); }
  [[nodiscard]] std::size_t n_samples() const noexcept { return static_cast<std::size_t>(phase.cols()); }
};

/// Fewer segments than this only raise a diagnostic; the normative spectra
/// were averaged over more than 20.
inline constexpr std::size_t kRecommendedMinSegments = 20;

/// Bartlett estimate: mean over K = floor(n / segment_samples) consecutive,
/// non-overlapping, mean-removed, untapered segments of x_i(f) conj(x_j(f)).
/// The DFT is scaled by sqrt(2)/segment_samples so the diagonal is a one-sided
/// power spectrum whose sum over bins approximates the signal variance.
/// Frequencies are k fs / segment_samples for k = 1 .. segment_samples/2 - 1.
CrossSpectrum bartlett_cross_spectrum(const MultichannelRecord& rec, std::size_t segment_samples);

/// C_ij(f) = S_ij(f) / sqrt(S_ii(f) S_jj(f)). Throws ZeroPowerChannel.
CoherencyMatrix coherency(const CrossSpectrum& cs);

/// Zero-phase Butterworth band-pass gain (squared magnitude of an analog
/// band-pass built from an `order`-pole low-pass prototype), i.e. the response
/// of forward-backward filtering.
double zero_phase_bandpass_gain(double f, double lo, double hi, int order = 4);

/// Band-pass each channel in the frequency domain, then form the analytic
/// signal by zeroing negative frequencies and doubling positive ones.
AnalyticRecord bandpass_analytic(const MultichannelRecord& rec, const Band& band, int order = 4);

}  // namespace fcdist
