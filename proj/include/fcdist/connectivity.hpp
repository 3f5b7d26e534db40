#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "fcdist/spectral.hpp"
#include "fcdist/types.hpp"

namespace fcdist {

enum class Metric { COH, iCOH, PLV, PLI, AEC };

std::string_view to_string(Metric m) noexcept;
Metric parse_metric(std::string_view name);
std::vector<Metric> all_metrics();

/// True for the metrics that are blind to zero-lag (volume-conducted) coupling.
constexpr bool is_lag_only(Metric m) noexcept { return m == Metric::iCOH || m == Metric::PLI; }

/// Symmetric channel x channel weights in [0, 1] for one metric and band.
/// `signed_raw` keeps the band/window average before the magnitude fold for
/// iCOH (antisymmetric) and AEC (symmetric, possibly negative).
struct ConnectivityMatrix {
  Metric metric = Metric::COH;
  Band band;
  Matrix weights;
  std::optional<Matrix> signed_raw;
  Labels channels;
};

/// Phase differences smaller than this (radians) count as zero lag in PLI.
/// Channels that differ only by a gain produce analytic phases equal up to
/// rounding, and the sign of rounding noise must not register as a lag.
inline constexpr double kPliZeroLagTolerance = 1e-9;

/// Sliding-window layout for the time-domain metrics.
struct WindowConfig {
  double window_seconds = 6.0;
  double overlap_seconds = 0.0;
};

/// Samples per window and per step, after rounding to whole samples.
struct WindowLayout {
  std::size_t window = 0;
  std::size_t step = 0;
  std::size_t count = 0;
};

/// floor((n - window) / step) + 1 windows starting at 0, step, 2 step, ...
/// Throws TooShort when not even one window fits.
WindowLayout window_layout(std::size_t n_samples, double fs, const WindowConfig& w);

/// How the signed imaginary coherency is collapsed over band bins.
enum class IcohBandMode {
  SignedMean,    ///< |mean_f Im C(f)|
  MeanMagnitude  ///< mean_f |Im C(f)|
};

ConnectivityMatrix coherence_matrix(const CoherencyMatrix& c, const Band& band);
ConnectivityMatrix icoh_matrix(const CoherencyMatrix& c, const Band& band,
                               IcohBandMode mode = IcohBandMode::SignedMean);
ConnectivityMatrix plv_matrix(const AnalyticRecord& a, const WindowConfig& w);
ConnectivityMatrix pli_matrix(const AnalyticRecord& a, const WindowConfig& w);
ConnectivityMatrix aec_matrix(const AnalyticRecord& a, const WindowConfig& w);

}  // namespace fcdist
