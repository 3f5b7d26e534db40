#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fcdist/types.hpp"

namespace fcdist {

/// Pool of candidate cortical time series (one per row) from which active
/// sources are drawn.
struct SourceLibrary {
  Matrix data;
  double fs = 0.0;
  std::string origin;

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t n_samples() const noexcept { return static_cast<std::size_t>(data.cols()); }
};

/// Dipole activity X(t): n_sources x n_samples.
struct SourceActivity {
  Matrix data;
  double fs = 0.0;
  std::size_t n_active = 0;
};

/// Named electrode layout with unit-sphere positions (z points to the vertex).
struct Montage {
  std::string label;
  Labels channels;
  std::vector<Eigen::Vector3d> positions;
};

/// Gain matrix G: n_channels x n_sources.
struct LeadField {
  Matrix gain;
  std::string montage;
  Labels channels;
};

/// Scalp recording V(t) = G X(t).
struct MultichannelRecord {
  Matrix data;
  double fs = 0.0;
  Labels channels;

  [[nodiscard]] std::size_t n_channels() const noexcept { return static_cast<std::size_t>(data.rows()); }
  [[nodiscard]] std::size_t n_samples() const noexcept { return static_cast<std::size_t>(data.cols()); }
};

void validate(const SourceLibrary& lib);
void validate(const SourceActivity& src);
void validate(const LeadField& lf);
void validate(const MultichannelRecord& rec);

/// Shape of the synthetic source spectra: a 1/f^slope background plus a
/// resonant alpha component whose relative amplitude is log-normal across
/// sources, so only a minority of sources carry a strong rhythm.
struct SyntheticSourceOptions {
  double background_slope = 2.0;
  double alpha_log_amp_mean = -5.0;
  double alpha_log_amp_sd = 2.0;
  double alpha_jitter_hz = 1.5;
  double alpha_pole_radius = 0.97;
  std::size_t burn_in = 1000;
};

/// Independent synthetic sources, each row variance-normalized to 1.
SourceLibrary generate_synthetic_sources(std::size_t n_sources, std::size_t n_samples, double fs,
                                         double alpha_hz, std::uint64_t seed,
                                         const SyntheticSourceOptions& options = {});

/// Rescale every row to zero mean and unit variance. Constant rows are
/// rejected because they cannot carry a signal.
void normalize_rows(SourceLibrary& lib);

/// Draws `n_active` distinct library rows, fills the remaining rows with
/// Gaussian noise and shuffles row order. Pure in `seed`.
SourceActivity assemble_source_activity(const SourceLibrary& library, std::size_t n_total,
                                        std::size_t n_active, double noise_sigma,
                                        std::size_t n_samples, std::uint64_t seed);

// Montage templates ------------------------------------------------------

/// Built-in labels: std19, egi32, egi64, egi128. Numeric aliases "19", "32",
/// "64", "128" resolve to the same tables.
const Montage& builtin_montage(std::string_view label);
std::vector<std::string> builtin_montage_labels();
std::string montage_label_for_channels(int n_channels);

struct LeadFieldOptions {
  /// Regularizer of the inverse-square gain 1/(eps + d^2).
  double epsilon = 0.1;
  /// Source radii are drawn as r = r_min + (r_max - r_min) * u^radius_exponent.
  double r_min = 0.6;
  double r_max = 0.9;
  double radius_exponent = 1.0 / 3.0;
};

/// Inverse-square-distance surrogate for a BEM gain matrix. Source positions
/// depend only on (n_sources, seed), so every montage generated with the same
/// seed shares one source space.
LeadField generate_synthetic_leadfield(std::string_view montage, std::size_t n_sources,
                                       std::uint64_t seed, const LeadFieldOptions& options = {});
LeadField generate_synthetic_leadfield(const Montage& montage, std::size_t n_sources,
                                       std::uint64_t seed, const LeadFieldOptions& options = {});

MultichannelRecord project_to_scalp(const LeadField& lf, const SourceActivity& src);

}  // namespace fcdist
