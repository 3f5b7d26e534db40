#include "fcdist/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "fcdist/error.hpp"
#include "fcdist/fft.hpp"
#include "fcdist/seed.hpp"

namespace fcdist {
namespace {

// Unbiased bounded draw in [0, bound) (Lemire), so index shuffles do not
// depend on the standard library's distribution implementation.
__extension__ using u128 = unsigned __int128;

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    const u128 m = static_cast<u128>(r) * bound;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

void shuffle_indices(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

void standardize(Eigen::Ref<Eigen::RowVectorXd> row) {
  const double mean = row.mean();
  row.array() -= mean;
  const double sd = std::sqrt(row.squaredNorm() / static_cast<double>(row.size()));
  if (!(sd > 0.0)) fail(ErrorCode::InvalidArgument, "cannot normalize a constant row");
  row /= sd;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

void validate(const SourceLibrary& lib) {
  if (lib.data.rows() < 1 || lib.data.cols() < 1)
    fail(ErrorCode::EmptyRequest, "source library is empty");
  if (!(lib.fs > 0.0)) fail(ErrorCode::InvalidArgument, "source library sampling rate must be > 0");
  if (!all_finite(lib.data)) fail(ErrorCode::InvalidArgument, "source library has non-finite values");
}

void validate(const SourceActivity& src) {
  if (src.data.rows() < 1 || src.data.cols() < 1)
    fail(ErrorCode::EmptyRequest, "source activity is empty");
  if (!(src.fs > 0.0)) fail(ErrorCode::InvalidArgument, "source sampling rate must be > 0");
  if (src.n_active > static_cast<std::size_t>(src.data.rows()))
    fail(ErrorCode::InvalidArgument, "n_active exceeds the number of sources");
  if (!all_finite(src.data)) fail(ErrorCode::InvalidArgument, "source activity has non-finite values");
}

void validate(const LeadField& lf) {
  if (lf.gain.rows() < 1 || lf.gain.cols() < 1) fail(ErrorCode::EmptyRequest, "lead field is empty");
  if (lf.channels.size() != static_cast<std::size_t>(lf.gain.rows()))
    fail(ErrorCode::ShapeMismatch, "lead field channel names do not match its rows");
  if (!all_finite(lf.gain)) fail(ErrorCode::InvalidArgument, "lead field has non-finite gains");
  for (Eigen::Index i = 0; i < lf.gain.rows(); ++i)
    if (lf.gain.row(i).cwiseAbs().maxCoeff() == 0.0)
      fail(ErrorCode::InvalidArgument, "lead field row for " + lf.channels[i] + " is all zero");
}

void validate(const MultichannelRecord& rec) {
  if (rec.data.rows() < 1 || rec.data.cols() < 1) fail(ErrorCode::EmptyRequest, "record is empty");
  if (!(rec.fs > 0.0)) fail(ErrorCode::InvalidArgument, "record sampling rate must be > 0");
  if (rec.channels.size() != rec.n_channels())
    fail(ErrorCode::ShapeMismatch, "record channel names do not match its rows");
  if (!all_finite(rec.data)) fail(ErrorCode::InvalidArgument, "record has non-finite samples");
}

SourceLibrary generate_synthetic_sources(std::size_t n_sources, std::size_t n_samples, double fs,
                                         double alpha_hz, std::uint64_t seed,
                                         const SyntheticSourceOptions& options) {
  if (n_sources == 0 || n_samples == 0)
    fail(ErrorCode::EmptyRequest, "synthetic source request has zero sources or samples");
  if (!(fs > 0.0)) fail(ErrorCode::InvalidArgument, "sampling rate must be > 0");
  if (!(alpha_hz > 0.0 && alpha_hz < fs / 2.0))
    fail(ErrorCode::BandOutOfRange, "alpha frequency must lie in (0, fs/2)");
  if (n_samples < 4) fail(ErrorCode::InsufficientSamples, "need at least 4 samples per source");

  SourceLibrary lib;
  lib.fs = fs;
  lib.origin = "synthetic:1/f^" + std::to_string(options.background_slope) + "+alpha@" +
               std::to_string(alpha_hz) + "Hz seed=" + std::to_string(seed);
  lib.data.resize(static_cast<Eigen::Index>(n_sources), static_cast<Eigen::Index>(n_samples));

  const FftPlan forward(n_samples, FftPlan::Kind::RealForward);
  const FftPlan inverse(n_samples, FftPlan::Kind::ComplexInverse);
  const double nyquist = fs / 2.0;

  auto resonator = [&](std::mt19937_64& rng, double centre, std::size_t length) {
    centre = std::clamp(centre, 0.05 * nyquist, 0.95 * nyquist);
    const double omega = 2.0 * std::numbers::pi * centre / fs;
    const double a1 = 2.0 * options.alpha_pole_radius * std::cos(omega);
    const double a2 = -options.alpha_pole_radius * options.alpha_pole_radius;
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::RowVectorXd osc(static_cast<Eigen::Index>(length));
    double y1 = 0.0, y2 = 0.0;
    for (std::size_t t = 0; t < options.burn_in + length; ++t) {
      const double y = a1 * y1 + a2 * y2 + normal(rng);
      y2 = y1;
      y1 = y;
      if (t >= options.burn_in) osc[static_cast<Eigen::Index>(t - options.burn_in)] = y;
    }
    standardize(osc);
    return osc;
  };
  std::vector<double> white(n_samples);
  std::vector<std::complex<double>> half(n_samples / 2 + 1), full(n_samples), time(n_samples);

  for (std::size_t row = 0; row < n_sources; ++row) {
    std::mt19937_64 rng(derive_seed(seed, {row}));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    // 1/f^slope background by spectral shaping of white noise.
    for (auto& v : white) v = normal(rng);
    forward.forward(white, half);
    half[0] = 0.0;
    for (std::size_t k = 1; k < half.size(); ++k) {
      const double f = static_cast<double>(k) * fs / static_cast<double>(n_samples);
      half[k] /= std::pow(f, options.background_slope / 2.0);
    }
    for (std::size_t k = 0; k < half.size(); ++k) full[k] = half[k];
    for (std::size_t k = half.size(); k < n_samples; ++k) full[k] = std::conj(half[n_samples - k]);
    inverse.execute(full, time);
    Eigen::RowVectorXd background(static_cast<Eigen::Index>(n_samples));
    for (std::size_t t = 0; t < n_samples; ++t) background[static_cast<Eigen::Index>(t)] = time[t].real();
    standardize(background);

    // Resonant AR(2) oscillator near alpha.
    const double centre = alpha_hz + options.alpha_jitter_hz * uniform(rng);
    const Eigen::RowVectorXd osc = resonator(rng, centre, n_samples);
    const double amplitude =
        std::exp(options.alpha_log_amp_mean + options.alpha_log_amp_sd * normal(rng));
    auto out = lib.data.row(static_cast<Eigen::Index>(row));
    out = background + amplitude * osc;
    standardize(out);
  }
  return lib;
}

void normalize_rows(SourceLibrary& lib) {
  for (Eigen::Index i = 0; i < lib.data.rows(); ++i) standardize(lib.data.row(i));
}

SourceActivity assemble_source_activity(const SourceLibrary& library, std::size_t n_total,
                                        std::size_t n_active, double noise_sigma,
                                        std::size_t n_samples, std::uint64_t seed) {
  validate(library);
  if (n_total == 0 || n_samples == 0)
    fail(ErrorCode::EmptyRequest, "source assembly needs at least one source and one sample");
  if (n_active > n_total) fail(ErrorCode::InvalidArgument, "n_active exceeds n_total");
  if (n_active > library.size())
    fail(ErrorCode::InsufficientLibrary, "requested " + std::to_string(n_active) +
                                             " active sources from a library of " +
                                             std::to_string(library.size()));
  if (n_samples > library.n_samples())
    fail(ErrorCode::InsufficientSamples, "requested " + std::to_string(n_samples) +
                                             " samples from library rows of " +
                                             std::to_string(library.n_samples()));
  if (!(noise_sigma > 0.0)) fail(ErrorCode::InvalidArgument, "noise_sigma must be > 0");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> picks(library.size());
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  shuffle_indices(picks, rng);
  std::vector<std::size_t> slots(n_total);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  shuffle_indices(slots, rng);

  SourceActivity out;
  out.fs = library.fs;
  out.n_active = n_active;
  out.data.resize(static_cast<Eigen::Index>(n_total), static_cast<Eigen::Index>(n_samples));
  const auto cols = static_cast<Eigen::Index>(n_samples);
  for (std::size_t k = 0; k < n_active; ++k)
    out.data.row(static_cast<Eigen::Index>(slots[k])) =
        library.data.row(static_cast<Eigen::Index>(picks[k])).head(cols);
  for (std::size_t k = n_active; k < n_total; ++k) {
    const std::size_t row = slots[k];
    std::mt19937_64 noise_rng(derive_seed(seed, {hash_tag("noise"), row}));
    std::normal_distribution<double> normal(0.0, noise_sigma);
    double* dst = out.data.row(static_cast<Eigen::Index>(row)).data();
    for (Eigen::Index t = 0; t < cols; ++t) dst[t] = normal(noise_rng);
  }
  return out;
}

LeadField generate_synthetic_leadfield(std::string_view montage, std::size_t n_sources,
                                       std::uint64_t seed, const LeadFieldOptions& options) {
  return generate_synthetic_leadfield(builtin_montage(montage), n_sources, seed, options);
}

LeadField generate_synthetic_leadfield(const Montage& montage, std::size_t n_sources,
                                       std::uint64_t seed, const LeadFieldOptions& options) {
  if (n_sources == 0) fail(ErrorCode::EmptyRequest, "lead field needs at least one source");
  if (montage.positions.empty() || montage.positions.size() != montage.channels.size())
    fail(ErrorCode::ShapeMismatch, "montage positions and channel names disagree");
  if (!(options.epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be > 0");
  if (!(options.r_min >= 0.0 && options.r_min <= options.r_max && options.r_max < 1.0))
    fail(ErrorCode::InvalidArgument, "source radii must satisfy 0 <= r_min <= r_max < 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Eigen::Vector3d> sources(n_sources);
  for (auto& s : sources) {
    Eigen::Vector3d dir;
    do {
      dir = {normal(rng), normal(rng), normal(rng)};
    } while (dir.squaredNorm() < 1e-12);
    const double r = options.r_min +
                     (options.r_max - options.r_min) * std::pow(uniform(rng), options.radius_exponent);
    s = r * dir.normalized();
  }

  LeadField lf;
  lf.montage = montage.label;
  lf.channels = montage.channels;
  lf.gain.resize(static_cast<Eigen::Index>(montage.positions.size()),
                 static_cast<Eigen::Index>(n_sources));
  for (std::size_t c = 0; c < montage.positions.size(); ++c) {
    const Eigen::Vector3d e = montage.positions[c].normalized();
    auto row = lf.gain.row(static_cast<Eigen::Index>(c));
    for (std::size_t k = 0; k < n_sources; ++k)
      row[static_cast<Eigen::Index>(k)] = 1.0 / (options.epsilon + (e - sources[k]).squaredNorm());
    row /= row.maxCoeff();
  }
  return lf;
}

MultichannelRecord project_to_scalp(const LeadField& lf, const SourceActivity& src) {
  if (lf.gain.cols() != src.data.rows())
    fail(ErrorCode::ShapeMismatch, "lead field has " + std::to_string(lf.gain.cols()) +
                                       " sources but activity has " +
                                       std::to_string(src.data.rows()));
  if (lf.channels.size() != static_cast<std::size_t>(lf.gain.rows()))
    fail(ErrorCode::ShapeMismatch, "lead field channel names do not match its rows");
  MultichannelRecord rec;
  rec.fs = src.fs;
  rec.channels = lf.channels;
  rec.data.noalias() = lf.gain * src.data;
  return rec;
}

}  // namespace fcdist
