#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcdist/connectivity.hpp"
#include "fcdist/signal_model.hpp"
#include "fcdist/spectral.hpp"

namespace fcdist {

/// Window lengths for the time-domain metrics. PLV uses `plv_overlap_seconds`
/// (non-overlapping by default); PLI and AEC use `overlap_seconds`.
struct TimeWindows {
  double window_seconds = 6.0;
  double overlap_seconds = 0.5;
  double plv_overlap_seconds = 0.0;

  [[nodiscard]] WindowConfig for_metric(Metric m) const {
    return {window_seconds, m == Metric::PLV ? plv_overlap_seconds : overlap_seconds};
  }
};

/// Either the built-in synthetic generator or a matrix file. For lead fields
/// the path may contain "{montage}", replaced by the channel count.
struct InputMode {
  std::optional<std::filesystem::path> file;
  [[nodiscard]] bool synthetic() const noexcept { return !file.has_value(); }
};

struct ExperimentConfig {
  std::vector<int> montages{19, 32, 64, 128};
  std::vector<Metric> metrics = all_metrics();
  std::vector<Band> bands{band_by_name("alpha")};
  std::size_t trials = 100;
  double fs = 200.0;
  std::size_t n_samples = 10000;
  std::size_t n_sources = 3002;
  std::size_t n_active = 200;
  double noise_sigma = 0.01;
  std::size_t segment_samples = 512;
  TimeWindows window;
  std::size_t n_bins = 100;
  std::uint64_t master_seed = 1;
  InputMode source_mode;
  InputMode leadfield_mode;

  // Synthetic-model settings, used only in synthetic modes.
  std::size_t n_library = 1772;
  double alpha_hz = 10.0;
  SyntheticSourceOptions synthetic_sources;
  LeadFieldOptions synthetic_leadfield;
  IcohBandMode icoh_band_mode = IcohBandMode::SignedMean;
};

/// Throws InvalidArgument / BandOutOfRange for inconsistent settings.
void validate(const ExperimentConfig& cfg);

/// Parses a JSON document whose keys mirror the ExperimentConfig fields.
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// "alpha", "alpha,beta", "all", or "name:lo:hi" entries separated by commas.
std::vector<Band> parse_band_list(std::string_view list);

}  // namespace fcdist
