#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "fcdist/config.hpp"
#include "fcdist/distribution_stats.hpp"
#include "fcdist/inference_stats.hpp"

namespace fcdist {

/// One scatter point: a simulated trial, or one subject in normative mode.
struct TrialRow {
  int montage = 0;
  Metric metric = Metric::COH;
  std::string band;
  std::size_t trial = 0;
  std::string unit;
  DistributionSummary summary;
};

inline constexpr const char* kCorrelationPairs[] = {"mcw_skewness", "mcw_kurtosis", "mcw_entropy"};

struct CorrelationRow {
  int montage = 0;
  Metric metric = Metric::COH;
  std::string band;
  std::string pair;
  CorrelationResult result;
};

/// A grid cell that raised instead of producing a TrialRow.
struct CellFailure {
  int montage = 0;
  Metric metric = Metric::COH;
  std::string band;
  std::size_t trial = 0;
  std::string error;
};

struct ExperimentResult {
  std::vector<TrialRow> trials;
  std::vector<CorrelationRow> correlations;
  std::vector<CellFailure> failures;
  std::vector<std::string> diagnostics;
  std::size_t attempted = 0;
};

/// Seed of trial `t`; independent of the trial count and of the montage so
/// every montage observes the same source activity in a given trial.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

/// Runs the montage x metric x band grid over `cfg.trials` realizations with
/// up to `jobs` worker threads. Output is identical for any `jobs`. Throws
/// ExperimentFailed when more than half of the cells fail.
ExperimentResult run_simulation_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1);

/// COH and iCOH summaries for every subject file and band, then the
/// across-subject correlations. Unreadable subjects are skipped with a
/// diagnostic; NoData when none remain.
ExperimentResult run_normative_analysis(const std::vector<std::filesystem::path>& inputs,
                                        const std::vector<Band>& bands, std::size_t n_bins = kDefaultBins,
                                        IcohBandMode mode = IcohBandMode::SignedMean);

/// Pearson correlations of MCW against skewness, kurtosis and entropy for
/// each (montage, metric, band) group of `rows`, which must be in canonical order.
std::vector<CorrelationRow> correlate_groups(const std::vector<TrialRow>& rows,
                                             std::vector<std::string>& diagnostics);

/// Writes trials.csv, correlations.csv, summary.json and scatter/*.csv.
void write_results(const ExperimentResult& result, const std::filesystem::path& out_dir,
                   const nlohmann::json& config_echo);

}  // namespace fcdist
