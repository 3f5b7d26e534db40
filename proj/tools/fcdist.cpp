#include <glob.h>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fcdist/config.hpp"
#include "fcdist/cross_spectrum_io.hpp"
#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"
#include "fcdist/pipeline.hpp"

namespace fs = std::filesystem;
using namespace fcdist;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExperiment = 3;

/// Raised for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<fs::path> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<fs::path> out;
  for (const auto& p : patterns) {
    glob_t g{};
    const int rc = ::glob(p.c_str(), 0, nullptr, &g);
    if (rc == 0)
      for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    ::globfree(&g);
    if (rc == GLOB_NOMATCH) std::cerr << "warning: no files match " << p << '\n';
  }
  return out;
}

void print_diagnostics(const ExperimentResult& r) {
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << '\n';
  if (!r.failures.empty())
    std::cerr << "note: " << r.failures.size() << " of " << r.attempted << " cells failed (see summary.json)\n";
}

template <typename F>
auto as_usage(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG functional-connectivity weight-distribution toolkit"};
  app.require_subcommand(1);

  // simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "Run the simulated montage x metric experiment");
  std::string sim_config, sim_out, sim_montages, sim_metrics, sim_bands;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> sim_trials;
  std::size_t sim_jobs = 1;
  sim->add_option("--config", sim_config, "JSON experiment configuration")->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Master seed (overrides the config)");
  sim->add_option("--jobs", sim_jobs, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_option("--trials", sim_trials, "Number of trials (overrides the config)");
  sim->add_option("--montages", sim_montages, "Comma-separated montage sizes, e.g. 19,64");
  sim->add_option("--metrics", sim_metrics, "Comma-separated metrics, e.g. COH,PLV");
  sim->add_option("--bands", sim_bands, "Band names or name:lo:hi, comma-separated, or 'all'");

  // normative -----------------------------------------------------------
  auto* norm = app.add_subcommand("normative", "COH/iCOH distribution analysis of stored cross-spectra");
  std::vector<std::string> norm_inputs;
  std::string norm_bands = "all", norm_out, norm_icoh = "signed_mean";
  std::size_t norm_bins = kDefaultBins;
  norm->add_option("--input", norm_inputs, "Cross-spectrum CSV files or glob patterns")->required();
  norm->add_option("--bands", norm_bands, "Band names or name:lo:hi, comma-separated, or 'all'");
  norm->add_option("--out", norm_out, "Output directory")->required();
  norm->add_option("--n-bins", norm_bins, "Histogram bins for the entropy")->check(CLI::Range(2, 1000000));
  norm->add_option("--icoh-mode", norm_icoh, "signed_mean or mean_magnitude")
      ->check(CLI::IsMember({"signed_mean", "mean_magnitude"}));

  // gen-sources ---------------------------------------------------------
  auto* gsrc = app.add_subcommand("gen-sources", "Write a synthetic source library matrix file");
  std::string gsrc_out;
  std::size_t gsrc_n = 1772, gsrc_samples = 10000;
  double gsrc_fs = 200.0, gsrc_alpha = 10.0;
  std::uint64_t gsrc_seed = 1;
  gsrc->add_option("--out", gsrc_out, "Output CSV path")->required();
  gsrc->add_option("--n", gsrc_n, "Number of sources")->check(CLI::PositiveNumber);
  gsrc->add_option("--samples", gsrc_samples, "Samples per source")->check(CLI::PositiveNumber);
  gsrc->add_option("--fs", gsrc_fs, "Sampling rate in Hz")->check(CLI::PositiveNumber);
  gsrc->add_option("--alpha-hz", gsrc_alpha, "Alpha peak frequency");
  gsrc->add_option("--seed", gsrc_seed, "Seed");

  // gen-leadfield -------------------------------------------------------
  auto* glf = app.add_subcommand("gen-leadfield", "Write a synthetic lead-field matrix file");
  std::string glf_out, glf_montage = "19";
  std::size_t glf_sources = 3002;
  std::uint64_t glf_seed = 1;
  glf->add_option("--out", glf_out, "Output CSV path")->required();
  glf->add_option("--montage", glf_montage, "std19, egi32, egi64, egi128 or 19/32/64/128");
  glf->add_option("--n-sources", glf_sources, "Number of sources")->check(CLI::PositiveNumber);
  glf->add_option("--seed", glf_seed, "Seed");

  // cross-spectrum ------------------------------------------------------
  auto* xs = app.add_subcommand("cross-spectrum", "Bartlett cross-spectrum of a record file");
  std::string xs_in, xs_out;
  std::size_t xs_segment = 512;
  xs->add_option("--input", xs_in, "Record matrix CSV")->required()->check(CLI::ExistingFile);
  xs->add_option("--out", xs_out, "Output cross-spectrum CSV")->required();
  xs->add_option("--segment", xs_segment, "Samples per segment")->check(CLI::PositiveNumber);

  // summarize -----------------------------------------------------------
  auto* summ = app.add_subcommand("summarize", "Distribution statistics of a stored connectivity matrix");
  std::string summ_in;
  std::size_t summ_bins = kDefaultBins;
  summ->add_option("--input", summ_in, "Connectivity matrix CSV")->required()->check(CLI::ExistingFile);
  summ->add_option("--n-bins", summ_bins, "Histogram bins for the entropy")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) {
      ExperimentConfig cfg = as_usage([&] {
        ExperimentConfig c = sim_config.empty() ? ExperimentConfig{} : load_config(sim_config);
        if (sim_seed) c.master_seed = *sim_seed;
        if (sim_trials) c.trials = *sim_trials;
        if (!sim_montages.empty()) {
          c.montages.clear();
          for (const auto& m : split(sim_montages))
            c.montages.push_back(static_cast<int>(builtin_montage(m).channels.size()));
        }
        if (!sim_metrics.empty()) {
          c.metrics.clear();
          for (const auto& m : split(sim_metrics)) c.metrics.push_back(parse_metric(m));
        }
        if (!sim_bands.empty()) c.bands = parse_band_list(sim_bands);
        validate(c);
        if (c.trials < 3) fail(ErrorCode::InvalidArgument, "simulate needs at least 3 trials");
        return c;
      });
      const auto result = run_simulation_experiment(cfg, sim_jobs);
      write_results(result, sim_out, config_to_json(cfg));
      print_diagnostics(result);
      std::cout << result.trials.size() << " trial rows, " << result.correlations.size()
                << " correlation rows written to " << sim_out << '\n';
    } else if (*norm) {
      const auto bands = as_usage([&] { return parse_band_list(norm_bands); });
      const auto files = expand_globs(norm_inputs);
      if (files.empty()) fail(ErrorCode::NoData, "no input files");
      const auto mode = norm_icoh == "signed_mean" ? IcohBandMode::SignedMean : IcohBandMode::MeanMagnitude;
      const auto result = run_normative_analysis(files, bands, norm_bins, mode);
      nlohmann::json echo{{"mode", "normative"}, {"n_bins", norm_bins}, {"icoh_band_mode", norm_icoh}};
      echo["bands"] = nlohmann::json::array();
      for (const auto& b : bands) echo["bands"].push_back({{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}});
      echo["inputs"] = nlohmann::json::array();
      for (const auto& f : files) echo["inputs"].push_back(f.string());
      write_results(result, norm_out, echo);
      print_diagnostics(result);
      std::cout << result.trials.size() << " trial rows, " << result.correlations.size()
                << " correlation rows written to " << norm_out << '\n';
    } else if (*gsrc) {
      write_source_library(gsrc_out, generate_synthetic_sources(gsrc_n, gsrc_samples, gsrc_fs, gsrc_alpha, gsrc_seed));
    } else if (*glf) {
      const auto lf = as_usage([&] { return generate_synthetic_leadfield(glf_montage, glf_sources, glf_seed); });
      write_leadfield(glf_out, lf);
    } else if (*xs) {
      const auto cs = bartlett_cross_spectrum(read_record(xs_in), xs_segment);
      if (cs.n_segments < kRecommendedMinSegments)
        std::cerr << "note: averaged over only " << cs.n_segments << " segments\n";
      write_cross_spectrum(xs_out, cs);
    } else if (*summ) {
      Matrix weights;
      nlohmann::json meta = nullptr;
      if (fs::exists(sidecar_path(summ_in))) {
        auto stored = read_connectivity(summ_in);
        weights = std::move(stored.weights);
        meta = std::move(stored.meta);
      } else {
        weights = read_matrix_csv(summ_in);
      }
      const auto s = summarize(upper_triangle_weights(weights), summ_bins);
      auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
      nlohmann::json out{{"mcw", s.mcw},         {"skewness", opt(s.skewness)}, {"kurtosis", opt(s.kurtosis)},
                         {"entropy", s.entropy}, {"n_pairs", s.n_pairs},       {"n_bins", summ_bins}};
      if (!meta.is_null()) out["meta"] = meta;
      std::cout << out.dump(2) << '\n';
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::ExperimentFailed ? kExitExperiment : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
