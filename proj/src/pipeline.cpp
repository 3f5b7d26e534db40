#include "fcdist/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <tuple>

#include "fcdist/cross_spectrum_io.hpp"
#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"
#include "fcdist/seed.hpp"

namespace fcdist {
namespace {

struct TrialOutput {
  std::vector<TrialRow> rows;
  std::vector<CellFailure> failures;
};

std::size_t index_of(const auto& range, const auto& value) {
  return static_cast<std::size_t>(std::find(range.begin(), range.end(), value) - range.begin());
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

SourceLibrary prepare_library(const ExperimentConfig& cfg) {
  if (cfg.source_mode.synthetic())
    return generate_synthetic_sources(cfg.n_library, cfg.n_samples, cfg.fs, cfg.alpha_hz,
                                      derive_seed(cfg.master_seed, {hash_tag("library")}),
                                      cfg.synthetic_sources);
  auto lib = read_source_library(*cfg.source_mode.file);
  if (std::abs(lib.fs - cfg.fs) > 1e-9 * cfg.fs)
    fail(ErrorCode::InvalidArgument, "source library sampled at " + format_double(lib.fs) +
                                         " Hz but the experiment runs at " + format_double(cfg.fs) + " Hz");
  return lib;
}

LeadField prepare_leadfield(const ExperimentConfig& cfg, int montage) {
  if (cfg.leadfield_mode.synthetic())
    return generate_synthetic_leadfield(std::to_string(montage), cfg.n_sources,
                                        derive_seed(cfg.master_seed, {hash_tag("leadfield")}),
                                        cfg.synthetic_leadfield);
  const auto path = replace_all(cfg.leadfield_mode.file->string(), "{montage}", std::to_string(montage));
  auto lf = read_leadfield(path);
  if (lf.gain.rows() != montage || static_cast<std::size_t>(lf.gain.cols()) != cfg.n_sources)
    fail(ErrorCode::ShapeMismatch, path + ": expected a " + std::to_string(montage) + " x " +
                                       std::to_string(cfg.n_sources) + " gain matrix");
  return lf;
}

bool needs_spectrum(const ExperimentConfig& cfg) {
  return std::any_of(cfg.metrics.begin(), cfg.metrics.end(),
                     [](Metric m) { return m == Metric::COH || m == Metric::iCOH; });
}

bool needs_analytic(const ExperimentConfig& cfg) {
  return std::any_of(cfg.metrics.begin(), cfg.metrics.end(),
                     [](Metric m) { return m == Metric::PLV || m == Metric::PLI || m == Metric::AEC; });
}

TrialOutput run_trial(const ExperimentConfig& cfg, const SourceLibrary& library,
                      const std::vector<LeadField>& leadfields, std::size_t trial) {
  TrialOutput out;
  auto fail_cells = [&](std::optional<std::size_t> only_montage, std::optional<std::size_t> only_band,
                        std::optional<Metric> only_metric, const std::string& what) {
    for (std::size_t mi = 0; mi < cfg.montages.size(); ++mi) {
      if (only_montage && *only_montage != mi) continue;
      for (Metric m : cfg.metrics) {
        if (only_metric && *only_metric != m) continue;
        for (std::size_t bi = 0; bi < cfg.bands.size(); ++bi) {
          if (only_band && *only_band != bi) continue;
          out.failures.push_back({cfg.montages[mi], m, cfg.bands[bi].name, trial, what});
        }
      }
    }
  };

  SourceActivity activity;
  try {
    activity = assemble_source_activity(library, cfg.n_sources, cfg.n_active, cfg.noise_sigma,
                                        cfg.n_samples, trial_seed(cfg.master_seed, trial));
  } catch (const Error& e) {
    fail_cells({}, {}, {}, e.what());
    return out;
  }

  for (std::size_t mi = 0; mi < cfg.montages.size(); ++mi) {
    const int montage = cfg.montages[mi];
    MultichannelRecord rec;
    std::optional<CoherencyMatrix> coh;
    std::string spectrum_error;
    try {
      rec = project_to_scalp(leadfields[mi], activity);
      if (needs_spectrum(cfg)) {
        try {
          coh = coherency(bartlett_cross_spectrum(rec, cfg.segment_samples));
        } catch (const Error& e) {
          spectrum_error = e.what();
        }
      }
    } catch (const Error& e) {
      fail_cells(mi, {}, {}, e.what());
      continue;
    }

    for (std::size_t bi = 0; bi < cfg.bands.size(); ++bi) {
      const Band& band = cfg.bands[bi];
      std::optional<AnalyticRecord> analytic;
      std::string analytic_error;
      if (needs_analytic(cfg)) {
        try {
          analytic = bandpass_analytic(rec, band);
        } catch (const Error& e) {
          analytic_error = e.what();
        }
      }
      for (Metric m : cfg.metrics) {
        try {
          ConnectivityMatrix cm;
          switch (m) {
            case Metric::COH:
            case Metric::iCOH:
              if (!coh) fail(ErrorCode::InvalidArgument, spectrum_error);
              cm = m == Metric::COH ? coherence_matrix(*coh, band) : icoh_matrix(*coh, band, cfg.icoh_band_mode);
              break;
            case Metric::PLV:
            case Metric::PLI:
            case Metric::AEC: {
              if (!analytic) fail(ErrorCode::InvalidArgument, analytic_error);
              const auto w = cfg.window.for_metric(m);
              cm = m == Metric::PLV ? plv_matrix(*analytic, w)
                   : m == Metric::PLI ? pli_matrix(*analytic, w)
                                      : aec_matrix(*analytic, w);
              break;
            }
          }
          out.rows.push_back({montage, m, band.name, trial, "trial",
                              summarize(upper_triangle_weights(cm), cfg.n_bins)});
        } catch (const Error& e) {
          fail_cells(mi, bi, m, e.what());
        }
      }
    }
  }
  return out;
}

/// Sort key placing rows in (montage, metric, band, trial) order using the
/// positions given in the configuration.
struct CanonicalOrder {
  std::vector<int> montages;
  std::vector<Metric> metrics;
  std::vector<std::string> bands;

  template <typename Row>
  auto key(const Row& r) const {
    return std::make_tuple(index_of(montages, r.montage), index_of(metrics, r.metric), index_of(bands, r.band),
                           r.trial);
  }
  template <typename Row>
  void sort(std::vector<Row>& rows) const {
    std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) { return key(a) < key(b); });
  }
};

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return derive_seed(master_seed, {hash_tag("trial"), static_cast<std::uint64_t>(trial)});
}

std::vector<CorrelationRow> correlate_groups(const std::vector<TrialRow>& rows,
                                             std::vector<std::string>& diagnostics) {
  std::vector<CorrelationRow> out;
  for (std::size_t begin = 0; begin < rows.size();) {
    std::size_t end = begin;
    const auto& head = rows[begin];
    while (end < rows.size() && rows[end].montage == head.montage && rows[end].metric == head.metric &&
           rows[end].band == head.band)
      ++end;
    const std::string where = std::to_string(head.montage) + "/" + std::string(to_string(head.metric)) + "/" +
                              head.band;
    const auto flat = std::count_if(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                    rows.begin() + static_cast<std::ptrdiff_t>(end),
                                    [](const TrialRow& r) { return !r.summary.skewness; });
    if (flat > 0)
      diagnostics.push_back(where + ": " + std::to_string(flat) +
                            " rows with constant weights have no skewness/kurtosis");
    for (const char* pair : kCorrelationPairs) {
      std::vector<double> x, y;
      for (std::size_t k = begin; k < end; ++k) {
        const auto& s = rows[k].summary;
        std::optional<double> v = std::string_view(pair) == "mcw_skewness"   ? s.skewness
                                  : std::string_view(pair) == "mcw_kurtosis" ? s.kurtosis
                                                                             : std::optional<double>(s.entropy);
        if (!v) continue;
        x.push_back(s.mcw);
        y.push_back(*v);
      }
      try {
        out.push_back({head.montage, head.metric, head.band, pair, pearson_correlation(x, y)});
      } catch (const Error& e) {
        diagnostics.push_back(where + " " + pair + ": " + e.what());
      }
    }
    begin = end;
  }
  return out;
}

ExperimentResult run_simulation_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  validate(cfg);
  if (cfg.trials < 3) fail(ErrorCode::InvalidArgument, "correlation mode needs at least 3 trials");
  ExperimentResult result;

  const SourceLibrary library = prepare_library(cfg);
  std::vector<LeadField> leadfields;
  for (int m : cfg.montages) leadfields.push_back(prepare_leadfield(cfg, m));

  if (needs_spectrum(cfg)) {
    const std::size_t k = cfg.n_samples / cfg.segment_samples;
    if (k < kRecommendedMinSegments)
      result.diagnostics.push_back("cross-spectra average " + std::to_string(k) + " segments (fewer than " +
                                   std::to_string(kRecommendedMinSegments) + ")");
  }

  std::vector<TrialOutput> outputs(cfg.trials);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr unexpected;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < cfg.trials;) {
      try {
        outputs[t] = run_trial(cfg, library, leadfields, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!unexpected) unexpected = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, cfg.trials);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (unexpected) std::rethrow_exception(unexpected);

  for (auto& o : outputs) {
    std::move(o.rows.begin(), o.rows.end(), std::back_inserter(result.trials));
    std::move(o.failures.begin(), o.failures.end(), std::back_inserter(result.failures));
  }
  CanonicalOrder order{cfg.montages, cfg.metrics, {}};
  for (const auto& b : cfg.bands) order.bands.push_back(b.name);
  order.sort(result.trials);
  order.sort(result.failures);

  result.attempted = cfg.trials * cfg.montages.size() * cfg.metrics.size() * cfg.bands.size();
  if (2 * result.failures.size() > result.attempted)
    fail(ErrorCode::ExperimentFailed, std::to_string(result.failures.size()) + " of " +
                                          std::to_string(result.attempted) + " cells failed; first: " +
                                          result.failures.front().error);
  result.correlations = correlate_groups(result.trials, result.diagnostics);
  return result;
}

ExperimentResult run_normative_analysis(const std::vector<std::filesystem::path>& inputs,
                                        const std::vector<Band>& bands, std::size_t n_bins, IcohBandMode mode) {
  if (bands.empty()) fail(ErrorCode::InvalidArgument, "no bands requested");
  ExperimentResult result;
  std::vector<std::filesystem::path> files = inputs;
  std::sort(files.begin(), files.end());

  std::size_t subject = 0;
  for (const auto& path : files) {
    std::vector<TrialRow> rows;
    try {
      const CrossSpectrum cs = read_cross_spectrum(path);
      if (cs.n_segments < kRecommendedMinSegments)
        result.diagnostics.push_back(path.string() + ": averaged over only " + std::to_string(cs.n_segments) +
                                     " segments");
      const CoherencyMatrix coh = coherency(cs);
      const int montage = static_cast<int>(cs.n_channels());
      for (Metric m : {Metric::COH, Metric::iCOH}) {
        for (const auto& band : bands) {
          const auto cm = m == Metric::COH ? coherence_matrix(coh, band) : icoh_matrix(coh, band, mode);
          rows.push_back({montage, m, band.name, subject, path.stem().string(),
                          summarize(upper_triangle_weights(cm), n_bins)});
        }
      }
    } catch (const Error& e) {
      result.diagnostics.push_back("skipped " + path.string() + ": " + e.what());
      continue;
    }
    result.attempted += rows.size();
    std::move(rows.begin(), rows.end(), std::back_inserter(result.trials));
    ++subject;
  }
  if (result.trials.empty()) fail(ErrorCode::NoData, "no usable cross-spectrum files");

  std::vector<int> montages;
  for (const auto& r : result.trials)
    if (std::find(montages.begin(), montages.end(), r.montage) == montages.end()) montages.push_back(r.montage);
  std::sort(montages.begin(), montages.end());
  CanonicalOrder order{montages, {Metric::COH, Metric::iCOH}, {}};
  for (const auto& b : bands) order.bands.push_back(b.name);
  order.sort(result.trials);
  result.correlations = correlate_groups(result.trials, result.diagnostics);
  return result;
}

}  // namespace fcdist
