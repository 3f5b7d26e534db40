// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "fcdist/cross_spectrum_io.hpp"
#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"
#include "fcdist/pipeline.hpp"
#include "helpers.hpp"
#include "oracles.hpp"
#include "property_suite.hpp"

using namespace fcdist;
using namespace fcdist::test;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Options {
  fs::path cli;
  fs::path work = "acceptance_work";
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
};

std::string cell_name(int montage, Metric m) { return std::to_string(montage) + "/" + std::string(to_string(m)); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

/// Desk-scale experiment shared by criteria 1-5.
struct DeskRun {
  ExperimentConfig cfg;
  ExperimentResult result;
  std::map<std::pair<int, Metric>, std::vector<const TrialRow*>> cells;
  std::map<std::tuple<int, Metric, std::string>, CorrelationResult> corr;
};

DeskRun desk_run(const Options& opt) {
  DeskRun d;
  d.cfg.montages = {19, 64};
  d.cfg.metrics = all_metrics();
  d.cfg.bands = {band_by_name("alpha")};
  d.cfg.trials = 100;
  d.result = run_simulation_experiment(d.cfg, opt.jobs);
  write_results(d.result, opt.work / "desk", config_to_json(d.cfg));
  for (const auto& r : d.result.trials) d.cells[{r.montage, r.metric}].push_back(&r);
  for (const auto& c : d.result.correlations) d.corr[{c.montage, c.metric, c.pair}] = c.result;
  return d;
}

template <typename Pred>
Outcome fraction_per_cell(const DeskRun& d, Pred pred, const std::string& what) {
  Outcome o;
  std::ostringstream os;
  for (int m : d.cfg.montages)
    for (Metric metric : d.cfg.metrics) {
      const auto it = d.cells.find({m, metric});
      const auto& rows = it == d.cells.end() ? std::vector<const TrialRow*>{} : it->second;
      std::size_t ok = 0;
      for (const auto* r : rows) ok += pred(r->summary);
      // Missing trials count against the cell.
      const double frac = static_cast<double>(ok) / static_cast<double>(d.cfg.trials);
      if (frac < 0.95) o.pass = false;
      os << ' ' << cell_name(m, metric) << '=' << fmt(frac);
    }
  o.detail = what + ":" + os.str();
  return o;
}

Outcome criterion1(const DeskRun& d) {
  return fraction_per_cell(d, [](const DistributionSummary& s) { return s.skewness && *s.skewness > 0.0; },
                           "fraction skewness > 0");
}

Outcome criterion2(const DeskRun& d) {
  return fraction_per_cell(d, [](const DistributionSummary& s) { return s.kurtosis && *s.kurtosis < 3.0; },
                           "fraction kurtosis < 3");
}

Outcome criterion3(const DeskRun& d) {
  Outcome o;
  std::ostringstream os;
  for (int m : d.cfg.montages) {
    std::map<Metric, double> med;
    for (Metric metric : d.cfg.metrics) {
      std::vector<double> se;
      for (const auto* r : d.cells.at({m, metric})) se.push_back(r->summary.entropy);
      med[metric] = median(se);
    }
    for (Metric hi : {Metric::COH, Metric::PLV, Metric::AEC}) {
      if (med[hi] < 0.6) o.pass = false;
      for (Metric lo : {Metric::iCOH, Metric::PLI})
        if (med[hi] < med[lo] + 0.1) o.pass = false;
    }
    os << ' ' << m << ":";
    for (Metric metric : d.cfg.metrics) os << ' ' << to_string(metric) << '=' << fmt(med[metric]);
  }
  o.detail = "median SE" + os.str();
  return o;
}

Outcome correlation_signs(const DeskRun& d, const std::vector<Metric>& metrics,
                          const std::vector<std::string>& pairs, int sign) {
  Outcome o;
  std::ostringstream os;
  for (int m : d.cfg.montages)
    for (Metric metric : metrics)
      for (const auto& pair : pairs) {
        const auto it = d.corr.find({m, metric, pair});
        if (it == d.corr.end()) {
          o.pass = false;
          os << ' ' << cell_name(m, metric) << ' ' << pair << "=missing";
          continue;
        }
        const auto& c = it->second;
        const bool ok = (sign > 0 ? c.r > 0.0 : c.r < 0.0) && c.p < 0.001;
        if (!ok) o.pass = false;
        os << ' ' << cell_name(m, metric) << (pairs.size() > 1 ? " " + pair : "") << " r=" << fmt(c.r)
           << " p=" << fmt(c.p, 2) << (ok ? "" : " (x)");
      }
  o.detail = os.str();
  return o;
}

Outcome criterion4(const DeskRun& d) {
  auto o = correlation_signs(d, d.cfg.metrics, {"mcw_entropy"}, +1);
  o.detail = "MCW-SE:" + o.detail;
  return o;
}

Outcome criterion5(const DeskRun& d) {
  auto o = correlation_signs(d, {Metric::COH, Metric::PLV, Metric::AEC}, {"mcw_skewness", "mcw_kurtosis"}, -1);
  o.detail = "MCW-skewness/kurtosis:" + o.detail;
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::vector<std::string> failed;
  std::size_t n_checks = 0;
  auto expect = [&](bool ok, const std::string& what) {
    ++n_checks;
    if (!ok) failed.push_back(what);
  };
  auto raises = [&](ErrorCode code, const std::function<void()>& f, const std::string& what) {
    expect(error_code_of(f) == code, what);
  };

  // Duplicated-channel identities on a realistic scalp record.
  {
    const auto lib = generate_synthetic_sources(40, 10000, 200.0, 10.0, 1);
    const auto act = assemble_source_activity(lib, 300, 20, 0.01, 10000, 2);
    auto rec = project_to_scalp(generate_synthetic_leadfield("std19", 300, 3), act);
    rec.data.row(18) = rec.data.row(4);
    const Band alpha = band_by_name("alpha");
    const auto coh = coherency(bartlett_cross_spectrum(rec, 512));
    const auto a = bandpass_analytic(rec, alpha);
    expect(std::abs(coherence_matrix(coh, alpha).weights(4, 18) - 1.0) <= 1e-9, "COH duplicate = 1");
    expect(std::abs(plv_matrix(a, {6.0, 0.0}).weights(4, 18) - 1.0) <= 1e-9, "PLV duplicate = 1");
    expect(std::abs(aec_matrix(a, {6.0, 0.5}).weights(4, 18) - 1.0) <= 1e-9, "AEC duplicate = 1");
    expect(std::abs(icoh_matrix(coh, alpha).weights(4, 18)) <= 1e-9, "iCOH duplicate = 0");
    expect(std::abs(pli_matrix(a, {6.0, 0.5}).weights(4, 18)) <= 1e-9, "PLI duplicate = 0");
    const auto c = coherence_matrix(coh, alpha);
    const auto ic = icoh_matrix(coh, alpha);
    bool diag = true;
    for (int i = 0; i < 19; ++i) diag = diag && c.weights(i, i) == 1.0 && ic.weights(i, i) == 0.0;
    expect(diag, "COH/iCOH diagonals");
    bool c_diag = true;
    for (const auto& m : coh.mats)
      for (int i = 0; i < 19; ++i) c_diag = c_diag && m(i, i) == std::complex<double>(1.0, 0.0);
    expect(c_diag, "coherency diagonal = 1");
  }

  // signal_model
  {
    std::mt19937_64 rng(4);
    SourceLibrary lib{gaussian_matrix(5, 50, rng), 200.0, "t"};
    normalize_rows(lib);
    const auto act = assemble_source_activity(lib, 5, 5, 0.3, 50, 5);
    std::vector<std::vector<double>> a, b;
    for (int i = 0; i < 5; ++i) {
      a.emplace_back(act.data.row(i).data(), act.data.row(i).data() + 50);
      b.emplace_back(lib.data.row(i).data(), lib.data.row(i).data() + 50);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    expect(a == b, "all-active assembly is a permutation of library rows");
    expect(generate_synthetic_sources(3, 500, 200.0, 10.0, 9).data ==
               generate_synthetic_sources(3, 500, 200.0, 10.0, 9).data,
           "source generator determinism");
    raises(ErrorCode::EmptyRequest, [] { (void)generate_synthetic_sources(0, 10, 200.0, 10.0, 1); },
           "zero sources -> EmptyRequest");
    expect((generate_synthetic_leadfield("std19", 3002, 1).gain.array() > 0.0).all(), "lead field positive");
    SourceActivity s{gaussian_matrix(3, 20, rng), 200.0, 3};
    expect(project_to_scalp(LeadField{Matrix::Identity(3, 3), "id", numbered(3)}, s).data == s.data,
           "identity projection");
    SourceActivity one{gaussian_matrix(1, 20, rng), 200.0, 1};
    Matrix col(2, 1);
    col << 2.0, 1.0;
    const auto two = project_to_scalp(LeadField{col, "c", numbered(2)}, one).data;
    expect(two.row(0) == 2.0 * one.data.row(0) && two.row(1) == one.data.row(0), "scalar-column projection");
  }

  // spectral
  {
    const auto cs = bartlett_cross_spectrum(random_record(4, 2048, 200.0, 6), 256);
    bool herm = true;
    for (const auto& m : cs.mats) {
      herm = herm && (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10;
      for (int i = 0; i < 4; ++i) herm = herm && m(i, i).imag() == 0.0 && m(i, i).real() >= 0.0;
    }
    expect(herm, "Hermitian cross-spectrum, real non-negative diagonal");
    auto rec = random_record(2, 2048, 200.0, 7);
    rec.data.row(1) = rec.data.row(0);
    bool unit = true;
    for (const auto& m : coherency(bartlett_cross_spectrum(rec, 256)).mats)
      unit = unit && std::abs(std::abs(m(0, 1)) - 1.0) <= 1e-12;
    expect(unit, "duplicated channel |C| = 1");
    expect((bandpass_analytic(random_record(3, 1000, 200.0, 8), band_by_name("alpha")).envelope.array() >= 0.0).all(),
           "envelope non-negative");
    std::vector<double> grid;
    for (int k = 0; k <= 46; ++k) grid.push_back(1.17 + 0.39 * k);
    raises(ErrorCode::EmptyBand, [&] { (void)band_slice(grid, Band{"x", 0.2, 1.0}); }, "band below axis");
    expect(band_slice(grid, Band{"all", 1.0, 20.0}).size() == grid.size(), "band covering axis");
  }

  // connectivity
  {
    Matrix ph(3, 400);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (Eigen::Index t = 0; t < 400; ++t) {
      ph(0, t) = u(rng);
      ph(1, t) = ph(0, t);
      ph(2, t) = std::remainder(ph(0, t) - 0.8, 2.0 * kPi);
    }
    AnalyticRecord a{ph, Matrix::Ones(3, 400), 100.0, band_by_name("alpha"), numbered(3)};
    for (Eigen::Index t = 0; t < 400; ++t) {
      a.envelope(0, t) = 1.0 + 0.5 * std::sin(0.1 * static_cast<double>(t)) + 0.1 * u(rng);
      a.envelope(1, t) = a.envelope(0, t);
      a.envelope(2, t) = 2.0 * a.envelope(0, t) + 3.0;
    }
    const auto plv = plv_matrix(a, {2.0, 0.0});
    expect(std::abs(plv.weights(0, 1) - 1.0) <= 1e-12 && std::abs(plv.weights(0, 2) - 1.0) <= 1e-12,
           "PLV identical / constant offset = 1");
    const auto pli = pli_matrix(a, {2.0, 0.0});
    expect(pli.weights(0, 1) == 0.0, "PLI identical = 0");
    expect(std::abs(pli.weights(0, 2) - 1.0) <= 1e-12, "PLI constant lag = 1");
    const auto aec = aec_matrix(a, {2.0, 0.0});
    expect(std::abs(aec.weights(0, 1) - 1.0) <= 1e-12 && std::abs(aec.weights(0, 2) - 1.0) <= 1e-12,
           "AEC identical / affine = 1");
  }

  // distribution_stats and inference_stats
  {
    Matrix m(3, 3);
    m << 1, 0.1, 0.2, 0.1, 1, 0.3, 0.2, 0.3, 1;
    expect(upper_triangle_weights(m).w == std::vector<double>{0.1, 0.2, 0.3}, "upper triangle order");
    expect(upper_triangle_weights(Matrix::Zero(19, 19)).n_pairs() == 171 &&
               upper_triangle_weights(Matrix::Zero(128, 128)).n_pairs() == 8128 &&
               upper_triangle_weights(Matrix::Zero(2, 2)).n_pairs() == 1,
           "pair counts");
    expect(std::abs(skewness(std::vector<double>{0.2, 0.5, 0.8})) < 1e-14, "symmetric skewness 0");
    std::vector<double> two;
    for (int i = 0; i < 10; ++i) two.insert(two.end(), {0.2, 0.8});
    expect(std::abs(kurtosis(two) - 1.0) < 1e-12, "two-point kurtosis 1");
    expect(shannon_entropy(std::vector<double>{0.51, 0.515, 0.5199}) == 0.0, "single-bin entropy 0");
    std::vector<double> uni;
    for (int b = 0; b < 100; ++b) uni.push_back((b + 0.5) / 100.0);
    expect(std::abs(shannon_entropy(uni) - 1.0) < 1e-14, "uniform entropy 1");
    const auto flat = summarize(WeightVector{std::vector<double>(6, 0.5), 4});
    expect(flat.mcw == 0.5 && flat.entropy == 0.0 && !flat.skewness && !flat.kurtosis, "constant summary");
    const std::vector<double> x{0.1, 0.5, 0.3, 0.9};
    std::vector<double> up, down;
    for (double v : x) {
      up.push_back(2 * v + 1);
      down.push_back(-v);
    }
    const auto p1 = pearson_correlation(x, up), p2 = pearson_correlation(x, down);
    expect(p1.r == 1.0 && p1.p == 0.0 && p2.r == -1.0 && p2.p == 0.0, "exact linear correlation");
    expect(significance_stars(0.0005) == "***" && significance_stars(0.03) == "*" && significance_stars(0.2).empty(),
           "significance stars");
  }

  // pipeline cardinalities
  {
    ExperimentConfig cfg;
    cfg.montages = {19};
    cfg.metrics = {Metric::COH};
    cfg.trials = 5;
    cfg.n_samples = 2600;
    cfg.n_sources = 300;
    cfg.n_active = 20;
    cfg.n_library = 40;
    cfg.segment_samples = 256;
    const auto r = run_simulation_experiment(cfg);
    expect(r.trials.size() == 5 && r.correlations.size() == 3, "5 trial rows + 3 correlation rows");
    const auto r2 = run_simulation_experiment(cfg);
    bool same = r.trials.size() == r2.trials.size();
    for (std::size_t k = 0; same && k < r.trials.size(); ++k)
      same = r.trials[k].summary.mcw == r2.trials[k].summary.mcw &&
             r.trials[k].summary.entropy == r2.trials[k].summary.entropy;
    expect(same, "repeat run identical");
  }

  o.pass = failed.empty();
  o.detail = std::to_string(n_checks - failed.size()) + "/" + std::to_string(n_checks) + " identity checks";
  for (const auto& f : failed) o.detail += "; failed: " + f;
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::ostringstream os;
  // Distribution statistics against direct oracles.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud;
  std::uniform_int_distribution<int> len(3, 500);
  double worst_stats = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> w(static_cast<std::size_t>(len(rng)));
    const double power = 0.3 + 3.0 * ud(rng);
    for (auto& x : w) x = std::pow(ud(rng), power);
    const auto s = summarize(WeightVector{w, 0}, 100);
    worst_stats = std::max({worst_stats, std::abs(s.mcw - static_cast<double>(oracle_mean(w))),
                            std::abs(*s.skewness - oracle_skewness(w)), std::abs(*s.kurtosis - oracle_kurtosis(w)),
                            std::abs(s.entropy - oracle_entropy(w, 100))});
  }
  if (!(worst_stats <= 1e-10)) o.pass = false;
  os << "stats max dev " << fmt(worst_stats, 2);

  // Pearson p against a permutation oracle at n = 20.
  std::normal_distribution<double> nd;
  double worst_p = 0.0;
  for (int c = 0; c < 100; ++c) {
    std::vector<double> x(20), y(20);
    const double b = -0.9 + 1.8 * ud(rng);
    for (int i = 0; i < 20; ++i) {
      x[static_cast<std::size_t>(i)] = nd(rng);
      y[static_cast<std::size_t>(i)] = b * x[static_cast<std::size_t>(i)] + nd(rng);
    }
    const auto res = pearson_correlation(x, y);
    std::vector<double> yp = y;
    std::size_t extreme = 0;
    const std::size_t draws = 200000;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / 20.0;
    double sxx = 0.0;
    for (double v : x) sxx += (v - mx) * (v - mx);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / 20.0;
    double syy = 0.0;
    for (double v : y) syy += (v - my) * (v - my);
    for (std::size_t d = 0; d < draws; ++d) {
      std::shuffle(yp.begin(), yp.end(), rng);
      double sxy = 0.0;
      for (int i = 0; i < 20; ++i) sxy += (x[static_cast<std::size_t>(i)] - mx) * (yp[static_cast<std::size_t>(i)] - my);
      if (std::abs(sxy / std::sqrt(sxx * syy)) >= std::abs(res.r) - 1e-12) ++extreme;
    }
    worst_p = std::max(worst_p, std::abs(res.p - static_cast<double>(extreme) / static_cast<double>(draws)));
  }
  if (!(worst_p <= 0.01)) o.pass = false;
  os << "; Pearson p max dev " << fmt(worst_p, 2);

  // Bartlett against the straight-line DFT oracle.
  double worst_cs = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rec = random_record(3, 4 * 128, 200.0, seed);
    const auto cs = bartlett_cross_spectrum(rec, 128);
    const auto ref = naive_bartlett(rec.data, 128);
    for (std::size_t f = 0; f < ref.size(); ++f)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) worst_cs = std::max(worst_cs, std::abs(cs.mats[f](i, j) - ref[f][i][j]));
  }
  if (!(worst_cs <= 1e-10)) o.pass = false;
  os << "; Bartlett max dev " << fmt(worst_cs, 2);
  o.detail = os.str();
  return o;
}

Outcome criterion8() {
  const auto a = run_property_cases(1000, 11);
  const auto b = run_weight_property_cases(1000, 12);
  Outcome o;
  o.pass = a.violations.empty() && b.violations.empty() && a.cases == 1000 && b.cases == 1000;
  o.detail = std::to_string(a.cases + b.cases) + " cases, " + std::to_string(a.checks + b.checks) + " checks, " +
             std::to_string(a.violations.size() + b.violations.size()) + " violations";
  if (!a.violations.empty()) o.detail += "; first: " + a.violations.front();
  return o;
}

Outcome criterion9(const Options& opt) {
  Outcome o;
  const auto dir = opt.work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"montages": [19, 64], "metrics": ["COH", "iCOH", "PLV", "PLI", "AEC"], "bands": ["alpha"],
               "trials": 6, "master_seed": 2718})";
  }
  std::string out1 = (dir / "jobs1").string(), out8 = (dir / "jobs8").string();
  const std::string base = "\"" + opt.cli.string() + "\" simulate --config \"" + (dir / "config.json").string() + "\"";
  const int rc1 = run_command(base + " --jobs 1 --out \"" + out1 + "\" > /dev/null 2>&1");
  const int rc8 = run_command(base + " --jobs 8 --out \"" + out8 + "\" > /dev/null 2>&1");
  if (rc1 != 0 || rc8 != 0) {
    o.pass = false;
    o.detail = "simulate exit codes " + std::to_string(rc1) + ", " + std::to_string(rc8);
    return o;
  }
  const auto t1 = read_text(dir / "jobs1" / "trials.csv"), t8 = read_text(dir / "jobs8" / "trials.csv");
  const auto c1 = read_text(dir / "jobs1" / "correlations.csv"), c8 = read_text(dir / "jobs8" / "correlations.csv");
  o.pass = !t1.empty() && t1 == t8 && c1 == c8 && std::count(t1.begin(), t1.end(), '\n') == 61;
  o.detail = "trials.csv " + std::string(t1 == t8 ? "identical" : "differs") + " (" + std::to_string(t1.size()) +
             " bytes), correlations.csv " + (c1 == c8 ? "identical" : "differs");
  return o;
}

Outcome criterion10(const Options& opt) {
  Outcome o;
  std::ostringstream os;
  const auto dir = opt.work / "normative";
  fs::remove_all(dir);
  fs::create_directories(dir / "spectra");

  // Three simulated subjects at the default scale.
  const auto lib = generate_synthetic_sources(400, 10000, 200.0, 10.0, 31);
  const auto lf = generate_synthetic_leadfield("std19", 3002, 32);
  std::vector<CrossSpectrum> spectra;
  for (std::uint64_t s = 0; s < 3; ++s) {
    const auto act = assemble_source_activity(lib, 3002, 200, 0.01, 10000, 40 + s);
    spectra.push_back(bartlett_cross_spectrum(project_to_scalp(lf, act), 512));
    write_cross_spectrum(dir / "spectra" / ("sub" + std::to_string(s) + ".csv"), spectra.back());
  }
  const int rc = run_command("\"" + opt.cli.string() + "\" normative --input \"" +
                             (dir / "spectra").string() + "/*.csv\" --bands all --out \"" + (dir / "out").string() +
                             "\" > /dev/null 2>&1");
  if (rc != 0) {
    o.pass = false;
    o.detail = "normative exit code " + std::to_string(rc);
    return o;
  }

  // Parse trials.csv back and compare with in-memory summaries.
  std::ifstream in(dir / "out" / "trials.csv");
  std::string line;
  std::getline(in, line);
  double worst = 0.0;
  std::size_t rows = 0;
  const auto bands = default_bands();
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    const Metric metric = parse_metric(f[1]);
    const Band band = band_by_name(f[2]);
    const auto subject = static_cast<std::size_t>(std::stoul(f[3]));
    const auto coh = coherency(spectra.at(subject));
    const auto cm = metric == Metric::COH ? coherence_matrix(coh, band) : icoh_matrix(coh, band);
    const auto s = summarize(upper_triangle_weights(cm));
    worst = std::max({worst, std::abs(parse_double(f[5], "mcw") - s.mcw),
                      std::abs(parse_double(f[6], "skewness") - *s.skewness),
                      std::abs(parse_double(f[7], "kurtosis") - *s.kurtosis),
                      std::abs(parse_double(f[8], "entropy") - s.entropy)});
    ++rows;
  }
  if (!(rows == 3 * 2 * bands.size() && worst <= 1e-12)) o.pass = false;
  os << rows << " rows, max dev " << fmt(worst, 2);

  // Grid: bins inside [1.17, 19.14] at fs = 200, segment 512.
  const auto& freqs = spectra.front().freqs;
  const auto idx = band_slice(freqs, Band{"normative", 1.17, 19.14});
  bool grid_ok = idx.size() == 47 && std::round(freqs[idx.front()] * 100) / 100 == 1.17 &&
                 std::round(freqs[idx.back()] * 100) / 100 == 19.14;
  for (std::size_t k = 1; grid_ok && k < idx.size(); ++k)
    grid_ok = std::abs(freqs[idx[k]] - freqs[idx[k - 1]] - 0.390625) < 1e-12;
  if (!grid_ok) o.pass = false;
  os << "; grid " << idx.size() << " bins " << fmt(freqs[idx.front()], 7) << ".." << fmt(freqs[idx.back()], 7)
     << " Hz step " << fmt(freqs[1] - freqs[0], 7);
  o.detail = os.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) opt.cli = argv[++i];
    else if (a == "--work" && i + 1 < argc) opt.work = argv[++i];
    else if (a == "--jobs" && i + 1 < argc) opt.jobs = std::stoul(argv[++i]);
    else {
      std::cerr << "usage: acceptance --cli PATH [--work DIR] [--jobs N]\n";
      return 1;
    }
  }
  if (opt.cli.empty()) {
    std::cerr << "acceptance: --cli is required\n";
    return 1;
  }
  fs::create_directories(opt.work);

  std::vector<std::pair<int, Outcome>> results;
  auto guarded = [&](int id, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("raised: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.detail += " [" + fmt(secs, 3) + " s]";
    std::cerr << "criterion " << id << " done" << o.detail.substr(o.detail.rfind(" [")) << '\n';
    results.emplace_back(id, o);
  };

  std::optional<DeskRun> desk;
  std::string desk_error;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    desk = desk_run(opt);
  } catch (const std::exception& e) {
    desk_error = e.what();
  }
  const double desk_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "desk-scale run: " << fmt(desk_secs, 4) << " s on " << opt.jobs << " worker(s)\n";
  auto on_desk = [&](Outcome (*f)(const DeskRun&)) {
    return [&, f] {
      if (!desk) throw std::runtime_error("desk-scale run failed: " + desk_error);
      return f(*desk);
    };
  };
  guarded(1, on_desk(criterion1));
  guarded(2, on_desk(criterion2));
  guarded(3, on_desk(criterion3));
  guarded(4, on_desk(criterion4));
  guarded(5, on_desk(criterion5));
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, [&] { return criterion9(opt); });
  guarded(10, [&] { return criterion10(opt); });

  std::size_t failed = 0;
  for (const auto& [id, o] : results) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << '\n';
    failed += !o.pass;
  }
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
