#include <algorithm>
#include <fstream>
#include <map>

#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"
#include "fcdist/pipeline.hpp"

namespace fcdist {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) fail(ErrorCode::IoError, "write failed for " + path.string());
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json stats(const std::vector<double>& v) {
  if (v.empty()) return json{{"n", 0}};
  double sum = 0.0;
  for (double x : v) sum += x;
  return json{{"n", v.size()},
              {"mean", sum / static_cast<double>(v.size())},
              {"median", median(v)},
              {"min", *std::min_element(v.begin(), v.end())},
              {"max", *std::max_element(v.begin(), v.end())}};
}

std::string combo_name(const TrialRow& r) {
  return std::to_string(r.montage) + "_" + std::string(to_string(r.metric)) + "_" + r.band;
}

}  // namespace

void write_results(const ExperimentResult& result, const fs::path& out_dir, const json& config_echo) {
  std::error_code ec;
  fs::create_directories(out_dir / "scatter", ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + (out_dir / "scatter").string() + ": " + ec.message());

  {
    const auto path = out_dir / "trials.csv";
    auto out = open_out(path);
    out << "montage,metric,band,trial,unit,mcw,skewness,kurtosis,entropy,n_pairs\n";
    for (const auto& r : result.trials) {
      const auto& s = r.summary;
      out << r.montage << ',' << to_string(r.metric) << ',' << r.band << ',' << r.trial << ',' << r.unit << ','
          << format_double(s.mcw) << ',' << opt(s.skewness) << ',' << opt(s.kurtosis) << ','
          << format_double(s.entropy) << ',' << s.n_pairs << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "correlations.csv";
    auto out = open_out(path);
    out << "montage,metric,band,pair,r,p,n,stars\n";
    for (const auto& c : result.correlations)
      out << c.montage << ',' << to_string(c.metric) << ',' << c.band << ',' << c.pair << ','
          << format_double(c.result.r) << ',' << format_double(c.result.p) << ',' << c.result.n << ','
          << c.result.stars << '\n';
    finish(out, path);
  }

  // Group rows per combination, keeping first-appearance (canonical) order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TrialRow*>> groups;
  for (const auto& r : result.trials) {
    const auto name = combo_name(r);
    if (!groups.contains(name)) order.push_back(name);
    groups[name].push_back(&r);
  }

  json combos = json::array();
  for (const auto& name : order) {
    const auto& rows = groups[name];
    std::vector<double> mcw, skew, kurt, ent;
    std::size_t degenerate = 0;
    for (const auto* r : rows) {
      mcw.push_back(r->summary.mcw);
      ent.push_back(r->summary.entropy);
      if (r->summary.skewness) skew.push_back(*r->summary.skewness);
      if (r->summary.kurtosis) kurt.push_back(*r->summary.kurtosis);
      if (!r->summary.skewness) ++degenerate;
    }
    const auto frac = [](const std::vector<double>& v, auto pred) {
      if (v.empty()) return json(nullptr);
      return json(static_cast<double>(std::count_if(v.begin(), v.end(), pred)) / static_cast<double>(v.size()));
    };
    json entry{{"montage", rows.front()->montage},
               {"metric", std::string(to_string(rows.front()->metric))},
               {"band", rows.front()->band},
               {"rows", rows.size()},
               {"degenerate_rows", degenerate},
               {"mcw", stats(mcw)},
               {"skewness", stats(skew)},
               {"kurtosis", stats(kurt)},
               {"entropy", stats(ent)},
               {"fraction_skewness_positive", frac(skew, [](double v) { return v > 0.0; })},
               {"fraction_kurtosis_below_3", frac(kurt, [](double v) { return v < 3.0; })}};
    json corr = json::object();
    for (const auto& c : result.correlations)
      if (c.montage == rows.front()->montage && c.metric == rows.front()->metric && c.band == rows.front()->band)
        corr[c.pair] = {{"r", c.result.r}, {"p", c.result.p}, {"n", c.result.n}, {"stars", c.result.stars}};
    entry["correlations"] = corr;
    combos.push_back(entry);

    for (const char* y : {"skewness", "kurtosis", "entropy"}) {
      const auto path = out_dir / "scatter" / (name + "_" + y + ".csv");
      auto out = open_out(path);
      out << "unit,trial,mcw," << y << '\n';
      for (const auto* r : rows) {
        const auto& s = r->summary;
        const std::string_view ys(y);
        const std::optional<double> v = ys == "skewness"   ? s.skewness
                                        : ys == "kurtosis" ? s.kurtosis
                                                           : std::optional<double>(s.entropy);
        if (!v) continue;
        out << r->unit << ',' << r->trial << ',' << format_double(s.mcw) << ',' << format_double(*v) << '\n';
      }
      finish(out, path);
    }
  }

  json failures = json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"montage", f.montage},
                        {"metric", std::string(to_string(f.metric))},
                        {"band", f.band},
                        {"trial", f.trial},
                        {"error", f.error}});

  const json summary{{"config", config_echo},
                     {"cells_attempted", result.attempted},
                     {"trial_rows", result.trials.size()},
                     {"correlation_rows", result.correlations.size()},
                     {"combinations", combos},
                     {"failures", failures},
                     {"diagnostics", result.diagnostics}};
  const auto path = out_dir / "summary.json";
  auto out = open_out(path);
  out << summary.dump(2) << '\n';
  finish(out, path);
}

}  // namespace fcdist
