#include "fcdist/config.hpp"

#include <fstream>
#include <set>

#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"

namespace fcdist {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!known.contains(key))
      fail(ErrorCode::ParseError, "unknown config key '" + where + key + "'");
}

Band band_from_json(const json& j) {
  if (j.is_string()) return band_by_name(j.get<std::string>());
  reject_unknown(j, {"name", "lo", "hi", "lo_open", "hi_open"}, "bands[].");
  return Band{j.at("name").get<std::string>(), j.at("lo").get<double>(), j.at("hi").get<double>(),
              j.value("lo_open", false), j.value("hi_open", false)};
}

InputMode mode_from_json(const json& j, const std::string& key) {
  if (j.is_string()) {
    if (j.get<std::string>() == "synthetic") return {};
    fail(ErrorCode::ParseError, key + " must be \"synthetic\" or {\"file\": path}");
  }
  reject_unknown(j, {"file"}, key + ".");
  return InputMode{std::filesystem::path(j.at("file").get<std::string>())};
}

json mode_to_json(const InputMode& m) {
  if (m.synthetic()) return "synthetic";
  return json{{"file", m.file->string()}};
}

template <typename T>
void maybe(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& msg) { fail(ErrorCode::InvalidArgument, msg); };
  if (cfg.montages.empty()) bad("montages must not be empty");
  if (cfg.metrics.empty()) bad("metrics must not be empty");
  if (cfg.bands.empty()) bad("bands must not be empty");
  if (cfg.trials < 1) bad("trials must be positive");
  if (!(cfg.fs > 0.0)) bad("fs must be positive");
  if (cfg.n_samples == 0 || cfg.n_sources == 0 || cfg.segment_samples == 0 || cfg.n_bins < 2)
    bad("counts must be positive (n_bins >= 2)");
  if (cfg.n_active > cfg.n_sources) bad("n_active exceeds n_sources");
  if (!(cfg.noise_sigma > 0.0)) bad("noise_sigma must be positive");
  if (cfg.source_mode.synthetic() && cfg.n_library < cfg.n_active)
    bad("n_library must be at least n_active");
  for (const auto& b : cfg.bands) validate(b, cfg.fs);
  for (int m : cfg.montages) {
    if (cfg.leadfield_mode.synthetic()) (void)builtin_montage(std::to_string(m));
    else if (m < 2) bad("montage sizes must be at least 2");
  }
  for (Metric m : cfg.metrics) {
    const auto w = cfg.window.for_metric(m);
    if (m != Metric::COH && m != Metric::iCOH) (void)window_layout(cfg.n_samples, cfg.fs, w);
  }
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig cfg;
  try {
    reject_unknown(doc,
                   {"montages", "metrics", "bands", "trials", "fs", "n_samples", "n_sources",
                    "n_active", "noise_sigma", "segment_samples", "window", "n_bins", "master_seed",
                    "source_mode", "leadfield_mode", "n_library", "alpha_hz", "synthetic_sources",
                    "synthetic_leadfield", "icoh_band_mode"},
                   "");
    if (doc.contains("montages")) {
      cfg.montages.clear();
      for (const auto& m : doc["montages"]) {
        if (m.is_number_integer()) cfg.montages.push_back(m.get<int>());
        else cfg.montages.push_back(static_cast<int>(builtin_montage(m.get<std::string>()).channels.size()));
      }
    }
    if (doc.contains("metrics")) {
      cfg.metrics.clear();
      for (const auto& m : doc["metrics"]) cfg.metrics.push_back(parse_metric(m.get<std::string>()));
    }
    if (doc.contains("bands")) {
      cfg.bands.clear();
      for (const auto& b : doc["bands"]) cfg.bands.push_back(band_from_json(b));
    }
    maybe(doc, "trials", cfg.trials);
    maybe(doc, "fs", cfg.fs);
    maybe(doc, "n_samples", cfg.n_samples);
    maybe(doc, "n_sources", cfg.n_sources);
    maybe(doc, "n_active", cfg.n_active);
    maybe(doc, "noise_sigma", cfg.noise_sigma);
    maybe(doc, "segment_samples", cfg.segment_samples);
    maybe(doc, "n_bins", cfg.n_bins);
    maybe(doc, "master_seed", cfg.master_seed);
    maybe(doc, "n_library", cfg.n_library);
    maybe(doc, "alpha_hz", cfg.alpha_hz);
    if (doc.contains("window")) {
      const auto& w = doc["window"];
      reject_unknown(w, {"window_seconds", "overlap_seconds", "plv_overlap_seconds"}, "window.");
      maybe(w, "window_seconds", cfg.window.window_seconds);
      maybe(w, "overlap_seconds", cfg.window.overlap_seconds);
      maybe(w, "plv_overlap_seconds", cfg.window.plv_overlap_seconds);
    }
    if (doc.contains("source_mode")) cfg.source_mode = mode_from_json(doc["source_mode"], "source_mode");
    if (doc.contains("leadfield_mode"))
      cfg.leadfield_mode = mode_from_json(doc["leadfield_mode"], "leadfield_mode");
    if (doc.contains("synthetic_sources")) {
      const auto& s = doc["synthetic_sources"];
      reject_unknown(s, {"background_slope", "alpha_log_amp_mean", "alpha_log_amp_sd",
                         "alpha_jitter_hz", "alpha_pole_radius", "burn_in"},
                     "synthetic_sources.");
      auto& o = cfg.synthetic_sources;
      maybe(s, "background_slope", o.background_slope);
      maybe(s, "alpha_log_amp_mean", o.alpha_log_amp_mean);
      maybe(s, "alpha_log_amp_sd", o.alpha_log_amp_sd);
      maybe(s, "alpha_jitter_hz", o.alpha_jitter_hz);
      maybe(s, "alpha_pole_radius", o.alpha_pole_radius);
      maybe(s, "burn_in", o.burn_in);
    }
    if (doc.contains("synthetic_leadfield")) {
      const auto& s = doc["synthetic_leadfield"];
      reject_unknown(s, {"epsilon", "r_min", "r_max", "radius_exponent"}, "synthetic_leadfield.");
      auto& o = cfg.synthetic_leadfield;
      maybe(s, "epsilon", o.epsilon);
      maybe(s, "r_min", o.r_min);
      maybe(s, "r_max", o.r_max);
      maybe(s, "radius_exponent", o.radius_exponent);
    }
    if (doc.contains("icoh_band_mode")) {
      const auto mode = doc["icoh_band_mode"].get<std::string>();
      if (mode == "signed_mean") cfg.icoh_band_mode = IcohBandMode::SignedMean;
      else if (mode == "mean_magnitude") cfg.icoh_band_mode = IcohBandMode::MeanMagnitude;
      else fail(ErrorCode::ParseError, "icoh_band_mode must be signed_mean or mean_magnitude");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
  json bands = json::array();
  for (const auto& b : cfg.bands)
    bands.push_back({{"name", b.name}, {"lo", b.lo}, {"hi", b.hi}, {"lo_open", b.lo_open}, {"hi_open", b.hi_open}});
  json metrics = json::array();
  for (Metric m : cfg.metrics) metrics.push_back(std::string(to_string(m)));
  const auto& s = cfg.synthetic_sources;
  const auto& l = cfg.synthetic_leadfield;
  return json{
      {"montages", cfg.montages},
      {"metrics", metrics},
      {"bands", bands},
      {"trials", cfg.trials},
      {"fs", cfg.fs},
      {"n_samples", cfg.n_samples},
      {"n_sources", cfg.n_sources},
      {"n_active", cfg.n_active},
      {"noise_sigma", cfg.noise_sigma},
      {"segment_samples", cfg.segment_samples},
      {"window",
       {{"window_seconds", cfg.window.window_seconds},
        {"overlap_seconds", cfg.window.overlap_seconds},
        {"plv_overlap_seconds", cfg.window.plv_overlap_seconds}}},
      {"n_bins", cfg.n_bins},
      {"master_seed", cfg.master_seed},
      {"source_mode", mode_to_json(cfg.source_mode)},
      {"leadfield_mode", mode_to_json(cfg.leadfield_mode)},
      {"n_library", cfg.n_library},
      {"alpha_hz", cfg.alpha_hz},
      {"synthetic_sources",
       {{"background_slope", s.background_slope},
        {"alpha_log_amp_mean", s.alpha_log_amp_mean},
        {"alpha_log_amp_sd", s.alpha_log_amp_sd},
        {"alpha_jitter_hz", s.alpha_jitter_hz},
        {"alpha_pole_radius", s.alpha_pole_radius},
        {"burn_in", s.burn_in}}},
      {"synthetic_leadfield",
       {{"epsilon", l.epsilon}, {"r_min", l.r_min}, {"r_max", l.r_max}, {"radius_exponent", l.radius_exponent}}},
      {"icoh_band_mode", cfg.icoh_band_mode == IcohBandMode::SignedMean ? "signed_mean" : "mean_magnitude"},
  };
}

std::vector<Band> parse_band_list(std::string_view list) {
  std::vector<Band> out;
  if (list == "all") return default_bands();
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = list.substr(0, comma);
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos) {
      out.push_back(band_by_name(item));
    } else {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos)
        fail(ErrorCode::InvalidArgument, "band '" + std::string(item) + "' must be name:lo:hi");
      const std::string ctx = "band '" + std::string(item) + "'";
      out.push_back(Band{std::string(item.substr(0, c1)), parse_double(item.substr(c1 + 1, c2 - c1 - 1), ctx),
                         parse_double(item.substr(c2 + 1), ctx)});
    }
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  if (out.empty()) fail(ErrorCode::InvalidArgument, "empty band list");
  return out;
}

}  // namespace fcdist
