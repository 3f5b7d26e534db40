#include "fcdist/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "fcdist/error.hpp"

namespace fcdist {
namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view token, const std::string& context) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size())
    fail(ErrorCode::ParseError, context + ": '" + std::string(token) + "' is not a number");
  return v;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".meta.json");
  return p;
}

void write_matrix(const fs::path& csv, const Matrix& m, const nlohmann::json& meta) {
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  std::ofstream out(csv);
  if (!out) fail(ErrorCode::IoError, "cannot write " + csv.string());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  std::ofstream side(sidecar_path(csv));
  if (!side) fail(ErrorCode::IoError, "cannot write " + sidecar_path(csv).string());
  side << meta.dump(2) << '\n';
  if (!out || !side) fail(ErrorCode::IoError, "write failed for " + csv.string());
}

Matrix read_matrix_csv(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) fail(ErrorCode::IoError, "cannot open " + csv.string());
  std::vector<double> values;
  Eigen::Index cols = -1, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    Eigen::Index count = 0;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      const auto tok = rest.substr(0, comma);
      values.push_back(parse_double(tok, csv.string() + ":" + std::to_string(line_no)));
      ++count;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols >= 0 && count != cols)
      fail(ErrorCode::ParseError, csv.string() + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(cols) + " columns, found " + std::to_string(count));
    cols = count;
    ++rows;
  }
  if (rows == 0) fail(ErrorCode::ParseError, csv.string() + ": no numeric rows");
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

nlohmann::json read_sidecar(const fs::path& csv) {
  const auto path = sidecar_path(csv);
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open sidecar " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

namespace {

void expect_kind(const nlohmann::json& meta, const std::string& kind, const fs::path& csv) {
  if (!meta.contains("kind") || meta["kind"] != kind)
    fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": expected kind \"" + kind + "\"");
}

Labels labels_or_default(const nlohmann::json& meta, Eigen::Index rows, const fs::path& csv,
                         const std::string& prefix) {
  Labels out;
  if (meta.contains("labels")) {
    try {
      out = meta["labels"].get<Labels>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": bad labels: " + e.what());
    }
    if (out.size() != static_cast<std::size_t>(rows))
      fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": " + std::to_string(out.size()) +
                                      " labels for " + std::to_string(rows) + " rows");
  } else {
    for (Eigen::Index i = 0; i < rows; ++i) out.push_back(prefix + std::to_string(i + 1));
  }
  return out;
}

double fs_of(const nlohmann::json& meta, const fs::path& csv) {
  if (!meta.contains("fs") || !meta["fs"].is_number())
    fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": missing numeric \"fs\"");
  return meta["fs"].get<double>();
}

}  // namespace

void write_source_library(const fs::path& csv, const SourceLibrary& lib) {
  Labels labels;
  for (Eigen::Index i = 0; i < lib.data.rows(); ++i) labels.push_back("S" + std::to_string(i + 1));
  write_matrix(csv, lib.data,
               {{"kind", "sources"}, {"fs", lib.fs}, {"labels", labels}, {"origin", lib.origin}});
}

SourceLibrary read_source_library(const fs::path& csv) {
  const auto meta = read_sidecar(csv);
  expect_kind(meta, "sources", csv);
  SourceLibrary lib;
  lib.data = read_matrix_csv(csv);
  lib.fs = fs_of(meta, csv);
  lib.origin = meta.value("origin", csv.string());
  validate(lib);
  normalize_rows(lib);
  return lib;
}

void write_leadfield(const fs::path& csv, const LeadField& lf) {
  write_matrix(csv, lf.gain, {{"kind", "leadfield"}, {"labels", lf.channels}, {"montage", lf.montage}});
}

LeadField read_leadfield(const fs::path& csv) {
  const auto meta = read_sidecar(csv);
  expect_kind(meta, "leadfield", csv);
  LeadField lf;
  lf.gain = read_matrix_csv(csv);
  lf.channels = labels_or_default(meta, lf.gain.rows(), csv, "E");
  lf.montage = meta.value("montage", csv.stem().string());
  validate(lf);
  return lf;
}

void write_record(const fs::path& csv, const MultichannelRecord& rec) {
  write_matrix(csv, rec.data, {{"kind", "record"}, {"fs", rec.fs}, {"labels", rec.channels}});
}

MultichannelRecord read_record(const fs::path& csv) {
  const auto meta = read_sidecar(csv);
  expect_kind(meta, "record", csv);
  MultichannelRecord rec;
  rec.data = read_matrix_csv(csv);
  rec.fs = fs_of(meta, csv);
  rec.channels = labels_or_default(meta, rec.data.rows(), csv, "E");
  validate(rec);
  return rec;
}

void write_connectivity(const fs::path& csv, const ConnectivityMatrix& m, const std::string& montage) {
  nlohmann::json band = {{"name", m.band.name}, {"lo", m.band.lo}, {"hi", m.band.hi}};
  write_matrix(csv, m.weights,
               {{"kind", "connectivity"}, {"metric", std::string(to_string(m.metric))},
                {"band", band}, {"montage", montage}, {"labels", m.channels}});
}

StoredConnectivity read_connectivity(const fs::path& csv) {
  StoredConnectivity out;
  out.weights = read_matrix_csv(csv);
  const auto side = sidecar_path(csv);
  if (fs::exists(side)) out.meta = read_sidecar(csv);
  return out;
}

}  // namespace fcdist
