#include "fcdist/cross_spectrum_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "fcdist/error.hpp"
#include "fcdist/matrix_io.hpp"

namespace fcdist {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kHeader = "freq_hz,ch_i,ch_j,re,im";

std::size_t parse_index(std::string_view tok, const std::string& ctx) {
  std::size_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    fail(ErrorCode::ParseError, ctx + ": '" + std::string(tok) + "' is not a channel index");
  return v;
}

}  // namespace

void write_cross_spectrum(const fs::path& csv, const CrossSpectrum& cs) {
  if (cs.mats.size() != cs.freqs.size())
    fail(ErrorCode::ShapeMismatch, "cross-spectrum has mismatched frequency and matrix counts");
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  std::ofstream out(csv);
  if (!out) fail(ErrorCode::IoError, "cannot write " + csv.string());
  out << kHeader << '\n';
  const auto n = static_cast<Eigen::Index>(cs.n_channels());
  for (std::size_t k = 0; k < cs.freqs.size(); ++k) {
    const std::string f = format_double(cs.freqs[k]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        const auto v = cs.mats[k](i, j);
        out << f << ',' << i << ',' << j << ',' << format_double(v.real()) << ','
            << format_double(i == j ? 0.0 : v.imag()) << '\n';
      }
  }
  std::ofstream side(sidecar_path(csv));
  if (!side) fail(ErrorCode::IoError, "cannot write " + sidecar_path(csv).string());
  side << nlohmann::json{{"labels", cs.channels}, {"n_segments", cs.n_segments}}.dump(2) << '\n';
  if (!out || !side) fail(ErrorCode::IoError, "write failed for " + csv.string());
}

CrossSpectrum read_cross_spectrum(const fs::path& csv) {
  const auto meta = read_sidecar(csv);
  CrossSpectrum cs;
  try {
    cs.channels = meta.at("labels").get<Labels>();
    cs.n_segments = meta.at("n_segments").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": " + e.what());
  }
  const std::size_t n = cs.channels.size();
  if (n == 0) fail(ErrorCode::ParseError, sidecar_path(csv).string() + ": no channel labels");

  std::ifstream in(csv);
  if (!in) fail(ErrorCode::IoError, "cannot open " + csv.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::ParseError, csv.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    fail(ErrorCode::ParseError, csv.string() + ":1: expected header '" + std::string(kHeader) + "'");

  const auto nn = static_cast<Eigen::Index>(n);
  const std::size_t per_freq = n * (n + 1) / 2;
  std::size_t filled = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string ctx = csv.string() + ":" + std::to_string(line_no);
    std::string_view fields[5];
    std::string_view rest(line);
    for (int k = 0; k < 5; ++k) {
      const auto comma = rest.find(',');
      if ((k < 4) == (comma == std::string_view::npos))
        fail(ErrorCode::ParseError, ctx + ": expected 5 comma-separated fields");
      fields[k] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest.remove_prefix(comma + 1);
    }
    const double f = parse_double(fields[0], ctx);
    const std::size_t i = parse_index(fields[1], ctx);
    const std::size_t j = parse_index(fields[2], ctx);
    const double re = parse_double(fields[3], ctx);
    const double im = parse_double(fields[4], ctx);
    if (i > j || j >= n)
      fail(ErrorCode::ParseError, ctx + ": pair (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") is not an upper-triangle index for " + std::to_string(n) +
                                      " channels");
    if (!std::isfinite(f) || !std::isfinite(re) || !std::isfinite(im))
      fail(ErrorCode::ParseError, ctx + ": non-finite value");

    if (cs.freqs.empty() || f != cs.freqs.back()) {
      if (!cs.freqs.empty()) {
        if (f <= cs.freqs.back())
          fail(ErrorCode::ParseError, ctx + ": frequencies must be strictly increasing");
        if (filled != per_freq)
          fail(ErrorCode::ParseError, ctx + ": previous frequency has " + std::to_string(filled) +
                                          " of " + std::to_string(per_freq) + " pairs");
      }
      cs.freqs.push_back(f);
      cs.mats.push_back(ComplexMatrix::Constant(nn, nn, std::complex<double>(std::nan(""), 0.0)));
      filled = 0;
    }
    auto& m = cs.mats.back();
    const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    if (!std::isnan(m(ii, jj).real()))
      fail(ErrorCode::ParseError, ctx + ": duplicate entry for this frequency and pair");
    if (i == j) {
      if (re < 0.0) fail(ErrorCode::ParseError, ctx + ": negative auto-spectrum");
      if (im != 0.0) fail(ErrorCode::ParseError, ctx + ": auto-spectrum must be real");
      m(ii, ii) = std::complex<double>(re, 0.0);
    } else {
      m(ii, jj) = std::complex<double>(re, im);
      m(jj, ii) = std::complex<double>(re, -im);
    }
    ++filled;
  }
  if (cs.freqs.empty()) fail(ErrorCode::ParseError, csv.string() + ": no data rows");
  if (filled != per_freq)
    fail(ErrorCode::ParseError, csv.string() + ": last frequency has " + std::to_string(filled) +
                                    " of " + std::to_string(per_freq) + " pairs");
  return cs;
}

}  // namespace fcdist
