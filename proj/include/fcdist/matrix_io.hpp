#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "fcdist/connectivity.hpp"
#include "fcdist/signal_model.hpp"
#include "fcdist/types.hpp"

namespace fcdist {

/// Shortest text that reads back to the same double: 17 significant digits.
std::string format_double(double v);
/// Strict parse of a whole token; throws ParseError with `context` on failure.
double parse_double(std::string_view token, const std::string& context);

/// `<dir>/<stem>.meta.json` for a matrix CSV `<dir>/<stem>.csv`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Numeric CSV, row-major, no header, plus the JSON sidecar.
void write_matrix(const std::filesystem::path& csv, const Matrix& m, const nlohmann::json& meta);
Matrix read_matrix_csv(const std::filesystem::path& csv);
nlohmann::json read_sidecar(const std::filesystem::path& csv);

void write_source_library(const std::filesystem::path& csv, const SourceLibrary& lib);
/// Reads a "sources" matrix file and variance-normalizes every row.
SourceLibrary read_source_library(const std::filesystem::path& csv);

void write_leadfield(const std::filesystem::path& csv, const LeadField& lf);
LeadField read_leadfield(const std::filesystem::path& csv);

void write_record(const std::filesystem::path& csv, const MultichannelRecord& rec);
MultichannelRecord read_record(const std::filesystem::path& csv);

void write_connectivity(const std::filesystem::path& csv, const ConnectivityMatrix& m,
                        const std::string& montage);
struct StoredConnectivity {
  Matrix weights;
  nlohmann::json meta;
};
StoredConnectivity read_connectivity(const std::filesystem::path& csv);

}  // namespace fcdist
