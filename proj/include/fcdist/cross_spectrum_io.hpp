#pragma once

#include <filesystem>

#include "fcdist/spectral.hpp"

namespace fcdist {

/// Long-format CSV `freq_hz,ch_i,ch_j,re,im` with one row per frequency and
/// channel pair i <= j (0-based indices into the sidecar labels); the lower
/// triangle is implied by Hermitian symmetry. Sidecar `<stem>.meta.json`
/// holds {"labels": [...], "n_segments": K}. Values are written with 17
/// significant digits, so a write/read cycle is bit-exact.
void write_cross_spectrum(const std::filesystem::path& csv, const CrossSpectrum& cs);
CrossSpectrum read_cross_spectrum(const std::filesystem::path& csv);

}  // namespace fcdist
