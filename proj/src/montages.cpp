#include <array>
#include <cmath>
#include <numbers>

#include "fcdist/error.hpp"
#include "fcdist/signal_model.hpp"

namespace fcdist {
namespace {

Eigen::Vector3d on_sphere(double polar_deg, double azimuth_deg) {
  const double th = polar_deg * std::numbers::pi / 180.0;
  const double ph = azimuth_deg * std::numbers::pi / 180.0;
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

Eigen::Vector3d midpoint(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return (a + b).normalized();
}

// Idealized 10-20 geometry: polar angle from Cz, azimuth from the nose with
// positive values toward the left ear. The outer ring sits 10% (18 deg) above
// the nasion-inion line; F3/C3/P3 and their right counterparts are the great-
// circle midpoints between the midline site and the outer ring.
Montage make_std19() {
  const auto fz = on_sphere(36, 0), cz = on_sphere(0, 0), pz = on_sphere(36, 180);
  const auto f7 = on_sphere(72, 54), f8 = on_sphere(72, -54);
  const auto t3 = on_sphere(72, 90), t4 = on_sphere(72, -90);
  const auto t5 = on_sphere(72, 126), t6 = on_sphere(72, -126);
  Montage m;
  m.label = "std19";
  // Channel order follows the normative database layout.
  m.channels = {"Fp1", "Fp2", "F3", "F4", "C3", "C4", "P3", "P4", "O1", "O2",
                "F7",  "F8",  "T3", "T4", "T5", "T6", "Fz", "Cz", "Pz"};
  m.positions = {on_sphere(72, 18), on_sphere(72, -18), midpoint(fz, f7), midpoint(fz, f8),
                 midpoint(cz, t3),  midpoint(cz, t4),   midpoint(pz, t5), midpoint(pz, t6),
                 on_sphere(72, 162), on_sphere(72, -162), f7, f8, t3, t4, t5, t6, fz, cz, pz};
  return m;
}

// Dense-array stand-in for the HydroCel nets: an equal-area golden-angle
// spiral over the cap from the vertex down to z = 0.05.
Montage make_spiral(int n) {
  Montage m;
  m.label = "egi" + std::to_string(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    const double z = 1.0 - 0.95 * (k + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * k;
    m.channels.push_back("E" + std::to_string(k + 1));
    m.positions.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return m;
}

}  // namespace

const Montage& builtin_montage(std::string_view label) {
  static const std::array<Montage, 4> table = {make_std19(), make_spiral(32), make_spiral(64),
                                               make_spiral(128)};
  for (const auto& m : table) {
    if (label == m.label) return m;
    const auto n = std::to_string(m.channels.size());
    if (label == n) return m;
  }
  fail(ErrorCode::UnknownMontage, "unknown montage '" + std::string(label) +
                                      "' (expected std19, egi32, egi64 or egi128)");
}

std::vector<std::string> builtin_montage_labels() { return {"std19", "egi32", "egi64", "egi128"}; }

std::string montage_label_for_channels(int n_channels) {
  return builtin_montage(std::to_string(n_channels)).label;
}

}  // namespace fcdist
