#include "fcdist/inference_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "fcdist/error.hpp"

namespace fcdist {

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) fail(ErrorCode::InvalidArgument, "degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  // P(|T| >= |t|) = I_{df / (df + t^2)}(df / 2, 1 / 2)
  const double x = df / (df + t * t);
  return std::clamp(boost::math::ibeta(df / 2.0, 0.5, x), 0.0, 1.0);
}

CorrelationResult pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    fail(ErrorCode::ShapeMismatch, "correlation inputs differ in length (" +
                                       std::to_string(x.size()) + " vs " +
                                       std::to_string(y.size()) + ")");
  const std::size_t n = x.size();
  if (n < 3) fail(ErrorCode::TooFewPoints, "Pearson correlation needs at least 3 points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    fail(ErrorCode::ConstantSeries, "Pearson correlation of a constant series is undefined");

  CorrelationResult out;
  out.n = n;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  // Exact linear dependence only reaches |r| = 1 up to rounding.
  if (1.0 - std::abs(out.r) <= 8.0 * std::numeric_limits<double>::epsilon()) out.r = out.r > 0 ? 1.0 : -1.0;
  const double df = static_cast<double>(n - 2);
  if (std::abs(out.r) >= 1.0) {
    out.p = 0.0;
  } else {
    const double t = out.r * std::sqrt(df / (1.0 - out.r * out.r));
    out.p = student_t_two_sided_p(t, df);
  }
  out.stars = std::string(significance_stars(out.p));
  return out;
}

std::string_view significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace fcdist
