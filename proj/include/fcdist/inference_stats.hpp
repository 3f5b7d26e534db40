#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

namespace fcdist {

struct CorrelationResult {
  double r = 0.0;
  double p = 1.0;
  std::size_t n = 0;
  std::string stars;
};

/// Sample Pearson r with a two-sided p-value from Student's t on n - 2
/// degrees of freedom. |r| == 1 gives p = 0.
CorrelationResult pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Two-sided tail probability of |T| >= |t| for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// "***" for p < 0.001, "**" for p < 0.01, "*" for p < 0.05, otherwise "".
std::string_view significance_stars(double p);

}  // namespace fcdist
