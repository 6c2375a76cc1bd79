#include "wclt/empirical_distance.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "wclt/errors.hpp"

namespace wclt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_quantile(double u) {
  u = std::clamp(u, 1e-300, 1.0 - 0x1.0p-53);
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

namespace {

// A(x) = integral of Phi from -inf to x.
double lower_area(double x) { return x * normal_cdf(x) + normal_pdf(x); }

// Integral of (1 - Phi) from x to +inf.
double upper_area(double x) { return normal_pdf(x) - x * normal_cdf(-x); }

// Integral of |c - Phi| over [a, b] with 0 < c < 1.
double level_piece(double a, double b, double c) {
  const double xs = std::clamp(normal_quantile(c), a, b);
  // Phi < c on [a, xs], Phi > c on [xs, b].
  const double left = c * (xs - a) - (lower_area(xs) - lower_area(a));
  const double right = (lower_area(b) - lower_area(xs)) - c * (b - xs);
  return std::max(left, 0.0) + std::max(right, 0.0);
}

}  // namespace

DistanceResult wasserstein1_to_normal(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("W1 needs at least one sample");
  std::vector<double> x(samples.begin(), samples.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("W1 samples must be finite");
  }
  std::sort(x.begin(), x.end());
  const std::size_t m = x.size();
  const double dm = static_cast<double>(m);

  double total = lower_area(x.front()) + upper_area(x.back());
  for (std::size_t i = 1; i < m; ++i) {
    if (x[i] > x[i - 1]) total += level_piece(x[i - 1], x[i], static_cast<double>(i) / dm);
  }
  return {total, m, 1.0 / std::sqrt(dm)};
}

}  // namespace wclt
