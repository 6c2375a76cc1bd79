#pragma once

#include <cstddef>
#include <span>

namespace wclt {

double normal_cdf(double x);
double normal_pdf(double x);
/// Inverse of normal_cdf; u is clamped to [1e-300, 1 - 2^-53].
double normal_quantile(double u);

struct DistanceResult {
  double w1 = 0.0;
  std::size_t sample_size = 0;
  double estimated_statistical_error = 0.0;  ///< m^{-1/2}
};

/// W1 between the empirical law of `samples` and N(0,1), integrated exactly
/// piece by piece with the antiderivative x Phi(x) + phi(x).
DistanceResult wasserstein1_to_normal(std::span<const double> samples);

}  // namespace wclt
