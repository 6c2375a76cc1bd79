#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace wclt {

struct ConstantLaw {
  double value;
};
struct UniformLaw {
  double upper;  ///< Uniform(0, upper)
};
struct ExponentialLaw {
  double rate;
};
/// Mass 1-q at `low`, mass q at `high`.
struct TwoPointLaw {
  double low;
  double high;
  double q;
};

/// Nonnegative edge-weight law X with closed-form moments and an exact
/// generalized inverse CDF. Sampling is inverse-transform only.
class WeightModel {
 public:
  using Law = std::variant<ConstantLaw, UniformLaw, ExponentialLaw, TwoPointLaw>;

  static WeightModel constant(double c);
  static WeightModel uniform(double upper);
  static WeightModel exponential(double rate);
  static WeightModel two_point(double low, double high, double q);

  /// CLI syntax: "const:c", "unif:b", "exp:lambda", "twopoint:a,b,q".
  static WeightModel parse(std::string_view spec);

  const Law& law() const noexcept { return law_; }
  std::string to_string() const;
  bool is_constant() const noexcept { return std::holds_alternative<ConstantLaw>(law_); }

 private:
  explicit WeightModel(Law law) : law_(law) {}
  Law law_;
};

struct Moments {
  double mean;
  double variance;
  double central4;  ///< E[(X - EX)^4]
  double raw2;      ///< E[X^2]
  double raw4;      ///< E[X^4]
  double kurtosis;  ///< central4 / variance^2, +inf for degenerate laws
};

Moments moments(const WeightModel& m);

/// Generalized inverse inf{x : F(x) >= u}, for u in [0,1).
double quantile(const WeightModel& m, double u);

/// Exact integral of the quantile function over [u0, u1] within [0,1].
double quantile_integral(const WeightModel& m, double u0, double u1);

/// Inverse-transform sample from a supplied uniform variate.
inline double sample(const WeightModel& m, double u) { return quantile(m, u); }

/// (sqrt(c4) + (1-p) m1^2) / (var + (1-p) m1^2).
double moment_ratio(const WeightModel& m, double p);

/// m1^2/var + sqrt(kurtosis); +inf for degenerate laws.
double kurtosis_factor(const WeightModel& m);

}  // namespace wclt
