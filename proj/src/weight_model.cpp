#include "wclt/weight_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wclt/errors.hpp"

namespace wclt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> parse_numbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError("bad number '" + item + "' in weight model '" + std::string(spec) + "'");
    }
  }
  return out;
}

}  // namespace

WeightModel WeightModel::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("constant weight must be positive");
  return WeightModel(ConstantLaw{c});
}

WeightModel WeightModel::uniform(double upper) {
  if (!(upper > 0.0) || !std::isfinite(upper)) throw DomainError("uniform upper bound must be positive");
  return WeightModel(UniformLaw{upper});
}

WeightModel WeightModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential rate must be positive");
  return WeightModel(ExponentialLaw{rate});
}

WeightModel WeightModel::two_point(double low, double high, double q) {
  if (!(low >= 0.0 && high >= 0.0) || !std::isfinite(low) || !std::isfinite(high)) {
    throw DomainError("two-point atoms must be nonnegative");
  }
  if (!(low < high)) throw DomainError("two-point law needs low < high");
  if (!(q > 0.0 && q < 1.0)) throw DomainError("two-point probability q must lie in (0,1)");
  return WeightModel(TwoPointLaw{low, high, q});
}

WeightModel WeightModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("weight model needs 'family:params', got '" + std::string(spec) + "'");
  const std::string_view family = spec.substr(0, colon);
  const auto args = parse_numbers(spec.substr(colon + 1), spec);
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw ParseError("weight model '" + std::string(spec) + "' expects " + std::to_string(count) + " parameter(s)");
    }
  };
  if (family == "const") { expect(1); return constant(args[0]); }
  if (family == "unif") { expect(1); return uniform(args[0]); }
  if (family == "exp") { expect(1); return exponential(args[0]); }
  if (family == "twopoint") { expect(3); return two_point(args[0], args[1], args[2]); }
  throw ParseError("unknown weight family '" + std::string(family) + "'");
}

std::string WeightModel::to_string() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const ConstantLaw& l) { out << "const:" << l.value; },
                 [&](const UniformLaw& l) { out << "unif:" << l.upper; },
                 [&](const ExponentialLaw& l) { out << "exp:" << l.rate; },
                 [&](const TwoPointLaw& l) { out << "twopoint:" << l.low << ',' << l.high << ',' << l.q; },
             },
             law_);
  return out.str();
}

Moments moments(const WeightModel& m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      Overloaded{
          [](const ConstantLaw& l) {
            const double c2 = l.value * l.value;
            return Moments{l.value, 0.0, 0.0, c2, c2 * c2, inf};
          },
          [](const UniformLaw& l) {
            const double b2 = l.upper * l.upper;
            return Moments{l.upper / 2, b2 / 12, b2 * b2 / 80, b2 / 3, b2 * b2 / 5, 9.0 / 5.0};
          },
          [](const ExponentialLaw& l) {
            const double s2 = 1.0 / (l.rate * l.rate);
            return Moments{1.0 / l.rate, s2, 9 * s2 * s2, 2 * s2, 24 * s2 * s2, 9.0};
          },
          [](const TwoPointLaw& l) {
            const double q = l.q, d = l.high - l.low;
            const double var = q * (1 - q) * d * d;
            const double c4 = q * (1 - q) * (1 - 3 * q + 3 * q * q) * d * d * d * d;
            const double a2 = l.low * l.low, b2 = l.high * l.high;
            return Moments{l.low * (1 - q) + l.high * q, var, c4, a2 * (1 - q) + b2 * q,
                           a2 * a2 * (1 - q) + b2 * b2 * q, c4 / (var * var)};
          },
      },
      m.law());
}

double quantile(const WeightModel& m, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile level must lie in [0,1)");
  return std::visit(Overloaded{
                        [](const ConstantLaw& l) { return l.value; },
                        [u](const UniformLaw& l) { return l.upper * u; },
                        [u](const ExponentialLaw& l) { return -std::log1p(-u) / l.rate; },
                        [u](const TwoPointLaw& l) { return u <= 1.0 - l.q ? l.low : l.high; },
                    },
                    m.law());
}

double quantile_integral(const WeightModel& m, double u0, double u1) {
  if (!(0.0 <= u0 && u0 <= u1 && u1 <= 1.0)) throw DomainError("quantile_integral needs 0 <= u0 <= u1 <= 1");
  return std::visit(
      Overloaded{
          [&](const ConstantLaw& l) { return l.value * (u1 - u0); },
          [&](const UniformLaw& l) { return l.upper * (u1 * u1 - u0 * u0) / 2; },
          [&](const ExponentialLaw& l) {
            // antiderivative of -log(1-v): (1-v) log(1-v) + v
            auto prim = [](double v) {
              const double r = 1.0 - v;
              return (r > 0.0 ? r * std::log(r) : 0.0) + v;
            };
            return (prim(u1) - prim(u0)) / l.rate;
          },
          [&](const TwoPointLaw& l) {
            const double split = 1.0 - l.q;
            const double low_part = std::max(0.0, std::min(u1, split) - u0);
            const double high_part = std::max(0.0, u1 - std::max(u0, split));
            return l.low * low_part + l.high * high_part;
          },
      },
      m.law());
}

double moment_ratio(const WeightModel& m, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0,1]");
  const Moments mo = moments(m);
  const double shift = (1.0 - p) * mo.mean * mo.mean;
  const double denominator = mo.variance + shift;
  if (!(denominator > 0.0)) throw DegenerateError("moment ratio denominator vanishes (degenerate weight law at p = 1)");
  return (std::sqrt(mo.central4) + shift) / denominator;
}

double kurtosis_factor(const WeightModel& m) {
  const Moments mo = moments(m);
  if (!(mo.variance > 0.0)) return std::numeric_limits<double>::infinity();
  return mo.mean * mo.mean / mo.variance + std::sqrt(mo.kurtosis);
}

}  // namespace wclt
