#include <doctest.h>

#include <cmath>
#include <limits>

#include "wclt/errors.hpp"
#include "wclt/rng.hpp"
#include "wclt/weight_model.hpp"

using namespace wclt;

TEST_CASE("closed-form moments") {
  const Moments c = moments(WeightModel::constant(2.5));
  CHECK(c.mean == 2.5);
  CHECK(c.variance == 0.0);
  CHECK(c.central4 == 0.0);
  CHECK(c.raw2 == 6.25);
  CHECK(std::isinf(c.kurtosis));

  const Moments u = moments(WeightModel::uniform(1.0));
  CHECK(u.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(u.variance == doctest::Approx(1.0 / 12).epsilon(1e-15));
  CHECK(u.central4 == doctest::Approx(1.0 / 80).epsilon(1e-15));
  CHECK(u.raw2 == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(u.raw4 == doctest::Approx(1.0 / 5).epsilon(1e-15));
  CHECK(u.kurtosis == doctest::Approx(9.0 / 5).epsilon(1e-14));

  const Moments e = moments(WeightModel::exponential(2.0));
  CHECK(e.mean == doctest::Approx(0.5));
  CHECK(e.variance == doctest::Approx(0.25));
  CHECK(e.central4 == doctest::Approx(9.0 / 16));
  CHECK(e.raw4 == doctest::Approx(24.0 / 16));

  for (double q : {0.1, 0.3, 0.5, 0.9}) {
    const Moments t = moments(WeightModel::two_point(0.0, 1.0, q));
    CHECK(t.mean == doctest::Approx(q).epsilon(1e-14));
    CHECK(t.variance == doctest::Approx(q * (1 - q)).epsilon(1e-14));
    CHECK(t.central4 == doctest::Approx(q * (1 - q) * (1 - 3 * q + 3 * q * q)).epsilon(1e-14));
    CHECK(t.raw2 == doctest::Approx(q).epsilon(1e-14));
  }
}

TEST_CASE("generalized quantile") {
  CHECK(quantile(WeightModel::constant(3.0), 0.0) == 3.0);
  CHECK(quantile(WeightModel::constant(3.0), 0.77) == 3.0);
  CHECK(quantile(WeightModel::uniform(2.0), 0.25) == 0.5);
  const auto tp = WeightModel::two_point(1.0, 3.0, 0.3);
  CHECK(quantile(tp, 0.7) == 1.0);
  CHECK(quantile(tp, 0.71) == 3.0);
  CHECK(quantile(tp, 0.0) == 1.0);
  CHECK(quantile(WeightModel::exponential(1.0), 0.5) == doctest::Approx(std::log(2.0)));
  CHECK(sample(tp, 0.71) == quantile(tp, 0.71));
  CHECK_THROWS_AS(quantile(tp, 1.0), DomainError);
  CHECK_THROWS_AS(quantile(tp, -0.1), DomainError);
}

TEST_CASE("quantile is nondecreasing") {
  for (const auto& m : {WeightModel::constant(1), WeightModel::uniform(3), WeightModel::exponential(0.5),
                        WeightModel::two_point(0.5, 2, 0.4)}) {
    double prev = -1.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = quantile(m, i / 1000.0);
      CHECK(x >= prev);
      prev = x;
    }
  }
}

TEST_CASE("quantile integral") {
  const auto u = WeightModel::uniform(2.0);
  CHECK(quantile_integral(u, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(quantile_integral(u, 0.0, 0.5) == doctest::Approx(0.25));
  const auto tp = WeightModel::two_point(1.0, 3.0, 0.5);
  CHECK(quantile_integral(tp, 0.25, 0.75) == doctest::Approx(0.25 * 1 + 0.25 * 3));
  CHECK(quantile_integral(WeightModel::exponential(1.0), 0.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("moment ratio") {
  for (double p : {0.01, 0.3, 0.5, 0.99}) CHECK(moment_ratio(WeightModel::constant(4.0), p) == 1.0);
  CHECK(moment_ratio(WeightModel::uniform(1.0), 0.5) == doctest::Approx(1.1366563145999495).epsilon(1e-13));
  CHECK(moment_ratio(WeightModel::exponential(1.0), 0.9) == doctest::Approx(2.818181818181818).epsilon(1e-13));
  CHECK_THROWS_AS(moment_ratio(WeightModel::constant(1.0), 1.0), DegenerateError);
  CHECK(kurtosis_factor(WeightModel::uniform(1.0)) == doctest::Approx(3.0 + std::sqrt(1.8)));
}

TEST_CASE("parse weight specs") {
  CHECK(WeightModel::parse("const:2").is_constant());
  CHECK(moments(WeightModel::parse("unif:1")).mean == doctest::Approx(0.5));
  CHECK(moments(WeightModel::parse("exp:2")).mean == doctest::Approx(0.5));
  CHECK(moments(WeightModel::parse("twopoint:1,3,0.5")).mean == doctest::Approx(2.0));
  CHECK(WeightModel::parse(WeightModel::parse("twopoint:1,3,0.25").to_string()).to_string() ==
        WeightModel::parse("twopoint:1,3,0.25").to_string());
  CHECK_THROWS_AS(WeightModel::parse("unif"), ParseError);
  CHECK_THROWS_AS(WeightModel::parse("gamma:1"), ParseError);
  CHECK_THROWS_AS(WeightModel::parse("twopoint:1,3"), ParseError);
  CHECK_THROWS_AS(WeightModel::parse("unif:x"), ParseError);
  CHECK_THROWS_AS(WeightModel::parse("const:0"), DomainError);
  CHECK_THROWS_AS(WeightModel::parse("twopoint:1,3,1.5"), DomainError);
}

TEST_CASE("Monte Carlo moments agree with closed forms") {
  constexpr std::uint64_t kDraws = 1'000'000;
  for (const auto& m : {WeightModel::uniform(2.0), WeightModel::exponential(1.5), WeightModel::two_point(1, 3, 0.3)}) {
    const Moments mm = moments(m);
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < kDraws; ++i) {
      const double x = sample(m, counter_uniform(99, 0, i));
      s1 += x;
      s2 += (x - mm.mean) * (x - mm.mean);
    }
    const double mean = s1 / kDraws;
    const double var = s2 / kDraws;
    CHECK(std::abs(mean - mm.mean) <= 5.0 * std::sqrt(mm.variance / kDraws));
    const double var_se = std::sqrt((mm.central4 - mm.variance * mm.variance) / kDraws);
    CHECK(std::abs(var - mm.variance) <= 5.0 * var_se);
  }
}
