#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fsic/asymptotics.hpp"

using namespace fsic;

TEST_CASE("classification is decided by the sign of q+1 - s(1+alpha)") {
  const auto log_case = classify(1.0, 1.0, 1.0);  // q+1 = s(1+alpha) = 2
  CHECK(log_case.tag == RegimeTag::Logarithmic);

  const auto bounded = classify(1.0, 3.0, 1.0);  // 4 > 2
  CHECK(bounded.tag == RegimeTag::Bounded);

  const auto power = classify(0.5, 0.0, 2.0);  // 1 < 3
  CHECK(power.tag == RegimeTag::PowerLaw);
  CHECK_THAT(power.exponent, Catch::Matchers::WithinAbs(-4.0 / 3.0, 1e-15));
  CHECK(power.exponent < 0.0);
}

TEST_CASE("closed-form values of the gap integral") {
  // alpha=1, q=0, s=1, h=1, r0=1: int dr/(1+r^2) = pi/4
  auto a = singular_gap_integral(1.0, 0.0, 1.0, 1.0, 1.0);
  CHECK(a.converged);
  CHECK_THAT(a.value, Catch::Matchers::WithinAbs(std::numbers::pi / 4.0, 1e-10));

  // alpha=1, q=1, s=1: int r/(1+r^2) = log(2)/2
  auto b = singular_gap_integral(1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK_THAT(b.value, Catch::Matchers::WithinAbs(0.5 * std::log(2.0), 1e-10));
}

TEST_CASE("power-law regime: fitted slope matches (q+1)/(1+alpha) - s") {
  const auto sweep = sweep_singular_gap_integral(0.5, 0.0, 2.0, 1.0, default_h_grid());
  CHECK(sweep.predicted.tag == RegimeTag::PowerLaw);
  CHECK_THAT(sweep.fit.exponent, Catch::Matchers::WithinAbs(-4.0 / 3.0, 0.05));
  CHECK_FALSE(sweep.fit.logarithmic_branch);
}

TEST_CASE("logarithmic regime picks the |log h| branch") {
  const auto sweep = sweep_singular_gap_integral(1.0, 1.0, 1.0, 1.0, default_h_grid());
  CHECK(sweep.predicted.tag == RegimeTag::Logarithmic);
  CHECK(sweep.fit.logarithmic_branch);
  CHECK(sweep.fit.r2_log > 0.99);
}

TEST_CASE("fitted exponent -1/2 for the borderline-integrable case") {
  // q+1 = 1 < 2 = s(1+alpha) gives exponent 1/(1+1) - 1 = -1/2
  const auto sweep = sweep_singular_gap_integral(1.0, 0.0, 1.0, 1.0, default_h_grid());
  CHECK_THAT(sweep.fit.exponent, Catch::Matchers::WithinAbs(-0.5, 0.05));
}

TEST_CASE("bounded regime varies little once clear of the critical line") {
  // margin: q+1 - s(1+alpha) = 4 - 2 = 2 > 0.2
  const double v3 = singular_gap_integral(1.0, 3.0, 1.0, 1e-3, 1.0).value;
  const double v6 = singular_gap_integral(1.0, 3.0, 1.0, 1e-6, 1.0).value;
  CHECK(std::abs(v6 - v3) / v3 < 0.05);
}

TEST_CASE("integral decreases in h; in s wherever the gap exceeds one") {
  for (double h : {1e-5, 1e-4, 1e-3, 1e-2}) {
    CHECK(singular_gap_integral(0.5, 1.0, 2.0, h, 1.0).value >
          singular_gap_integral(0.5, 1.0, 2.0, 10.0 * h, 1.0).value);
  }
  // d/ds flips sign with log(h + r^(1+alpha)); h >= 1 keeps the gap above one
  for (double h : {1.0, 2.0, 4.0}) {
    CHECK(singular_gap_integral(0.5, 1.0, 2.5, h, 1.0).value >
          singular_gap_integral(0.5, 1.0, 3.0, h, 1.0).value);
  }
}

TEST_CASE("near-critical parameters are flagged slow-converging") {
  const auto c = classify(1.0, 1.05, 1.0);  // q+1 - s(1+alpha) = 0.05
  CHECK(c.near_critical);
  const auto sweep = sweep_singular_gap_integral(1.0, 1.05, 1.0, 1.0, default_h_grid());
  CHECK(sweep.fit.slow_converging);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(classify(-1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(singular_gap_integral(1.0, 0.0, 1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(singular_gap_integral(1.0, -1.0, 1.0, 0.1, 1.0), std::domain_error);
}
