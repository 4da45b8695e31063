#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fsic/geometry.hpp"

using namespace fsic;

TEST_CASE("gap evaluates the profile") {
  const auto para = ShapeProfile::power_law(1.0, 3, 0.0);
  CHECK_THAT(gap(para, 0.5), Catch::Matchers::WithinAbs(0.25, 1e-15));

  const auto ball0 = ShapeProfile::spherical(3, 0.0, 0.5);
  CHECK(gap(ball0, 0.0) == 0.0);

  const auto ball = ShapeProfile::spherical(3, 0.01, 0.5);
  CHECK_THAT(gap(ball, 0.1),
             Catch::Matchers::WithinAbs(0.01 + 1.0 - std::sqrt(0.99), 1e-15));
}

TEST_CASE("gap rejects out-of-range radii and bad profiles") {
  const auto para = ShapeProfile::power_law(0.5, 3, 0.1);
  CHECK_THROWS_AS(gap(para, -0.1), std::domain_error);
  CHECK_THROWS_AS(gap(para, 1.5), std::domain_error);
  CHECK_THROWS_AS(ShapeProfile::power_law(0.0, 3, 0.1), std::domain_error);
  CHECK_THROWS_AS(ShapeProfile::power_law(1.5, 3, 0.1), std::domain_error);
  CHECK_THROWS_AS(ShapeProfile::spherical(3, 0.1, 1.2), std::domain_error);
}

TEST_CASE("analytic gap derivatives match the formulas and finite differences") {
  const auto para = ShapeProfile::power_law(1.0, 3, 0.0);
  CHECK_THAT(gap_derivative(para, 0.5, 1), Catch::Matchers::WithinAbs(1.0, 1e-15));

  const auto ball = ShapeProfile::spherical(3, 0.0, 0.7);
  CHECK_THAT(gap_derivative(ball, 0.6, 2),
             Catch::Matchers::WithinAbs(std::pow(1.0 - 0.36, -1.5), 1e-12));

  // central differences as the independent oracle, tol 1e-8
  for (const auto& prof :
       {ShapeProfile::power_law(0.7, 3, 0.02), ShapeProfile::spherical(3, 0.02, 0.7)}) {
    const double r = 0.45, eps = 1e-5;
    const double d1 = (gap(prof, r + eps) - gap(prof, r - eps)) / (2 * eps);
    const double d2 = (gap(prof, r + eps) - 2 * gap(prof, r) + gap(prof, r - eps)) / (eps * eps);
    CHECK_THAT(gap_derivative(prof, r, 1), Catch::Matchers::WithinAbs(d1, 1e-8));
    CHECK_THAT(gap_derivative(prof, r, 2), Catch::Matchers::WithinAbs(d2, 1e-4));
  }
  CHECK_THROWS_AS(gap_derivative(para, 0.5, 4), std::domain_error);
  CHECK_THROWS_AS(gap_derivative(para, 0.0, 1), std::domain_error);
}

TEST_CASE("spherical derivative at the axis vanishes by symmetry") {
  const auto ball = ShapeProfile::spherical(3, 0.1, 0.5);
  CHECK_THAT(gap_derivative(ball, 1e-12, 1), Catch::Matchers::WithinAbs(0.0, 1e-11));
}

TEST_CASE("body normal") {
  const auto ball = ShapeProfile::spherical(3, 0.0, 0.7);
  const auto n0 = body_normal(ball, 0.0);
  CHECK(n0.e_r == 0.0);
  CHECK(n0.e_vert == 1.0);

  const auto para = ShapeProfile::power_law(1.0, 3, 0.0);
  const auto np = body_normal(para, 0.0);
  CHECK(np.e_vert == 1.0);

  const auto n6 = body_normal(ball, 0.6);
  CHECK_THAT(n6.e_r, Catch::Matchers::WithinAbs(-0.6, 1e-14));
  CHECK_THAT(n6.e_vert, Catch::Matchers::WithinAbs(0.8, 1e-14));
}

TEST_CASE("unit normals and minimal gap over a radius grid") {
  for (const auto& prof :
       {ShapeProfile::power_law(0.4, 3, 0.05), ShapeProfile::power_law(1.0, 2, 0.05),
        ShapeProfile::spherical(3, 0.05, 0.5)}) {
    double min_gap = 1e300;
    for (int i = 0; i <= 200; ++i) {
      const double r = prof.r0 * i / 200.0;
      const auto n = body_normal(prof, r);
      CHECK_THAT(n.e_r * n.e_r + n.e_vert * n.e_vert, Catch::Matchers::WithinAbs(1.0, 1e-14));
      min_gap = std::min(min_gap, gap(prof, r));
      CHECK(gap(prof, r) >= prof.h);
    }
    CHECK_THAT(min_gap, Catch::Matchers::WithinAbs(prof.h, 1e-15));  // attained at r = 0
  }
}

TEST_CASE("spherical profile agrees with the parabolic one to fourth order") {
  const auto ball = ShapeProfile::spherical(3, 0.02, 0.5);
  for (int i = 0; i <= 50; ++i) {
    const double r = 0.5 * i / 50.0;
    CHECK(std::abs(gap(ball, r) - (0.02 + 0.5 * r * r)) <= 0.5 * std::pow(r, 4) + 1e-15);
  }
}

TEST_CASE("gap jet carries d/dh = 1") {
  const auto ball = ShapeProfile::spherical(3, 0.02, 0.5);
  const auto j = gap_jet(ball, 0.3);
  CHECK(j.f.dh == 1.0);
  CHECK(j.d1.dh == 0.0);
  CHECK_THAT(j.f.v, Catch::Matchers::WithinAbs(gap(ball, 0.3), 1e-15));
  CHECK_THAT(j.d1.v, Catch::Matchers::WithinAbs(gap_derivative(ball, 0.3, 1), 1e-15));
  CHECK_THAT(j.d3.v, Catch::Matchers::WithinAbs(gap_derivative(ball, 0.3, 3), 1e-12));
}
