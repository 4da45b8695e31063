#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fsic/fitting.hpp"
#include "fsic/jets.hpp"
#include "fsic/quadrature.hpp"

using namespace fsic;

TEST_CASE("adaptive quadrature reproduces closed forms") {
  auto r1 = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, 10.0, 1e-12);
  CHECK(r1.converged);
  CHECK_THAT(r1.value, Catch::Matchers::WithinAbs(1.0 - std::exp(-10.0), 1e-11));

  // endpoint-singular integrand, integrable: int_0^1 x^(-1/2) = 2
  auto r2 = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9);
  CHECK_THAT(r2.value, Catch::Matchers::WithinRel(2.0, 1e-7));

  auto r3 = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK_THAT(r3.value, Catch::Matchers::WithinAbs(2.0, 1e-11));
}

TEST_CASE("fixed gauss rule integrates high-degree polynomials exactly") {
  auto f = [](double x) { return 7.0 * std::pow(x, 9) - 3.0 * std::pow(x, 4) + x; };
  // exact on [0,1]: 7/10 - 3/5 + 1/2 = 0.6
  CHECK_THAT(integrate_gauss(f, 0.0, 1.0, 8), Catch::Matchers::WithinAbs(0.6, 1e-14));
  CHECK_THAT(integrate_gauss(f, 0.0, 1.0, 40), Catch::Matchers::WithinAbs(0.6, 1e-13));
}

TEST_CASE("Dh dual tracks d/dh") {
  const Dh h{0.3, 1.0};
  const Dh y = Dh(2.0) / (h * h) - sqrt(h);
  const double eps = 1e-7;
  const double fd = (2.0 / ((0.3 + eps) * (0.3 + eps)) - std::sqrt(0.3 + eps) -
                     (2.0 / ((0.3 - eps) * (0.3 - eps)) - std::sqrt(0.3 - eps))) /
                    (2.0 * eps);
  CHECK_THAT(y.dh, Catch::Matchers::WithinRel(fd, 1e-6));
}

TEST_CASE("Taylor3 jets match finite differences of a rational-sqrt expression") {
  auto eval = [](double r) {
    return (3.0 + r * r) / std::sqrt(1.0 - r * r) - r / (2.0 - r);
  };
  auto jet_of = [](double r) {
    using T3 = Taylor3<Dh>;
    const T3 jr = T3::variable(Dh(r));
    const T3 one = T3::constant(Dh(1.0));
    return (T3::constant(Dh(3.0)) + jr * jr) / sqrt(one - jr * jr) -
           jr / (T3::constant(Dh(2.0)) - jr);
  };
  const double r = 0.37, eps = 1e-4;
  const auto j = jet_of(r);
  CHECK_THAT(j.f.v, Catch::Matchers::WithinRel(eval(r), 1e-12));
  const double d1 = (eval(r + eps) - eval(r - eps)) / (2 * eps);
  const double d2 = (eval(r + eps) - 2 * eval(r) + eval(r - eps)) / (eps * eps);
  const double d3 =
      (eval(r + 2 * eps) - 2 * eval(r + eps) + 2 * eval(r - eps) - eval(r - 2 * eps)) /
      (2 * eps * eps * eps);
  CHECK_THAT(j.d1.v, Catch::Matchers::WithinRel(d1, 1e-7));
  CHECK_THAT(j.d2.v, Catch::Matchers::WithinRel(d2, 1e-5));
  CHECK_THAT(j.d3.v, Catch::Matchers::WithinRel(d3, 1e-3));
}

TEST_CASE("Jet23 gradient and hessian match finite differences") {
  auto scalar = [](double x, double y, double z) {
    return std::sqrt(x * x + 2.0) * y / (1.0 + z * z) + x * y * z;
  };
  auto jet = [](double x, double y, double z) {
    const Jet23 jx = Jet23::variable(x, 0), jy = Jet23::variable(y, 1), jz = Jet23::variable(z, 2);
    return sqrt(jx * jx + Jet23::constant(2.0)) * jy / (Jet23::constant(1.0) + jz * jz) +
           jx * jy * jz;
  };
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.1, 1.2);
  for (int trial = 0; trial < 20; ++trial) {
    const double x = u(rng), y = u(rng), z = u(rng), eps = 1e-5;
    const Jet23 j = jet(x, y, z);
    CHECK_THAT(j.v, Catch::Matchers::WithinRel(scalar(x, y, z), 1e-13));
    const double gx = (scalar(x + eps, y, z) - scalar(x - eps, y, z)) / (2 * eps);
    const double gz = (scalar(x, y, z + eps) - scalar(x, y, z - eps)) / (2 * eps);
    CHECK_THAT(j.g[0], Catch::Matchers::WithinRel(gx, 1e-8));
    CHECK_THAT(j.g[2], Catch::Matchers::WithinRel(gz, 1e-8));
    const double hxy = (scalar(x + eps, y + eps, z) - scalar(x + eps, y - eps, z) -
                        scalar(x - eps, y + eps, z) + scalar(x - eps, y - eps, z)) /
                       (4 * eps * eps);
    CHECK_THAT(j.H[0][1], Catch::Matchers::WithinAbs(hxy, 1e-5));
    CHECK_THAT(j.H[1][0], Catch::Matchers::WithinAbs(j.H[0][1], 1e-12));
  }
}

TEST_CASE("smoothstep blends are C2 and clamp") {
  const Jet23 lo = smoothstep(Jet23::variable(0.1, 0), 0.2, 0.4);
  CHECK(lo.v == 0.0);
  const Jet23 hi = smoothstep(Jet23::variable(0.5, 0), 0.2, 0.4);
  CHECK(hi.v == 1.0);
  CHECK(hi.g[0] == 0.0);
  const Jet23 mid = smoothstep(Jet23::variable(0.3, 0), 0.2, 0.4);
  CHECK_THAT(mid.v, Catch::Matchers::WithinAbs(0.5, 1e-14));
  CHECK(mid.g[0] > 0.0);
}

TEST_CASE("linear fit recovers slope and R2") {
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3.0 - 2.0 * x.back());
  }
  const LinearFit f = linear_fit(x, y);
  CHECK_THAT(f.slope, Catch::Matchers::WithinAbs(-2.0, 1e-12));
  CHECK_THAT(f.intercept, Catch::Matchers::WithinAbs(3.0, 1e-12));
  CHECK_THAT(f.r2, Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("fit_scaling recognizes synthetic power laws and logarithms") {
  std::vector<std::pair<double, double>> pow_samples, log_samples;
  for (double h : log_grid(1e-6, 1e-1, 20)) pow_samples.push_back({h, 2.5 / h});
  std::reverse(pow_samples.begin(), pow_samples.end());
  const ScalingFit pf = fit_scaling(pow_samples);
  CHECK_THAT(pf.exponent, Catch::Matchers::WithinAbs(-1.0, 1e-6));
  CHECK_FALSE(pf.logarithmic_branch);

  for (double h : log_grid(1e-6, 1e-1, 20)) log_samples.push_back({h, std::abs(std::log(h))});
  std::reverse(log_samples.begin(), log_samples.end());
  const ScalingFit lf = fit_scaling(log_samples);
  CHECK(lf.logarithmic_branch);
  CHECK(lf.r2_log > 0.999);
}

TEST_CASE("fit_scaling rejects degenerate input") {
  std::vector<std::pair<double, double>> bad = {{1.0, 1.0}, {0.5, 1.0}, {0.25, 1.0}};
  CHECK_THROWS_AS(fit_scaling(bad), FitError);
  std::vector<std::pair<double, double>> nonmono;
  for (double h : {1e-1, 1e-3, 1e-2, 1e-4, 1e-5, 1e-6}) nonmono.push_back({h, 1.0 / h});
  CHECK_THROWS_AS(fit_scaling(nonmono), FitError);
}
