#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "fsic/collidingflow.hpp"
#include "fsic/fitting.hpp"

using namespace fsic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

constexpr double kPi = std::numbers::pi;

TEST_CASE("cutoff polynomial") {
  const CutoffPhi phi{1.0, 3.0};
  CHECK(phi(0.5) == 1.0);
  CHECK(phi(3.0) == 0.0);
  CHECK(phi(4.0) == 0.0);
  CHECK_THAT(phi(1.0 + 1e-12), WithinAbs(1.0, 1e-10));
  CHECK_THAT(phi.d1(1.0 + 1e-9), WithinAbs(0.0, 1e-7));
  CHECK_THAT(phi.d1(3.0 - 1e-9), WithinAbs(0.0, 1e-7));
  // for r=1, R=3 the bump is rho (rho-3)^2 / 4
  for (double rho : {1.2, 1.9, 2.5, 2.9})
    CHECK_THAT(phi(rho), WithinRel(rho * (rho - 3.0) * (rho - 3.0) / 4.0, 1e-13));
  double prev = 1.0;
  for (double rho = 1.0; rho <= 3.0; rho += 0.05) {
    CHECK(phi(rho) <= prev + 1e-14);
    prev = phi(rho);
  }
}

TEST_CASE("eccentric map basics") {
  const EccentricMap map(3.0, 1.0);
  // sigma = 0: polar identity
  const auto p = map.forward(0.0, 1.7, 0.9);
  CHECK_THAT(p[0], WithinRel(1.7 * std::cos(0.9), 1e-14));
  CHECK_THAT(p[1], WithinRel(1.7 * std::sin(0.9), 1e-14));
  // container boundary is fixed pointwise
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * kPi * k / 16.0;
    const auto q = map.forward(0.6, 3.0, th);
    CHECK_THAT(std::hypot(q[0], q[1]), WithinAbs(3.0, 1e-13));
    CHECK_THAT(q[0], WithinAbs(3.0 * std::cos(th), 1e-13));
  }
  // jacobian of the forward map
  CHECK_THAT(map.jacobian(0.5, 2.0, 1.1), WithinRel(2.0 * (1.0 - 0.5 * std::cos(1.1)), 1e-14));
}

TEST_CASE("image of the inner boundary is the circle of radius r around (g, 0)") {
  const EccentricMap map(3.0, 1.0);
  for (double sigma : {0.2, 0.5, 0.9}) {
    // least-squares circle through mapped boundary points (Kasa fit)
    std::vector<double> xs, ys;
    for (int k = 0; k < 100; ++k) {
      const auto q = map.forward(sigma, 1.0, 2.0 * kPi * k / 100.0);
      xs.push_back(q[0]);
      ys.push_back(q[1]);
    }
    std::vector<double> bx(xs.size()), by(xs.size()), ones(xs.size(), 1.0), rhs(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
      bx[i] = 2.0 * xs[i];
      by[i] = 2.0 * ys[i];
      rhs[i] = xs[i] * xs[i] + ys[i] * ys[i];
    }
    const auto coef = least_squares({bx, by, ones}, rhs);
    const double cx = coef[0], cy = coef[1];
    const double rad = std::sqrt(coef[2] + cx * cx + cy * cy);
    CHECK_THAT(cx, WithinAbs(map.g(sigma), 1e-10));
    CHECK_THAT(cy, WithinAbs(0.0, 1e-10));
    CHECK_THAT(rad, WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("inverse: Newton round trip and the printed-radius discrepancy") {
  const EccentricMap map(3.0, 1.0);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> urho(0.05, 2.95), uth(0.0, 2.0 * kPi);
  for (double sigma : {0.0, 0.3, 0.7, 0.95}) {
    double max_printed_err = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
      const double rho = urho(rng), theta = uth(rng);
      const auto x = map.forward(sigma, rho, theta);
      const auto back = map.inverse(sigma, x[0], x[1]);
      const auto x2 = map.forward(sigma, back[0], back[1]);
      CHECK_THAT(x2[0], WithinAbs(x[0], 1e-12));
      CHECK_THAT(x2[1], WithinAbs(x[1], 1e-12));
      CHECK_THAT(back[0], WithinAbs(rho, 1e-11));
      // corrected closed form already matches the true radius
      CHECK_THAT(map.inverse_radius(sigma, x[0], x[1]), WithinAbs(rho, 1e-10));
      max_printed_err =
          std::max(max_printed_err, std::abs(map.printed_inverse_radius(sigma, x[0], x[1]) - rho));
      // inverse jacobian is the reciprocal
      CHECK_THAT(map.jacobian(sigma, back[0], back[1]),
                 WithinRel(map.jacobian(sigma, rho, theta), 1e-9));
    }
    if (sigma > 0.0) CHECK(max_printed_err > 1e-3);  // the printed formula is wrong off-axis
  }
}

TEST_CASE("velocity field: rigid zone, boundary, and discrete divergence") {
  const EccentricMap map(3.0, 1.0);
  const double sigma = 0.5, sigma_dot = -0.8;
  const double gdot = sigma_dot * 2.0;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // 100 solid points: u = (gdot, 0) exactly
  for (int k = 0; k < 100; ++k) {
    const double rr = 0.97 * std::sqrt(u(rng));
    const double th = 2.0 * kPi * u(rng);
    const double x1 = map.g(sigma) + rr * std::cos(th), x2 = rr * std::sin(th);
    const auto v = map.velocity(sigma, sigma_dot, x1, x2);
    CHECK_THAT(v[0], WithinAbs(gdot, 1e-10));
    CHECK_THAT(v[1], WithinAbs(0.0, 1e-10));
  }
  // 100 container-boundary points: u = 0
  for (int k = 0; k < 100; ++k) {
    const double th = 2.0 * kPi * k / 100.0;
    const auto v = map.velocity(sigma, sigma_dot, 3.0 * std::cos(th), 3.0 * std::sin(th));
    CHECK_THAT(std::hypot(v[0], v[1]), WithinAbs(0.0, 1e-12));
  }
  // interior fluid points: central-difference divergence, step 1e-5
  int tested = 0;
  while (tested < 40) {
    const double rr = 3.0 * std::sqrt(u(rng));
    const double th = 2.0 * kPi * u(rng);
    const double x1 = rr * std::cos(th), x2 = rr * std::sin(th);
    if (std::hypot(x1, x2) > 2.9) continue;
    if (std::hypot(x1 - map.g(sigma), x2) < 1.1) continue;
    const double eps = 1e-5;
    const double div = (map.velocity(sigma, sigma_dot, x1 + eps, x2)[0] -
                        map.velocity(sigma, sigma_dot, x1 - eps, x2)[0]) /
                           (2 * eps) +
                       (map.velocity(sigma, sigma_dot, x1, x2 + eps)[1] -
                        map.velocity(sigma, sigma_dot, x1, x2 - eps)[1]) /
                           (2 * eps);
    CHECK_THAT(div, WithinAbs(0.0, 1e-6));
    ++tested;
  }
  CHECK_THROWS_AS(map.velocity(sigma, sigma_dot, 3.5, 0.0), std::domain_error);
}

TEST_CASE("angular integrals in closed form") {
  CHECK_THAT(nu1(0.0).closed, WithinAbs(kPi, 1e-14));
  CHECK_THAT(nu1(0.5).closed, WithinAbs(2.0 * kPi / (1.0 + std::sqrt(0.75)), 1e-14));
  CHECK_THAT(nu1(0.5).closed, WithinAbs(3.36715, 1e-5));
  for (double sigma : {0.1, 0.5, 0.9, 0.99}) {
    const auto r = nu1(sigma);
    CHECK(r.abs_diff < 1e-10);
    CHECK(r.closed >= kPi - 1e-12);
    CHECK(r.closed <= 2.0 * kPi + 1e-12);
  }
  CHECK(nu1(0.999999).closed > 2.0 * kPi - 1e-2);

  CHECK_THAT(angular_cubed(0.0).closed, WithinAbs(kPi, 1e-14));
  CHECK_THAT(angular_cubed(0.9).closed, WithinRel(kPi / std::pow(0.19, 1.5), 1e-13));
  for (double sigma : {0.3, 0.6, 0.9, 0.99}) {
    const auto r = angular_cubed(sigma);
    CHECK(r.abs_diff < 1e-8 * r.closed);
  }
}

TEST_CASE("L2 norm identity: quadrature = mu1 nu1 |sigma_dot|^2") {
  const EccentricMap map(3.0, 1.0);
  const double m1 = mu1(map);
  for (double sigma : {0.2, 0.5, 0.8, 0.95}) {
    const double quad = l2_grad_psi_quadrature(map, sigma, -1.3);
    const double closed = m1 * nu1(sigma, false).closed * 1.3 * 1.3;
    CHECK_THAT(quad, WithinRel(closed, 1e-4));
  }
}

TEST_CASE("angular terms two and three cancel after integration by parts") {
  const EccentricMap map(3.0, 1.0);
  const double sigma = 0.7, gdot = -1.0;
  // T2 = pi int rho^2 (phi^2)' drho, T3 = 2 pi int rho phi^2 drho;
  // split at the cutoff kink so Gauss is polynomial-exact on each piece
  auto piecewise = [&](auto f) {
    return integrate_gauss(f, 0.0, 1.0, 24) + integrate_gauss(f, 1.0, 3.0, 24);
  };
  const double t2 = kPi * piecewise([&](double rho) {
    return rho * rho * 2.0 * map.phi(rho) * map.phi.d1(rho);
  });
  const double t3 =
      2.0 * kPi * piecewise([&](double rho) { return rho * map.phi(rho) * map.phi(rho); });
  const double total = l2_grad_psi_quadrature(map, sigma, gdot / 2.0);
  CHECK_THAT(t2 + t3, WithinAbs(0.0, 1e-8 * total));
}

TEST_CASE("Laplacian norm scales like (1 - sigma^2)^(-3/2)") {
  const EccentricMap map(3.0, 1.0);
  std::vector<double> xs, ys;
  for (double sigma : {0.9, 0.99, 0.999, 0.9999, 0.99999}) {
    xs.push_back(std::log(1.0 - sigma * sigma));
    ys.push_back(std::log(l2_laplacian_quadrature(map, sigma, -1.0)));
  }
  const LinearFit fit = linear_fit(xs, ys);
  CHECK_THAT(fit.slope, WithinAbs(-1.5, 0.05));
}

TEST_CASE("quartic family is admissible, linear is not") {
  const SigmaFamily quartic{SigmaFamily::Kind::Quartic, 1.0, 0.4};
  const auto aq = admissibility(quartic);
  CHECK(aq.admissible);
  CHECK(aq.l1_converged);
  // sup |sigma_dot| = 4 max(T*, T-T*)^3 / T^4
  CHECK_THAT(aq.sup_dsigma, WithinRel(4.0 * std::pow(0.6, 3), 1e-6));
  CHECK(std::isfinite(aq.l2_ddsigma));
  // exact power cancellation keeps the singular integrand bounded:
  // (1-sigma^2)^(-3/2) dsigma^2 = 16 u^6 / (u^4 (1+sigma))^(3/2) <= 16/T^2
  for (double t : {0.3999, 0.4, 0.41, 0.9}) {
    const double s = quartic.sigma(t), ds = quartic.dsigma(t);
    if (s < 1.0)
      CHECK(ds * ds / std::pow(1.0 - s * s, 1.5) <= 16.0 + 1e-9);
  }

  const SigmaFamily linear{SigmaFamily::Kind::Linear, 1.0, 0.4};
  const auto al = admissibility(linear);
  CHECK_FALSE(al.admissible);
  CHECK_FALSE(al.l1_converged);
  CHECK(al.refinement_ratio > 1.4);  // quadrature diverges under refinement
}
