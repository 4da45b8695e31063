#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fsic/particles1d.hpp"

using namespace fsic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// odd, compactly supported ramp: +1 at -d, -1 at +d, linear between,
// decaying to 0 at +-1 outside


double two_particle_profile(double x, double d) {
  const double s = 1.0;  // support radius
  if (x <= -s || x >= s) return 0.0;
  if (x <= -d) return (x + s) / (s - d);
  if (x >= d) return -(s - x) / (s - d);
  return -x / d;
}

ParticleSystem1D make_benchmark(int nodes_per_unit, double gap = 0.5, double kappa = 1.0) {
  Solver1DConfig cfg;
  cfg.kappa = kappa;
  cfg.L = 20.0;
  cfg.nodes_per_unit = nodes_per_unit;
  const double d = gap / 2.0;
  auto u0 = [d](double x) { return two_particle_profile(x, d); };
  return ParticleSystem1D(u0, {{-d, 1.0, 1.0}, {d, -1.0, 1.0}}, cfg);
}

}  // namespace

TEST_CASE("init validates compatibility and ordering") {
  Solver1DConfig cfg;
  cfg.L = 5.0;
  auto zero = [](double) { return 0.0; };
  CHECK_NOTHROW(ParticleSystem1D(zero, {{0.0, 0.0, 1.0}}, cfg));
  // incompatible velocity at index 1
  try {
    ParticleSystem1D(zero, {{-1.0, 0.0, 1.0}, {1.0, 0.5, 1.0}}, cfg);
    FAIL("expected incompatibility rejection");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
  CHECK_THROWS_AS(ParticleSystem1D(zero, {{1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}}, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(ParticleSystem1D(zero, {{0.0, 0.0, -1.0}}, cfg), std::domain_error);
  // hat profile with particles on its slope: compatibility to machine precision
  auto hat = [](double x) { return std::max(0.0, 1.0 - std::abs(x)); };
  CHECK_NOTHROW(ParticleSystem1D(hat, {{-0.5, 0.5, 1.0}, {0.5, 0.5, 1.0}}, cfg));
}

TEST_CASE("zero state stays zero") {
  Solver1DConfig cfg;
  cfg.L = 5.0;
  auto zero = [](double) { return 0.0; };
  ParticleSystem1D sys(zero, {{0.0, 0.0, 1.0}}, cfg);
  sys.run(0.5);
  CHECK_THAT(sys.positions()[0], WithinAbs(0.0, 1e-14));
  CHECK_THAT(sys.velocities()[0], WithinAbs(0.0, 1e-14));
  CHECK_THAT(sys.energy(), WithinAbs(0.0, 1e-16));
}

TEST_CASE("odd initial data keeps a single particle at rest") {
  Solver1DConfig cfg;
  cfg.L = 8.0;
  cfg.nodes_per_unit = 24;
  auto odd = [](double x) {
    return x * std::exp(-x * x);
  };
  ParticleSystem1D sys(odd, {{0.0, 0.0, 1.0}}, cfg);
  sys.run(1.0);
  CHECK_THAT(sys.positions()[0], WithinAbs(0.0, 1e-10));
  CHECK_THAT(sys.velocities()[0], WithinAbs(0.0, 1e-10));
}

TEST_CASE("energy audit: nonincreasing within the per-step tolerance") {
  auto sys = make_benchmark(24);
  sys.run(3.0);
  const auto& hist = sys.history();
  const double e0 = hist.front().energy;
  for (size_t k = 0; k + 1 < hist.size(); ++k) {
    CHECK(hist[k + 1].energy <= hist[k].energy + 1e-8 * e0);
  }
  CHECK(hist.back().energy < e0);  // viscosity dissipates
}

TEST_CASE("energy identity: dE/dt tracks -int u_x^2") {
  auto sys = make_benchmark(48);
  const double t_end = 0.5;
  sys.run(t_end);
  const auto& hist = sys.history();
  // compare total dissipated energy with the trapezoid of int u_x^2 dt
  double dissipated = 0.0;
  for (size_t k = 0; k + 1 < hist.size(); ++k) {
    const double dt = hist[k + 1].t - hist[k].t;
    dissipated += 0.5 * dt * (hist[k].dissipation + hist[k + 1].dissipation);
  }
  const double drop = hist.front().energy - hist.back().energy;
  CHECK_THAT(drop, WithinRel(dissipated, 0.02));
}

TEST_CASE("two approaching particles never collide; envelope and grad norms hold") {
  std::vector<double> final_gaps, grad_l2;
  for (int n : {16, 24, 36}) {
    auto sys = make_benchmark(n);
    sys.run(10.0);
    CHECK(sys.min_gap() > 0.0);
    for (const auto& rec : sys.history()) {
      CHECK(rec.min_gap > 0.0);
      // ordering preserved throughout
      for (size_t i = 0; i + 1 < rec.h.size(); ++i) CHECK(rec.h[i] < rec.h[i + 1]);
    }
    const auto gw = gronwall_gap_check(sys.history());
    CHECK(gw.holds);
    CHECK(std::isfinite(gw.grad_l2_time));
    final_gaps.push_back(sys.min_gap());
    grad_l2.push_back(gw.grad_l2_time);
  }
  // mesh stability: int ||u_x||_inf^2 dt within 5% between the finest meshes
  CHECK(std::abs(grad_l2[2] - grad_l2[1]) / grad_l2[2] < 0.05);
  // the limiting gap is positive: successive refinements agree and stay away from 0
  CHECK(std::abs(final_gaps[2] - final_gaps[1]) < 0.5 * final_gaps[2]);
  CHECK(final_gaps[2] > 1e-4);
}

TEST_CASE("convergence under mesh refinement is at least first order") {
  auto coarse = make_benchmark(12);
  auto mid = make_benchmark(24);
  auto fine = make_benchmark(48);
  const double t_end = 0.5;
  coarse.run(t_end);
  mid.run(t_end);
  fine.run(t_end);
  auto l2_diff = [&](ParticleSystem1D& a, ParticleSystem1D& b) {
    double acc = 0.0;
    const int samples = 1600;
    for (int i = 0; i <= samples; ++i) {
      const double x = -20.0 + 40.0 * i / samples;
      const double d = a.sample_u(x) - b.sample_u(x);
      acc += d * d;
    }
    return std::sqrt(acc * 40.0 / samples);
  };
  const double e_coarse = l2_diff(coarse, fine);
  const double e_mid = l2_diff(mid, fine);
  const double order = std::log2(e_coarse / e_mid);
  CHECK(order >= 1.0);
}

TEST_CASE("interpolation inequality with jumps") {
  // smooth field, no jumps
  JumpField smooth;
  for (int i = 0; i <= 400; ++i) {
    const double x = -5.0 + 10.0 * i / 400.0;
    smooth.x.push_back(x);
    smooth.f.push_back(std::exp(-x * x));
  }
  const auto sc = interp_inequality_check(smooth);
  CHECK(sc.holds);

  // pure step of height a: the jump side dominates
  JumpField step;
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 2.0 * i / 100.0;
    step.x.push_back(x);
    step.f.push_back(x < 0 ? 0.0 : 0.0);
  }
  step.amplitudes.push_back(2.5);
  step.sup_norm = 2.5;
  const auto st = interp_inequality_check(step);
  CHECK(st.holds);
  CHECK_THAT(st.rhs, WithinRel(2.0 * 2.5 * 2.5, 1e-12));

  // solver snapshot: f = u_x with jump amplitudes m hddot
  auto sys = make_benchmark(32);
  sys.run(0.4);
  const auto snap = sys.gradient_snapshot();
  CHECK(snap.amplitudes.size() == 2);
  const auto check = interp_inequality_check(snap);
  CHECK(check.holds);
  CHECK(check.margin >= 0.0);
}

TEST_CASE("gradient snapshot jumps equal the particle forces") {
  auto sys = make_benchmark(32);
  sys.run(0.2);
  for (size_t i = 0; i < 2; ++i) {
    CHECK_THAT(sys.jump_force(i),
               WithinAbs(sys.gradient_right(i) - sys.gradient_left(i), 1e-14));
  }
  // symmetric approach: forces push the particles apart symmetrically
  CHECK_THAT(sys.jump_force(0), WithinAbs(-sys.jump_force(1), 1e-6));
}
