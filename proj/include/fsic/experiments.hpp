#pragma once

// Named batch experiments: each one verifies a cluster of quantitative
// claims end to end and doubles as the acceptance suite. All tolerances are
// pinned here. Experiments write CSV/JSON artifacts under the output root
// (FSIC_OUT or --out) and report per-assertion pass/fail.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fsic/asymptotics.hpp"
#include "fsic/collidingflow.hpp"
#include "fsic/criteria.hpp"
#include "fsic/eulerflow.hpp"
#include "fsic/io.hpp"
#include "fsic/lubridyn.hpp"
#include "fsic/particles1d.hpp"
#include "fsic/testfield.hpp"

namespace fsic {

struct ExperimentContext {
  std::string out_dir = ".";
  unsigned seed = 42;

  std::string artifact_path(const std::string& file) const {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / file).string();
  }
};

namespace experiments {

constexpr double kPi = std::numbers::pi;

inline std::string num(double v) { return fmt_g(v); }

// 1. Three parameter triples per regime of the gap integral; power-law
// slopes within +-0.05 of (q+1)/(1+alpha) - s over h in [1e-6, 1e-2].
inline RunReport gap_integral_regimes(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "gap-integral-regimes";
  struct Triple {
    double alpha, q, s;
  };
  const Triple power[] = {{0.5, 0.0, 2.0}, {1.0, 0.0, 1.0}, {0.8, 1.0, 2.0}};
  const Triple logs[] = {{1.0, 1.0, 1.0}, {0.5, 0.5, 1.0}, {0.2, 0.2, 1.0}};
  const Triple bounded[] = {{1.0, 3.0, 1.0}, {0.5, 2.5, 1.5}, {0.3, 3.0, 2.0}};
  std::vector<std::vector<double>> rows;
  for (const auto& t : power) {
    const auto sweep = sweep_singular_gap_integral(t.alpha, t.q, t.s, 1.0, default_h_grid());
    const double want = (t.q + 1.0) / (1.0 + t.alpha) - t.s;
    rep.check("power-law slope (" + num(t.alpha) + "," + num(t.q) + "," + num(t.s) + ")",
              sweep.predicted.tag == RegimeTag::PowerLaw &&
                  std::abs(sweep.fit.exponent - want) <= 0.05,
              "fitted " + num(sweep.fit.exponent) + " vs " + num(want));
    rows.push_back({t.alpha, t.q, t.s, sweep.fit.exponent, want});
  }
  for (const auto& t : logs) {
    const auto sweep = sweep_singular_gap_integral(t.alpha, t.q, t.s, 1.0, default_h_grid());
    rep.check("log branch (" + num(t.alpha) + "," + num(t.q) + "," + num(t.s) + ")",
              sweep.predicted.tag == RegimeTag::Logarithmic && sweep.fit.logarithmic_branch &&
                  sweep.fit.r2_log > 0.99,
              "R2(log) = " + num(sweep.fit.r2_log));
    rows.push_back({t.alpha, t.q, t.s, sweep.fit.r2_log, 0.0});
  }
  for (const auto& t : bounded) {
    const auto sweep = sweep_singular_gap_integral(t.alpha, t.q, t.s, 1.0, default_h_grid());
    // compare the h = 1e-3 and h = 1e-6 values: < 5% once clear of critical
    double v3 = 0.0, best = 1e300;
    for (size_t i = 0; i < sweep.h.size(); ++i) {
      const double d = std::abs(std::log(sweep.h[i] / 1e-3));
      if (d < best) {
        best = d;
        v3 = sweep.value[i];
      }
    }
    const double v6 = sweep.value.back();
    const double vary = std::abs(v6 - v3) / v3;
    rep.check("bounded (" + num(t.alpha) + "," + num(t.q) + "," + num(t.s) + ")",
              sweep.predicted.tag == RegimeTag::Bounded && vary < 0.05,
              "rel change 1e-3 -> 1e-6: " + num(vary));
    rows.push_back({t.alpha, t.q, t.s, sweep.fit.exponent, 0.0});
  }
  const std::string csv = ctx.artifact_path("gap_integral_regimes.csv");
  write_csv(csv, "gap-integral-regimes", {"alpha", "q", "s", "fit", "expected"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 2. Squared-gradient norm slope -(3a-(d-2))/(1+a) on the film for
// (d, alpha) in {(3,1), (3,0.5), (2,1)}.
inline RunReport gradient_scaling(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "gradient-scaling";
  struct Case {
    int d;
    double alpha;
  };
  std::vector<std::vector<double>> rows;
  for (const Case c : {Case{3, 1.0}, Case{3, 0.5}, Case{2, 1.0}}) {
    const auto spec = TestFieldSpec::no_slip(ShapeProfile::power_law(c.alpha, c.d));
    std::vector<double> hs = log_grid(1e-6, 1e-3, 10);
    std::reverse(hs.begin(), hs.end());
    std::vector<double> vals;
    for (double h : hs) {
      const double n = lq_norm(spec, h, FieldQuantity::Gradient, 2.0, Region::Inner).value;
      vals.push_back(n * n);
      rows.push_back({double(c.d), c.alpha, h, n * n});
    }
    const double want = -(3.0 * c.alpha - (c.d - 2.0)) / (1.0 + c.alpha);
    const ScalingFit fit = fit_scaling(hs, vals);
    rep.check("slope d=" + std::to_string(c.d) + " alpha=" + num(c.alpha),
              std::abs(fit.exponent - want) <= 0.05,
              "fitted " + num(fit.exponent) + " vs " + num(want));
  }
  const std::string csv = ctx.artifact_path("gradient_scaling.csv");
  write_csv(csv, "gradient-scaling", {"d", "alpha", "h", "grad_norm_sq"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 3. Velocity-norm threshold at q = 1 + 3/alpha = 4 (alpha = 1, 3D):
// bounded below, divergent above, sampled property-style around the line.
inline RunReport norm_threshold(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "norm-threshold";
  const auto spec = TestFieldSpec::no_slip(ShapeProfile::power_law(1.0, 3));
  std::vector<double> hs = log_grid(1e-6, 1e-2, 9);
  std::reverse(hs.begin(), hs.end());
  auto sweep = [&](double q) {
    std::vector<double> v;
    for (double h : hs) v.push_back(lq_norm(spec, h, FieldQuantity::Velocity, q, Region::Inner).value);
    return v;
  };
  const auto below = sweep(3.9);
  const double vary39 =
      *std::max_element(below.begin(), below.end()) / *std::min_element(below.begin(), below.end());
  rep.check("q = 3.9 bounded", vary39 < 3.0, "variation factor " + num(vary39));
  const auto above = sweep(4.1);
  const double slope41 = fit_scaling(hs, above).exponent;
  rep.check("q = 4.1 divergent", slope41 < -0.01, "fitted exponent " + num(slope41));
  std::mt19937 rng(ctx.seed);
  std::uniform_real_distribution<double> lo(3.4, 3.85), hi(4.15, 4.6);
  for (int k = 0; k < 3; ++k) {
    const double qb = lo(rng);
    const auto vb = sweep(qb);
    const double vary =
        *std::max_element(vb.begin(), vb.end()) / *std::min_element(vb.begin(), vb.end());
    rep.check("random q = " + num(qb) + " below threshold bounded", vary < 3.0,
              "variation factor " + num(vary));
    const double qa = hi(rng);
    const double slope = fit_scaling(hs, sweep(qa)).exponent;
    rep.check("random q = " + num(qa) + " above threshold divergent", slope < -0.01,
              "fitted exponent " + num(slope));
  }
  return rep;
}

// 4. Slip algebra: partition of unity on 1000 random slip lengths, the
// no-slip limit of c(r), and both tangential boundary residuals.
inline RunReport slip_algebra(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "slip-algebra";
  const auto ball = ShapeProfile::spherical(3, 0.0, 0.5);
  std::mt19937 rng(ctx.seed);
  std::uniform_real_distribution<double> u(1e-3, 10.0), ur(0.05, 0.45);
  double worst_sum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto spec = TestFieldSpec::slip(ball, u(rng), u(rng));
    const auto sc = slip_coefficients(spec, 0.01, ur(rng));
    worst_sum = std::max(worst_sum, std::abs(sc.p1 + sc.p2 + sc.p3 - 1.0));
  }
  rep.check("P1+P2+P3 = 1 to 1e-12 on 1000 samples", worst_sum <= 1e-12,
            "worst |sum - 1| = " + num(worst_sum));

  const auto tiny = TestFieldSpec::slip(ball, 1e-10, 1e-10);
  double worst_c = 0.0;
  for (double r : {0.1, 0.2, 0.3, 0.4}) {
    const double psi = gap(ball.with_gap(0.01), r);
    const auto sc = slip_coefficients(tiny, 0.01, r);
    worst_c = std::max(worst_c, std::abs(sc.c / (3.0 * r / (2.0 * psi * psi)) - 1.0));
  }
  rep.check("c(r) -> 3r/(2 psi^2) limit to 1e-6", worst_c < 1e-6, "worst rel err " + num(worst_c));

  const auto spec = TestFieldSpec::slip(ball, 0.8, 1.7, 1.3);
  const double h = 0.02;
  double worst_res = 0.0;
  for (double r : {0.05, 0.15, 0.3, 0.45}) {
    const double psi = gap(ball.with_gap(h), r);
    const FilmCoeffs fc = film_coeffs(spec, h, r);
    auto d3 = [&](double x3) {
      return spec.pref() * r * (fc.b1.f.v + 2.0 * fc.b2.f.v * x3 + 3.0 * fc.b3.f.v * x3 * x3);
    };
    auto d33 = [&](double x3) {
      return spec.pref() * r * (2.0 * fc.b2.f.v + 6.0 * fc.b3.f.v * x3);
    };
    const double wall = spec.mu * spec.beta_omega * d33(0.0) - d3(0.0);
    const double kap = std::sqrt(1.0 - r * r) / (1.0 - 2.0 * r * r);
    const double body = d33(psi) + (2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * d3(psi);
    worst_res = std::max({worst_res, std::abs(wall), std::abs(body)});
  }
  rep.check("boundary residuals < 1e-10", worst_res < 1e-10, "worst " + num(worst_res));
  return rep;
}

// 5. Drag dichotomy: ball slope -1 with constant within 20% of 6 pi,
// slip-both linear in |log h| with R^2 > 0.99, alpha = 0.2 bounded.
inline RunReport drag_dichotomy(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "drag-dichotomy";
  std::vector<std::vector<double>> rows;

  const auto ball = TestFieldSpec::no_slip(ShapeProfile::spherical(3));
  std::vector<double> hs = log_grid(1e-6, 1e-3, 8);
  std::reverse(hs.begin(), hs.end());
  std::vector<double> dv;
  for (double h : hs) {
    dv.push_back(drag_energy(ball, h).value);
    rows.push_back({0.0, h, dv.back()});
  }
  const ScalingFit fit = fit_scaling(hs, dv);
  rep.check("spherical slope -1 +- 0.05", std::abs(fit.exponent + 1.0) <= 0.05,
            "fitted " + num(fit.exponent));
  const double lead = dv.back() * hs.back();
  rep.check("leading constant within 20% of 6 pi",
            std::abs(lead / (6.0 * kPi) - 1.0) <= 0.2, "measured " + num(lead));

  const auto slip = TestFieldSpec::slip(ShapeProfile::spherical(3), 1.0, 1.0);
  std::vector<double> logs, ds;
  for (double h : hs) {
    ds.push_back(drag_energy(slip, h).value);
    logs.push_back(std::abs(std::log(h)));
    rows.push_back({1.0, h, ds.back()});
  }
  const LinearFit lf = linear_fit(logs, ds);
  rep.check("slip-both linear in |log h| with R2 > 0.99", lf.r2 > 0.99, "R2 = " + num(lf.r2));

  const auto blunt = TestFieldSpec::no_slip(ShapeProfile::power_law(0.2, 3));
  const double d3 = drag_energy(blunt, 1e-3).value;
  const double d5 = drag_energy(blunt, 1e-5).value;
  rows.push_back({2.0, 1e-3, d3});
  rows.push_back({2.0, 1e-5, d5});
  rep.check("alpha = 0.2 bounded within 10% over two decades",
            std::abs(d5 - d3) / d3 < 0.10, "rel change " + num(std::abs(d5 - d3) / d3));

  const std::string csv = ctx.artifact_path("drag_dichotomy.csv");
  write_csv(csv, "drag-dichotomy", {"case", "h", "drag"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 6. Reduced-ODE fall dichotomy plus the exponential envelope at beta = 1.
inline RunReport fall_dichotomy(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "fall-dichotomy";
  ContactParams params;
  params.rho_s = 2.0;
  params.rho_f = 1.0;

  auto contact_of = [&](const DragLaw& law, double t_max) {
    return integrate_fall(law, params, 0.05, 0.0, t_max);
  };
  const auto blunt =
      drag_law_for(params, ShapeProfile::power_law(0.2, 3));
  rep.check("no-slip alpha = 0.2 (constant drag): contact",
            contact_of(blunt, 500.0).contact.has_value(), "");
  const DragLaw log_law{DragRegime::Log, 0.0, 1.0};
  rep.check("slip-both (log drag): contact", contact_of(log_law, 1e4).contact.has_value(), "");
  const DragLaw const_law{DragRegime::Const, 0.0, 3.0};
  const auto ctraj = contact_of(const_law, 500.0);
  rep.check("constant drag: contact with nonzero speed",
            ctraj.contact && ctraj.contact->impact_speed < 0.0, "");
  for (double alpha : {0.5, 0.8}) {
    const auto law = drag_law_for(params, ShapeProfile::power_law(alpha, 3));
    rep.check("no-slip alpha = " + num(alpha) + " (beta < 1): contact",
              contact_of(law, 2000.0).contact.has_value(), "");
  }

  const auto ball_law = drag_law_for(params, ShapeProfile::spherical(3, 0.0, 0.5));
  const auto ball_traj = contact_of(ball_law, 50.0);
  rep.check("ball no-slip (beta = 1): no contact", !ball_traj.contact.has_value(), "");
  ContactParams mixed_p = params;
  mixed_p.bc = BoundaryCondition::SlipMixed;
  const auto mixed_law = drag_law_for(mixed_p, ShapeProfile::spherical(3, 0.0, 0.5));
  rep.check("mixed slip (beta = 1): no contact",
            !contact_of(mixed_law, 50.0).contact.has_value(), "");

  // envelope h(t) >= C exp(-a t - b sqrt t) fitted on the ball trajectory
  std::vector<double> ones, ts, sq, lh;
  for (size_t i = 0; i < ball_traj.t.size(); ++i) {
    if (ball_traj.t[i] < 1.0) continue;
    ones.push_back(1.0);
    ts.push_back(ball_traj.t[i]);
    sq.push_back(std::sqrt(ball_traj.t[i]));
    lh.push_back(std::log(ball_traj.h[i]));
  }
  const auto coef = least_squares({ones, ts, sq}, lh);
  double max_resid = 0.0;
  for (size_t i = 0; i < ts.size(); ++i)
    max_resid = std::max(max_resid,
                         std::abs(coef[0] + coef[1] * ts[i] + coef[2] * sq[i] - lh[i]));
  rep.check("beta = 1 exponential envelope shape", max_resid < 1e-3 && coef[1] < 0.0,
            "max log-residual " + num(max_resid));

  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < ball_traj.t.size(); ++i)
    rows.push_back({ball_traj.t[i], ball_traj.h[i], ball_traj.hdot[i], ball_traj.drag[i]});
  const std::string csv = ctx.artifact_path("fall_ball_trajectory.csv");
  write_csv(csv, "fall-dichotomy", {"t", "h", "hdot", "D(h)"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 7. Contact-rate algebra in closed form, exact to 1e-12.
inline RunReport contact_rate_algebra(const ExperimentContext&) {
  RunReport rep;
  rep.experiment = "contact-rate-algebra";
  const auto b = starovoitov_beta(1.0, 2.0, 3);
  rep.check("beta(d=3, p=2, alpha=1) = 1/2", std::abs(b.beta - 0.5) <= 1e-12, num(b.beta));
  const auto b0 = starovoitov_beta(1.0 / 3.0, 2.0, 3);
  rep.check("beta vanishes at alpha = 1/3", std::abs(b0.beta) <= 1e-12, num(b0.beta));
  const auto bm = starovoitov_beta(1.0 / 3.0 - 1e-9, 2.0, 3);
  const auto bp = starovoitov_beta(1.0 / 3.0 + 1e-9, 2.0, 3);
  rep.check("beta changes sign at alpha = 1/3", bm.beta < 0.0 && bp.beta > 0.0, "");
  const double eta = starovoitov_rate(1.0, 2.0, 2.0, 3);
  rep.check("eta(d=3, p=q=2, alpha=1) = 1/4", std::abs(eta - 0.25) <= 1e-12, num(eta));
  return rep;
}

// 8. Compressible criteria: exact threshold, infeasibility, ordering chain.
inline RunReport compressible_criteria(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "compressible-criteria";
  const auto a = compressible_alpha_bound(6.0, 2.0, 3, true);
  rep.check("alpha bound (gamma=6, p=2, 3D convective) = 1/3",
            a.feasible && std::abs(a.bound - 1.0 / 3.0) <= 1e-15, num(a.bound));
  rep.check("(gamma=2, p=2) infeasible", !compressible_alpha_bound(2.0, 2.0, 3, true).feasible,
            "");
  bool chain = true;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 20; ++i) {
    const double gamma = 1.5 + (6.0 - 1.5) * (i + 0.5) / 20.0;
    const double p_lo = gamma / (gamma - 1.0);
    if (p_lo >= 3.0) continue;
    for (int j = 0; j < 20; ++j) {
      const double p = p_lo + (3.0 - p_lo) * (j + 0.5) / 20.0;
      const double f1 =
          3.0 * (4.0 * p * gamma - 3.0 * p - 6.0 * gamma) / (p * gamma + 3.0 * p + 6.0 * gamma);
      const double f2 =
          9.0 * (p * gamma - p - gamma) / (2.0 * p * gamma + 3.0 * p + 3.0 * gamma);
      const double f3 = 3.0 * (gamma - 1.0) / (gamma + 1.0);
      chain = chain && f1 <= f2 + 1e-12 && f2 <= f3 + 1e-12 && f3 <= 3.0 * (gamma - 1.0) + 1e-12;
      rows.push_back({gamma, p, f1, f2, f3});
    }
  }
  rep.check("ordering chain on the 20x20 grid", chain, "");
  const std::string csv = ctx.artifact_path("criteria_chain.csv");
  write_csv(csv, "compressible-criteria", {"gamma", "p", "convective", "stokes", "cap"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 9. Annulus energies: limits, series-vs-quadrature, damping limit.
inline RunReport annulus_energy(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "annulus-energy";
  const double e1 = kPi * kPi * kPi / 3.0 - kPi;
  const double e_small = added_mass_energy(1e-8).value;
  rep.check("E(sigma -> 0) = pi +- 1e-6", std::abs(e_small - kPi) <= 1e-6, num(e_small));
  const double e999 = added_mass_energy(0.999).value;
  rep.check("E(0.999) within 1% of pi^3/3 - pi", std::abs(e999 / e1 - 1.0) <= 0.01, num(e999));
  std::vector<std::vector<double>> rows;
  for (double sigma : {0.3, 0.6, 0.9}) {
    const double series = added_mass_energy(sigma).value;
    const double quad = added_mass_energy_quadrature(sigma);
    rows.push_back({sigma, series, quad});
    rep.check("series vs annulus quadrature at sigma = " + num(sigma),
              std::abs(quad / series - 1.0) <= 1e-6,
              "rel diff " + num(std::abs(quad / series - 1.0)));
  }
  const double limit = 1.0 / std::sqrt(kPi * kPi / 3.0 - 1.0);
  const double ratio = damping_ratio(kPi, 1e8, 1e4);
  rep.check("damping limit ratio 0.66084 +- 1e-3",
            std::abs(ratio - 0.66084) <= 1e-3 && std::abs(ratio - limit) <= 1e-3, num(ratio));
  const std::string csv = ctx.artifact_path("annulus_energy.csv");
  write_csv(csv, "annulus-energy", {"sigma", "series", "quadrature"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 10. Euler collision: finite contact time, exact speed ratio, conservation.
inline RunReport euler_collision(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "euler-collision";
  const double m = kPi, rho_f = 1.0, h0 = 1.0, v0 = -1.0;
  const auto fall = euler_fall(m, rho_f, h0, v0);
  rep.check("contact in finite time", fall.contact && std::isfinite(fall.t_star),
            "T* = " + num(fall.t_star));
  rep.check("impact speed negative", fall.impact_speed < 0.0, num(fall.impact_speed));
  const double want = std::sqrt((m + rho_f * added_mass_at_gap(h0)) /
                                (m + rho_f * (kPi * kPi * kPi / 3.0 - kPi)));
  rep.check("speed ratio matches the conserved form to 1e-8",
            std::abs(fall.speed_ratio - want) <= 1e-8, num(fall.speed_ratio));
  rep.check("conserved quantity drift < 1e-9", fall.conservation_error < 1e-9,
            num(fall.conservation_error));
  nlohmann::json j{{"schema", 1},
                   {"t_star", fall.t_star},
                   {"impact_speed", fall.impact_speed},
                   {"speed_ratio", fall.speed_ratio}};
  const std::string path = ctx.artifact_path("euler_contact.json");
  std::ofstream(path) << j.dump(2) << "\n";
  rep.artifacts.push_back(path);
  return rep;
}

// 11. Colliding-flow identities and the admissibility dichotomy.
inline RunReport colliding_flow_identities(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "colliding-flow-identities";
  double worst_nu = 0.0;
  for (double sigma : {0.1, 0.5, 0.9, 0.99}) worst_nu = std::max(worst_nu, nu1(sigma).abs_diff);
  rep.check("nu1 closed form vs quadrature to 1e-10 (sigma <= 0.99)", worst_nu <= 1e-10,
            num(worst_nu));
  double worst_cubed = 0.0;
  for (double sigma : {0.3, 0.6, 0.9}) {
    const auto r = angular_cubed(sigma);
    worst_cubed = std::max(worst_cubed, r.abs_diff / r.closed);
  }
  rep.check("cubed angular integral = pi (1-sigma^2)^(-3/2) to 1e-8", worst_cubed <= 1e-8,
            num(worst_cubed));

  const EccentricMap map(3.0, 1.0);
  const double m1 = mu1(map);
  double worst_i4 = 0.0;
  for (double sigma : {0.2, 0.5, 0.8, 0.95}) {
    const double quad = l2_grad_psi_quadrature(map, sigma, -1.0);
    const double closed = m1 * nu1(sigma, false).closed;
    worst_i4 = std::max(worst_i4, std::abs(quad / closed - 1.0));
  }
  rep.check("L2 identity to 1e-4", worst_i4 <= 1e-4, "worst rel " + num(worst_i4));

  std::vector<double> xs, ys;
  std::vector<std::vector<double>> rows;
  for (double sigma : {0.9, 0.99, 0.999, 0.9999, 0.99999}) {
    const double v = l2_laplacian_quadrature(map, sigma, -1.0);
    xs.push_back(std::log(1.0 - sigma * sigma));
    ys.push_back(std::log(v));
    rows.push_back({sigma, v});
  }
  const LinearFit lap_fit = linear_fit(xs, ys);
  rep.check("Laplacian norm exponent -3/2 +- 0.05 in (1 - sigma^2)",
            std::abs(lap_fit.slope + 1.5) <= 0.05, "fitted " + num(lap_fit.slope));

  const auto quartic = admissibility(SigmaFamily{SigmaFamily::Kind::Quartic, 1.0, 0.4});
  rep.check("quartic family passes all three functionals",
            quartic.admissible && std::isfinite(quartic.sup_dsigma) &&
                std::isfinite(quartic.l2_ddsigma),
            "");
  const auto linear = admissibility(SigmaFamily{SigmaFamily::Kind::Linear, 1.0, 0.4});
  rep.check("linear family fails the integrability functional", !linear.l1_converged,
            "refinement ratio " + num(linear.refinement_ratio));

  const std::string csv = ctx.artifact_path("colliding_flow_norms.csv");
  write_csv(csv, "colliding-flow-identities", {"sigma", "laplacian_norm_sq"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

// 12. Two-particle Burgers benchmark: positivity, dissipation, mesh-stable
// gradient norms, and the backward envelope. kappa = 1, T = 10.
inline RunReport burgers_two_particle(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "burgers-two-particle";
  auto profile = [](double x) {
    const double d = 0.25, s = 1.0;
    if (x <= -s || x >= s) return 0.0;
    if (x <= -d) return (x + s) / (s - d);
    if (x >= d) return -(s - x) / (s - d);
    return -x / d;
  };
  std::vector<double> grad_l2;
  std::vector<double> final_gap;
  for (int n : {16, 24, 36}) {
    Solver1DConfig cfg;
    cfg.kappa = 1.0;
    cfg.L = 20.0;
    cfg.nodes_per_unit = n;
    ParticleSystem1D sys(profile, {{-0.25, 1.0, 1.0}, {0.25, -1.0, 1.0}}, cfg);
    sys.run(10.0);
    bool positive = true, dissipative = true;
    const double e0 = sys.history().front().energy;
    for (size_t k = 0; k < sys.history().size(); ++k) {
      positive = positive && sys.history()[k].min_gap > 0.0;
      if (k + 1 < sys.history().size())
        dissipative =
            dissipative && sys.history()[k + 1].energy <= sys.history()[k].energy + 1e-8 * e0;
    }
    rep.check("mesh " + std::to_string(n) + ": gap positive for all steps", positive, "");
    rep.check("mesh " + std::to_string(n) + ": energy nonincreasing (tol 1e-8 E0/step)",
              dissipative, "");
    const auto gw = gronwall_gap_check(sys.history());
    rep.check("mesh " + std::to_string(n) + ": gap above the backward envelope", gw.holds,
              "min margin " + num(gw.min_margin));
    grad_l2.push_back(gw.grad_l2_time);
    final_gap.push_back(sys.min_gap());
    if (n == 36) {
      std::vector<std::vector<double>> rows;
      for (const auto& r : sys.history())
        rows.push_back({r.t, r.h[0], r.h[1], r.hdot[0], r.hdot[1], r.energy, r.min_gap,
                        r.grad_sup});
      const std::string csv = ctx.artifact_path("burgers_two_particle.csv");
      write_csv(csv, "burgers-two-particle",
                {"t", "h1", "h2", "hdot1", "hdot2", "E", "min_gap", "grad_sup"}, rows);
      rep.artifacts.push_back(csv);
    }
  }
  const double stability = std::abs(grad_l2[2] - grad_l2[1]) / grad_l2[2];
  rep.check("int ||u_x||_inf^2 dt mesh-stable within 5%", stability < 0.05, num(stability));
  rep.check("limiting gap positive", final_gap[2] > 1e-4,
            "finest-mesh final gap " + num(final_gap[2]));
  return rep;
}

// 13. Tresca schedule: brackets for n <= 50, finite T* bound, exact t0.
inline RunReport tresca_schedule_exp(const ExperimentContext& ctx) {
  RunReport rep;
  rep.experiment = "tresca-schedule";
  const double h0 = 0.01, g = 9.81, sigma = 0.25;
  const auto s = tresca_schedule(h0, g, sigma, 2e5, 1.0, 1.0, 50);
  rep.check("parameters admissible", s.admissible(), "");
  bool bracket = true;
  for (size_t n = 0; n < s.lower.size(); ++n)
    bracket = bracket && s.lower[n] <= s.h_repr[n] && s.h_repr[n] <= s.upper[n] &&
              s.lower[n] <= s.upper[n];
  rep.check("bracket holds for n <= 50", bracket, "");
  rep.check("T* upper bound finite and beyond the sequence",
            std::isfinite(s.t_star_upper) && s.t_star_upper > s.t.back(), num(s.t_star_upper));
  const double t0 = 0.25 * std::sqrt(h0 / g);
  rep.check("t0 formula exact", std::abs(s.t.front() - t0) <= 1e-15 * t0, num(s.t.front()));
  std::vector<std::vector<double>> rows;
  for (size_t n = 0; n < s.lower.size(); ++n)
    rows.push_back({double(n), s.t[n], s.lower[n], s.h_repr[n], s.upper[n]});
  const std::string csv = ctx.artifact_path("tresca_schedule.csv");
  write_csv(csv, "tresca-schedule", {"n", "t", "lower", "h", "upper"}, rows);
  rep.artifacts.push_back(csv);
  return rep;
}

}  // namespace experiments

struct ExperimentEntry {
  std::string name;
  std::string summary;
  int criterion;
  RunReport (*fn)(const ExperimentContext&);
};

inline const std::vector<ExperimentEntry>& experiment_registry() {
  static const std::vector<ExperimentEntry> registry = {
      {"gap-integral-regimes",
       "nine (alpha,q,s) triples reproduce the power/log/bounded trichotomy of the gap integral",
       1, &experiments::gap_integral_regimes},
      {"gradient-scaling",
       "film gradient norm squared scales like h^-(3a-(d-2))/(1+a) for (3,1), (3,0.5), (2,1)", 2,
       &experiments::gradient_scaling},
      {"norm-threshold",
       "velocity L^q norm bounded below q = 1+3/alpha = 4 and divergent above it", 3,
       &experiments::norm_threshold},
      {"slip-algebra",
       "slip profile coefficients sum to one, reach the no-slip limit, and kill both "
       "tangential boundary residuals",
       4, &experiments::slip_algebra},
      {"drag-dichotomy",
       "spherical drag 6pi/h, slip-both drag linear in |log h|, blunt-shape drag bounded", 5,
       &experiments::drag_dichotomy},
      {"fall-dichotomy",
       "gap ODE reaches contact exactly when the drag exponent is below one; exponential "
       "envelope at exponent one",
       6, &experiments::fall_dichotomy},
      {"contact-rate-algebra", "closed-form contact exponents beta and eta", 7,
       &experiments::contact_rate_algebra},
      {"compressible-criteria",
       "roughness thresholds: exact value, infeasibility window, ordering chain", 8,
       &experiments::compressible_criteria},
      {"annulus-energy",
       "added-mass energy limits pi and pi^3/3 - pi, series vs quadrature, damping limit 0.66",
       9, &experiments::annulus_energy},
      {"euler-collision", "finite-time inviscid contact with the conserved speed ratio", 10,
       &experiments::euler_collision},
      {"colliding-flow-identities",
       "angular integrals, the L2 identity, Laplacian-norm scaling, admissibility dichotomy",
       11, &experiments::colliding_flow_identities},
      {"burgers-two-particle",
       "two approaching particles never collide: positivity, dissipation, mesh-stable norms, "
       "backward envelope",
       12, &experiments::burgers_two_particle},
      {"tresca-schedule", "contact-time sequence brackets and the finite limit bound", 13,
       &experiments::tresca_schedule_exp},
  };
  return registry;
}

inline RunReport run_experiment(const std::string& name, const ExperimentContext& ctx) {
  for (const auto& e : experiment_registry()) {
    if (e.name != name) continue;
    const auto start = std::chrono::steady_clock::now();
    RunReport rep = e.fn(ctx);
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
  }
  throw UsageError("unknown experiment '" + name + "' (see `experiments list`)");
}

}  // namespace fsic
