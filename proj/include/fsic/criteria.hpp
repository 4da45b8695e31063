#pragma once

// Collision / no-collision decision predicates: admissible roughness windows
// for compressible fluids, Starovoitov's contact-rate algebra, the
// incompressible Newtonian dichotomy, and the feedback-control guarantee.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace fsic {

enum class BoundaryCondition { NoSlip, SlipBoth, SlipMixed, Tresca };

struct ContactParams {
  double mu = 1.0;      // fluid viscosity
  double rho_f = 1.0;   // fluid density
  double rho_s = 2.0;   // solid density
  double m = 1.0;       // solid mass
  double g = 1.0;       // gravity
  double gamma = 2.0;   // adiabatic exponent
  double p = 2.0;       // stress growth exponent
  int d = 3;
  bool includes_convection = true;
  BoundaryCondition bc = BoundaryCondition::NoSlip;

  void validate() const {
    if (rho_s <= 0.0 || m <= 0.0) throw std::domain_error("ContactParams: rho_s, m must be > 0");
    if (gamma <= 1.0 || p <= 1.0) throw std::domain_error("ContactParams: gamma, p must exceed 1");
    if (d != 2 && d != 3) throw std::domain_error("ContactParams: d must be 2 or 3");
  }
};

struct EnergyBudget {
  double fluid_kinetic = 0.0;      // int |m0|^2 / (2 rho0)
  double pressure_potential = 0.0; // int P(rho0, theta0)
  double solid_kinetic = 0.0;      // m |V0|^2 / 2
  double rotational = 0.0;         // J w0 . w0 / 2
  double total() const {
    if (fluid_kinetic < 0 || pressure_potential < 0 || solid_kinetic < 0 || rotational < 0)
      throw std::domain_error("EnergyBudget: components must be nonnegative");
    return fluid_kinetic + pressure_potential + solid_kinetic + rotational;
  }
};

struct AlphaBound {
  bool feasible = false;
  double bound = 0.0;  // admissible alpha threshold when feasible
};

// Roughness thresholds under which collision is concluded for compressible
// fluids. d=3 with convection needs (3/2 < gamma <= 3, 6g/(4g-3) < p < 3) or
// (gamma > 3, 2 <= p < 3); dropping convection relaxes to gamma/(gamma-1) < p < 3;
// d=2 is covered without convection only, gamma > 2.
inline AlphaBound compressible_alpha_bound(double gamma, double p, int d, bool convection) {
  if (gamma <= 1.0 || p <= 1.0) throw std::domain_error("compressible_alpha_bound: gamma, p > 1");
  if (d != 2 && d != 3) throw std::domain_error("compressible_alpha_bound: d must be 2 or 3");
  if (d == 3) {
    if (convection) {
      const bool window = (gamma > 1.5 && gamma <= 3.0 && p > 6.0 * gamma / (4.0 * gamma - 3.0) && p < 3.0) ||
                          (gamma > 3.0 && p >= 2.0 && p < 3.0);
      if (!window) return {};
      const double diffusive = (3.0 - p) / (2.0 * p - 1.0);
      const double convective =
          3.0 * (4.0 * p * gamma - 3.0 * p - 6.0 * gamma) / (p * gamma + 3.0 * p + 6.0 * gamma);
      return {true, std::min(diffusive, convective)};
    }
    const bool window = gamma > 1.5 && p > gamma / (gamma - 1.0) && p < 3.0;
    if (!window) return {};
    const double diffusive = (3.0 - p) / (2.0 * p - 1.0);
    const double stokes =
        9.0 * (p * gamma - p - gamma) / (2.0 * p * gamma + 3.0 * p + 3.0 * gamma);
    return {true, std::min(diffusive, stokes)};
  }
  if (convection) return {};  // 2D convective term needs p >= 2, incompatible with p < 2
  const bool window = gamma > 2.0 && p > gamma / (gamma - 1.0) && p < 2.0;
  if (!window) return {};
  const double diffusive = (2.0 - p) / (2.0 * p - 1.0);
  const double stokes = 4.0 * (p * gamma - p - gamma) / (p * gamma + 2.0 * p + 2.0 * gamma);
  return {true, std::min(diffusive, stokes)};
}

// Heat-conducting branch with viscosity growing in the temperature;
// beta_heat is the heat-conductivity growth exponent.
inline AlphaBound temperature_growing_alpha_bound(double gamma, double beta_heat) {
  if (!(gamma > 3.0) || !(beta_heat > 2.0)) return {};
  return {true, std::min(3.0 * (gamma - 3.0) / (4.0 * gamma + 3.0),
                         3.0 * (beta_heat - 2.0) / (9.0 * beta_heat + 2.0))};
}

// Large-mass / small-energy gate: C0 max(m^-1/2, m^-3/2)(1 + E0^(1/2+1/g+1/p)) < 1.
// C0 is a calibration constant the theory leaves implicit; it must be supplied.
inline bool mass_threshold(double m, double E0, double gamma, double p, double C0) {
  if (m <= 0.0 || E0 < 0.0 || gamma <= 1.0 || p <= 1.0 || C0 <= 0.0)
    throw std::domain_error("mass_threshold: need m, C0 > 0, E0 >= 0, gamma, p > 1");
  const double mass_factor = std::max(std::pow(m, -0.5), std::pow(m, -1.5));
  return C0 * mass_factor * (1.0 + std::pow(E0, 0.5 + 1.0 / gamma + 1.0 / p)) < 1.0;
}

struct StarovoitovBeta {
  double beta = 0.0;
  bool collision_possible = false;  // beta < 1, equivalently alpha(p-1) < d
};

inline StarovoitovBeta starovoitov_beta(double alpha, double p, int d) {
  if (alpha < 0.0 || alpha > 1.0 || p < 1.0 || (d != 2 && d != 3))
    throw std::domain_error("starovoitov_beta: alpha in [0,1], p >= 1, d in {2,3}");
  StarovoitovBeta r;
  r.beta = 2.0 - (1.0 + (d - 1.0) / p) / (1.0 + alpha) - 1.0 / p;
  r.collision_possible = r.beta < 1.0;
  return r;
}

// Contact rate: h(t) = o(|t - T*|^eta) with eta = (q-1)/q * (d - alpha(p-1)) / ((1+alpha) p).
inline double starovoitov_rate(double alpha, double p, double q, int d) {
  if (q < 1.0) throw std::domain_error("starovoitov_rate: q >= 1");
  const StarovoitovBeta b = starovoitov_beta(alpha, p, d);
  if (!b.collision_possible)
    throw std::domain_error("starovoitov_rate: rate undefined for beta >= 1");
  return (q - 1.0) / q * (d - alpha * (p - 1.0)) / ((1.0 + alpha) * p);
}

enum class ContactVerdict { Collision, NoCollision };

// Gravity-driven incompressible Newtonian fall: collision iff 2 alpha < d-1.
inline ContactVerdict incompressible_newtonian_predicate(double alpha, int d, double rho_s,
                                                         double rho_f) {
  if (alpha < 0.0 || alpha > 1.0 || (d != 2 && d != 3))
    throw std::domain_error("incompressible_newtonian_predicate: alpha in [0,1], d in {2,3}");
  if (rho_s <= rho_f)
    throw std::domain_error("incompressible_newtonian_predicate: requires rho_s > rho_f");
  return 2.0 * alpha < d - 1.0 ? ContactVerdict::Collision : ContactVerdict::NoCollision;
}

struct FeedbackResult {
  bool guaranteed = false;
  double epsilon = 0.0;    // dist(G, boundary) >= 1 + epsilon for all times
  double delta_min = 0.0;  // smallest admissible delta
};

// PD-controlled solid: if (2/k_p)(E_init + (k_p/2)|G1-G0|^2) <= delta^2 for
// some delta < dist(G1,boundary) - 1, the solid never gets within 1+eps of the wall.
inline FeedbackResult feedback_no_collision(const EnergyBudget& budget, double k_p,
                                            const std::array<double, 3>& G0,
                                            const std::array<double, 3>& G1,
                                            double dist_G1_boundary) {
  if (k_p <= 0.0) throw std::domain_error("feedback_no_collision: k_p must be positive");
  if (dist_G1_boundary <= 1.0)
    throw std::domain_error("feedback_no_collision: requires dist(G1, boundary) > 1");
  double anchor_sq = 0.0;
  for (int i = 0; i < 3; ++i) anchor_sq += (G1[i] - G0[i]) * (G1[i] - G0[i]);
  const double lhs = (2.0 / k_p) * (budget.total() + 0.5 * k_p * anchor_sq);
  FeedbackResult r;
  r.delta_min = std::sqrt(lhs);
  if (r.delta_min < dist_G1_boundary - 1.0) {
    r.guaranteed = true;
    r.epsilon = dist_G1_boundary - 1.0 - r.delta_min;
  }
  return r;
}

}  // namespace fsic
