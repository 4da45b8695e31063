#pragma once

// Explicit colliding velocity field for a disk inside a disk: the eccentric
// polar map x = (rho cos t + sigma(R - rho), rho sin t), the stream function
// psi = gdot [rho phi(rho) sin theta] o F^-1, closed-form angular integrals,
// and the admissibility functionals of the driving sigma(t) family.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsic/quadrature.hpp"

namespace fsic {

// C^1 cutoff: 1 on [0, r), cubic on [r, R], 0 beyond; decreasing.
struct CutoffPhi {
  double r_in = 1.0, R = 3.0;
  double operator()(double rho) const {
    if (rho < r_in) return 1.0;
    if (rho >= R) return 0.0;
    const double d = R - r_in;
    return (rho - R) * (rho - R) * (2.0 * rho - 3.0 * r_in + R) / (d * d * d);
  }
  double d1(double rho) const {
    if (rho < r_in || rho >= R) return 0.0;
    const double d = R - r_in;
    return 6.0 * (rho - R) * (rho - r_in) / (d * d * d);
  }
  double d2(double rho) const {
    if (rho < r_in || rho >= R) return 0.0;
    const double d = R - r_in;
    return 6.0 * (2.0 * rho - r_in - R) / (d * d * d);
  }
};

struct EccentricMap {
  double R = 3.0;
  double r_in = 1.0;
  CutoffPhi phi{1.0, 3.0};

  EccentricMap() = default;
  EccentricMap(double R_, double r_) : R(R_), r_in(r_), phi{r_, R_} {
    if (!(r_ > 0.0 && r_ < R_)) throw std::domain_error("EccentricMap: need 0 < r < R");
  }
  double g(double sigma) const { return sigma * (R - r_in); }  // center offset

  std::array<double, 2> forward(double sigma, double rho, double theta) const {
    if (sigma < 0.0 || sigma >= 1.0) throw std::domain_error("EccentricMap: sigma in [0,1)");
    return {rho * std::cos(theta) + sigma * (R - rho), rho * std::sin(theta)};
  }
  double jacobian(double sigma, double rho, double theta) const {
    return rho * (1.0 - sigma * std::cos(theta));
  }

  // corrected closed form (the quadratic for rho has radical
  // sqrt((x1 - sigma R)^2 + (1 - sigma^2) x2^2))
  double inverse_radius(double sigma, double x1, double x2) const {
    const double b = x1 - sigma * R;
    return (sigma * b + std::sqrt(b * b + (1.0 - sigma * sigma) * x2 * x2)) /
           (1.0 - sigma * sigma);
  }
  // radius formula as printed in the source derivation; kept as a diagnostic,
  // it disagrees with the true inverse away from the axis
  double printed_inverse_radius(double sigma, double x1, double x2) const {
    const double b = x1 - sigma * R;
    return (sigma * b + std::sqrt((1.0 + sigma * sigma) * b * b + x2 * x2)) /
           (1.0 - sigma * sigma);
  }

  // damped Newton on F, seeded by the corrected closed form
  std::array<double, 2> inverse(double sigma, double x1, double x2) const {
    if (sigma < 0.0 || sigma >= 1.0) throw std::domain_error("EccentricMap: sigma in [0,1)");
    double rho = std::max(1e-14, inverse_radius(sigma, x1, x2));
    double theta = std::atan2(x2, x1 - sigma * (R - rho));
    if (theta < 0.0) theta += 2.0 * M_PI;
    for (int iter = 0; iter < 60; ++iter) {
      const double c = std::cos(theta), s = std::sin(theta);
      const double f1 = rho * c + sigma * (R - rho) - x1;
      const double f2 = rho * s - x2;
      if (std::abs(f1) + std::abs(f2) < 1e-14 * (1.0 + R)) break;
      const double det = rho * (1.0 - sigma * c);
      const double d_rho = (rho * c * f1 + rho * s * f2) / det;
      const double d_theta = (-s * f1 + (c - sigma) * f2) / det;
      double step = 1.0;
      if (std::abs(d_rho) > 0.5 * rho) step = 0.5 * rho / std::abs(d_rho);
      rho -= step * d_rho;
      theta -= step * d_theta;
    }
    if (theta < 0.0) theta += 2.0 * M_PI;
    if (theta >= 2.0 * M_PI) theta -= 2.0 * M_PI;
    return {rho, theta};
  }

  // grad psi in mapped coordinates (before composing with F^-1), scaled by gdot
  std::array<double, 2> grad_psi_mapped(double sigma, double gdot, double rho,
                                        double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double p = phi(rho), dp = phi.d1(rho);
    const double pre = gdot / (1.0 - sigma * c);
    return {pre * rho * dp * s * c, pre * (p * (1.0 - sigma * c) + rho * dp * s * s)};
  }

  // velocity u = (d2 psi, -d1 psi): equals (gdot, 0) on the solid image and
  // vanishes on the container boundary
  std::array<double, 2> velocity(double sigma, double sigma_dot, double x1,
                                 double x2) const {
    const double rr = std::hypot(x1, x2);
    if (rr > R * (1.0 + 1e-12)) throw std::domain_error("EccentricMap: point outside the container");
    const double gdot = sigma_dot * (R - r_in);
    const auto [rho, theta] = inverse(sigma, x1, x2);
    const auto gp = grad_psi_mapped(sigma, gdot, rho, theta);
    return {gp[1], -gp[0]};
  }

  double psi(double sigma, double sigma_dot, double x1, double x2) const {
    const double gdot = sigma_dot * (R - r_in);
    const auto [rho, theta] = inverse(sigma, x1, x2);
    return gdot * rho * phi(rho) * std::sin(theta);
  }

  // Laplacian of psi in mapped coordinates, scaled by gdot
  double laplacian_mapped(double sigma, double gdot, double rho, double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double m = 1.0 - sigma * c;
    return gdot / m *
           (rho * phi.d2(rho) * s / m + 3.0 * phi.d1(rho) * s +
            sigma * sigma * phi.d1(rho) * s * s * s / (m * m));
  }
};

// nu1(sigma) = int sin^2/(1 - sigma cos) dtheta = 2 pi / (1 + sqrt(1 - sigma^2))
struct Nu1Result {
  double closed = 0.0;
  double quadrature = 0.0;
  double abs_diff = 0.0;
};

inline Nu1Result nu1(double sigma, bool with_quadrature = true) {
  if (sigma < 0.0 || sigma >= 1.0) throw std::domain_error("nu1: sigma in [0,1)");
  Nu1Result out;
  out.closed = 2.0 * M_PI / (1.0 + std::sqrt(1.0 - sigma * sigma));
  if (with_quadrature) {
    out.quadrature = integrate_adaptive(
                         [&](double th) {
                           const double s = std::sin(th);
                           return s * s / (1.0 - sigma * std::cos(th));
                         },
                         0.0, 2.0 * M_PI, 1e-13)
                         .value;
    out.abs_diff = std::abs(out.closed - out.quadrature);
  }
  return out;
}

// int sin^2/(1 - sigma cos)^3 dtheta = pi / (1 - sigma^2)^(3/2)
inline Nu1Result angular_cubed(double sigma, bool with_quadrature = true) {
  if (sigma < 0.0 || sigma >= 1.0) throw std::domain_error("angular_cubed: sigma in [0,1)");
  Nu1Result out;
  out.closed = M_PI / std::pow(1.0 - sigma * sigma, 1.5);
  if (with_quadrature) {
    const double m = 1.0 - sigma;
    out.quadrature = integrate_adaptive(
                         [&](double th) {
                           const double s = std::sin(th), d = 1.0 - sigma * std::cos(th);
                           return s * s / (d * d * d);
                         },
                         0.0, 2.0 * M_PI, 1e-12, 0.0, 20000, {std::sqrt(m), 2.0 * M_PI - std::sqrt(m)})
                         .value;
    out.abs_diff = std::abs(out.closed - out.quadrature);
  }
  return out;
}

// mu1 = (R-r)^2 int rho^3 (phi')^2 drho
inline double mu1(const EccentricMap& map) {
  const double d = map.R - map.r_in;
  return d * d *
         integrate_gauss([&](double rho) { return std::pow(rho, 3) * map.phi.d1(rho) *
                                                  map.phi.d1(rho); },
                         map.r_in, map.R, 24);
}

// pullback quadrature of the L2 norms over the container disk
inline double l2_grad_psi_quadrature(const EccentricMap& map, double sigma, double sigma_dot,
                                     int n_rho = 48, int n_theta_level = 1024) {
  const double gdot = sigma_dot * (map.R - map.r_in);
  const GaussRule& rule = gauss_rule(n_rho);
  double total = 0.0;
  for (int j = 0; j < n_theta_level; ++j) {
    const double theta = 2.0 * M_PI * (j + 0.5) / n_theta_level;
    double line = 0.0;
    for (int i = 0; i < n_rho; ++i) {
      const double rho = map.R * rule.x[i];
      const auto gp = map.grad_psi_mapped(sigma, gdot, rho, theta);
      line += rule.w[i] * map.R * (gp[0] * gp[0] + gp[1] * gp[1]) *
              map.jacobian(sigma, rho, theta);
    }
    total += line * (2.0 * M_PI / n_theta_level);
  }
  return total;
}

inline double l2_laplacian_quadrature(const EccentricMap& map, double sigma, double sigma_dot,
                                      int n_rho = 48) {
  const double gdot = sigma_dot * (map.R - map.r_in);
  const GaussRule& rule = gauss_rule(n_rho);
  auto theta_integrand = [&](double theta) {
    double line = 0.0;
    for (int i = 0; i < n_rho; ++i) {
      const double rho = map.r_in + (map.R - map.r_in) * rule.x[i];
      const double lap = map.laplacian_mapped(sigma, gdot, rho, theta);
      line += rule.w[i] * (map.R - map.r_in) * lap * lap * map.jacobian(sigma, rho, theta);
    }
    return line;
  };
  const double m = 1.0 - sigma;
  return integrate_adaptive(theta_integrand, 0.0, 2.0 * M_PI, 1e-9, 0.0, 8000,
                            {std::sqrt(m), 2.0 * M_PI - std::sqrt(m)})
      .value;
}

// Driving families sigma(t) with collision at t = T*.
struct SigmaFamily {
  enum class Kind { Quartic, Linear };
  Kind kind = Kind::Quartic;
  double T = 1.0;
  double t_star = 0.5;

  double sigma(double t) const {
    const double u = (t - t_star) / T;
    if (kind == Kind::Quartic) return 1.0 - u * u * u * u;
    return 1.0 - std::abs(u);
  }
  double dsigma(double t) const {
    const double u = (t - t_star) / T;
    if (kind == Kind::Quartic) return -4.0 * u * u * u / T;
    return (t >= t_star ? -1.0 : 1.0) / T;
  }
  double ddsigma(double t) const {
    const double u = (t - t_star) / T;
    if (kind == Kind::Quartic) return -12.0 * u * u / (T * T);
    return 0.0;
  }
  // (1 - sigma^2)^(-3/2) dsigma^2 with the u-power cancellation done exactly;
  // the naive quotient underflows near t = T*
  double singular_density(double t) const {
    const double u = (t - t_star) / T;
    const double s = sigma(t);
    const double one_plus = std::pow(1.0 + s, 1.5);
    if (kind == Kind::Quartic) return 16.0 / (T * T * one_plus);  // u^6 / |u|^6
    return 1.0 / (T * T * std::pow(std::abs(u), 1.5) * one_plus);
  }
};

struct Admissibility {
  double sup_dsigma = 0.0;
  double l1_singular = 0.0;   // int (1 - sigma^2)^(-3/2) dsigma^2 dt
  bool l1_converged = false;
  double refinement_ratio = 0.0;  // growth of the singular integral under refinement
  double l2_ddsigma = 0.0;
  bool admissible = false;
};

inline Admissibility admissibility(const SigmaFamily& family) {
  Admissibility out;
  for (int i = 0; i <= 4000; ++i) {
    const double t = family.T * i / 4000.0;
    out.sup_dsigma = std::max(out.sup_dsigma, std::abs(family.dsigma(t)));
  }
  auto integrand = [&](double t) { return family.singular_density(t); };
  // truncate a shrinking window around T*: a convergent integral is
  // epsilon-stable, a divergent one keeps growing
  auto truncated = [&](double eps) {
    double v = 0.0;
    if (family.t_star - eps > 0.0)
      v += integrate_adaptive(integrand, 0.0, family.t_star - eps, 1e-10, 0.0, 4000).value;
    if (family.t_star + eps < family.T)
      v += integrate_adaptive(integrand, family.t_star + eps, family.T, 1e-10, 0.0, 4000).value;
    return v;
  };
  const double coarse = truncated(1e-6);
  const double fine = truncated(1e-9);
  out.l1_singular = fine;
  out.refinement_ratio = fine / std::max(coarse, 1e-300);
  out.l1_converged = out.refinement_ratio < 1.05;
  out.l2_ddsigma =
      integrate_adaptive([&](double t) { return family.ddsigma(t) * family.ddsigma(t); }, 0.0,
                         family.T, 1e-11, 0.0, 4000, {family.t_star})
          .value;
  out.admissible = std::isfinite(out.sup_dsigma) && out.l1_converged &&
                   std::isfinite(out.l2_ddsigma);
  return out;
}

}  // namespace fsic
