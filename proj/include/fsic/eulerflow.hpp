#pragma once

// Inviscid fall of a disk onto a wall: conformal transplant of the gap
// geometry to the annulus sigma < |w| < 1, Fourier/Laurent coefficients of
// the complex potential, the added-mass energy E(sigma), and the separable
// collision ODE hdot = hdot0 sqrt((m + rho_f E(h0)) / (m + rho_f E(h))).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "fsic/lubridyn.hpp"
#include "fsic/quadrature.hpp"

namespace fsic {

struct AnnulusMap {
  double h = 0.0;      // gap between the unit disk and the wall
  double a = 0.0;      // sqrt((1+h)^2 - 1), pole offset of the Moebius map
  double sigma = 0.0;  // inner annulus radius in (0,1)

  static AnnulusMap from_h(double h) {
    if (h <= 0.0) throw std::domain_error("AnnulusMap: h must be positive");
    AnnulusMap m;
    m.h = h;
    m.a = std::sqrt(h * (2.0 + h));
    m.sigma = 1.0 / (1.0 + h + m.a);
    return m;
  }
  static AnnulusMap from_sigma(double sigma) {
    if (sigma <= 0.0 || sigma >= 1.0) throw std::domain_error("AnnulusMap: sigma in (0,1)");
    AnnulusMap m;
    m.sigma = sigma;
    m.h = 0.5 * (1.0 / sigma + sigma) - 1.0;
    m.a = 0.5 * (1.0 / sigma - sigma);
    return m;
  }
  // half plane Im z > 0 -> unit disk; the body circle |z - i(1+h)| = 1 maps
  // onto |w| = sigma and the wall (real axis) onto |w| = 1
  std::complex<double> to_disk(std::complex<double> z) const {
    const std::complex<double> ia(0.0, a);
    return (z - ia) / (z + ia);
  }
  std::complex<double> from_disk(std::complex<double> w) const {
    const std::complex<double> ia(0.0, a);
    return ia * (1.0 + w) / (1.0 - w);
  }
};

// Fourier coefficient of the transplanted Neumann datum: beta_hat(n) = 2 a n sigma^n.
inline double beta_hat_coeff(int n, double sigma) {
  if (n < 1 || sigma <= 0.0 || sigma >= 1.0)
    throw std::domain_error("beta_hat_coeff: need n >= 1, sigma in (0,1)");
  const double a = 0.5 * (1.0 / sigma - sigma);
  return 2.0 * a * n * std::pow(sigma, n);
}

// Laurent coefficient of the complex potential F(w) = sum a_n (w^n + w^-n).
inline double laurent_coeff(int n, double sigma) {
  const double s2n = std::pow(sigma, 2 * n);
  const double a = 0.5 * (1.0 / sigma - sigma);
  return -2.0 * a * s2n / (1.0 - s2n);
}

struct SeriesValue {
  double value = 0.0;
  int terms = 0;
  double tail_bound = 0.0;
  bool converged = false;
};

// Added-mass energy E(sigma); the primary series 4 pi a^2 sum n s^2n (1+s^2n)/(1-s^2n)
// degrades near sigma = 1, where the alternative form
// 2 pi sum s^(2n-2) [(1-s^2)/(1-s^2n)]^2 - pi has a 1/n^2 summand.
inline SeriesValue added_mass_energy(double sigma, double tol = 1e-12, long n_max = 4000000) {
  if (sigma < 0.0 || sigma > 1.0) throw std::domain_error("added_mass_energy: sigma in [0,1]");
  SeriesValue out;
  if (sigma == 1.0) {  // Basel value of the alternative series
    out.value = M_PI * M_PI * M_PI / 3.0 - M_PI;
    out.converged = true;
    return out;
  }
  if (sigma == 0.0) {  // only the n = 1 summand of the alternative form survives
    out.value = M_PI;
    out.converged = true;
    return out;
  }
  const double s2 = sigma * sigma;
  const double a = 0.5 * (1.0 / sigma - sigma);
  const bool near_one = sigma >= 0.95;
  double sum = 0.0;
  double s2n = 1.0;  // sigma^(2n) running power
  for (long n = 1; n <= n_max; ++n) {
    s2n *= s2;
    double term;
    if (near_one) {
      const double frac = (1.0 - s2) / (1.0 - s2n);
      term = (s2n / s2) * frac * frac;
    } else {
      term = n * s2n * (1.0 + s2n) / (1.0 - s2n);
    }
    sum += term;
    out.terms = static_cast<int>(n);
    if (s2n <= 0.5 && term < tol * std::max(sum, 1.0)) {
      // geometric tails, valid once sigma^(2n) <= 1/2
      const double tail_pow = s2n * s2;  // sigma^(2(n+1))
      if (near_one) {
        out.tail_bound = 2.0 * M_PI * 4.0 * (1.0 - s2) * tail_pow / s2;
      } else {
        out.tail_bound = 4.0 * M_PI * a * a * 3.0 * tail_pow *
                         ((n + 1.0) - n * s2) / ((1.0 - s2) * (1.0 - s2));
      }
      if (out.tail_bound < tol * std::max(std::abs(sum), 1.0)) {
        out.converged = true;
        break;
      }
    }
  }
  out.value = near_one ? 2.0 * M_PI * sum - M_PI : 4.0 * M_PI * a * a * sum;
  if (!out.converged) throw std::runtime_error("added_mass_energy: series did not converge");
  return out;
}

// Both series forms, required to agree within tol; the near-sigma=1 branch is primary.
inline SeriesValue added_mass_energy_checked(double sigma, double tol = 1e-9) {
  SeriesValue v = added_mass_energy(sigma, std::min(tol, 1e-12));
  if (sigma > 0.0 && sigma < 1.0) {
    // evaluate the other branch by shifting the switch point
    const double s2 = sigma * sigma;
    const double a = 0.5 * (1.0 / sigma - sigma);
    double sum_p = 0.0, sum_a = 0.0, s2n = 1.0;
    const long n_top = 8000000;
    for (long n = 1; n <= n_top; ++n) {
      s2n *= s2;
      const double frac = (1.0 - s2) / (1.0 - s2n);
      sum_a += (s2n / s2) * frac * frac;
      sum_p += n * s2n * (1.0 + s2n) / (1.0 - s2n);
      if (s2n < 1e-18) break;
    }
    const double primary = 4.0 * M_PI * a * a * sum_p;
    const double alternative = 2.0 * M_PI * sum_a - M_PI;
    if (std::abs(primary - alternative) > tol * std::max(1.0, std::abs(v.value)))
      throw std::runtime_error("added_mass_energy_checked: series forms disagree");
  }
  return v;
}

// Quadrature oracle: int_{A_sigma} |F'(w)|^2 dw with the truncated Laurent series.
inline double added_mass_energy_quadrature(double sigma, int n_rho = 64, int n_theta = 512) {
  if (sigma <= 0.0 || sigma >= 1.0)
    throw std::domain_error("added_mass_energy_quadrature: sigma in (0,1)");
  int terms = 1;
  while (terms < 100000) {
    const double mag = terms * std::abs(laurent_coeff(terms, sigma)) *
                       std::pow(sigma, -(terms + 1));
    if (mag < 1e-13) break;
    ++terms;
  }
  std::vector<double> coeff(terms + 1, 0.0);
  for (int n = 1; n <= terms; ++n) coeff[n] = laurent_coeff(n, sigma);
  const GaussRule& rule = gauss_rule(n_rho);
  double total = 0.0;
  for (int i = 0; i < n_rho; ++i) {
    const double rho = sigma + (1.0 - sigma) * rule.x[i];
    double ring = 0.0;
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * M_PI * j / n_theta;
      const std::complex<double> w = std::polar(rho, theta);
      const std::complex<double> winv = 1.0 / w;
      std::complex<double> wn = 1.0, wmn = 1.0;  // w^(n-1), w^(-n-1) accumulators
      std::complex<double> deriv = 0.0;
      wmn = winv * winv;
      for (int n = 1; n <= terms; ++n) {
        deriv += coeff[n] * double(n) * (wn - wmn);
        wn *= w;
        wmn *= winv;
      }
      ring += std::norm(deriv);
    }
    total += rule.w[i] * (2.0 * M_PI / n_theta) * ring * rho;
  }
  return total * (1.0 - sigma);
}

struct EulerFall {
  GapTrajectory trajectory;
  double t_star = 0.0;
  double impact_speed = 0.0;
  double speed_ratio = 0.0;        // |impact| / |initial|
  double conservation_error = 0.0; // max relative drift of hdot^2 (m + rho_f E)
  bool contact = false;
};

inline double added_mass_at_gap(double h) {
  return added_mass_energy(h <= 0.0 ? 1.0 : AnnulusMap::from_h(h).sigma).value;
}

// Separable energy-conserving fall; integrates dt = dh / |hdot(h)| in h.
inline EulerFall euler_fall(double m, double rho_f, double h0, double hdot0,
                            int trajectory_samples = 120) {
  if (m <= 0.0 || rho_f < 0.0 || h0 <= 0.0)
    throw std::domain_error("euler_fall: need m > 0, rho_f >= 0, h0 > 0");
  EulerFall out;
  if (hdot0 >= 0.0) {  // moving away (or at rest): no contact, trivial flag
    out.contact = false;
    out.trajectory.push(0.0, h0, hdot0, 0.0);
    out.trajectory.reached_tmax = true;
    return out;
  }
  const double e0 = added_mass_at_gap(h0);
  const double invariant = hdot0 * hdot0 * (m + rho_f * e0);
  auto speed = [&](double h) {  // |hdot(h)|
    return -hdot0 * std::sqrt((m + rho_f * e0) / (m + rho_f * added_mass_at_gap(h)));
  };
  double t = 0.0;
  out.trajectory.push(0.0, h0, hdot0, 0.0);
  double drift = 0.0;
  for (int k = 1; k <= trajectory_samples; ++k) {
    const double h_hi = h0 * (1.0 - double(k - 1) / trajectory_samples);
    const double h_lo = h0 * (1.0 - double(k) / trajectory_samples);
    t += integrate_adaptive([&](double h) { return 1.0 / speed(h); }, h_lo, h_hi, 1e-10).value;
    const double v = -speed(std::max(h_lo, 0.0) + 1e-300);
    out.trajectory.push(t, std::max(h_lo, 0.0), v, 0.0);
    const double inv = v * v * (m + rho_f * added_mass_at_gap(h_lo));
    drift = std::max(drift, std::abs(inv - invariant) / invariant);
  }
  out.t_star = t;
  out.contact = true;
  out.impact_speed = hdot0 * std::sqrt((m + rho_f * e0) / (m + rho_f * added_mass_at_gap(0.0)));
  out.speed_ratio = out.impact_speed / hdot0;
  out.conservation_error = drift;
  out.trajectory.contact = ContactEvent{t, out.impact_speed, 1.0};
  return out;
}

// Impact/initial speed ratio; decreasing in rho_f, equal to 1 in vacuum.
inline double damping_ratio(double m, double rho_f, double h0) {
  if (m <= 0.0 || rho_f < 0.0 || h0 <= 0.0)
    throw std::domain_error("damping_ratio: need m > 0, rho_f >= 0, h0 > 0");
  return std::sqrt((m + rho_f * added_mass_at_gap(h0)) / (m + rho_f * added_mass_at_gap(0.0)));
}

}  // namespace fsic
