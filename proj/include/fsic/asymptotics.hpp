#pragma once

// The singular gap integral int_0^r0 r^q / (h + r^(1+alpha))^s dr and its
// h -> 0 regime classification: the sign of q+1 - s(1+alpha) decides between
// a power law h^((q+1)/(1+alpha) - s), a |log h| blow-up, and boundedness.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsic/fitting.hpp"
#include "fsic/quadrature.hpp"

namespace fsic {

enum class RegimeTag { PowerLaw, Logarithmic, Bounded };

struct AsymptoticClass {
  RegimeTag tag = RegimeTag::Bounded;
  double exponent = 0.0;  // (q+1)/(1+alpha) - s, meaningful for PowerLaw only
  bool near_critical = false;  // |q+1 - s(1+alpha)| < 0.1, slopes converge slowly
};

inline AsymptoticClass classify(double alpha, double q, double s) {
  if (alpha <= 0.0 || q < 0.0 || s <= 0.0)
    throw std::domain_error("classify: need alpha > 0, q >= 0, s > 0");
  const double disc = q + 1.0 - s * (1.0 + alpha);
  AsymptoticClass c;
  c.near_critical = std::abs(disc) < 0.1 && disc != 0.0;
  if (disc < 0.0) {
    c.tag = RegimeTag::PowerLaw;
    c.exponent = (q + 1.0) / (1.0 + alpha) - s;
  } else if (disc == 0.0) {
    c.tag = RegimeTag::Logarithmic;
  } else {
    c.tag = RegimeTag::Bounded;
  }
  return c;
}

// One mandatory split at the crossover radius h^(1/(1+alpha)), where the
// integrand switches from the h-plateau to the power-law tail.
inline QuadResult singular_gap_integral(double alpha, double q, double s, double h, double r0,
                                        double rel_tol = 1e-10) {
  if (alpha <= 0.0 || q < 0.0 || s <= 0.0 || h <= 0.0 || r0 <= 0.0)
    throw std::domain_error("singular_gap_integral: need alpha,s,h,r0 > 0 and q >= 0");
  const double crossover = std::pow(h, 1.0 / (1.0 + alpha));
  std::vector<double> splits;
  if (crossover < r0) splits.push_back(crossover);
  auto integrand = [=](double r) {
    return std::pow(r, q) / std::pow(h + std::pow(r, 1.0 + alpha), s);
  };
  return integrate_adaptive(integrand, 0.0, r0, rel_tol, 0.0, 4000, splits);
}

// Sweeps the integral over an h grid (decreasing) and fits the regime.
struct RegimeSweep {
  AsymptoticClass predicted;
  ScalingFit fit;
  std::vector<double> h, value;
};

inline RegimeSweep sweep_singular_gap_integral(double alpha, double q, double s, double r0,
                                               const std::vector<double>& h_grid,
                                               double rel_tol = 1e-10) {
  RegimeSweep sweep;
  sweep.predicted = classify(alpha, q, s);
  sweep.h = h_grid;
  sweep.value.reserve(h_grid.size());
  for (double h : h_grid) sweep.value.push_back(singular_gap_integral(alpha, q, s, h, r0, rel_tol).value);
  sweep.fit = fit_scaling(sweep.h, sweep.value);
  sweep.fit.slow_converging = sweep.predicted.near_critical;
  return sweep;
}

}  // namespace fsic
