#pragma once

// Gap-profile geometry for a body falling over a flat wall. Lengths are
// nondimensional with the ball radius set to 1; the gap profile is either
// psi_h(r) = h + r^(1+alpha) or the spherical cap psi_h(r) = 1 + h - sqrt(1-r^2).

#include <cmath>
#include <stdexcept>

#include "fsic/jets.hpp"

namespace fsic {

enum class ShapeKind { PowerLaw, Spherical };

struct ShapeProfile {
  ShapeKind kind = ShapeKind::PowerLaw;
  int d = 3;           // spatial dimension, 2 or 3
  double alpha = 1.0;  // roughness exponent, PowerLaw only
  double r0 = 1.0;     // lateral cutoff of the gap region
  double h = 0.0;      // current gap

  static ShapeProfile power_law(double alpha, int d = 3, double h = 0.0, double r0 = 1.0) {
    ShapeProfile p{ShapeKind::PowerLaw, d, alpha, r0, h};
    p.validate();
    return p;
  }
  // r0 default keeps sqrt(1-r^2) well conditioned and 1-2r^2 > 0 (slip algebra).
  static ShapeProfile spherical(int d = 3, double h = 0.0, double r0 = 0.5) {
    ShapeProfile p{ShapeKind::Spherical, d, 1.0, r0, h};
    p.validate();
    return p;
  }
  ShapeProfile with_gap(double gap) const {
    ShapeProfile p = *this;
    p.h = gap;
    return p;
  }
  void validate() const {
    if (d != 2 && d != 3) throw std::domain_error("ShapeProfile: d must be 2 or 3");
    if (r0 <= 0.0) throw std::domain_error("ShapeProfile: r0 must be positive");
    if (h < 0.0) throw std::domain_error("ShapeProfile: gap must be nonnegative");
    if (kind == ShapeKind::PowerLaw) {
      if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("ShapeProfile: alpha must lie in (0,1]");
    } else if (r0 >= 1.0) {
      throw std::domain_error("ShapeProfile: spherical profile requires r0 < 1");
    }
  }
};

inline double gap(const ShapeProfile& p, double r) {
  if (r < 0.0 || r > p.r0) throw std::domain_error("gap: r outside [0, r0]");
  if (p.kind == ShapeKind::PowerLaw) return p.h + std::pow(r, 1.0 + p.alpha);
  return 1.0 + p.h - std::sqrt(1.0 - r * r);
}

// Profile formula continued past r0 (the blended extension needs it);
// spherical callers stay below r = 1.
inline double gap_extended(const ShapeProfile& p, double r) {
  if (p.kind == ShapeKind::PowerLaw) return p.h + std::pow(r, 1.0 + p.alpha);
  return 1.0 + p.h - std::sqrt(std::max(0.0, 1.0 - r * r));
}

inline double gap_derivative(const ShapeProfile& p, double r, int order) {
  if (r <= 0.0 || r > p.r0) throw std::domain_error("gap_derivative: r outside (0, r0]");
  if (p.kind == ShapeKind::PowerLaw) {
    const double a = p.alpha;
    switch (order) {
      case 1: return (1.0 + a) * std::pow(r, a);
      case 2: return (1.0 + a) * a * std::pow(r, a - 1.0);
      case 3: return (1.0 + a) * a * (a - 1.0) * std::pow(r, a - 2.0);
    }
  } else {
    const double s = std::sqrt(1.0 - r * r);
    switch (order) {
      case 1: return r / s;
      case 2: return 1.0 / (s * s * s);
      case 3: return 3.0 * r / (s * s * s * s * s);
    }
  }
  throw std::domain_error("gap_derivative: order must be 1, 2, or 3");
}

// psi and its first three r-derivatives, carrying d/dh (= 1 on the value).
inline Taylor3<Dh> gap_jet(const ShapeProfile& p, double r) {
  if (p.kind == ShapeKind::PowerLaw) {
    const double a = p.alpha;
    return {Dh(p.h + std::pow(r, 1.0 + a), 1.0), Dh((1.0 + a) * std::pow(r, a)),
            Dh((1.0 + a) * a * std::pow(r, a - 1.0)),
            Dh((1.0 + a) * a * (a - 1.0) * std::pow(r, a - 2.0))};
  }
  const double s = std::sqrt(1.0 - r * r);
  return {Dh(1.0 + p.h - s, 1.0), Dh(r / s), Dh(1.0 / (s * s * s)),
          Dh(3.0 * r / (s * s * s * s * s))};
}

struct BoundaryNormal {
  double e_r = 0.0;     // radial (x1 in 2D) component
  double e_vert = 0.0;  // x3 (x2 in 2D) component
};

// Unit normal of the lower boundary curve (r, psi_h(r)): (-psi', 1)/sqrt(1+psi'^2).
// For the ball this is the unnormalized (-r, sqrt(1-r^2)).
inline BoundaryNormal body_normal(const ShapeProfile& p, double r) {
  if (r < 0.0 || r > p.r0) throw std::domain_error("body_normal: r outside [0, r0]");
  if (r == 0.0) return {0.0, 1.0};
  const double dpsi = gap_derivative(p, r, 1);
  const double norm = std::sqrt(1.0 + dpsi * dpsi);
  return {-dpsi / norm, 1.0 / norm};
}

}  // namespace fsic
