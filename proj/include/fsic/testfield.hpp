#pragma once

// Explicit divergence-free test fields for a body at gap h over a wall:
// the no-slip fields w_h = curl(phi_h e_theta) (3D) / perp-grad phi_h (2D)
// with phi_h = pref(r) * Phi(x3/psi) in the gap film, the slip variant with
// cubic profile P1 t + P2 t^2 + P3 t^3, the companion pressure q_h removing
// the strongest singularity of Delta w_h, L^q norms, and the drag energy.
//
// Two evaluators cover different needs: a (r, x3, h) second-order jet of the
// globally blended phi gives w, grad w, and d_h w everywhere; a univariate
// third-order jet of the film coefficients b_k(r) gives the third
// derivatives needed for q_h and Delta w - grad q inside the film.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fsic/geometry.hpp"
#include "fsic/jets.hpp"
#include "fsic/quadrature.hpp"

namespace fsic {

enum class FieldVariant { NoSlip2D, NoSlip3D, Slip3D };
enum class Region { Inner, Outer, Full };
enum class FieldQuantity { Velocity, Gradient, GapDeriv };

struct TestFieldSpec {
  ShapeProfile profile;
  FieldVariant variant = FieldVariant::NoSlip3D;
  double beta_s = 0.0;      // slip length on the body (Slip3D)
  double beta_omega = 0.0;  // slip length on the wall (Slip3D)
  double mu = 1.0;

  static TestFieldSpec no_slip(const ShapeProfile& p) {
    TestFieldSpec s;
    s.profile = p;
    s.variant = p.d == 2 ? FieldVariant::NoSlip2D : FieldVariant::NoSlip3D;
    s.validate();
    return s;
  }
  static TestFieldSpec slip(const ShapeProfile& p, double bs, double bo, double mu = 1.0) {
    TestFieldSpec s;
    s.profile = p;
    s.variant = FieldVariant::Slip3D;
    s.beta_s = bs;
    s.beta_omega = bo;
    s.mu = mu;
    s.validate();
    return s;
  }
  void validate() const {
    profile.validate();
    if (variant == FieldVariant::NoSlip2D && profile.d != 2)
      throw std::domain_error("TestFieldSpec: NoSlip2D needs a 2D profile");
    if (variant != FieldVariant::NoSlip2D && profile.d != 3)
      throw std::domain_error("TestFieldSpec: 3D variants need a 3D profile");
    if (variant == FieldVariant::Slip3D) {
      if (profile.kind != ShapeKind::Spherical)
        throw std::domain_error("TestFieldSpec: the slip construction is for the unit ball");
      if (beta_s < 0.0 || beta_omega < 0.0 || mu <= 0.0)
        throw std::domain_error("TestFieldSpec: slip lengths >= 0, mu > 0");
      if (profile.r0 * profile.r0 * 2.0 >= 1.0)
        throw std::domain_error("TestFieldSpec: slip algebra needs r0 < 1/sqrt(2)");
    }
  }
  bool three_d() const { return variant != FieldVariant::NoSlip2D; }
  double pref() const { return three_d() ? 0.5 : 1.0; }
};

// Lateral blend geometry of the extension outside the film: the film profile
// is blended into a wall-to-cap vertical profile over [r0, r0+w] and rolled
// off to zero over [r0+2w, r0+3w].
struct BlendGeometry {
  double w, x_lo, x_hi, y_lo, y_hi, r_support;
  double z1, z2;  // vertical roll-off band; the field has support x3 < z2
};

inline BlendGeometry blend_geometry(const ShapeProfile& p) {
  const double r_lim = p.kind == ShapeKind::Spherical ? 0.97 : 2.5 * p.r0;
  const double w = std::min(p.r0 / 2.0, (r_lim - p.r0) / 3.0);
  BlendGeometry bg{w, p.r0, p.r0 + w, p.r0 + w, r_lim, r_lim, 0.0, 0.0};
  // roll-off bands take all remaining room: their energy scales like width^-3.
  // z1 leaves headroom so the body cap keeps w = e3 exactly for h <= 0.25.
  const double shape_hi = p.kind == ShapeKind::PowerLaw
                              ? std::pow(bg.x_hi, 1.0 + p.alpha)
                              : 1.0 - std::sqrt(1.0 - bg.x_hi * bg.x_hi);
  const double delta = p.kind == ShapeKind::PowerLaw
                           ? std::pow(p.r0, 1.0 + p.alpha)
                           : 1.0 - std::sqrt(1.0 - p.r0 * p.r0);
  bg.z1 = shape_hi + 0.25;
  bg.z2 = bg.z1 + std::max(delta, 0.5 * bg.z1);
  return bg;
}

namespace detail {

inline Taylor3<Dh> t3_const(double c) { return Taylor3<Dh>::constant(Dh(c)); }

// kappa(r) = sqrt(1-r^2)/(1-2r^2), the ball-geometry factor of the slip algebra.
inline Taylor3<Dh> kappa_jet(double r) {
  const double s = std::sqrt(1.0 - r * r);
  Taylor3<Dh> sq{Dh(s), Dh(-r / s), Dh(-1.0 / (s * s * s)), Dh(-3.0 * r / (s * s * s * s * s))};
  Taylor3<Dh> den{Dh(1.0 - 2.0 * r * r), Dh(-4.0 * r), Dh(-4.0), Dh(0.0)};
  return sq / den;
}

}  // namespace detail

// Cubic film profile written as phi = pref * r * sum_k b_k(r) x3^k; the b_k
// are carried as third-order jets in r with d/dh attached to each coefficient.
struct FilmCoeffs {
  Taylor3<Dh> b1, b2, b3;
};

inline FilmCoeffs film_coeffs(const TestFieldSpec& spec, double h, double r) {
  const ShapeProfile prof = spec.profile.with_gap(h);
  const Taylor3<Dh> psi = gap_jet(prof, r);
  FilmCoeffs c;
  if (spec.variant != FieldVariant::Slip3D) {
    const Taylor3<Dh> psi2 = psi * psi;
    c.b1 = detail::t3_const(0.0);
    c.b2 = detail::t3_const(3.0) / psi2;
    c.b3 = detail::t3_const(-2.0) / (psi2 * psi);
    return c;
  }
  // alpha_Omega = psi/(mu beta_Omega), alpha_S = (2 + 1/(mu beta_S)) kappa psi;
  // beta = 0 is the hard-condition limit alpha -> infinity.
  const bool slip_body = spec.beta_s > 0.0;
  const bool slip_wall = spec.beta_omega > 0.0;
  const Taylor3<Dh> kap = detail::kappa_jet(r);
  Taylor3<Dh> p1, p2, p3;
  if (slip_body && slip_wall) {
    const Taylor3<Dh> a_s = detail::t3_const(2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * psi;
    const Taylor3<Dh> a_o = detail::t3_const(1.0 / (spec.mu * spec.beta_omega)) * psi;
    const Taylor3<Dh> den = detail::t3_const(12.0) + detail::t3_const(4.0) * (a_s + a_o) + a_s * a_o;
    p1 = detail::t3_const(6.0) * (detail::t3_const(2.0) + a_s) / den;
    p2 = detail::t3_const(3.0) * (detail::t3_const(2.0) + a_s) * a_o / den;
    p3 = detail::t3_const(-2.0) * (a_s + a_s * a_o + a_o) / den;
  } else if (!slip_body && slip_wall) {  // no-slip body (alpha_S -> infinity)
    const Taylor3<Dh> a_o = detail::t3_const(1.0 / (spec.mu * spec.beta_omega)) * psi;
    const Taylor3<Dh> den = detail::t3_const(4.0) + a_o;
    p1 = detail::t3_const(6.0) / den;
    p2 = detail::t3_const(3.0) * a_o / den;
    p3 = detail::t3_const(-2.0) * (detail::t3_const(1.0) + a_o) / den;
  } else if (slip_body && !slip_wall) {  // no-slip wall (alpha_Omega -> infinity)
    const Taylor3<Dh> a_s = detail::t3_const(2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * psi;
    const Taylor3<Dh> den = detail::t3_const(4.0) + a_s;
    p1 = detail::t3_const(0.0);
    p2 = detail::t3_const(3.0) * (detail::t3_const(2.0) + a_s) / den;
    p3 = detail::t3_const(-2.0) * (detail::t3_const(1.0) + a_s) / den;
  } else {  // both hard: plain no-slip profile
    p1 = detail::t3_const(0.0);
    p2 = detail::t3_const(3.0);
    p3 = detail::t3_const(-2.0);
  }
  c.b1 = p1 / psi;
  c.b2 = p2 / (psi * psi);
  c.b3 = p3 / (psi * psi * psi);
  return c;
}

// Point data inside the film: velocity, gradient, d/dh, the de-singularized
// Laplacian Delta w - grad q_h, and the local part of q_h.
struct FilmPoint {
  double w_r = 0, w_v = 0;             // e_r (e_1) and vertical components
  double dh_w_r = 0, dh_w_v = 0;
  double g_rr = 0, g_r3 = 0, g_3r = 0, g_33 = 0;  // d(row comp)/d(col var)
  double w_r_over_r = 0;               // theta-theta gradient entry (3D)
  double grad_sq = 0, defrate_sq = 0;
  double lap_res_r = 0, lap_res_v = 0;  // Delta w - grad q_h
  double qh_local = 0;                  // d^2 phi/dr dx3 part of q_h
  double divergence = 0;
};

// r >= 0, 0 <= x3 <= psi(r). For 2D call with r = |x1| and mirror by parity.
inline FilmPoint film_eval(const TestFieldSpec& spec, double h, double r, double x3) {
  const FilmCoeffs c = film_coeffs(spec, h, r);
  const double pf = spec.pref();
  const Taylor3<Dh> bk[3] = {c.b1, c.b2, c.b3};
  // B^(i,j) = d_r^i d_3^j of sum b_k x3^k, for j <= k.
  auto B = [&](int i, int j) -> Dh {
    Dh sum{};
    for (int k = 1; k <= 3; ++k) {
      if (k < j) continue;
      double fall = 1.0;
      for (int m = 0; m < j; ++m) fall *= (k - m);
      const Taylor3<Dh>& b = bk[k - 1];
      const Dh bi = i == 0 ? b.f : (i == 1 ? b.d1 : (i == 2 ? b.d2 : b.d3));
      sum = sum + bi * Dh(fall * std::pow(x3, k - j));
    }
    return sum;
  };
  FilmPoint out;
  const Dh B00 = B(0, 0), B10 = B(1, 0), B01 = B(0, 1), B11 = B(1, 1), B02 = B(0, 2);
  const Dh B20 = B(2, 0), B21 = B(2, 1), B30 = B(3, 0);
  if (spec.three_d()) {
    const Dh wr = Dh(-pf * r) * B01;
    const Dh wv = Dh(pf) * (Dh(r) * B10 + Dh(2.0) * B00);
    out.w_r = wr.v;
    out.w_v = wv.v;
    out.dh_w_r = wr.dh;
    out.dh_w_v = wv.dh;
    out.g_rr = -pf * (r * B11.v + B01.v);
    out.g_r3 = -pf * r * B02.v;
    out.g_3r = pf * (r * B20.v + 3.0 * B10.v);
    out.g_33 = pf * (r * B11.v + 2.0 * B01.v);
    out.w_r_over_r = -pf * B01.v;
    out.divergence = out.g_rr + out.w_r_over_r + out.g_33;
    out.grad_sq = out.g_rr * out.g_rr + out.g_r3 * out.g_r3 + out.g_3r * out.g_3r +
                  out.g_33 * out.g_33 + out.w_r_over_r * out.w_r_over_r;
    const double d_r3 = 0.5 * (out.g_r3 + out.g_3r);
    out.defrate_sq = out.g_rr * out.g_rr + out.w_r_over_r * out.w_r_over_r +
                     out.g_33 * out.g_33 + 2.0 * d_r3 * d_r3;
    out.lap_res_r = -pf * (2.0 * r * B21.v + 5.0 * B11.v);
    out.lap_res_v = pf * (r * B30.v + 5.0 * B20.v + 3.0 * B10.v / (r > 0 ? r : 1e-300) + B02.v);
    out.qh_local = pf * (r * B11.v + B01.v);  // d^2_{r3} phi
  } else {
    const Dh w1 = Dh(-pf * r) * B01;
    const Dh w2 = Dh(pf) * (B00 + Dh(r) * B10);
    out.w_r = w1.v;
    out.w_v = w2.v;
    out.dh_w_r = w1.dh;
    out.dh_w_v = w2.dh;
    out.g_rr = -pf * (B01.v + r * B11.v);
    out.g_r3 = -pf * r * B02.v;
    out.g_3r = pf * (r * B20.v + 2.0 * B10.v);
    out.g_33 = pf * (B01.v + r * B11.v);
    out.divergence = out.g_rr + out.g_33;
    out.grad_sq =
        out.g_rr * out.g_rr + out.g_r3 * out.g_r3 + out.g_3r * out.g_3r + out.g_33 * out.g_33;
    const double d12 = 0.5 * (out.g_r3 + out.g_3r);
    out.defrate_sq = out.g_rr * out.g_rr + out.g_33 * out.g_33 + 2.0 * d12 * d12;
    out.lap_res_r = -pf * (2.0 * (r * B21.v + 2.0 * B11.v));
    out.lap_res_v = pf * (r * B30.v + 3.0 * B20.v);
    out.qh_local = pf * (B01.v + r * B11.v);
  }
  return out;
}

// q_h = d^2_{r3} phi - int_0^r d^3_{333} phi(tau, x3) dtau; the x3-cubic film
// profile makes the integrand 6 a_3(tau) = 6 pref tau b_3(tau).
inline double pressure_qh(const TestFieldSpec& spec, double h, double r, double x3) {
  const ShapeProfile prof = spec.profile.with_gap(h);
  const double rr = std::abs(r);
  if (rr > prof.r0 || x3 < 0.0 || x3 > gap(prof, rr) * (1.0 + 1e-12))
    throw std::domain_error("pressure_qh: defined on the film region only");
  const FilmPoint pt = film_eval(spec, h, rr, x3);
  auto integrand = [&](double tau) {
    const FilmCoeffs c = film_coeffs(spec, h, tau);
    return 6.0 * spec.pref() * tau * c.b3.f.v;
  };
  const double tail = integrate_adaptive(integrand, 0.0, rr, 1e-10).value;
  return pt.qh_local - tail;  // even in x1 (2D), so |r| loses nothing
}

// ---------------------------------------------------------------------------
// Globally blended field via (r, x3, h) jets.

struct FieldPoint {
  double w_r = 0, w_v = 0;
  double dh_w_r = 0, dh_w_v = 0;
  double g_rr = 0, g_r3 = 0, g_3r = 0, g_33 = 0;
  double w_r_over_r = 0;
  double grad_sq = 0, defrate_sq = 0, divergence = 0;
  bool in_body = false;
};

namespace detail {

inline Jet23 pow_jet(const Jet23& a, double e) {
  return compose(a, std::pow(a.v, e), e * std::pow(a.v, e - 1.0),
                 e * (e - 1.0) * std::pow(a.v, e - 2.0));
}

inline Jet23 psi_jet23(const ShapeProfile& p, const Jet23& jr, const Jet23& jh) {
  if (p.kind == ShapeKind::PowerLaw) return jh + pow_jet(jr, 1.0 + p.alpha);
  return Jet23::constant(1.0) + jh - sqrt(Jet23::constant(1.0) - jr * jr);
}

// Q(u) on the unit interval with C^2 clamping outside.
inline Jet23 smoothstep01(const Jet23& u) {
  if (u.v <= 0.0) return Jet23::constant(0.0);
  if (u.v >= 1.0) return Jet23::constant(1.0);
  const double s = u.v;
  const double q0 = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  const double q1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  const double q2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  return compose(u, q0, q1, q2);
}

// Film vertical profile in t = x3/psi: Phi(t) for no-slip, the slip cubic else.
inline Jet23 film_profile(const TestFieldSpec& spec, const Jet23& t, const Jet23& psi,
                          const Jet23& jr) {
  if (spec.variant != FieldVariant::Slip3D) {
    if (t.v > 1.0) return Jet23::constant(1.0);
    return t * t * (Jet23::constant(3.0) - 2.0 * t);
  }
  const bool slip_body = spec.beta_s > 0.0;
  const bool slip_wall = spec.beta_omega > 0.0;
  Jet23 p1 = Jet23::constant(0.0), p2 = Jet23::constant(3.0), p3 = Jet23::constant(-2.0);
  if (slip_body || slip_wall) {
    const Jet23 one = Jet23::constant(1.0);
    const Jet23 sq = sqrt(one - jr * jr);
    const Jet23 kap = sq / (one - 2.0 * (jr * jr));
    if (slip_body && slip_wall) {
      const Jet23 a_s = (2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * psi;
      const Jet23 a_o = (1.0 / (spec.mu * spec.beta_omega)) * psi;
      const Jet23 den = Jet23::constant(12.0) + 4.0 * (a_s + a_o) + a_s * a_o;
      p1 = 6.0 * (Jet23::constant(2.0) + a_s) / den;
      p2 = 3.0 * ((Jet23::constant(2.0) + a_s) * a_o) / den;
      p3 = -2.0 * (a_s + a_s * a_o + a_o) / den;
    } else if (slip_wall) {
      const Jet23 a_o = (1.0 / (spec.mu * spec.beta_omega)) * psi;
      const Jet23 den = Jet23::constant(4.0) + a_o;
      p1 = Jet23::constant(6.0) / den;
      p2 = 3.0 * a_o / den;
      p3 = -2.0 * (one + a_o) / den;
    } else {
      const Jet23 a_s = (2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * psi;
      const Jet23 den = Jet23::constant(4.0) + a_s;
      p1 = Jet23::constant(0.0);
      p2 = 3.0 * (Jet23::constant(2.0) + a_s) / den;
      p3 = -2.0 * (one + a_s) / den;
    }
  }
  return t * (p1 + t * (p2 + t * p3));
}

}  // namespace detail

// phi(r, x3, h) of the extended field, as a second-order jet.
inline Jet23 phi_jet(const TestFieldSpec& spec, double h, double r, double x3) {
  const ShapeProfile& p = spec.profile;
  const BlendGeometry bg = blend_geometry(p);
  const Jet23 jr = Jet23::variable(r, 0);
  const Jet23 jx = Jet23::variable(x3, 1);
  const Jet23 jh = Jet23::variable(h, 2);
  const Jet23 psi = detail::psi_jet23(p, jr, jh);

  // X: 1 on the film, 0 beyond the first blend band; Y: lateral roll-off.
  const Jet23 X = Jet23::constant(1.0) - smoothstep(jr, bg.x_lo, bg.x_hi);
  const Jet23 Y = Jet23::constant(1.0) - smoothstep(jr, bg.y_lo, bg.y_hi);

  Jet23 M;
  // vertical profile scale: psi(r0) at h = 0, kept h-independent so the
  // far field contributes a clean constant to energies
  const double delta = p.kind == ShapeKind::PowerLaw ? std::pow(p.r0, 1.0 + p.alpha)
                                                     : 1.0 - std::sqrt(1.0 - p.r0 * p.r0);
  const Jet23 V = detail::smoothstep01((1.0 / delta) * jx) *
                  (Jet23::constant(1.0) - smoothstep(jx, bg.z1, bg.z2));
  if (X.v > 0.0) {
    const Jet23 t = jx / psi;
    const Jet23 F = detail::film_profile(spec, t, psi, jr);
    M = V + X * (F - V);
  } else {
    M = V;
  }
  return (spec.pref() * jr) * (M * Y);
}

// w, grad w, d_h w anywhere in the modeled fluid region (r <= r_support,
// 0 <= x3 <= psi(r)); beyond r_support the field vanishes identically.
inline FieldPoint field_point(const TestFieldSpec& spec, double h, double r, double x3) {
  const ShapeProfile prof = spec.profile.with_gap(h);
  const BlendGeometry bg = blend_geometry(prof);
  FieldPoint out;
  if (r > bg.r_support) return out;  // zero field
  if (x3 > gap_extended(prof, r)) {
    out.in_body = true;
    out.w_v = 1.0;  // rigid translation
    return out;
  }
  const Jet23 phi = phi_jet(spec, h, r, x3);
  const double inv_r = 1.0 / r;
  if (spec.three_d()) {
    out.w_r = -phi.g[1];
    out.w_v = phi.g[0] + phi.v * inv_r;
    out.dh_w_r = -phi.H[1][2];
    out.dh_w_v = phi.H[0][2] + phi.g[2] * inv_r;
    out.g_rr = -phi.H[0][1];
    out.g_r3 = -phi.H[1][1];
    out.g_3r = phi.H[0][0] + phi.g[0] * inv_r - phi.v * inv_r * inv_r;
    out.g_33 = phi.H[0][1] + phi.g[1] * inv_r;
    out.w_r_over_r = out.w_r * inv_r;
    out.divergence = out.g_rr + out.w_r_over_r + out.g_33;
    out.grad_sq = out.g_rr * out.g_rr + out.g_r3 * out.g_r3 + out.g_3r * out.g_3r +
                  out.g_33 * out.g_33 + out.w_r_over_r * out.w_r_over_r;
    const double d_r3 = 0.5 * (out.g_r3 + out.g_3r);
    out.defrate_sq = out.g_rr * out.g_rr + out.w_r_over_r * out.w_r_over_r +
                     out.g_33 * out.g_33 + 2.0 * d_r3 * d_r3;
  } else {
    out.w_r = -phi.g[1];
    out.w_v = phi.g[0];
    out.dh_w_r = -phi.H[1][2];
    out.dh_w_v = phi.H[0][2];
    out.g_rr = -phi.H[0][1];
    out.g_r3 = -phi.H[1][1];
    out.g_3r = phi.H[0][0];
    out.g_33 = phi.H[0][1];
    out.divergence = out.g_rr + out.g_33;
    out.grad_sq =
        out.g_rr * out.g_rr + out.g_r3 * out.g_r3 + out.g_3r * out.g_3r + out.g_33 * out.g_33;
    const double d12 = 0.5 * (out.g_r3 + out.g_3r);
    out.defrate_sq = out.g_rr * out.g_rr + out.g_33 * out.g_33 + 2.0 * d12 * d12;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Public sample type (cylindrical components in 3D, cartesian in 2D).

struct FieldSample {
  std::array<double, 3> value{};            // (e_r, e_theta, e_3) or (e_1, e_2, 0)
  std::array<std::array<double, 3>, 3> gradient{};
  std::array<double, 3> dh{};
  double divergence = 0.0;
  bool in_body = false;
};

// 3D: position = (r, x3); 2D: position = (x1, x2), parity handles x1 < 0.
inline FieldSample evaluate_field(const TestFieldSpec& spec, double h, double pos_r,
                                  double pos_v) {
  if (h <= 0.0) throw std::domain_error("evaluate_field: requires h > 0");
  if (pos_v < 0.0) throw std::domain_error("evaluate_field: below the wall");
  const double sign = (!spec.three_d() && pos_r < 0.0) ? -1.0 : 1.0;
  const double r = std::abs(pos_r);
  FieldSample s;
  if (r < 1e-12) {  // symmetry axis: w_r = 0 and the limit of the vertical part
    const FilmCoeffs c = film_coeffs(spec, h, 1e-8);
    const ShapeProfile prof = spec.profile.with_gap(h);
    if (pos_v > gap(prof, 0.0)) {
      s.in_body = true;
      s.value[2] = 1.0;
      return s;
    }
    double wv = 0.0;  // both dimensions: the axis limit is B(0, x3)
    const Taylor3<Dh> bk[3] = {c.b1, c.b2, c.b3};
    for (int k = 1; k <= 3; ++k) wv += bk[k - 1].f.v * std::pow(pos_v, k);
    s.value[spec.three_d() ? 2 : 1] = wv;
    return s;
  }
  const FieldPoint p = field_point(spec, h, r, pos_v);
  s.in_body = p.in_body;
  s.divergence = p.divergence;
  if (spec.three_d()) {
    s.value = {p.w_r, 0.0, p.w_v};
    s.dh = {p.dh_w_r, 0.0, p.dh_w_v};
    s.gradient[0] = {p.g_rr, 0.0, p.g_r3};
    s.gradient[1] = {0.0, p.w_r_over_r, 0.0};
    s.gradient[2] = {p.g_3r, 0.0, p.g_33};
  } else {
    s.value = {sign * p.w_r, p.w_v, 0.0};
    s.dh = {sign * p.dh_w_r, p.dh_w_v, 0.0};
    s.gradient[0] = {p.g_rr, sign * p.g_r3, 0.0};
    s.gradient[1] = {sign * p.g_3r, p.g_33, 0.0};
  }
  return s;
}

// ---------------------------------------------------------------------------
// Norms, drag energy, n(h), and the pressure-residual pairing.

struct NormResult {
  double value = 0.0;
  double abs_error = 0.0;
};

namespace detail {

template <class PointFn>
double norm_q_integral(const TestFieldSpec& spec, double h, double q, double r_lo, double r_hi,
                       const PointFn& density, double rel_tol) {
  const ShapeProfile prof = spec.profile.with_gap(h);
  const BlendGeometry bg = blend_geometry(prof);
  const GaussRule& rule = gauss_rule(40);
  auto slice = [&](double r) {
    const double psi = std::min(gap_extended(prof, r), bg.z2);  // support ends at z2
    double sum = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) sum += rule.w[i] * density(r, rule.x[i] * psi, q);
    const double ring = spec.three_d() ? 2.0 * M_PI * r : 2.0;  // 2D: both signs of x1
    return ring * psi * sum;
  };
  std::vector<double> splits;
  const double crossover =
      prof.kind == ShapeKind::PowerLaw ? std::pow(h, 1.0 / (1.0 + prof.alpha)) : std::sqrt(2.0 * h);
  if (crossover > r_lo && crossover < r_hi) splits.push_back(crossover);
  for (double s : {bg.x_lo, bg.x_hi, bg.y_lo, bg.y_hi})
    if (s > r_lo && s < r_hi) splits.push_back(s);
  return integrate_adaptive(slice, r_lo, r_hi, rel_tol, 0.0, 4000, splits).value;
}

}  // namespace detail

inline NormResult lq_norm(const TestFieldSpec& spec, double h, FieldQuantity what, double q,
                          Region region, double rel_tol = 1e-8) {
  if (h <= 0.0 || q < 1.0) throw std::domain_error("lq_norm: need h > 0 and q >= 1");
  const ShapeProfile prof = spec.profile.with_gap(h);
  const BlendGeometry bg = blend_geometry(prof);
  auto density = [&](double r, double x3, double qq) {
    const FieldPoint p = field_point(spec, h, r, x3);
    double mag = 0.0;
    switch (what) {
      case FieldQuantity::Velocity: mag = std::hypot(p.w_r, p.w_v); break;
      case FieldQuantity::Gradient: mag = std::sqrt(p.grad_sq); break;
      case FieldQuantity::GapDeriv: mag = std::hypot(p.dh_w_r, p.dh_w_v); break;
    }
    return std::pow(mag, qq);
  };
  double total = 0.0;
  if (region != Region::Outer)
    total += detail::norm_q_integral(spec, h, q, 0.0, prof.r0, density, rel_tol);
  if (region != Region::Inner)
    total += detail::norm_q_integral(spec, h, q, prof.r0, bg.r_support, density, rel_tol);
  NormResult out;
  out.value = std::pow(total, 1.0 / q);
  out.abs_error = rel_tol * out.value;
  return out;
}

struct DragEnergy {
  double h = 0.0;
  double value = 0.0;
  double bulk = 0.0;
  double body_boundary = 0.0;
  double wall_boundary = 0.0;
};

// D(h) = int |grad w_h|^2 over the modeled fluid region, plus the slip
// boundary terms (1 + 1/beta_S) int_bodycap |(w - e3) x n|^2 and
// (1/beta_Omega) int_wall |w x n|^2 for the Slip3D variant.
inline DragEnergy drag_energy(const TestFieldSpec& spec, double h, double rel_tol = 1e-8) {
  if (h <= 0.0) throw std::domain_error("drag_energy: requires h > 0");
  const ShapeProfile prof = spec.profile.with_gap(h);
  const BlendGeometry bg = blend_geometry(prof);
  DragEnergy d;
  d.h = h;
  auto density = [&](double r, double x3, double) {
    return field_point(spec, h, r, x3).grad_sq;
  };
  d.bulk = detail::norm_q_integral(spec, h, 1.0, 0.0, bg.r_support, density, rel_tol);
  if (spec.variant == FieldVariant::Slip3D) {
    if (spec.beta_s > 0.0) {
      auto body_term = [&](double r) {
        const double psi = gap(prof, r);
        const FieldPoint p = field_point(spec, h, r, psi);
        const BoundaryNormal n = body_normal(prof, r);
        const double cross = (p.w_v - 1.0) * n.e_r - p.w_r * n.e_vert;
        const double dpsi = gap_derivative(prof, r, 1);
        return 2.0 * M_PI * r * std::sqrt(1.0 + dpsi * dpsi) * cross * cross;
      };
      d.body_boundary = (1.0 + 1.0 / spec.beta_s) *
                        integrate_adaptive(body_term, 1e-9, prof.r0, rel_tol).value;
    }
    if (spec.beta_omega > 0.0) {
      auto wall_term = [&](double r) {
        const FieldPoint p = field_point(spec, h, r, 0.0);
        return 2.0 * M_PI * r * p.w_r * p.w_r;
      };
      d.wall_boundary =
          (1.0 / spec.beta_omega) *
          integrate_adaptive(wall_term, 1e-9, bg.r_support, rel_tol).value;
    }
  }
  d.value = d.bulk + d.body_boundary + d.wall_boundary;
  return d;
}

// n(h) = 2 int |D(w_h)|^2 + int (Delta w_h - grad q_h) . w_h over the film,
// which carries the whole h -> 0 scaling h^(-(3 alpha - (d-2))/(1+alpha)).
inline double remainder_n(const TestFieldSpec& spec, double h, double rel_tol = 1e-8) {
  const ShapeProfile prof = spec.profile.with_gap(h);
  const GaussRule& rule = gauss_rule(40);
  auto slice = [&](double r) {
    const double psi = gap(prof, r);
    double sum = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
      const FilmPoint p = film_eval(spec, h, r, rule.x[i] * psi);
      sum += rule.w[i] *
             (2.0 * p.defrate_sq + p.lap_res_r * p.w_r + p.lap_res_v * p.w_v);
    }
    const double ring = spec.three_d() ? 2.0 * M_PI * r : 2.0;
    return ring * psi * sum;
  };
  const double crossover =
      prof.kind == ShapeKind::PowerLaw ? std::pow(h, 1.0 / (1.0 + prof.alpha)) : std::sqrt(2.0 * h);
  std::vector<double> splits;
  if (crossover < prof.r0) splits.push_back(crossover);
  return integrate_adaptive(slice, 0.0, prof.r0, rel_tol, 0.0, 4000, splits).value;
}

// int_film |(Delta w_h - grad q_h) . v| for a fixed admissible v that equals
// e_2 across the whole film (any divergence-free v with v = e_2 on the body
// and a plateau covering the film reduces to this).
inline double qh_residual_pairing(const TestFieldSpec& spec, double h, double rel_tol = 1e-8) {
  if (spec.three_d()) throw std::domain_error("qh_residual_pairing: 2D check");
  const ShapeProfile prof = spec.profile.with_gap(h);
  const GaussRule& rule = gauss_rule(40);
  auto slice = [&](double r) {
    const double psi = gap(prof, r);
    double sum = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) {
      const FilmPoint p = film_eval(spec, h, r, rule.x[i] * psi);
      sum += rule.w[i] * std::abs(p.lap_res_v);
    }
    return 2.0 * psi * sum;
  };
  const double crossover = std::pow(h, 1.0 / (1.0 + prof.alpha));
  std::vector<double> splits;
  if (crossover < prof.r0) splits.push_back(crossover);
  return integrate_adaptive(slice, 0.0, prof.r0, rel_tol, 0.0, 4000, splits).value;
}

struct SlipCoefficients {
  double alpha_s = 0.0, alpha_omega = 0.0;
  double p1 = 0.0, p2 = 0.0, p3 = 0.0;
  double c = 0.0;  // coefficient of (2 mu beta_Omega x3 + x3^2 - ...) in phi
};

inline SlipCoefficients slip_coefficients(const TestFieldSpec& spec, double h, double r) {
  if (spec.variant != FieldVariant::Slip3D)
    throw std::domain_error("slip_coefficients: Slip3D variant only");
  if (r <= 0.0 || r > spec.profile.r0)
    throw std::domain_error("slip_coefficients: r outside (0, r0]");
  if (1.0 - 2.0 * r * r < 1e-3)
    throw std::domain_error("slip_coefficients: ill conditioned, r too close to 1/sqrt(2)");
  const FilmCoeffs fc = film_coeffs(spec, h, r);
  const ShapeProfile prof = spec.profile.with_gap(h);
  const double psi = gap(prof, r);
  const double kap = std::sqrt(1.0 - r * r) / (1.0 - 2.0 * r * r);
  SlipCoefficients out;
  out.alpha_omega = spec.beta_omega > 0.0 ? psi / (spec.mu * spec.beta_omega)
                                          : std::numeric_limits<double>::infinity();
  out.alpha_s = spec.beta_s > 0.0 ? (2.0 + 1.0 / (spec.mu * spec.beta_s)) * kap * psi
                                  : std::numeric_limits<double>::infinity();
  out.p1 = fc.b1.f.v * psi;
  out.p2 = fc.b2.f.v * psi * psi;
  out.p3 = fc.b3.f.v * psi * psi * psi;
  out.c = 0.5 * r * out.p2 / (psi * psi);
  return out;
}

}  // namespace fsic
