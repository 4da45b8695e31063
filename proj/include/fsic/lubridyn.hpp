#pragma once

// Reduced gap dynamics m h'' = -mu h' D(h) - (rho_s - rho_f) g |S| with a
// regime-correct drag law, contact detection, local contact-rate fits, and
// the shear-threshold (Tresca) contact-time schedule.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fsic/criteria.hpp"
#include "fsic/fitting.hpp"
#include "fsic/geometry.hpp"

namespace fsic {

enum class DragRegime { PowerLaw, Log, Const };

struct DragLaw {
  DragRegime regime = DragRegime::Const;
  double beta_hat = 0.0;  // exponent for the PowerLaw regime
  double c = 1.0;         // calibration constant
  bool calibrated = false;

  double operator()(double h) const {
    if (h <= 0.0) throw std::domain_error("DragLaw: h must be positive");
    switch (regime) {
      case DragRegime::PowerLaw: return c * std::pow(h, -beta_hat);
      case DragRegime::Log: return c * std::abs(std::log(std::min(h, 0.99)));
      case DragRegime::Const: return c;
    }
    return c;
  }
  // time integral of D from h to h_upper (quasi-static fall time scale)
  double primitive(double h_lo, double h_hi) const {
    switch (regime) {
      case DragRegime::PowerLaw:
        if (beta_hat == 1.0) return c * (std::log(h_hi) - std::log(h_lo));
        return c * (std::pow(h_hi, 1.0 - beta_hat) - std::pow(h_lo, 1.0 - beta_hat)) /
               (1.0 - beta_hat);
      case DragRegime::Log: {
        // s < 1; the s log s limit at 0 is 0
        auto F = [](double s) { return s <= 0.0 ? 0.0 : s * (1.0 - std::log(s)); };
        return c * (F(h_hi) - F(h_lo));
      }
      case DragRegime::Const: return c * (h_hi - h_lo);
    }
    return 0.0;
  }
  bool contact_possible() const {
    // finite time to h = 0 iff the primitive stays finite at 0
    return regime != DragRegime::PowerLaw || beta_hat < 1.0;
  }
};

// Case table: no-slip 3D blows up like h^-(3a-1)/(1+a) above a = 1/3 (the
// ball sits at exponent 1 with constant 6 pi), stays logarithmic at a = 1/3
// and bounded below; no-slip 2D carries h^-3a/(1+a); slip-both is
// logarithmic; mixed slip keeps the ball exponent 1.
inline DragLaw drag_law_for(const ContactParams& params, const ShapeProfile& profile,
                            const std::function<double(double)>* calibration = nullptr) {
  params.validate();
  profile.validate();
  DragLaw law;
  const double alpha = profile.kind == ShapeKind::Spherical ? 1.0 : profile.alpha;
  switch (params.bc) {
    case BoundaryCondition::NoSlip:
      if (params.d == 3) {
        if (alpha > 1.0 / 3.0) {
          law.regime = DragRegime::PowerLaw;
          law.beta_hat = (3.0 * alpha - 1.0) / (1.0 + alpha);
          if (profile.kind == ShapeKind::Spherical) law.c = 6.0 * M_PI;
        } else if (alpha == 1.0 / 3.0) {
          law.regime = DragRegime::Log;
        } else {
          law.regime = DragRegime::Const;
        }
      } else {
        law.regime = DragRegime::PowerLaw;
        law.beta_hat = 3.0 * alpha / (1.0 + alpha);
      }
      break;
    case BoundaryCondition::SlipBoth:
      if (params.d != 3 || profile.kind != ShapeKind::Spherical)
        throw std::domain_error("drag_law_for: slip laws cover the 3D ball only");
      law.regime = DragRegime::Log;
      break;
    case BoundaryCondition::SlipMixed:
      if (params.d != 3 || profile.kind != ShapeKind::Spherical)
        throw std::domain_error("drag_law_for: slip laws cover the 3D ball only");
      law.regime = DragRegime::PowerLaw;
      law.beta_hat = 1.0;
      break;
    case BoundaryCondition::Tresca:
      throw std::domain_error("drag_law_for: Tresca dynamics use tresca_schedule");
  }
  if (calibration) {
    const std::vector<double> grid = log_grid(1e-5, 1e-2, 12);
    double acc = 0.0;
    std::vector<double> logs, vals;
    for (double h : grid) {
      const double d = (*calibration)(h);
      switch (law.regime) {
        case DragRegime::PowerLaw: acc += std::log(d) + law.beta_hat * std::log(h); break;
        case DragRegime::Log:
          logs.push_back(std::abs(std::log(h)));
          vals.push_back(d);
          break;
        case DragRegime::Const: acc += d; break;
      }
    }
    if (law.regime == DragRegime::Log)
      law.c = linear_fit(logs, vals).slope;
    else if (law.regime == DragRegime::PowerLaw)
      law.c = std::exp(acc / grid.size());
    else
      law.c = acc / grid.size();
    law.calibrated = true;
  }
  return law;
}

struct ContactEvent {
  double t_star = 0.0;
  double impact_speed = 0.0;
  double kappa = 0.0;  // local exponent h ~ (T*-t)^kappa, set by fit_contact_rate
};

struct GapTrajectory {
  std::vector<double> t, h, hdot, drag;
  std::optional<ContactEvent> contact;
  bool reached_tmax = false;
  double energy_drift = 0.0;  // max energy increment per sample, / E(0)

  void push(double time, double gap, double speed, double d) {
    t.push_back(time);
    h.push_back(gap);
    hdot.push_back(speed);
    drag.push_back(d);
  }
};

struct FallOptions {
  double h_contact = 1e-10;
  double t_bisect = 1e-13;
  double rel_tol = 1e-10;
  double quasi_static_ratio = 1e-6;
  int samples_per_decade = 24;
};

namespace detail {

struct Rk45Step {
  double h, v, err;
};

template <class Rhs>
Rk45Step cash_karp(const Rhs& rhs, double h, double v, double dt) {
  // Cash-Karp embedded 4(5) pair
  constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  constexpr double b21 = 1.0 / 5;
  constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
  constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                   b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
  constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                   d5 = 277.0 / 14336, d6 = 1.0 / 4;
  (void)a2; (void)a3; (void)a4; (void)a5; (void)a6;
  double k1h, k1v, k2h, k2v, k3h, k3v, k4h, k4v, k5h, k5v, k6h, k6v;
  rhs(h, v, k1h, k1v);
  rhs(h + dt * b21 * k1h, v + dt * b21 * k1v, k2h, k2v);
  rhs(h + dt * (b31 * k1h + b32 * k2h), v + dt * (b31 * k1v + b32 * k2v), k3h, k3v);
  rhs(h + dt * (b41 * k1h + b42 * k2h + b43 * k3h), v + dt * (b41 * k1v + b42 * k2v + b43 * k3v),
      k4h, k4v);
  rhs(h + dt * (b51 * k1h + b52 * k2h + b53 * k3h + b54 * k4h),
      v + dt * (b51 * k1v + b52 * k2v + b53 * k3v + b54 * k4v), k5h, k5v);
  rhs(h + dt * (b61 * k1h + b62 * k2h + b63 * k3h + b64 * k4h + b65 * k5h),
      v + dt * (b61 * k1v + b62 * k2v + b63 * k3v + b64 * k4v + b65 * k5v), k6h, k6v);
  Rk45Step out;
  out.h = h + dt * (c1 * k1h + c3 * k3h + c4 * k4h + c6 * k6h);
  out.v = v + dt * (c1 * k1v + c3 * k3v + c4 * k4v + c6 * k6v);
  const double h4 = h + dt * (d1 * k1h + d3 * k3h + d4 * k4h + d5 * k5h + d6 * k6h);
  const double v4 = v + dt * (d1 * k1v + d3 * k3v + d4 * k4v + d5 * k5v + d6 * k6v);
  out.err = std::abs(out.h - h4) + std::abs(out.v - v4);
  return out;
}

}  // namespace detail

// Integrates the fall until contact (h <= h_contact), t_max, or the
// quasi-static terminal regime, which is then continued in closed form.
inline GapTrajectory integrate_fall(const DragLaw& law, const ContactParams& params, double h0,
                                    double hdot0, double t_max, FallOptions opt = {}) {
  if (h0 <= 0.0 || t_max <= 0.0)
    throw std::domain_error("integrate_fall: need h0 > 0 and t_max > 0");
  params.validate();
  const double weight = params.g * params.m * (1.0 - params.rho_f / params.rho_s);
  auto rhs = [&](double h, double v, double& dh, double& dv) {
    const double hh = std::max(h, opt.h_contact * 0.5);
    dh = v;
    dv = (-params.mu * v * law(hh) - weight) / params.m;
  };
  GapTrajectory traj;
  double t = 0.0, h = h0, v = hdot0;
  double dt = 1e-6 * std::sqrt(params.m / (params.mu * law(h0) + 1.0));
  traj.push(t, h, v, law(h));
  const double scale0 = std::abs(h0) + std::abs(hdot0) + 1.0;
  double max_drift = 0.0;
  const double e0 = 0.5 * params.m * hdot0 * hdot0 + weight * h0;
  double e_prev = e0;

  bool quasi_static = false;
  long iterations = 0;
  while (t < t_max) {
    if (++iterations > 2000000)
      throw std::runtime_error("integrate_fall: step budget exhausted before contact or t_max");
    // terminal balance: |m hdd| << |mu hd D|, switch to the separable phase
    {
      double dh_, dv_;
      rhs(h, v, dh_, dv_);
      if (v < 0.0 &&
          std::abs(params.m * dv_) < opt.quasi_static_ratio * std::abs(params.mu * v * law(h))) {
        quasi_static = true;
        break;
      }
    }
    // keep ~12 samples per e-fold of h near contact so local rates can be fit
    if (v < 0.0) dt = std::min(dt, h / (12.0 * -v));
    detail::Rk45Step step = detail::cash_karp(rhs, h, v, dt);
    const double tol = opt.rel_tol * scale0;
    if (step.err > tol && dt > 1e-15) {
      dt = std::max(1e-15, 0.9 * dt * std::pow(tol / step.err, 0.25));
      continue;
    }
    if (step.h <= opt.h_contact) {  // bisect the crossing time inside the step
      double lo = 0.0, hi = dt;
      while (hi - lo > opt.t_bisect) {
        const double mid = 0.5 * (lo + hi);
        (detail::cash_karp(rhs, h, v, mid).h <= opt.h_contact ? hi : lo) = mid;
      }
      detail::Rk45Step exit_state = detail::cash_karp(rhs, h, v, hi);
      t += hi;
      traj.push(t, opt.h_contact, exit_state.v, law(opt.h_contact));
      // extrapolate T* to gap zero; the event threshold stands in for contact
      const double tail_time =
          exit_state.v < 0.0 ? opt.h_contact / -exit_state.v : 0.0;
      traj.contact = ContactEvent{t + tail_time, exit_state.v, 0.0};
      traj.energy_drift = max_drift;
      return traj;
    }
    t += dt;
    h = step.h;
    v = step.v;
    if (t > t_max) {  // clamp the overshoot by re-integrating the remainder
      t -= dt;
      const double rest = t_max - t;
      detail::Rk45Step fin = detail::cash_karp(rhs, h, v, rest);
      t = t_max;
      h = fin.h;
      v = fin.v;
    }
    const double e = 0.5 * params.m * v * v + weight * h;
    max_drift = std::max(max_drift, (e - e_prev) / (std::abs(e0) + 1e-300));
    e_prev = e;
    traj.push(t, h, v, law(h));
    if (step.err > 0.0) dt = std::min(1.05 * dt, 0.9 * dt * std::pow(tol / step.err, 0.2));
  }

  if (!quasi_static) {
    traj.reached_tmax = true;
    traj.energy_drift = max_drift;
    return traj;
  }

  // separable phase: hdot = -weight / (mu D(h)), dt = mu D dh / weight
  const double mu_w = params.mu / weight;
  auto time_to = [&](double h_target) { return mu_w * law.primitive(h_target, h); };
  if (law.contact_possible()) {
    // sample log-spaced gaps down to contact
    const int decades = static_cast<int>(std::ceil(std::log10(h / opt.h_contact)));
    const int n = std::max(2, decades * opt.samples_per_decade);
    for (int i = 1; i <= n; ++i) {
      const double hh =
          std::exp(std::log(h) + (std::log(opt.h_contact) - std::log(h)) * i / double(n));
      const double tt = t + time_to(hh);
      if (tt > t_max) {
        traj.reached_tmax = true;
        traj.energy_drift = max_drift;
        return traj;
      }
      traj.push(tt, hh, -weight / (params.mu * law(hh)), law(hh));
    }
    const double t_contact = t + time_to(0.0);
    traj.contact = ContactEvent{t_contact, -weight / (params.mu * law(opt.h_contact)), 0.0};
    traj.energy_drift = max_drift;
    return traj;
  }
  // no contact: march the closed form to t_max
  const int n = 200;
  for (int i = 1; i <= n; ++i) {
    const double tt = t + (t_max - t) * i / double(n);
    double h_tt;
    if (law.regime == DragRegime::PowerLaw && law.beta_hat == 1.0) {
      h_tt = h * std::exp(-(tt - t) / (mu_w * law.c));
    } else {  // beta_hat > 1
      const double p = 1.0 - law.beta_hat;
      h_tt = std::pow(std::pow(h, p) - p * (tt - t) / (mu_w * law.c), 1.0 / p);
    }
    traj.push(tt, h_tt, -weight / (params.mu * law(h_tt)), law(h_tt));
  }
  traj.reached_tmax = true;
  traj.energy_drift = max_drift;
  return traj;
}

struct RateFit {
  double kappa = 0.0;
  double r2 = 0.0;
  bool consistent = false;  // kappa > eta when a reference rate is supplied
};

// Least-squares exponent of h vs (T* - t) over the final decade of h.
inline RateFit fit_contact_rate(const GapTrajectory& traj, double eta_reference = 0.0) {
  if (!traj.contact) throw std::domain_error("fit_contact_rate: trajectory has no contact event");
  const double t_star = traj.contact->t_star;
  double h_min = 1e300;
  for (size_t i = 0; i < traj.h.size(); ++i)
    if (traj.t[i] < t_star && traj.h[i] > 0.0) h_min = std::min(h_min, traj.h[i]);
  std::vector<double> lx, ly;
  for (size_t i = 0; i < traj.h.size(); ++i) {
    if (traj.t[i] >= t_star || traj.h[i] <= 0.0) continue;
    if (traj.h[i] > 10.0 * h_min) continue;
    lx.push_back(std::log(t_star - traj.t[i]));
    ly.push_back(std::log(traj.h[i]));
  }
  if (lx.size() < 20)
    throw std::domain_error("fit_contact_rate: need >= 20 samples in the final decade");
  const LinearFit f = linear_fit(lx, ly);
  RateFit out;
  out.kappa = f.slope;
  out.r2 = f.r2;
  out.consistent = out.kappa > eta_reference;
  return out;
}

// H_beta(h) = h^(1-beta)/(1-beta), degenerating to log h at beta = 1;
// monotone increasing in h for every beta.
inline double h_beta_transform(double h, double beta) {
  if (h <= 0.0) throw std::domain_error("h_beta_transform: h must be positive");
  if (beta == 1.0) return std::log(h);
  return std::pow(h, 1.0 - beta) / (1.0 - beta);
}

struct TrescaSchedule {
  double sigma = 0.0, h0 = 0.0, g = 0.0, m = 0.0, c_sharp = 0.0, c_flat = 0.0;
  std::vector<double> t;        // t_0, t_1, ..., t_n_max
  std::vector<double> h_repr;   // geometric mean of the bracket
  std::vector<double> lower, upper;
  double t_star_upper = 0.0;    // geometric-series bound on lim t_n
  bool admissible_h0 = false;
  bool admissible_mass = false;
  bool admissible() const { return admissible_h0 && admissible_mass; }
};

// Contact-time sequence t_{n+1} = t_n + sigma h(t_n) / (2 sqrt(g h0)) with
// the bracket (h0/2)(1-sigma)^n <= h(t_n) <= (3/2) h0 (1 - sigma^2/32)^n.
inline TrescaSchedule tresca_schedule(double h0, double g, double sigma, double m, double c_sharp,
                                      double c_flat, int n_max) {
  if (!(sigma > 0.0 && sigma < 0.5)) throw std::domain_error("tresca_schedule: sigma in (0, 1/2)");
  if (h0 <= 0.0 || g <= 0.0 || m <= 0.0)
    throw std::domain_error("tresca_schedule: h0, g, m must be positive");
  TrescaSchedule s;
  s.sigma = sigma;
  s.h0 = h0;
  s.g = g;
  s.m = m;
  s.c_sharp = c_sharp;
  s.c_flat = c_flat;

  s.admissible_h0 =
      h0 < std::max(2.0 / (3.0 * (1.0 + sigma)), 1.0 / (std::pow(32.0 * c_sharp, 2.0) * g));
  // mass gate: the damped log series must not overwhelm the free-fall gain
  const double q = 1.0 - sigma * sigma / 32.0;
  double series = 0.0, qk = 1.0;
  for (int k = 0; k < 2000000 && qk > 1e-18; ++k, qk *= q)
    series += qk * std::abs((k + 1) * std::log(1.0 - sigma) + std::log(h0 / 2.0));
  const double lhs = -std::sqrt(g * h0) / 32.0 +
                     (3.0 * c_flat * sigma / (4.0 * m)) * std::sqrt(h0 / g) * series;
  s.admissible_mass = lhs <= -(sigma / 16.0) * std::sqrt(g * h0);

  const double dt_scale = sigma / (2.0 * std::sqrt(g * h0));
  s.t.push_back(0.25 * std::sqrt(h0 / g));
  for (int n = 0; n <= n_max; ++n) {
    s.lower.push_back(0.5 * h0 * std::pow(1.0 - sigma, n));
    s.upper.push_back(1.5 * h0 * std::pow(q, n));
    s.h_repr.push_back(std::sqrt(s.lower.back() * s.upper.back()));
    if (n < n_max) s.t.push_back(s.t.back() + dt_scale * s.h_repr.back());
  }
  s.t_star_upper = s.t.front() + dt_scale * 1.5 * h0 * (32.0 / (sigma * sigma));
  return s;
}

}  // namespace fsic
