#pragma once

// Viscous Burgers flow on moving intervals coupled to point masses through
// the jump of the velocity gradient: u_t + kappa (u^2)_x = u_xx away from
// the particles, hdot_i = u(t, h_i), m_i hddot_i = [u_x](h_i). The infinite
// line is truncated to [-L, L] with homogeneous Dirichlet ends.
//
// Discretization: per-interval affine ALE meshes keep the particles on grid
// nodes; diffusion and the mesh-transport term are implicit Euler,
// convection is semi-implicit in the energy-neutral skew-split form
// (2k/3)[D(u^n u+) + u^n D(u+)]; the one-sided gradient jump uses 3-point
// second-order stencils and enters the particle rows implicitly.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsic {

struct ParticleInit {
  double h = 0.0;
  double hdot = 0.0;
  double mass = 1.0;
};

struct Solver1DConfig {
  double kappa = 1.0;
  double L = 20.0;
  int nodes_per_unit = 32;
  double cfl = 0.4;
  double dt_max = 2e-3;
  double dt_min = 1e-12;
  double compat_tol = 1e-10;  // |u0(h_i) - hdot_i| gate
  bool record_history = true;
};

struct StepRecord {
  double t = 0.0;
  std::vector<double> h, hdot;
  double energy = 0.0;
  double min_gap = 0.0;
  double grad_sup = 0.0;     // sup_x |u_x| including one-sided particle slopes
  double dissipation = 0.0;  // int u_x^2
};

// Piecewise-smooth function with jump amplitudes at interior points.
struct JumpField {
  std::vector<double> x, f;          // regular part sampled on a grid
  std::vector<double> amplitudes;    // |[f]| at the particles
  double sup_norm = 0.0;             // of the full field (regular + one-sided values)
};

struct InterpCheck {
  double lhs = 0.0;  // ||f||_inf^2
  double rhs = 0.0;  // 2 ||f|| ||f'_reg|| + 2 ||f||_inf sum |a_i|
  bool holds = false;
  double margin = 0.0;
};

// ||f||_inf^2 <= 2 ||f||_2 ||f'_reg||_2 + 2 ||f||_inf sum |a_i| for fields
// that split into an H^1 part plus finitely many jumps.
inline InterpCheck interp_inequality_check(const JumpField& field) {
  const size_t n = field.x.size();
  if (n < 3) throw std::domain_error("interp_inequality_check: need a sampled grid");
  double sup = field.sup_norm;
  double l2 = 0.0, dreg = 0.0;
  for (size_t j = 0; j + 1 < n; ++j) {
    const double dx = field.x[j + 1] - field.x[j];
    if (dx <= 0.0) throw std::domain_error("interp_inequality_check: grid must increase");
    sup = std::max({sup, std::abs(field.f[j]), std::abs(field.f[j + 1])});
    l2 += 0.5 * dx * (field.f[j] * field.f[j] + field.f[j + 1] * field.f[j + 1]);
    const double slope = (field.f[j + 1] - field.f[j]) / dx;
    dreg += dx * slope * slope;
  }
  double jumps = 0.0;
  for (double a : field.amplitudes) jumps += std::abs(a);
  InterpCheck out;
  out.lhs = sup * sup;
  out.rhs = 2.0 * std::sqrt(l2) * std::sqrt(dreg) + 2.0 * sup * jumps;
  out.margin = out.rhs - out.lhs;
  out.holds = out.margin >= -1e-12 * std::max(out.rhs, 1.0);
  return out;
}

class ParticleSystem1D {
 public:
  ParticleSystem1D(const std::function<double(double)>& u0, std::vector<ParticleInit> particles,
                   const Solver1DConfig& config)
      : cfg_(config) {
    if (particles.empty()) throw std::domain_error("ParticleSystem1D: need >= 1 particle");
    for (size_t i = 0; i + 1 < particles.size(); ++i)
      if (!(particles[i].h < particles[i + 1].h))
        throw std::domain_error("ParticleSystem1D: particle positions must increase strictly");
    for (size_t i = 0; i < particles.size(); ++i) {
      if (particles[i].mass <= 0.0)
        throw std::domain_error("ParticleSystem1D: masses must be positive");
      if (std::abs(u0(particles[i].h) - particles[i].hdot) > cfg_.compat_tol)
        throw std::domain_error("ParticleSystem1D: incompatible data at particle index " +
                                std::to_string(i) + ": u0(h) != hdot");
      if (std::abs(particles[i].h) >= cfg_.L)
        throw std::domain_error("ParticleSystem1D: particle outside the truncated line");
    }
    h_.reserve(particles.size());
    hdot_.reserve(particles.size());
    mass_.reserve(particles.size());
    for (const auto& p : particles) {
      h_.push_back(p.h);
      hdot_.push_back(p.hdot);
      mass_.push_back(p.mass);
    }
    build_mesh(h_);
    u_.resize(x_.size());
    for (size_t j = 0; j < x_.size(); ++j) u_[j] = u0(x_[j]);
    for (size_t i = 0; i < h_.size(); ++i) u_[pidx_[i]] = hdot_[i];  // exact coupling
    u_.front() = 0.0;
    u_.back() = 0.0;
    record(0.0);
  }

  double time() const { return t_; }
  const std::vector<double>& positions() const { return h_; }
  const std::vector<double>& velocities() const { return hdot_; }
  const std::vector<StepRecord>& history() const { return history_; }
  int node_count() const { return static_cast<int>(x_.size()); }

  double min_gap() const {
    double g = 2.0 * cfg_.L;
    for (size_t i = 0; i + 1 < h_.size(); ++i) g = std::min(g, h_[i + 1] - h_[i]);
    return g;
  }

  // piecewise-linear sample of the current velocity field
  double sample_u(double x) const {
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    size_t lo = 0, hi = x_.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      (x_[mid] <= x ? lo : hi) = mid;
    }
    const double s = (x - x_[lo]) / (x_[lo + 1] - x_[lo]);
    return (1.0 - s) * u_[lo] + s * u_[lo + 1];
  }

  // one-sided gradients and the jump force at particle i
  double gradient_left(size_t i) const { return one_sided(pidx_[i], -1); }
  double gradient_right(size_t i) const { return one_sided(pidx_[i], +1); }
  double jump_force(size_t i) const { return gradient_right(i) - gradient_left(i); }

  JumpField gradient_snapshot() const {
    JumpField f;
    for (size_t j = 0; j + 1 < x_.size(); ++j) {
      f.x.push_back(0.5 * (x_[j] + x_[j + 1]));
      f.f.push_back((u_[j + 1] - u_[j]) / (x_[j + 1] - x_[j]));
    }
    for (size_t i = 0; i < h_.size(); ++i) {
      f.amplitudes.push_back(jump_force(i));
      f.sup_norm = std::max({f.sup_norm, std::abs(gradient_left(i)), std::abs(gradient_right(i))});
    }
    for (double v : f.f) f.sup_norm = std::max(f.sup_norm, std::abs(v));
    return f;
  }

  // advance to t_end with adaptive steps; returns the number of accepted steps
  long run(double t_end) {
    long accepted = 0;
    while (t_ < t_end - 1e-14) {
      double dt = suggest_dt();
      dt = std::min(dt, t_end - t_);
      while (!try_step(dt)) {
        dt *= 0.5;
        if (dt < cfg_.dt_min)
          throw std::runtime_error("ParticleSystem1D: step size underflow at t = " +
                                   std::to_string(t_));
      }
      ++accepted;
    }
    return accepted;
  }

  double energy() const {
    double e = 0.0;
    for (size_t i = 0; i < h_.size(); ++i) e += 0.5 * mass_[i] * hdot_[i] * hdot_[i];
    for (size_t j = 0; j + 1 < x_.size(); ++j)
      e += 0.25 * (x_[j + 1] - x_[j]) * (u_[j] * u_[j] + u_[j + 1] * u_[j + 1]);
    return e;
  }

 private:
  Solver1DConfig cfg_;
  double t_ = 0.0;
  std::vector<double> h_, hdot_, mass_;
  std::vector<double> x_, u_;
  std::vector<int> pidx_;       // particle node indices
  std::vector<int> seg_nodes_;  // node count per interval (fixed after init)
  std::vector<StepRecord> history_;

  void build_mesh(const std::vector<double>& hp) {
    x_.clear();
    pidx_.clear();
    seg_nodes_.clear();
    std::vector<double> bounds;
    bounds.push_back(-cfg_.L);
    for (double h : hp) bounds.push_back(h);
    bounds.push_back(cfg_.L);
    for (size_t s = 0; s + 1 < bounds.size(); ++s) {
      const double a = bounds[s], b = bounds[s + 1];
      const int cells = std::max(4, static_cast<int>(std::ceil((b - a) * cfg_.nodes_per_unit)));
      seg_nodes_.push_back(cells + 1);
      const int from = s == 0 ? 0 : 1;  // left node is shared with the previous interval
      for (int j = from; j <= cells; ++j) x_.push_back(a + (b - a) * j / double(cells));
      if (s + 2 < bounds.size()) pidx_.push_back(static_cast<int>(x_.size()) - 1);
    }
  }

  double one_sided(int p, int dir) const {
    const double d = std::abs(x_[p + dir] - x_[p]);
    return dir * (-3.0 * u_[p] + 4.0 * u_[p + dir] - u_[p + 2 * dir]) / (2.0 * d);
  }

  double suggest_dt() const {
    double dt = cfg_.dt_max;
    double umax = 1e-12;
    for (double v : u_) umax = std::max(umax, std::abs(v));
    double dx_min = 1e300;
    for (size_t j = 0; j + 1 < x_.size(); ++j) dx_min = std::min(dx_min, x_[j + 1] - x_[j]);
    return std::min(dt, cfg_.cfl * dx_min / umax);
  }

  bool try_step(double dt) {
    const size_t np = h_.size();
    // predict particle motion with the current jump force
    std::vector<double> h_new(np);
    for (size_t i = 0; i < np; ++i) {
      const double acc = jump_force(i) / mass_[i];
      h_new[i] = h_[i] + dt * hdot_[i] + 0.5 * dt * dt * acc;
    }
    for (size_t i = 0; i < np; ++i) {
      const double left = i == 0 ? -cfg_.L : h_new[i - 1];
      const double right = i + 1 == np ? cfg_.L : h_new[i + 1];
      if (h_new[i] - left < 1e-12 || right - h_new[i] < 1e-12) return false;  // ordering lost
    }
    // new mesh with matched node counts (ALE correspondence by index)
    std::vector<double> x_old = x_, u_old = u_;
    std::vector<int> seg_nodes_old = seg_nodes_;
    std::vector<double> x_new;
    x_new.reserve(x_.size());
    {
      std::vector<double> bounds;
      bounds.push_back(-cfg_.L);
      for (double h : h_new) bounds.push_back(h);
      bounds.push_back(cfg_.L);
      for (size_t s = 0; s + 1 < bounds.size(); ++s) {
        const int cells = seg_nodes_[s] - 1;
        const int from = s == 0 ? 0 : 1;
        for (int j = from; j <= cells; ++j)
          x_new.push_back(bounds[s] + (bounds[s + 1] - bounds[s]) * j / double(cells));
      }
    }
    const int n = static_cast<int>(x_new.size());
    std::vector<std::array<double, 5>> band(n, {0, 0, 0, 0, 0});
    std::vector<double> rhs(n, 0.0);
    auto add = [&](int i, int j, double v) { band[i][j - i + 2] += v; };

    std::vector<char> is_particle(n, 0);
    for (int p : pidx_) is_particle[p] = 1;

    for (int j = 0; j < n; ++j) {
      if (j == 0 || j == n - 1) {  // clamped ends
        add(j, j, 1.0);
        rhs[j] = 0.0;
        continue;
      }
      if (is_particle[j]) {
        // m (u+ - u)/dt = one-sided jump of u+_x on the new mesh
        size_t i = 0;
        while (pidx_[i] != j) ++i;
        const double m = mass_[i];
        const double dl = x_new[j] - x_new[j - 1];
        const double dr = x_new[j + 1] - x_new[j];
        add(j, j, m / dt);
        rhs[j] = m * u_old[j] / dt;
        // right gradient (-3u_j + 4u_{j+1} - u_{j+2})/(2 dr)
        add(j, j, 3.0 / (2.0 * dr));
        add(j, j + 1, -4.0 / (2.0 * dr));
        add(j, j + 2, 1.0 / (2.0 * dr));
        // minus left gradient (3u_j - 4u_{j-1} + u_{j-2})/(2 dl)
        add(j, j, 3.0 / (2.0 * dl));
        add(j, j - 1, -4.0 / (2.0 * dl));
        add(j, j - 2, 1.0 / (2.0 * dl));
        continue;
      }
      const double dl = x_new[j] - x_new[j - 1];
      const double dr = x_new[j + 1] - x_new[j];
      const double w = (x_new[j] - x_old[j]) / dt;  // mesh velocity
      add(j, j, 1.0 / dt);
      rhs[j] = u_old[j] / dt;
      // implicit diffusion (3-point, nonuniform)
      const double den = 0.5 * (dl + dr);
      add(j, j - 1, -1.0 / (dl * den));
      add(j, j, 1.0 / (dl * den) + 1.0 / (dr * den));
      add(j, j + 1, -1.0 / (dr * den));
      // implicit mesh transport -w u_x (central)
      add(j, j - 1, w / (dl + dr));
      add(j, j + 1, -w / (dl + dr));
      // skew-split convection (2k/3)[(u^n u+)_x + u^n (u+)_x], central
      const double k23 = 2.0 * cfg_.kappa / 3.0;
      add(j, j - 1, -k23 * (u_old[j - 1] + u_old[j]) / (dl + dr));
      add(j, j + 1, k23 * (u_old[j + 1] + u_old[j]) / (dl + dr));
    }
    solve_tridiagonal_band(band, rhs);

    // accept
    t_ += dt;
    x_ = std::move(x_new);
    u_ = std::move(rhs);
    h_ = std::move(h_new);
    for (size_t i = 0; i < np; ++i) hdot_[i] = u_[pidx_[i]];
    record(dt);
    return true;
  }

  // LU for the pentadiagonal band (kl = ku = 2), forward elimination +
  // back substitution in place; diagonally dominant rows need no pivoting
  static void solve_tridiagonal_band(std::vector<std::array<double, 5>>& band,
                                     std::vector<double>& rhs) {
    const int n = static_cast<int>(rhs.size());
    auto at = [&](int i, int j) -> double& { return band[i][j - i + 2]; };
    for (int col = 0; col < n; ++col) {
      const double piv = at(col, col);
      if (piv == 0.0) throw std::runtime_error("banded solve: zero pivot");
      for (int row = col + 1; row <= std::min(col + 2, n - 1); ++row) {
        if (at(row, col) == 0.0) continue;
        const double f = at(row, col) / piv;
        at(row, col) = 0.0;
        for (int j = col + 1; j <= std::min(col + 2, n - 1); ++j) at(row, j) -= f * at(col, j);
        rhs[row] -= f * rhs[col];
      }
    }
    for (int row = n - 1; row >= 0; --row) {
      double s = rhs[row];
      for (int j = row + 1; j <= std::min(row + 2, n - 1); ++j) s -= at(row, j) * rhs[j];
      rhs[row] = s / at(row, row);
    }
  }

  void record(double) {
    if (!cfg_.record_history) return;
    StepRecord r;
    r.t = t_;
    r.h = h_;
    r.hdot = hdot_;
    r.energy = energy();
    r.min_gap = min_gap();
    double sup = 0.0, diss = 0.0;
    for (size_t j = 0; j + 1 < x_.size(); ++j) {
      const double dx = x_[j + 1] - x_[j];
      const double slope = (u_[j + 1] - u_[j]) / dx;
      sup = std::max(sup, std::abs(slope));
      diss += dx * slope * slope;
    }
    for (size_t i = 0; i < h_.size(); ++i)
      sup = std::max({sup, std::abs(gradient_left(i)), std::abs(gradient_right(i))});
    r.grad_sup = sup;
    r.dissipation = diss;
    history_.push_back(std::move(r));
  }
};

struct GronwallCheck {
  bool holds = false;
  double min_margin = 0.0;  // min over t of gap(t) - envelope(t)
  double grad_l2_time = 0.0;  // int ||u_x||_inf^2 dt
};

// backward envelope: gap(t) >= gap(T) exp(-int_t^T sup|u_x| ds)
inline GronwallCheck gronwall_gap_check(const std::vector<StepRecord>& history) {
  if (history.size() < 2) throw std::domain_error("gronwall_gap_check: need recorded steps");
  GronwallCheck out;
  out.holds = true;
  out.min_margin = 1e300;
  const size_t n = history.size();
  std::vector<double> integral(n, 0.0);  // int_t^T sup ds, backwards
  for (size_t k = n - 1; k-- > 0;) {
    const double dt = history[k + 1].t - history[k].t;
    integral[k] =
        integral[k + 1] + 0.5 * dt * (history[k].grad_sup + history[k + 1].grad_sup);
  }
  for (size_t k = 0; k + 1 < n; ++k) {
    const double dt = history[k + 1].t - history[k].t;
    out.grad_l2_time += 0.5 * dt *
                        (history[k].grad_sup * history[k].grad_sup +
                         history[k + 1].grad_sup * history[k + 1].grad_sup);
  }
  const double gap_final = history.back().min_gap;
  for (size_t k = 0; k < n; ++k) {
    const double envelope = gap_final * std::exp(-integral[k]);
    const double margin = history[k].min_gap - envelope;
    out.min_margin = std::min(out.min_margin, margin);
    if (margin < -1e-9 * std::max(1.0, history[k].min_gap)) out.holds = false;
  }
  return out;
}

}  // namespace fsic
