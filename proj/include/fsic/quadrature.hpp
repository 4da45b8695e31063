#pragma once

// Adaptive Gauss-Kronrod 7/15 with caller-supplied mandatory split points,
// plus cached fixed-order Gauss-Legendre rules for smooth inner integrals.

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

namespace fsic {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes/weights on [-1,1] with embedded 7-point Gauss.
inline constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e0, 2.077849550078984676006894037732449e-1,
    4.058451513773971669066064120769615e-1, 5.860872354676911302941448382587296e-1,
    7.415311855993944398638647732807884e-1, 8.648644233597690727897127886409262e-1,
    9.491079123427585245261896840478513e-1, 9.914553711208126392068546975263285e-1};
inline constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-1, 2.044329400752988924141619992346491e-1,
    1.903505780647854099132564024210137e-1, 1.690047266392679028265834265985503e-1,
    1.406532597155259187451895905102379e-1, 1.047900103222501838398763225415180e-1,
    6.309209262997855329070066318920429e-2, 2.293532201052922496373200805896959e-2};
inline constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-1, 3.818300505051189449503697754889751e-1,
    2.797053914892766679014677714237796e-1, 1.294849661688696932706114326790820e-1};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b), halfwidth = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = kKronrodWeights[0] * f0;
  double gauss = kGaussWeights[0] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = halfwidth * kKronrodNodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[i] * fsum;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * fsum;
  }
  result = kron * halfwidth;
  err = std::abs(kron - gauss) * std::abs(halfwidth);
}

struct Interval {
  double a, b, value, err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

// Integrates f over [a,b]; split points strictly inside (a,b) seed the
// initial subdivision (used for the h^(1/(1+alpha)) crossover).
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                              double abs_tol = 0.0, int max_intervals = 4000,
                              const std::vector<double>& splits = {}) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<double> edges = {a, b};
  for (double s : splits)
    if (s > std::min(a, b) && s < std::max(a, b)) edges.push_back(s);
  std::sort(edges.begin(), edges.end());
  if (a > b) std::reverse(edges.begin(), edges.end());

  std::priority_queue<detail::Interval> work;
  double total = 0.0, total_err = 0.0;
  int evals = 0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    detail::Interval iv{edges[i], edges[i + 1], 0, 0};
    detail::gk15(f, iv.a, iv.b, iv.value, iv.err);
    evals += 15;
    total += iv.value;
    total_err += iv.err;
    work.push(iv);
  }
  int n = static_cast<int>(work.size());
  while (n < max_intervals) {
    const double target = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= target) break;
    detail::Interval iv = work.top();
    work.pop();
    total -= iv.value;
    total_err -= iv.err;
    const double mid = 0.5 * (iv.a + iv.b);
    if (mid == iv.a || mid == iv.b) {  // interval exhausted at machine precision
      total += iv.value;
      break;
    }
    for (detail::Interval half : {detail::Interval{iv.a, mid, 0, 0}, detail::Interval{mid, iv.b, 0, 0}}) {
      detail::gk15(f, half.a, half.b, half.value, half.err);
      evals += 15;
      total += half.value;
      total_err += half.err;
      work.push(half);
    }
    ++n;
  }
  out.value = total;
  out.abs_error = total_err;
  out.evaluations = evals;
  out.converged = total_err <= std::max(abs_tol, rel_tol * std::abs(total)) + 1e-300;
  return out;
}

// Cached Gauss-Legendre nodes/weights on [0,1], computed by Newton iteration.
struct GaussRule {
  std::vector<double> x, w;  // on [0,1]
};

inline const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (t * p1 - p0) / (t * t - 1.0);
    rule.x[i] = 0.5 * (1.0 - t);  // reversed order is irrelevant
    rule.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// Fixed-order Gauss quadrature of f over [a,b].
template <class F>
double integrate_gauss(const F& f, double a, double b, int n = 24) {
  const GaussRule& rule = gauss_rule(n);
  double sum = 0.0;
  const double width = b - a;
  for (int i = 0; i < n; ++i) sum += rule.w[i] * f(a + width * rule.x[i]);
  return sum * width;
}

}  // namespace fsic
