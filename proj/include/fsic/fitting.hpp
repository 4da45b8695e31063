#pragma once

// Least-squares scaling fits: log-log power-law slopes and the |log h|
// branch used to recognize logarithmic blow-up.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fsic {

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw FitError("linear_fit: need >= 2 matched samples");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw FitError("linear_fit: degenerate abscissa (zero variance)");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

// Least-squares fit of y on an arbitrary small basis; returns coefficients.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& basis,
                                         std::span<const double> y) {
  const size_t m = basis.size(), n = y.size();
  std::vector<std::vector<double>> ata(m, std::vector<double>(m, 0.0));
  std::vector<double> aty(m, 0.0);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j)
      for (size_t k = 0; k < n; ++k) ata[i][j] += basis[i][k] * basis[j][k];
    for (size_t k = 0; k < n; ++k) aty[i] += basis[i][k] * y[k];
  }
  // Gaussian elimination with partial pivoting.
  for (size_t col = 0; col < m; ++col) {
    size_t piv = col;
    for (size_t row = col + 1; row < m; ++row)
      if (std::abs(ata[row][col]) > std::abs(ata[piv][col])) piv = row;
    std::swap(ata[col], ata[piv]);
    std::swap(aty[col], aty[piv]);
    if (ata[col][col] == 0.0) throw FitError("least_squares: singular normal equations");
    for (size_t row = col + 1; row < m; ++row) {
      const double f = ata[row][col] / ata[col][col];
      for (size_t j = col; j < m; ++j) ata[row][j] -= f * ata[col][j];
      aty[row] -= f * aty[col];
    }
  }
  std::vector<double> coeff(m);
  for (size_t i = m; i-- > 0;) {
    double s = aty[i];
    for (size_t j = i + 1; j < m; ++j) s -= ata[i][j] * coeff[j];
    coeff[i] = s / ata[i][i];
  }
  return coeff;
}

struct ScalingFit {
  double exponent = 0.0;       // slope of log(value) vs log(h)
  double r2 = 0.0;             // of the power-law branch
  bool logarithmic_branch = false;  // value ~ c*|log h| fit the data better
  double r2_log = 0.0;         // of the value-vs-|log h| branch
  double log_slope = 0.0;      // c in value ~ c*|log h| + b
  bool slow_converging = false;
  std::vector<double> h_grid;
};

// h strictly decreasing, values > 0, >= 5 samples spanning >= 3 decades.
inline ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 5) throw FitError("fit_scaling: need >= 5 samples");
  std::vector<double> lh, lv, h, v;
  for (auto& [hi, vi] : samples) {
    if (!h.empty() && hi >= h.back()) throw FitError("fit_scaling: h must be strictly decreasing");
    if (vi <= 0.0) throw FitError("fit_scaling: values must be positive");
    h.push_back(hi);
    v.push_back(vi);
    lh.push_back(std::log(hi));
    lv.push_back(std::log(vi));
  }
  if (lh.front() - lh.back() < 3.0 * std::log(10.0) - 1e-9)
    throw FitError("fit_scaling: h grid must span at least 3 decades");
  if (*std::max_element(v.begin(), v.end()) == *std::min_element(v.begin(), v.end()))
    throw FitError("fit_scaling: degenerate samples (zero variance)");

  ScalingFit fit;
  fit.h_grid = h;
  const LinearFit power = linear_fit(lh, lv);
  fit.exponent = power.slope;
  fit.r2 = power.r2;

  std::vector<double> abslog(h.size());
  for (size_t i = 0; i < h.size(); ++i) abslog[i] = std::abs(lh[i]);
  const LinearFit logfit = linear_fit(abslog, v);
  fit.r2_log = logfit.r2;
  fit.log_slope = logfit.slope;
  fit.logarithmic_branch = logfit.r2 > fit.r2;
  return fit;
}

inline ScalingFit fit_scaling(const std::vector<double>& h, const std::vector<double>& v) {
  std::vector<std::pair<double, double>> s(h.size());
  for (size_t i = 0; i < h.size(); ++i) s[i] = {h[i], v[i]};
  return fit_scaling(std::span<const std::pair<double, double>>(s));
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i)
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1.0));
  return g;
}

// Default sweep for h -> 0 asymptotics: 25 log-spaced points, decreasing.
inline std::vector<double> default_h_grid() {
  std::vector<double> g = log_grid(1e-6, 1e-2, 25);
  std::reverse(g.begin(), g.end());
  return g;
}

}  // namespace fsic
