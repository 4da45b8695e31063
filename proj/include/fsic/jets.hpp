#pragma once

// Forward-mode derivative carriers used by the test-field evaluators.
// Dh tracks sensitivity with respect to the gap h, Taylor3 is a univariate
// third-order jet (needed for the pressure construction), Jet23 is a
// second-order jet in (r, x3, h) for the blended outer field.

#include <cmath>

namespace fsic {

struct Dh {
  double v = 0.0;
  double dh = 0.0;
  constexpr Dh() = default;
  constexpr Dh(double value) : v(value) {}
  constexpr Dh(double value, double d) : v(value), dh(d) {}
};

constexpr Dh operator+(Dh a, Dh b) { return {a.v + b.v, a.dh + b.dh}; }
constexpr Dh operator-(Dh a, Dh b) { return {a.v - b.v, a.dh - b.dh}; }
constexpr Dh operator-(Dh a) { return {-a.v, -a.dh}; }
constexpr Dh operator*(Dh a, Dh b) { return {a.v * b.v, a.v * b.dh + a.dh * b.v}; }
constexpr Dh operator/(Dh a, Dh b) {
  const double inv = 1.0 / b.v;
  return {a.v * inv, (a.dh - a.v * inv * b.dh) * inv};
}
inline Dh sqrt(Dh a) {
  const double s = std::sqrt(a.v);
  return {s, a.dh / (2.0 * s)};
}
inline Dh pow(Dh a, double e) {
  const double p = std::pow(a.v, e);
  return {p, e * std::pow(a.v, e - 1.0) * a.dh};
}
constexpr double value(Dh a) { return a.v; }
constexpr double value(double a) { return a; }

// Univariate jet carrying f, f', f'', f''' over a scalar type T.
template <class T>
struct Taylor3 {
  T f{}, d1{}, d2{}, d3{};
  static Taylor3 constant(T c) { return {c, T{}, T{}, T{}}; }
  static Taylor3 variable(T x) { return {x, T{1.0}, T{}, T{}}; }
};

template <class T>
Taylor3<T> operator+(const Taylor3<T>& a, const Taylor3<T>& b) {
  return {a.f + b.f, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}
template <class T>
Taylor3<T> operator-(const Taylor3<T>& a, const Taylor3<T>& b) {
  return {a.f - b.f, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}
template <class T>
Taylor3<T> operator-(const Taylor3<T>& a) {
  return {-a.f, -a.d1, -a.d2, -a.d3};
}
template <class T>
Taylor3<T> operator*(const Taylor3<T>& a, const Taylor3<T>& b) {
  return {a.f * b.f,
          a.d1 * b.f + a.f * b.d1,
          a.d2 * b.f + T{2.0} * a.d1 * b.d1 + a.f * b.d2,
          a.d3 * b.f + T{3.0} * a.d2 * b.d1 + T{3.0} * a.d1 * b.d2 + a.f * b.d3};
}
// Solves w*b = a coefficient by coefficient.
template <class T>
Taylor3<T> operator/(const Taylor3<T>& a, const Taylor3<T>& b) {
  Taylor3<T> w;
  w.f = a.f / b.f;
  w.d1 = (a.d1 - w.f * b.d1) / b.f;
  w.d2 = (a.d2 - w.f * b.d2 - T{2.0} * w.d1 * b.d1) / b.f;
  w.d3 = (a.d3 - w.f * b.d3 - T{3.0} * w.d1 * b.d2 - T{3.0} * w.d2 * b.d1) / b.f;
  return w;
}
template <class T>
Taylor3<T> operator*(T s, const Taylor3<T>& a) {
  return {s * a.f, s * a.d1, s * a.d2, s * a.d3};
}
template <class T>
Taylor3<T> sqrt(const Taylor3<T>& a) {
  using std::sqrt;
  Taylor3<T> s;
  s.f = sqrt(a.f);
  s.d1 = a.d1 / (T{2.0} * s.f);
  s.d2 = (a.d2 - T{2.0} * s.d1 * s.d1) / (T{2.0} * s.f);
  s.d3 = (a.d3 - T{6.0} * s.d1 * s.d2) / (T{2.0} * s.f);
  return s;
}

// Second-order jet in three variables; convention: index 0 = r (or x1),
// index 1 = x3 (or x2), index 2 = h.
struct Jet23 {
  double v = 0.0;
  double g[3] = {0, 0, 0};
  double H[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static Jet23 constant(double c) {
    Jet23 j;
    j.v = c;
    return j;
  }
  static Jet23 variable(double x, int idx) {
    Jet23 j;
    j.v = x;
    j.g[idx] = 1.0;
    return j;
  }
};

inline Jet23 operator+(const Jet23& a, const Jet23& b) {
  Jet23 c;
  c.v = a.v + b.v;
  for (int i = 0; i < 3; ++i) {
    c.g[i] = a.g[i] + b.g[i];
    for (int j = 0; j < 3; ++j) c.H[i][j] = a.H[i][j] + b.H[i][j];
  }
  return c;
}
inline Jet23 operator-(const Jet23& a, const Jet23& b) {
  Jet23 c;
  c.v = a.v - b.v;
  for (int i = 0; i < 3; ++i) {
    c.g[i] = a.g[i] - b.g[i];
    for (int j = 0; j < 3; ++j) c.H[i][j] = a.H[i][j] - b.H[i][j];
  }
  return c;
}
inline Jet23 operator-(const Jet23& a) {
  Jet23 c;
  c.v = -a.v;
  for (int i = 0; i < 3; ++i) {
    c.g[i] = -a.g[i];
    for (int j = 0; j < 3; ++j) c.H[i][j] = -a.H[i][j];
  }
  return c;
}
inline Jet23 operator*(const Jet23& a, const Jet23& b) {
  Jet23 c;
  c.v = a.v * b.v;
  for (int i = 0; i < 3; ++i) c.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.H[i][j] = a.H[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.H[i][j];
  return c;
}
inline Jet23 operator*(double s, const Jet23& a) {
  Jet23 c;
  c.v = s * a.v;
  for (int i = 0; i < 3; ++i) {
    c.g[i] = s * a.g[i];
    for (int j = 0; j < 3; ++j) c.H[i][j] = s * a.H[i][j];
  }
  return c;
}
inline Jet23 recip(const Jet23& a) {
  Jet23 c;
  const double inv = 1.0 / a.v, inv2 = inv * inv, inv3 = inv2 * inv;
  c.v = inv;
  for (int i = 0; i < 3; ++i) c.g[i] = -a.g[i] * inv2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.H[i][j] = 2.0 * a.g[i] * a.g[j] * inv3 - a.H[i][j] * inv2;
  return c;
}
inline Jet23 operator/(const Jet23& a, const Jet23& b) { return a * recip(b); }
inline Jet23 sqrt(const Jet23& a) {
  Jet23 c;
  const double s = std::sqrt(a.v);
  c.v = s;
  for (int i = 0; i < 3; ++i) c.g[i] = a.g[i] / (2.0 * s);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.H[i][j] = (0.5 * a.H[i][j] - c.g[i] * c.g[j]) / s;
  return c;
}

// Composition with a scalar function given by (q, q', q'') at a.v.
inline Jet23 compose(const Jet23& a, double q0, double q1, double q2) {
  Jet23 c;
  c.v = q0;
  for (int i = 0; i < 3; ++i) c.g[i] = q1 * a.g[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      c.H[i][j] = q2 * a.g[i] * a.g[j] + q1 * a.H[i][j];
  return c;
}

// Quintic smoothstep: 0 below lo, 1 above hi, C^2 across both seams.
inline Jet23 smoothstep(const Jet23& x, double lo, double hi) {
  const double width = hi - lo;
  const double s = (x.v - lo) / width;
  if (s <= 0.0) return Jet23::constant(0.0);
  if (s >= 1.0) return Jet23::constant(1.0);
  const double q0 = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  const double q1 = 30.0 * s * s * (1.0 - s) * (1.0 - s) / width;
  const double q2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (width * width);
  return compose(x, q0, q1, q2);
}

}  // namespace fsic
