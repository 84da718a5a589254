#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>

#include "weakkam/error.hpp"

namespace weakkam {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Points, velocities and gradients live in R^2. One-dimensional problems use
// the first component only and keep the second one at exactly zero, so norms,
// distances and dot products need no dimension switch.
struct Vec2 {
  std::array<double, 2> c{0.0, 0.0};

  constexpr Vec2() = default;
  constexpr explicit Vec2(double a, double b = 0.0) : c{a, b} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Vec2& operator+=(const Vec2& o) {
    c[0] += o.c[0];
    c[1] += o.c[1];
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    c[0] -= o.c[0];
    c[1] -= o.c[1];
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    c[0] *= s;
    c[1] *= s;
    return *this;
  }

  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return Vec2{-a.c[0], -a.c[1]}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return Vec2{a.c[0] / s, a.c[1] / s}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
  friend constexpr auto operator<=>(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }
inline bool is_finite(const Vec2& a) { return std::isfinite(a[0]) && std::isfinite(a[1]); }

/// Row-major 2x2 matrix.
struct Mat2 {
  std::array<double, 4> a{1.0, 0.0, 0.0, 1.0};

  constexpr double operator()(int i, int j) const { return a[static_cast<std::size_t>(2 * i + j)]; }
  constexpr double& operator()(int i, int j) { return a[static_cast<std::size_t>(2 * i + j)]; }

  static constexpr Mat2 diagonal(double d0, double d1) { return Mat2{{d0, 0.0, 0.0, d1}}; }
  static constexpr Mat2 zero() { return Mat2{{0.0, 0.0, 0.0, 0.0}}; }

  constexpr Mat2 transposed() const { return Mat2{{a[0], a[2], a[1], a[3]}}; }

  constexpr double determinant() const { return a[0] * a[3] - a[1] * a[2]; }

  Mat2 inverse() const {
    const double det = determinant();
    if (det == 0.0 || !std::isfinite(det)) throw DomainError("singular 2x2 matrix");
    return Mat2{{a[3] / det, -a[1] / det, -a[2] / det, a[0] / det}};
  }

  friend constexpr Vec2 operator*(const Mat2& m, const Vec2& v) {
    return Vec2{m.a[0] * v[0] + m.a[1] * v[1], m.a[2] * v[0] + m.a[3] * v[1]};
  }
  friend constexpr Mat2 operator-(const Mat2& m, const Mat2& n) {
    return Mat2{{m.a[0] - n.a[0], m.a[1] - n.a[1], m.a[2] - n.a[2], m.a[3] - n.a[3]}};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& m) {
    return Mat2{{s * m.a[0], s * m.a[1], s * m.a[2], s * m.a[3]}};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

/// Eigenvalues of the symmetric part, ascending.
inline std::array<double, 2> symmetric_eigenvalues(const Mat2& m) {
  const double p = m(0, 0), q = m(1, 1), r = 0.5 * (m(0, 1) + m(1, 0));
  const double mean = 0.5 * (p + q);
  const double rad = std::hypot(0.5 * (p - q), r);
  return {mean - rad, mean + rad};
}

/// Spectral norm (largest singular value).
inline double spectral_norm(const Mat2& m) {
  const Mat2 mtm{{m(0, 0) * m(0, 0) + m(1, 0) * m(1, 0), m(0, 0) * m(0, 1) + m(1, 0) * m(1, 1),
                  m(0, 1) * m(0, 0) + m(1, 1) * m(1, 0), m(0, 1) * m(0, 1) + m(1, 1) * m(1, 1)}};
  return std::sqrt(std::max(0.0, symmetric_eigenvalues(mtm)[1]));
}

/// Integer grid displacement (stencil entry).
using Offset = std::array<int, 2>;

/// Reduces a coordinate into [0,1).
inline double wrap_unit(double t) {
  double r = t - std::floor(t);
  if (r >= 1.0) r = 0.0;  // t = -tiny rounds to 1.0
  return r;
}

inline Vec2 wrap_unit(const Vec2& x) { return Vec2{wrap_unit(x[0]), wrap_unit(x[1])}; }

/// Reduces a displacement component into [-1/2, 1/2); a tie at +-1/2 maps to -1/2.
inline double minimal_representative(double d) { return d - std::floor(d + 0.5); }

/// y - x reduced componentwise into [-1/2, 1/2)^2.
inline Vec2 torus_displacement(const Vec2& x, const Vec2& y) {
  return Vec2{minimal_representative(y[0] - x[0]), minimal_representative(y[1] - x[1])};
}

inline double torus_distance(const Vec2& x, const Vec2& y) { return norm(torus_displacement(x, y)); }

/// A point of T^d x R^d.
struct PhasePoint {
  Vec2 x;
  Vec2 v;
  friend constexpr bool operator==(const PhasePoint&, const PhasePoint&) = default;
  friend constexpr auto operator<=>(const PhasePoint&, const PhasePoint&) = default;
};

/// Phase-space distance: torus distance in position plus Euclidean distance in velocity.
inline double phase_distance(const PhasePoint& a, const PhasePoint& b) {
  return torus_distance(a.x, b.x) + norm(a.v - b.v);
}

}  // namespace weakkam
