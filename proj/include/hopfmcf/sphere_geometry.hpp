// Primitives for the round spheres S^2(rho) in R^3 and S^3(R) in C^2 = R^4,
// the complex structure J on R^4 and the Hopf projection between them.
//
// Coordinates on R^4 are identified with C^2 through (z, w) = (a + ib, c + id).
// All functions here are pure and thread-safe.

#pragma once

#include <cmath>
#include <numbers>

namespace hopfmcf {

inline constexpr double kPi = std::numbers::pi;

struct Point3 {
  double x = 0, y = 0, z = 0;

  constexpr Point3& operator+=(const Point3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Point3& operator-=(const Point3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Point3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
  friend constexpr Point3 operator+(Point3 p, const Point3& q) { return p += q; }
  friend constexpr Point3 operator-(Point3 p, const Point3& q) { return p -= q; }
  friend constexpr Point3 operator*(double s, Point3 p) { return p *= s; }
  friend constexpr Point3 operator*(Point3 p, double s) { return p *= s; }
  friend constexpr Point3 operator/(Point3 p, double s) { return {p.x / s, p.y / s, p.z / s}; }
  friend constexpr Point3 operator-(const Point3& p) { return {-p.x, -p.y, -p.z}; }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

struct Point4 {
  double a = 0, b = 0, c = 0, d = 0;

  constexpr Point4& operator+=(const Point4& o) { a += o.a; b += o.b; c += o.c; d += o.d; return *this; }
  constexpr Point4& operator-=(const Point4& o) { a -= o.a; b -= o.b; c -= o.c; d -= o.d; return *this; }
  constexpr Point4& operator*=(double s) { a *= s; b *= s; c *= s; d *= s; return *this; }
  friend constexpr Point4 operator+(Point4 p, const Point4& q) { return p += q; }
  friend constexpr Point4 operator-(Point4 p, const Point4& q) { return p -= q; }
  friend constexpr Point4 operator*(double s, Point4 p) { return p *= s; }
  friend constexpr Point4 operator*(Point4 p, double s) { return p *= s; }
  friend constexpr Point4 operator/(Point4 p, double s) { return {p.a / s, p.b / s, p.c / s, p.d / s}; }
  friend constexpr Point4 operator-(const Point4& p) { return {-p.a, -p.b, -p.c, -p.d}; }
  friend constexpr bool operator==(const Point4&, const Point4&) = default;
};

// Dot products use a fixed pairwise summation order; the SIMD kernels
// reproduce the same order so scalar and vector paths agree bit for bit.
constexpr double dot(const Point3& u, const Point3& v) { return (u.x * v.x + u.y * v.y) + u.z * v.z; }
constexpr double dot(const Point4& u, const Point4& v) {
  return (u.a * v.a + u.b * v.b) + (u.c * v.c + u.d * v.d);
}
inline double norm(const Point3& v) { return std::sqrt(dot(v, v)); }
inline double norm(const Point4& v) { return std::sqrt(dot(v, v)); }

constexpr Point3 cross(const Point3& u, const Point3& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

// Multiplication by i on both complex coordinates: (a,b,c,d) -> (-b,a,-d,c).
constexpr Point4 j_mul(const Point4& p) { return {-p.b, p.a, -p.d, p.c}; }

// <J u, v>, the Kaehler form omega(u, v).
constexpr double kaehler(const Point4& u, const Point4& v) {
  return (-u.b * v.a + u.a * v.b) + (-u.d * v.c + u.c * v.d);
}

// e^{i beta} p.
inline Point4 phase_rotate(const Point4& p, double beta) {
  const double cs = std::cos(beta), sn = std::sin(beta);
  return cs * p + sn * j_mul(p);
}

// Hermitian product (u, v) = u1 conj(v1) + u2 conj(v2), returned as (re, im).
struct Complex2 {
  double re, im;
};
constexpr Complex2 hermitian(const Point4& u, const Point4& v) {
  return {dot(u, v), kaehler(v, u)};
}

// Orthogonal projection of v onto the tangent space of the sphere through p
// (centred at the origin).
template <class P>
P tangent_project(const P& p, const P& v) {
  return v - (dot(v, p) / dot(p, p)) * p;
}

// Rescale p onto the sphere of the given radius.
template <class P>
P project_to_sphere(const P& p, double radius) {
  return (radius / norm(p)) * p;
}

// Hopf fibration pi_R : S^3(R) -> S^2(R/2),
//   (z, w) -> (1/2R) (2 z conj(w), |z|^2 - |w|^2).
// Points within 1e-6 R of the sphere are renormalized first; anything farther
// away throws ValidationError since it signals drift in the caller.
Point3 hopf_project(const Point4& p, double radius);

// Exponential map of S^2(rho) at `base`.  `v` must be tangent at `base`
// (|<v, base>| <= 1e-9 rho |v|).  Returns base when v = 0.
Point3 exp_sphere(const Point3& base, const Point3& v, double rho);

// Geodesic (great-circle) distance between two points of S^2(rho).
double geodesic_distance(const Point3& p, const Point3& q, double rho);

// A point on the Hopf fiber over x in S^2(R/2), in the deterministic gauge
// where the first complex coordinate is real and non-negative (the second
// one when the first vanishes).  Result lies on S^3(R).
Point4 fiber_point(const Point3& x, double radius);

// Unit horizontal frame (h1, J h1) at p in S^3(R); both vectors are
// orthogonal to p and to J p.
struct HorizontalFrame {
  Point4 h1, h2;
};
HorizontalFrame horizontal_frame(const Point4& p);

// Differential of pi_R at p applied to u.
Point3 hopf_differential(const Point4& p, const Point4& u, double radius);

}  // namespace hopfmcf
