#include "hopfmcf/sphere_geometry.hpp"

#include <algorithm>
#include <sstream>

#include "hopfmcf/errors.hpp"

namespace hopfmcf {

Point3 hopf_project(const Point4& p, double radius) {
  if (!(radius > 0)) throw ValidationError("hopf_project: radius must be positive");
  const double n = norm(p);
  if (!(std::abs(n - radius) <= 1e-6 * radius)) {
    std::ostringstream msg;
    msg << "hopf_project: point has norm " << n << ", expected " << radius;
    throw ValidationError(msg.str());
  }
  const Point4 q = (radius / n) * p;
  // 2 z conj(w) = 2[(ac + bd) + i(bc - ad)]
  return {(q.a * q.c + q.b * q.d) / radius, (q.b * q.c - q.a * q.d) / radius,
          ((q.a * q.a + q.b * q.b) - (q.c * q.c + q.d * q.d)) / (2 * radius)};
}

Point3 exp_sphere(const Point3& base, const Point3& v, double rho) {
  if (!(rho > 0)) throw ValidationError("exp_sphere: radius must be positive");
  const double len = norm(v);
  if (len == 0) return base;
  if (std::abs(dot(v, base)) > 1e-9 * rho * len) {
    throw ValidationError("exp_sphere: vector is not tangent at the base point");
  }
  const double angle = len / rho;
  return std::cos(angle) * base + (rho * std::sin(angle) / len) * v;
}

double geodesic_distance(const Point3& p, const Point3& q, double rho) {
  return rho * std::atan2(norm(cross(p, q)), dot(p, q));
}

Point4 fiber_point(const Point3& x, double radius) {
  const double nx = norm(x);
  if (!(nx > 0)) throw ValidationError("fiber_point: base point is the origin");
  const Point3 u = (radius / (2 * nx)) * x;  // on S^2(R/2)
  const double z2 = std::clamp(radius * radius / 2 + radius * u.z, 0.0, radius * radius);
  const double w2 = radius * radius - z2;
  const double planar = std::hypot(u.x, u.y);
  if (z2 > 0) {
    const double zr = std::sqrt(z2), wm = std::sqrt(w2);
    if (planar == 0) return {zr, 0, wm, 0};
    return {zr, 0, wm * u.x / planar, -wm * u.y / planar};
  }
  return {0, 0, radius, 0};
}

HorizontalFrame horizontal_frame(const Point4& p) {
  const double n = norm(p);
  const Point4 h1 = Point4{-p.c, p.d, p.a, -p.b} / n;
  return {h1, j_mul(h1)};
}

Point3 hopf_differential(const Point4& p, const Point4& u, double radius) {
  const double re = (u.a * p.c + u.b * p.d) + (p.a * u.c + p.b * u.d);
  const double im = (u.b * p.c - u.a * p.d) + (p.b * u.c - p.a * u.d);
  const double h = (p.a * u.a + p.b * u.b) - (p.c * u.c + p.d * u.d);
  return {re / radius, im / radius, h / radius};
}

}  // namespace hopfmcf
