// Per-element bodies shared by the scalar kernels and the AVX2 tail loops.
#pragma once

#include <cmath>

#include "hopfmcf/kernels.hpp"

namespace hopfmcf::kernels::detail {

inline void flow_vertex(const FlowStepArgs& a, std::size_t k) {
  const std::size_t i = k + 1;
  const Point3 prev{a.x[i - 1], a.y[i - 1], a.z[i - 1]};
  const Point3 cur{a.x[i], a.y[i], a.z[i]};
  const Point3 next{a.x[i + 1], a.y[i + 1], a.z[i + 1]};
  const Point3 kappa = discrete_curvature(prev, cur, next, a.seg[k], a.seg[k + 1]);
  a.kappa_x[k] = kappa.x;
  a.kappa_y[k] = kappa.y;
  a.kappa_z[k] = kappa.z;
  a.kappa_norm[k] = std::sqrt(dot(kappa, kappa));
  const Point3 moved{cur.x + a.dt * kappa.x, cur.y + a.dt * kappa.y, cur.z + a.dt * kappa.z};
  const double f = a.radius / std::sqrt(dot(moved, moved));
  a.out_x[k] = moved.x * f;
  a.out_y[k] = moved.y * f;
  a.out_z[k] = moved.z * f;
}

inline Point4 fiber_point(const Point4& p, double cs, double sn, double scale) {
  return {(cs * p.a + sn * -p.b) * scale, (cs * p.b + sn * p.a) * scale,
          (cs * p.c + sn * -p.d) * scale, (cs * p.d + sn * p.c) * scale};
}

inline double residual_ratio(double w, double nb, double nv) {
  const double denom = std::sqrt(nb * nv);
  return denom > 0 ? std::abs(w) / denom : 0.0;
}

inline double residual_at(const ResidualRowArgs& a, std::size_t k) {
  const Point4 db = (a.next[k] - a.prev[k]) * a.inv_2dbeta;
  const Point4 dv = (a.row[k + 1] - a.row[k - 1]) * a.inv_2dv;
  return residual_ratio(kaehler(db, dv), dot(db, db), dot(dv, dv));
}

}  // namespace hopfmcf::kernels::detail
