// Data-parallel inner loops: the curve-flow update, the fiber sweep that
// assembles Hopf tori, and the Lagrangian residual of a mesh row.
//
// Each kernel has a scalar reference implementation and an AVX2 variant.  The
// variant is picked once at run time from the CPU features (override with
// HOPFMCF_SIMD=scalar).  Both variants evaluate every expression in the same
// order without fused multiply-adds, so their results are bitwise identical.

#pragma once

#include <cstddef>
#include <span>

#include "hopfmcf/sphere_geometry.hpp"

namespace hopfmcf::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool avx2_supported();
Isa active_isa();
// Pin the dispatch target (tests and benchmarks).  Requesting avx2 on a CPU
// without it falls back to scalar.
void force_isa(Isa isa);

// Discrete geodesic-curvature vector at `cur` on a sphere centred at the
// origin: the arclength-weighted second difference projected onto the
// tangent plane.  `len_prev` / `len_next` are the geodesic lengths of the
// adjacent segments.
inline Point3 discrete_curvature(const Point3& prev, const Point3& cur, const Point3& next,
                                 double len_prev, double len_next) {
  const double sum = len_prev + len_next;
  const Point3 acc{2.0 * ((next.x - cur.x) / len_next - (cur.x - prev.x) / len_prev) / sum,
                   2.0 * ((next.y - cur.y) / len_next - (cur.y - prev.y) / len_prev) / sum,
                   2.0 * ((next.z - cur.z) / len_next - (cur.z - prev.z) / len_prev) / sum};
  const double s = dot(acc, cur) / dot(cur, cur);
  return {acc.x - s * cur.x, acc.y - s * cur.y, acc.z - s * cur.z};
}

// Padded structure-of-arrays input for one explicit curve-flow step.
//   x, y, z : n + 2 entries; [0] is vertex n-1, [1..n] are vertices 0..n-1,
//             [n+1] is vertex 0.
//   seg     : n + 1 entries; seg[k] is the geodesic length between padded
//             entries k and k+1.
// Outputs have n entries: the updated positions (re-projected to the sphere
// of `radius`), the curvature vectors and their norms.
struct FlowStepArgs {
  const double* x;
  const double* y;
  const double* z;
  const double* seg;
  std::size_t n;
  double dt;
  double radius;
  double* out_x;
  double* out_y;
  double* out_z;
  double* kappa_x;
  double* kappa_y;
  double* kappa_z;
  double* kappa_norm;
};

// out[k] = scale * e^{i beta} lift[k], with (cos beta, sin beta) given.
struct FiberSweepArgs {
  std::span<const Point4> lift;
  double cos_beta;
  double sin_beta;
  double scale;
  std::span<Point4> out;
};

// max over interior k of |<J D_beta F, D_v F>| / (|D_beta F| |D_v F|), with
// D_beta F = (next[k] - prev[k]) * inv_2dbeta and
// D_v F = (row[k+1] - row[k-1]) * inv_2dv.  Rows shorter than 3 give 0.
struct ResidualRowArgs {
  std::span<const Point4> prev;
  std::span<const Point4> row;
  std::span<const Point4> next;
  double inv_2dbeta;
  double inv_2dv;
};

void flow_step(const FlowStepArgs& args);
void fiber_sweep(const FiberSweepArgs& args);
double lagrangian_residual_row(const ResidualRowArgs& args);

namespace scalar {
void flow_step(const FlowStepArgs& args);
void fiber_sweep(const FiberSweepArgs& args);
double lagrangian_residual_row(const ResidualRowArgs& args);
}  // namespace scalar

namespace avx2 {
void flow_step(const FlowStepArgs& args);
void fiber_sweep(const FiberSweepArgs& args);
double lagrangian_residual_row(const ResidualRowArgs& args);
}  // namespace avx2

}  // namespace hopfmcf::kernels
