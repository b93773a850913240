#include "hopfmcf/hopf.hpp"

#include <algorithm>
#include <cmath>

#include "hopfmcf/errors.hpp"
#include "hopfmcf/kernels.hpp"
#include "hopfmcf/parallel.hpp"

namespace hopfmcf {

namespace {

// The point e^{i phi} z of the fiber through z that is closest to `prev`,
// i.e. the one making the Hermitian product (e^{i phi} z, prev) real positive.
Point4 align_to(const Point4& z, const Point4& prev) {
  const Complex2 h = hermitian(z, prev);
  const double m = std::hypot(h.re, h.im);
  if (!(m > 1e-12)) throw NumericalError("horizontal lift: consecutive fibers are orthogonal");
  const Point4 out = (h.re / m) * z + (-h.im / m) * j_mul(z);
  return out / norm(out);
}

double wrap_phase(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  if (a >= 2 * kPi) a = 0;
  return a;
}

}  // namespace

HorizontalLift horizontal_lift(const SphereCurve& c, std::optional<Point4> seed) {
  const std::size_t n = c.size();
  Point4 start = fiber_point(c[0], 1.0);
  if (seed) {
    const double r = norm(*seed);
    if (!(std::abs(r - 1) <= 1e-6)) throw ValidationError("lift seed must lie on S^3(1)");
    start = *seed / r;
    if (norm(hopf_project(start, 1.0) - c[0]) > 1e-8) {
      throw ValidationError("lift seed is not on the fiber over the first curve point");
    }
  }
  HorizontalLift lift{std::vector<Point4>(n), 0.0, c};
  lift.points[0] = start;
  for (std::size_t k = 1; k < n; ++k) lift.points[k] = align_to(fiber_point(c[k], 1.0), lift.points[k - 1]);

  // Closing: the fiber point over c[0] reached from the last vertex is e^{iH} p_0.
  const Complex2 h = hermitian(start, lift.points[n - 1]);
  lift.holonomy_phase = wrap_phase(std::atan2(-h.im, h.re));
  return lift;
}

double horizontality_residual(const HorizontalLift& lift) {
  const auto& p = lift.points;
  const std::size_t n = p.size();
  double worst = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Point4 q = k + 1 < n ? p[k + 1] : phase_rotate(p[0], lift.holonomy_phase);
    const Point4 dp = q - p[k];
    const double len = norm(dp);
    if (len == 0) continue;
    worst = std::max(worst, std::abs(dot(j_mul(0.5 * (p[k] + q)), dp)) / len);
  }
  return worst;
}

double HopfTorusMesh::dbeta() const { return 2 * kPi / static_cast<double>(n_beta); }

HopfTorusMesh build_torus(const HorizontalLift& lift, std::size_t n_beta, double radius, double t) {
  if (n_beta < 8) throw ValidationError("n_beta must be at least 8");
  if (!(radius > 0) || !std::isfinite(radius)) throw ValidationError("torus radius must be positive");
  if (lift.points.size() < kMinCurvePoints) throw ValidationError("lift has too few points");
  HopfTorusMesh mesh;
  mesh.n_beta = n_beta;
  mesh.n_v = lift.points.size();
  mesh.radius = radius;
  mesh.seam_phase = lift.holonomy_phase;
  mesh.t = t;
  mesh.grid.resize(n_beta * mesh.n_v);
  parallel_for(n_beta, [&](std::size_t j) {
    const double beta = mesh.dbeta() * static_cast<double>(j);
    kernels::fiber_sweep({lift.points, std::cos(beta), std::sin(beta), radius,
                          std::span<Point4>(mesh.grid.data() + j * mesh.n_v, mesh.n_v)});
  });
  return mesh;
}

double check_lagrangian(const HopfTorusMesh& mesh) {
  if (mesh.n_beta < 3 || mesh.grid.size() != mesh.n_beta * mesh.n_v) {
    throw ValidationError("check_lagrangian: malformed mesh");
  }
  std::vector<double> worst(mesh.n_beta, 0.0);
  const double inv_2db = 1 / (2 * mesh.dbeta());
  const double inv_2dv = 0.5 * static_cast<double>(mesh.n_v);
  parallel_for(mesh.n_beta, [&](std::size_t j) {
    const std::size_t jp = j == 0 ? mesh.n_beta - 1 : j - 1;
    const std::size_t jn = j + 1 == mesh.n_beta ? 0 : j + 1;
    worst[j] = kernels::lagrangian_residual_row({mesh.row(jp), mesh.row(j), mesh.row(jn), inv_2db, inv_2dv});
  });
  return *std::max_element(worst.begin(), worst.end());
}

Point4 lift_vector(const Point3& w, const Point3& x, const Point4& p, double radius) {
  if (!(radius > 0)) throw ValidationError("lift_vector: radius must be positive");
  const Point3 base = hopf_project(p, radius);
  if (norm(base - x) > 1e-8 * radius) throw ValidationError("lift_vector: p is not on the fiber over x");
  const double nw = norm(w), nx = norm(x);
  if (std::abs(dot(w, x)) > 1e-9 * nw * nx + 1e-300) {
    throw ValidationError("lift_vector: vector is not tangent at x");
  }
  const HorizontalFrame f = horizontal_frame(p);
  const double alpha = dot(w, hopf_differential(p, f.h1, radius));
  const double beta = dot(w, hopf_differential(p, f.h2, radius));
  return alpha * f.h1 + beta * f.h2;
}

std::vector<Point4> mean_curvature(const HopfTorusMesh& mesh, std::span<const Point3> kappa) {
  if (kappa.size() != mesh.n_v) throw ValidationError("mean_curvature: one curvature vector per column expected");
  std::vector<Point4> out(mesh.grid.size());
  const double r = mesh.radius;
  parallel_for(mesh.n_beta, [&](std::size_t j) {
    for (std::size_t k = 0; k < mesh.n_v; ++k) {
      const Point4 unit = mesh.at(j, k) / r;
      const Point3 x = hopf_project(unit, 1.0);
      const Point3 w = tangent_project(x, kappa[k]);
      out[j * mesh.n_v + k] = (1 / r) * lift_vector(w, x, unit, 1.0) - (2 / r) * unit;
    }
  });
  return out;
}

HopfTorusMesh apply_phase_shear(const HopfTorusMesh& mesh, double amount) {
  HopfTorusMesh out = mesh;
  for (std::size_t j = 0; j < mesh.n_beta; ++j) {
    const double phase = amount * std::sin(mesh.dbeta() * static_cast<double>(j));
    const double cs = std::cos(phase), sn = std::sin(phase);
    for (std::size_t k = 0; k < mesh.n_v; ++k) {
      Point4& p = out.at(j, k);
      const double c = p.c, d = p.d;
      p.c = cs * c - sn * d;
      p.d = sn * c + cs * d;
    }
  }
  return out;
}

}  // namespace hopfmcf
