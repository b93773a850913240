#include <cmath>
#include <vector>

#include "doctest.h"
#include "hopfmcf/errors.hpp"
#include "hopfmcf/hopf.hpp"
#include "support.hpp"

using namespace hopfmcf;
using namespace hopfmcf::testing;

namespace {

double wrapped_gap(double a, double b) {
  double d = std::fmod(a - b, 2 * kPi);
  if (d > kPi) d -= 2 * kPi;
  if (d < -kPi) d += 2 * kPi;
  return std::abs(d);
}

// Smooth horizontal lift of the latitude circle theta = 2s, parametrized by
// the azimuth v:  e^{i sin^2(s) v} (cos s, sin s e^{-iv}).
Point4 analytic_latitude_lift(double s, double v) {
  const Point4 p{std::cos(s), 0, std::sin(s) * std::cos(v), -std::sin(s) * std::sin(v)};
  return phase_rotate(p, std::sin(s) * std::sin(s) * v);
}

SphereCurve latitude_with_spacing(double theta, std::size_t n, double warp) {
  std::vector<Point3> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = 2 * kPi * k / n;
    const double phi = u + warp * std::sin(u);
    pts[k] = 0.5 * Point3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
  return SphereCurve(pts);
}

}  // namespace

TEST_CASE("lift of the great circle through the poles") {
  const SphereCurve c = make_family(CurveFamilySpec::great_circle(64, {0, 1, 0}));
  const HorizontalLift lift = horizontal_lift(c);
  CHECK(lift.points[0] == Point4{1, 0, 0, 0});
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double phi = 2 * kPi * k / c.size();
    CHECK(norm(lift.points[k] - Point4{std::cos(phi / 2), 0, std::sin(phi / 2), 0}) <= 1e-13);
  }
  CHECK(lift.holonomy_phase == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("holonomy is twice the enclosed area") {
  const SphereCurve lat = make_family(CurveFamilySpec::latitude(kPi / 4, 512));
  CHECK(wrapped_gap(horizontal_lift(lat).holonomy_phase, 2 * lat.left_area()) <= 1e-10);
  CHECK(wrapped_gap(horizontal_lift(make_family(CurveFamilySpec::latitude(kPi / 4, 8192))).holonomy_phase,
                    2 * 0.4600753) <= 1e-6);

  auto& g = rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point3> pts(8 + g() % 200);
    const Point3 centre = random_on_sphere3(g, 0.5);
    const double radius = uniform(g, 0.05, 1.4);
    const Point3 e1 = tangent_project(centre, random_on_sphere3(g, 1));
    const Point3 t1 = e1 / norm(e1);
    const Point3 t2 = cross(centre / 0.5, t1);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double a = 2 * kPi * k / pts.size();
      const double r = radius * (1 + 0.1 * std::sin(3 * a));
      pts[k] = exp_sphere(centre, r * (std::cos(a) * t1 + std::sin(a) * t2), 0.5);
    }
    const SphereCurve c(pts);
    const HorizontalLift lift = horizontal_lift(c);
    CHECK(wrapped_gap(lift.holonomy_phase, 2 * c.left_area()) <= 1e-10);
    CHECK(wrapped_gap(horizontal_lift(c.reversed()).holonomy_phase, 2 * c.reversed().left_area()) <= 1e-10);
    CHECK(horizontality_residual(lift) <= 1e-12);
    for (std::size_t k = 0; k < c.size(); ++k) {
      CHECK(norm(hopf_project(lift.points[k], 1) - c[k]) <= 1e-13);
      CHECK(norm(lift.points[k]) == doctest::Approx(1).epsilon(1e-15));
    }
  }
}

TEST_CASE("discrete lift converges to the smooth lift") {
  const double theta = 1.0, s = theta / 2;
  double prev = 0;
  for (std::size_t n : {32, 64, 128, 256}) {
    const HorizontalLift lift = horizontal_lift(make_family(CurveFamilySpec::latitude(theta, n)));
    double err = 0;
    for (std::size_t k = 0; k < n; ++k) {
      err = std::max(err, norm(lift.points[k] - analytic_latitude_lift(s, 2 * kPi * k / n)));
    }
    if (prev > 0) CHECK(err < 0.5 * prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("lift seeds") {
  const SphereCurve c = make_family(CurveFamilySpec::latitude(0.8, 32));
  const Point4 seed = phase_rotate(fiber_point(c[0], 1), 1.3);
  const HorizontalLift a = horizontal_lift(c);
  const HorizontalLift b = horizontal_lift(c, seed);
  CHECK(b.holonomy_phase == doctest::Approx(a.holonomy_phase).epsilon(1e-12));
  for (std::size_t k = 0; k < c.size(); ++k) CHECK(norm(b.points[k] - phase_rotate(a.points[k], 1.3)) <= 1e-12);
  CHECK_THROWS_AS(horizontal_lift(c, fiber_point(c[5], 1)), ValidationError);
  CHECK_THROWS_AS(horizontal_lift(c, 2.0 * seed), ValidationError);
}

TEST_CASE("torus grid and seam") {
  const SphereCurve c = make_family(CurveFamilySpec::latitude(kPi / 3, 96));
  const HorizontalLift lift = horizontal_lift(c);
  const HopfTorusMesh mesh = build_torus(lift, 48, 1.7, 0.25);
  CHECK(mesh.grid.size() == 48 * 96);
  CHECK(mesh.t == 0.25);
  for (std::size_t j = 0; j < mesh.n_beta; ++j) {
    for (std::size_t k = 0; k < mesh.n_v; ++k) {
      const Point4& p = mesh.at(j, k);
      CHECK(norm(p) == doctest::Approx(1.7).epsilon(1e-14));
      CHECK(norm(hopf_project(p, 1.7) - 1.7 * c[k]) <= 1e-12);
    }
  }
  // Continuing a column past its end lands on the first column shifted by H.
  const double h = mesh.seam_phase;
  for (std::size_t j = 0; j < mesh.n_beta; j += 7) {
    const Point4 last = mesh.at(j, mesh.n_v - 1) / 1.7;
    const Point4 first = mesh.at(j, 0) / 1.7;
    const Complex2 z = hermitian(first, last);
    const Point4 continued = (z.re * first - z.im * j_mul(first)) / std::hypot(z.re, z.im);
    CHECK(norm(continued - phase_rotate(first, h)) <= 1e-12);
  }
  CHECK_THROWS_AS(build_torus(lift, 4, 1.0), ValidationError);
  CHECK_THROWS_AS(build_torus(lift, 16, 0.0), ValidationError);
}

TEST_CASE("Hopf tori are Lagrangian") {
  // Arclength-uniform samples: only rounding remains.
  for (const auto& spec : {CurveFamilySpec::latitude(kPi / 4, 128), CurveFamilySpec::great_circle(128, {0, 1, 0}),
                           CurveFamilySpec::great_circle(128)}) {
    const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(spec)), 128, 1.0);
    CHECK(check_lagrangian(mesh) <= 1e-10);
  }
  // Uneven arclength spacing leaves an O(h^2) stencil error.
  const HopfTorusMesh pert =
      build_torus(horizontal_lift(make_family(CurveFamilySpec::perturbed_great_circle(3, 0.05, 128))), 128, 1.0);
  CHECK(check_lagrangian(pert) <= 1e-3);
}

TEST_CASE("Lagrangian residual shrinks at second order for uneven sampling") {
  double prev = 0;
  for (std::size_t n : {64, 128, 256}) {
    const HopfTorusMesh mesh = build_torus(horizontal_lift(latitude_with_spacing(1.0, n, 0.3)), 32, 1.0);
    const double r = check_lagrangian(mesh);
    CHECK(r > 0);
    if (prev > 0) CHECK(r <= 0.5 * prev);
    prev = r;
  }
  CHECK(prev <= 1e-3);
}

TEST_CASE("phase shear breaks the Lagrangian condition") {
  const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(256, {0, 1, 0}))), 64, 1.0);
  CHECK(check_lagrangian(apply_phase_shear(mesh, 0.3)) > 1e-2);
  CHECK(check_lagrangian(apply_phase_shear(mesh, 0.0)) <= 1e-8);

  // A v-dependent fiber rotation only reparametrizes the fibers: still Lagrangian.
  HopfTorusMesh twisted = mesh;
  for (std::size_t j = 0; j < mesh.n_beta; ++j) {
    for (std::size_t k = 0; k < mesh.n_v; ++k) {
      twisted.at(j, k) = phase_rotate(mesh.at(j, k), 0.3 * 2 * kPi * k / mesh.n_v);
    }
  }
  CHECK(check_lagrangian(twisted) < 1e-3);
}

TEST_CASE("lift_vector") {
  auto& g = rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = uniform(g, 0.3, 3);
    const Point4 p = random_on_sphere4(g, r);
    const Point3 x = hopf_project(p, r);
    const Point3 w = random_tangent(g, x, 1.0);
    const Point4 up = lift_vector(w, x, p, r);
    CHECK(norm(hopf_differential(p, up, r) - w) <= 1e-12 * (1 + norm(w)));
    CHECK(std::abs(dot(up, p)) <= 1e-12 * r);
    CHECK(std::abs(dot(up, j_mul(p))) <= 1e-12 * r);
    CHECK(norm(up) == doctest::Approx(norm(w)).epsilon(1e-12));
  }
  const Point4 p{1, 0, 0, 0};
  CHECK_THROWS_AS(lift_vector({1, 0, 0}, {0, 0, -0.5}, p, 1), ValidationError);
  CHECK_THROWS_AS(lift_vector({0, 0, 1}, {0, 0, 0.5}, p, 1), ValidationError);
}

TEST_CASE("mean curvature has |H|^2 = (kappa^2 + 4) / R^2") {
  const SphereCurve c = make_family(CurveFamilySpec::perturbed_great_circle(2, 0.15, 128));
  const auto kappa = curvature_vectors(c);
  const double r = 1.6;
  const HopfTorusMesh mesh = build_torus(horizontal_lift(c), 16, r);
  const auto h = mean_curvature(mesh, kappa);
  for (std::size_t j = 0; j < mesh.n_beta; ++j) {
    for (std::size_t k = 0; k < mesh.n_v; ++k) {
      const double k2 = dot(kappa[k], kappa[k]);
      CHECK(dot(h[j * mesh.n_v + k], h[j * mesh.n_v + k]) == doctest::Approx((k2 + 4) / (r * r)).epsilon(1e-12));
    }
  }
  // Clifford torus: H = -2F/R^2.
  const SphereCurve gc = make_family(CurveFamilySpec::great_circle(64));
  const HopfTorusMesh cliff = build_torus(horizontal_lift(gc), 16, 1.0);
  const auto hc = mean_curvature(cliff, curvature_vectors(gc));
  for (std::size_t i = 0; i < cliff.grid.size(); ++i) CHECK(norm(hc[i] + 2.0 * cliff.grid[i]) <= 1e-12);
  CHECK_THROWS_AS(mean_curvature(cliff, std::vector<Point3>(3)), ValidationError);
}

TEST_CASE("mean curvature matches a finite-difference Laplace-Beltrami operator") {
  // Uniform arclength sampling: metric diag(R^2, R^2) in (beta, s).
  const double r = 1.3;
  const SphereCurve c = make_family(CurveFamilySpec::latitude(0.9, 1024));
  const HorizontalLift lift = horizontal_lift(c);
  const HopfTorusMesh mesh = build_torus(lift, 256, r);
  const auto h = mean_curvature(mesh, curvature_vectors(c));
  const double ds = c.length() / c.size();
  const double db = mesh.dbeta();
  double worst = 0;
  for (std::size_t j = 0; j < mesh.n_beta; j += 17) {
    const std::size_t jp = (j + mesh.n_beta - 1) % mesh.n_beta, jn = (j + 1) % mesh.n_beta;
    for (std::size_t k = 1; k + 1 < mesh.n_v; k += 13) {
      const Point4 fbb = (mesh.at(jn, k) - 2.0 * mesh.at(j, k) + mesh.at(jp, k)) / (db * db);
      const Point4 fss = (mesh.at(j, k + 1) - 2.0 * mesh.at(j, k) + mesh.at(j, k - 1)) / (ds * ds);
      const Point4 lap = (fbb + fss) / (r * r);
      const Point4& hv = h[j * mesh.n_v + k];
      worst = std::max(worst, norm(lap - hv) / norm(hv));
    }
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("Clifford torus over the equator") {
  const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(128))), 128, 1.0);
  CHECK(check_lagrangian(mesh) <= 1e-6);
  double worst = 0;
  for (const Point4& p : mesh.grid) worst = std::max(worst, std::abs(p.a * p.a + p.b * p.b - 0.5));
  CHECK(worst <= 1e-7);
}
