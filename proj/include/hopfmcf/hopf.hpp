// Horizontal lifts of spherical curves and the Hopf tori over them.
//
// For a closed curve gamma in S^2(1/2) let g(v) be a horizontal lift to S^3(1):
// pi(g) = gamma and <g', J g> = 0.  The torus
//
//   F(beta, v) = R e^{i beta} g(v)
//
// sits in S^3(R) and is Lagrangian in C^2.  Going once around the curve, the
// lift comes back rotated along the fiber, g(L) = e^{i H} g(0), with holonomy
// H = 2 A_left (mod 2 pi).  The mesh therefore closes up with a shift:
// row beta at the end of a column matches row beta + H at its start.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hopfmcf/discrete_curve.hpp"

namespace hopfmcf {

struct HorizontalLift {
  // points[k] lies on S^3(1) over base[k]; consecutive points are joined by
  // horizontal great-circle arcs.
  std::vector<Point4> points;
  double holonomy_phase = 0;  // in [0, 2 pi)
  SphereCurve base;
};

// Discrete horizontal lift: each point is the point of its fiber closest to
// the previous one.  The default seed is fiber_point(c[0], 1).
HorizontalLift horizontal_lift(const SphereCurve& c, std::optional<Point4> seed = std::nullopt);

// max over edges (closing edge included) of |<J p_mid, dp>| / |dp|.
double horizontality_residual(const HorizontalLift& lift);

struct HopfTorusMesh {
  std::size_t n_beta = 0;  // rows around the fiber
  std::size_t n_v = 0;     // columns along the curve
  double radius = 1;
  double seam_phase = 0;   // holonomy H of the base curve
  double t = 0;            // time stamp
  std::vector<Point4> grid;  // row-major: grid[j * n_v + k] = F(beta_j, v_k)

  const Point4& at(std::size_t j, std::size_t k) const { return grid[j * n_v + k]; }
  Point4& at(std::size_t j, std::size_t k) { return grid[j * n_v + k]; }
  std::span<const Point4> row(std::size_t j) const { return {grid.data() + j * n_v, n_v}; }
  double dbeta() const;
};

// beta_j = 2 pi j / n_beta.  Throws ValidationError for n_beta < 8 or radius <= 0.
HopfTorusMesh build_torus(const HorizontalLift& lift, std::size_t n_beta, double radius, double t = 0);

// max over interior grid points of |<J F_beta, F_v>| / (|F_beta| |F_v|) with
// central differences.  Zero for an exact Hopf torus.
double check_lagrangian(const HopfTorusMesh& mesh);

// Horizontal lift at p of a tangent vector w at x = pi_R(p) in S^2(R/2).
// Throws ValidationError if p is not over x or w is not tangent at x.
Point4 lift_vector(const Point3& w, const Point3& x, const Point4& p, double radius);

// Mean curvature vector of the Hopf torus at every grid point, from the
// curvature vectors of the base curve (kappa[k] at base point k):
//   H = (1/R) lift(kappa) - (2/R) F/R,   |H|^2 = (|kappa|^2 + 4) / R^2.
std::vector<Point4> mean_curvature(const HopfTorusMesh& mesh, std::span<const Point3> kappa);

// Negative control: multiplies the second complex coordinate by
// e^{i amount sin(beta_j)}.  Product tori |z|, |w| = const (over latitude
// circles) are mapped to themselves; other Hopf tori stop being Lagrangian.
HopfTorusMesh apply_phase_shear(const HopfTorusMesh& mesh, double amount);

}  // namespace hopfmcf
