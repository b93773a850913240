// Mean curvature flow of Hopf tori in C^2, assembled from the curve shortening
// flow of the base curve.
//
// If gamma(tbar) solves CSF on S^2(1/2) and g(., tbar) is its horizontal lift,
// then
//
//   F(beta, v, t) = R(t) e^{i beta} g(v, tbar(t)),   R(t) = sqrt(r0^2 - 4t),
//   tbar(t) = (1/4) ln(r0^2 / (r0^2 - 4t)),
//
// moves by mean curvature.  The flow stops at T = A0 r0^2 / (2 pi) when the
// base curve bounds less than half the sphere (the torus collapses onto a
// circle of radius sqrt(r0^2 - 4T)), and at T = r0^2 / 4 for a great circle,
// where everything shrinks to the origin and the rescaled surface tends to
// the Clifford torus.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "hopfmcf/csf.hpp"
#include "hopfmcf/hopf.hpp"

namespace hopfmcf {

// Enclosed areas this close to pi/2 are treated as the equal-area case.
inline constexpr double kEqualAreaTolerance = 1e-6;

// t in [0, r0^2/4).  Throws ValidationError otherwise.
double tbar_of_t(double t, double r0);
// tbar >= 0, +inf allowed (gives r0^2/4).
double t_of_tbar(double tbar, double r0);
// sqrt(r0^2 - 4t).
double radius_at(double t, double r0);

enum class SingularityKind { point_clifford, circle_cylinder };
const char* kind_name(SingularityKind k);

struct SingularityReport {
  SingularityKind kind = SingularityKind::point_clifford;
  double T = 0;             // singular time in the t clock
  double tau = 0;           // the same in the tbar clock (inf for point_clifford)
  double limit_radius = 0;  // 0 for point_clifford
  double typeI_sup = std::numeric_limits<double>::quiet_NaN();
  double limit_fit_residual = std::numeric_limits<double>::quiet_NaN();
};

// a0 in (0, pi/2], r0 > 0.
SingularityReport predict(double a0, double r0);

struct FlowRecord {
  double t;
  double tbar;
  double R;
  double length;
  double area;
  double area_predicted;
  double max_kappa;
  double sup_sigma_sq;  // (4 + max kappa^2) / R^2
  double typeI;         // (T - t) sup_sigma_sq, T predicted from A0
};

struct EvolutionConfig {
  double r0 = 1;
  std::variant<CurveFamilySpec, SphereCurve> initial_curve = CurveFamilySpec{};
  CsfParams csf;
  std::vector<double> frame_times;  // t values in [0, T)
  // The equal-area case never goes extinct; integration stops here instead.
  double tbar_horizon = 1.5;
  // Record spacing in tbar.  0 picks 1/2000 of tau (or of the horizon).
  double record_dtbar = 0;
  std::size_t n_beta = 64;
  // Called with every recorded sample, curve included.
  std::function<void(const Observation&)> observe;
};

struct EvolutionResult {
  double a0 = 0;
  SingularityReport predicted;
  SingularityReport measured;  // T from the extinction time, radius from the last frame
  bool extinct = false;
  double final_tbar = 0;
  Point3 extinction_point{};  // centroid of the last curve, zero without extinction
  std::vector<FlowRecord> records;
  // One mesh per requested frame reached before extinction, then the final state.
  std::vector<HopfTorusMesh> frames;
  std::vector<double> frame_tbars;
};

void validate(const EvolutionConfig& config);

EvolutionResult evolve(const EvolutionConfig& config);

// Frames between 0 and 0.98 T, crowding towards T for a cylinder, and evenly
// spaced in tbar up to the horizon for the equal-area case.
std::vector<double> default_frame_times(const SingularityReport& predicted, double r0, std::size_t count,
                                        double tbar_horizon);

// Divides every vertex by R(t): the surface is moved to S^3(1).
HopfTorusMesh rescale_a(const HopfTorusMesh& mesh);

// lambda(t) = sqrt(A0 / (pi/2 - (pi/2 - A0) r0^2 / (r0^2 - 4t))); undefined for t >= T.
double rescale_lambda(double t, double a0, double r0);

// R(t) q + lambda(t) (F - R(t) q) for every vertex.  q must be a unit vector.
std::vector<Point4> rescale_b(const HopfTorusMesh& mesh, double a0, double r0, const Point4& q);

// Relative deviation from the cylinder of radius R_T sqrt(A0/pi) around the
// line R_T q + s J q, measured in the affine 3-space through R_T q spanned by
// J q and the horizontal space at q.  Points farther than `window` from R_T q
// are ignored.
double cylinder_fit(const std::vector<Point4>& cloud, const Point4& q, double r_t, double a0,
                    double window = std::numeric_limits<double>::infinity());

// Max over vertices of the angular distance on S^3 from the radial projection
// of the vertex to the Clifford torus |z| = |w|.
double clifford_distance(const HopfTorusMesh& mesh);

struct TypeIMonitor {
  double typeI_sup = 0;
  double c_est = 0;        // sup (tau - tbar) kappa^2, or sup kappa^2 / 4 when tau is infinite
  bool bounded = true;     // typeI <= 1 + c_est at every record
  bool g_increasing = true;  // G strictly increasing and negative on the grid (vacuous when tau is infinite)
};

// G(tbar) = (1 - e^{4 (tbar - tau)}) / 4 - (tau - tbar).
double type_one_g(double tbar, double tau);

TypeIMonitor typeI_monitor(const std::vector<FlowRecord>& records, const SingularityReport& predicted,
                           std::size_t g_points = 100);

}  // namespace hopfmcf
