// Curve shortening flow on S^2(1/2):
//
//   d gamma / d tbar = kappa_vec,
//
// integrated by forward Euler on the discrete curvature, with re-projection
// onto the sphere after every step and periodic redistribution of vertices.
// Along the flow the enclosed area obeys dA/dtbar = 4A - 2 pi, so
//
//   A(tbar) = pi/2 - (pi/2 - A0) e^{4 tbar},
//
// and a curve with A0 < pi/2 shrinks to a point at tbar = (1/4) ln(pi / (pi - 2 A0)).

#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include "hopfmcf/discrete_curve.hpp"

namespace hopfmcf {

struct CsfParams {
  double cfl = 0.25;               // dtbar = cfl * h_min^2
  int resample_every = 10;         // steps between redistributions
  double length_epsilon = 1e-3;    // extinction threshold on the length
  std::int64_t max_steps = 20'000'000;
};

// Checks ranges meant for user input: cfl in (0, 0.5], resample_every >= 1,
// length_epsilon > 0, max_steps >= 1.  Throws ValidationError.
void validate(const CsfParams& params);

struct CsfState {
  SphereCurve curve;
  double tbar = 0;
  std::int64_t step_count = 0;
};

struct StepInfo {
  double dtbar = 0;
  double max_kappa = 0;  // max |kappa| of the curve before the step
};

// One explicit step.  The step never passes tbar_limit.  Throws NumericalError
// on a non-finite update or when a redistribution finds a self-intersection.
// Only requires cfl > 0, so unstable step sizes can be exercised.
CsfState step(const CsfState& s, const CsfParams& params,
              double tbar_limit = std::numeric_limits<double>::infinity(),
              StepInfo* info = nullptr);

struct Observation {
  double tbar;
  double length;
  double area;       // enclosed area
  double max_kappa;
  const SphereCurve* curve;  // valid during the callback only
};

// Receives samples at least `every` apart in tbar (every step when 0), plus
// the final state of each run_until call.
struct Observer {
  std::function<void(const Observation&)> callback;
  double every = 0;
  double next = 0;
};

enum class RunStatus { reached_target, extinct };

struct RunResult {
  CsfState state;
  RunStatus status;
  Point3 extinction_point;  // set when extinct
};

// Integrates until tbar_target or until the length falls to
// params.length_epsilon.  Throws NumericalError after params.max_steps steps.
RunResult run_until(CsfState s, double tbar_target, const CsfParams& params,
                    Observer* observer = nullptr);

// Normalized vertex centroid on S^2(1/2).
Point3 centroid_point(const SphereCurve& c);

double predicted_area(double a0, double tbar);
// Infinite for a0 >= pi/2.
double extinction_tbar(double a0);

}  // namespace hopfmcf
