#include <cmath>
#include <vector>

#include "doctest.h"
#include "hopfmcf/csf.hpp"
#include "hopfmcf/errors.hpp"
#include "support.hpp"

using namespace hopfmcf;

namespace {

CsfState start(const CurveFamilySpec& spec) { return {make_family(spec), 0.0, 0}; }

}  // namespace

TEST_CASE("closed-form area law") {
  CHECK(predicted_area(kPi / 2, 3.0) == doctest::Approx(kPi / 2));
  CHECK(predicted_area(kPi / 4, 0.0) == doctest::Approx(kPi / 4));
  CHECK(predicted_area(kPi / 4, extinction_tbar(kPi / 4)) == doctest::Approx(0).scale(1));
  CHECK(extinction_tbar(kPi / 4) == doctest::Approx(0.25 * std::log(2.0)));
  CHECK(std::isinf(extinction_tbar(kPi / 2)));
  CHECK_THROWS_AS(extinction_tbar(0), ValidationError);
}

TEST_CASE("parameter validation") {
  CsfParams p;
  CHECK_NOTHROW(validate(p));
  p.cfl = 0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p.cfl = 0.6;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = {};
  p.resample_every = 0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = {};
  p.length_epsilon = -1;
  CHECK_THROWS_AS(validate(p), ValidationError);

  const CsfState s = start(CurveFamilySpec::latitude(1.0, 64));
  CHECK_THROWS_AS(run_until(s, -1.0, CsfParams{}), ValidationError);
  CsfParams tiny;
  tiny.max_steps = 3;
  CHECK_THROWS_AS(run_until(s, 1.0, tiny), NumericalError);
}

TEST_CASE("latitude circle follows cos(theta) = cos(theta0) e^{4 tbar}") {
  const double theta0 = 1.1;
  const auto s = start(CurveFamilySpec::latitude(theta0, 512));
  CsfParams p;
  for (double target : {0.05, 0.1, 0.15}) {
    const RunResult r = run_until(s, target, p);
    REQUIRE(r.status == RunStatus::reached_target);
    CHECK(r.state.tbar == target);
    double zmin = 1, zmax = -1;
    for (const auto& q : r.state.curve.points()) {
      zmin = std::min(zmin, q.z);
      zmax = std::max(zmax, q.z);
    }
    CHECK(zmax - zmin <= 1e-12);
    const double expect = std::cos(theta0) * std::exp(4 * target);
    CHECK(2 * zmin == doctest::Approx(expect).epsilon(1e-3));
  }
}

TEST_CASE("great circle is stationary") {
  const auto s = start(CurveFamilySpec::great_circle(128, {0.3, -0.2, 1}));
  const RunResult r = run_until(s, 0.5, CsfParams{});
  CHECK(r.state.curve.area() == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(r.state.curve.length() == doctest::Approx(s.curve.length()).epsilon(1e-10));
}

TEST_CASE("length decreases and the area law holds for a perturbed curve") {
  const auto s = start(CurveFamilySpec::perturbed_great_circle(2, 0.1, 128));
  std::vector<Observation> obs;
  Observer o{[&](const Observation& x) { obs.push_back(x); }, 0.01};
  run_until(s, 0.2, CsfParams{}, &o);
  REQUIRE(obs.size() >= 20);
  for (std::size_t i = 1; i < obs.size(); ++i) {
    CHECK(obs[i].tbar > obs[i - 1].tbar);
    CHECK(obs[i].length <= obs[i - 1].length + 1e-12);
  }
  const double a0 = s.curve.area();
  for (const auto& x : obs) {
    CHECK(std::abs(x.area - predicted_area(a0, x.tbar)) <= 2e-3 * a0);
  }
  CHECK(obs.back().tbar == 0.2);
}

TEST_CASE("area-law error converges under refinement") {
  const double theta0 = 1.2, target = 0.1;
  double err[2];
  int i = 0;
  for (std::size_t n : {32, 64}) {
    const auto s = start(CurveFamilySpec::latitude(theta0, n));
    const RunResult r = run_until(s, target, CsfParams{});
    err[i++] = std::abs(r.state.curve.area() - predicted_area(s.curve.area(), target));
  }
  CHECK(err[1] < err[0] / 3);
}

TEST_CASE("small cap shrinks to the pole") {
  const auto s = start(CurveFamilySpec::latitude(0.4, 128));
  CsfParams p;
  const RunResult r = run_until(s, 10.0, p);
  REQUIRE(r.status == RunStatus::extinct);
  CHECK(r.state.curve.length() <= p.length_epsilon);
  CHECK(norm(r.extinction_point - Point3{0, 0, 0.5}) <= 1e-9);
  CHECK(r.state.tbar == doctest::Approx(extinction_tbar(s.curve.area())).epsilon(1e-2));
}

TEST_CASE("oversized time steps break the area law") {
  const auto s = start(CurveFamilySpec::latitude(kPi / 3, 128));
  const double a0 = s.curve.area();
  CsfParams p;
  p.cfl = 2.0;
  double worst = 0;
  Observer o{[&](const Observation& x) { worst = std::max(worst, std::abs(x.area - predicted_area(a0, x.tbar))); }};
  bool threw = false;
  try {
    run_until(s, 0.9 * extinction_tbar(a0), p, &o);
  } catch (const NumericalError&) {
    threw = true;
  }
  CHECK((threw || worst > 1e-3 * kPi / 2));
}

TEST_CASE("one step follows dA/dtbar = 4A - 2pi") {
  const auto s = start(CurveFamilySpec::perturbed_great_circle(2, 0.2, 256));
  StepInfo info;
  const CsfState n = step(s, CsfParams{}, 1e9, &info);
  const double a = s.curve.area();
  const double expect = a + info.dtbar * (4 * a - 2 * kPi);
  CHECK(std::abs(n.curve.area() - expect) <= 1e-3 * info.dtbar);
  CHECK(n.curve.length() < s.curve.length());
}

TEST_CASE("great circle does not move") {
  const auto s = start(CurveFamilySpec::great_circle(512, {1, 2, 3}));
  StepInfo info;
  const CsfState n = step(s, CsfParams{}, 1e9, &info);
  for (std::size_t i = 0; i < s.curve.size(); ++i) CHECK(norm(n.curve[i] - s.curve[i]) <= 1e-6 * info.dtbar);
  const RunResult r = run_until(s, 1.0, CsfParams{});
  CHECK(r.status == RunStatus::reached_target);
  CHECK(std::abs(r.state.curve.area() - kPi / 2) <= 1e-3);
  const RunResult same = run_until(s, 0.0, CsfParams{});
  CHECK(same.state.step_count == 0);
}

TEST_CASE("perturbations of the equator decay") {
  const double eps = 0.05;
  const auto s = start(CurveFamilySpec::perturbed_great_circle(3, eps, 128));
  const RunResult r = run_until(s, 1.0, CsfParams{});
  CHECK(max_curvature(r.state.curve) < eps / 10);
}

TEST_CASE("halving cfl changes the result at first order") {
  const auto s = start(CurveFamilySpec::latitude(1.0, 64));
  double area[3];
  int i = 0;
  for (double cfl : {0.4, 0.2, 0.1}) {
    CsfParams p;
    p.cfl = cfl;
    area[i++] = run_until(s, 0.1, p).state.curve.area();
  }
  const double d1 = std::abs(area[0] - area[1]), d2 = std::abs(area[1] - area[2]);
  const double discretization = std::abs(area[2] - predicted_area(s.curve.area(), 0.1));
  CHECK(d1 < discretization);
  CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("a single step respects its limit") {
  const auto s = start(CurveFamilySpec::latitude(1.0, 64));
  StepInfo info;
  const CsfState n = step(s, CsfParams{}, 1e-9, &info);
  CHECK(n.tbar == 1e-9);
  CHECK(info.dtbar == doctest::Approx(1e-9));
  CHECK(info.max_kappa == doctest::Approx(2 / std::tan(1.0)).epsilon(1e-2));
  CHECK(n.step_count == 1);
}
