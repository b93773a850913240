#include "hopfmcf/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <random>
#include <sstream>

#include "hopfmcf/errors.hpp"
#include "hopfmcf/flow_composer.hpp"

namespace hopfmcf {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kAreaTol = 1e-3 * kPi / 2;
constexpr double kLatitudes[3] = {kPi / 6, kPi / 4, kPi / 3};
constexpr const char* kLatitudeNames[3] = {"pi/6", "pi/4", "pi/3"};
constexpr double kCylinderFractions[5] = {0.90, 0.93, 0.95, 0.97, 0.98};
// Distances to the Clifford torus this close count as equal: the mesh itself
// is only built to about 1e-14.
constexpr double kCliffordNoise = 1e-12;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct FlowRun {
  EvolutionResult res;
  double seconds = 0;
  std::string error;  // empty when the run completed
  double cos_err = 0;  // latitude runs: worst relative error of cos(theta) on [0, 0.9 tau]
};

SphereCurve star_curve(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(0, 1);
  std::normal_distribution<double> nd;
  Point3 centre = project_to_sphere(Point3{nd(g), nd(g), nd(g)}, kBaseRadius);
  const double radius = 0.1 + 0.6 * u(g);
  const Point3 e = tangent_project(centre, Point3{nd(g), nd(g), nd(g)});
  const Point3 t1 = e / norm(e);
  const Point3 t2 = cross(centre / kBaseRadius, t1);
  const double a3 = 0.15 * u(g), a5 = 0.05 * u(g);
  std::vector<Point3> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const double r = radius * (1 + a3 * std::sin(3 * a) + a5 * std::cos(5 * a));
    pts[k] = exp_sphere(centre, r * (std::cos(a) * t1 + std::sin(a) * t2), kBaseRadius);
  }
  return SphereCurve(pts);
}

// Ten simple curves of different shapes and areas.
std::vector<SphereCurve> test_curves(std::size_t n) {
  std::vector<SphereCurve> out;
  for (double th : kLatitudes) out.push_back(make_family(CurveFamilySpec::latitude(th, n)));
  out.push_back(make_family(CurveFamilySpec::great_circle(n, {1, 2, 3})));
  out.push_back(make_family(CurveFamilySpec::perturbed_great_circle(3, 0.05, n)));
  out.push_back(make_family(CurveFamilySpec::perturbed_great_circle(2, 0.2, n)));
  std::mt19937_64 g(2024);
  for (std::size_t i = 0; i < 4; ++i) out.push_back(star_curve(g, 100 + 75 * i));
  return out;
}

double wrapped_gap(double a, double b) {
  double d = std::fmod(a - b, 2 * kPi);
  if (d > kPi) d -= 2 * kPi;
  if (d < -kPi) d += 2 * kPi;
  return std::abs(d);
}

class Suite {
 public:
  explicit Suite(const VerifyOptions& o) : opts_(o) {}

  double cfl() const { return opts_.cfl.value_or(CsfParams{}.cfl); }
  std::size_t n() const { return opts_.resolution; }

  const FlowRun& latitude(int i) {
    if (!lat_[i]) lat_[i] = std::make_unique<FlowRun>(run_latitude(kLatitudes[i]));
    return *lat_[i];
  }

  const FlowRun& great_circle() {
    if (!gc_) {
      EvolutionConfig cfg;
      cfg.r0 = 1;
      cfg.initial_curve = CurveFamilySpec::great_circle(n());
      cfg.csf.cfl = cfl();
      cfg.tbar_horizon = 1.5;
      gc_ = std::make_unique<FlowRun>(run(cfg));
    }
    return *gc_;
  }

  const FlowRun& perturbed() {
    if (!pert_) {
      EvolutionConfig cfg;
      cfg.r0 = 1;
      cfg.initial_curve = CurveFamilySpec::perturbed_great_circle(3, 0.05, n());
      cfg.csf.cfl = cfl();
      cfg.tbar_horizon = 1.5;
      cfg.frame_times = {t_of_tbar(0.5, 1), t_of_tbar(1.0, 1), t_of_tbar(1.5, 1)};
      pert_ = std::make_unique<FlowRun>(run(cfg));
    }
    return *pert_;
  }

  std::vector<const FlowRun*> all_runs() {
    std::vector<const FlowRun*> out;
    for (int i = 0; i < 3; ++i) out.push_back(&latitude(i));
    out.push_back(&great_circle());
    out.push_back(&perturbed());
    return out;
  }

 private:
  FlowRun run(EvolutionConfig& cfg) {
    FlowRun r;
    const auto t0 = Clock::now();
    try {
      r.res = evolve(cfg);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
  }

  FlowRun run_latitude(double theta0) {
    const SphereCurve c0 = make_family(CurveFamilySpec::latitude(theta0, n()));
    const SingularityReport pred = predict(c0.area(), 2.0);
    EvolutionConfig cfg;
    cfg.r0 = 2;
    cfg.initial_curve = c0;
    cfg.csf.cfl = cfl();
    for (double f : kCylinderFractions) cfg.frame_times.push_back(f * pred.T);
    double cos_err = 0;
    const double window = 0.9 * pred.tau, c_init = std::cos(theta0);
    cfg.observe = [&](const Observation& x) {
      if (x.tbar > window) return;
      const double expect = c_init * std::exp(4 * x.tbar);
      for (const Point3& p : x.curve->points()) {
        cos_err = std::max(cos_err, std::abs(p.z / kBaseRadius - expect) / expect);
      }
    };
    FlowRun r = run(cfg);
    r.cos_err = cos_err;
    return r;
  }

  VerifyOptions opts_;
  std::unique_ptr<FlowRun> lat_[3], gc_, pert_;
};

std::string failed_runs(const std::vector<const FlowRun*>& runs) {
  std::string msg;
  for (const FlowRun* r : runs) {
    if (!r->error.empty()) msg += (msg.empty() ? "run failed: " : "; ") + r->error;
  }
  return msg;
}

double area_law_error(const FlowRun& r) {
  double worst = 0;
  const double window = 0.9 * r.res.predicted.tau;
  for (const FlowRecord& rec : r.res.records) {
    if (rec.tbar <= window) worst = std::max(worst, std::abs(rec.area - rec.area_predicted));
  }
  return worst;
}

CriterionResult area_law(Suite& s) {
  CriterionResult c;
  c.expected = "A = pi/2 - (pi/2 - A0) e^{4 tbar} on [0, 0.9 tau], theta0 in {pi/6, pi/4, pi/3}";
  c.tolerance = fmt("%.3e absolute; 30 s per case", kAreaTol);
  std::vector<const FlowRun*> runs;
  for (int i = 0; i < 3; ++i) runs.push_back(&s.latitude(i));
  if (std::string f = failed_runs(runs); !f.empty()) {
    c.measured = f;
    return c;
  }
  c.pass = true;
  double slowest = 0;
  for (int i = 0; i < 3; ++i) {
    const double e = area_law_error(*runs[i]);
    c.measured += fmt("%s%s: %.2e", i ? ", " : "", kLatitudeNames[i], e);
    c.pass = c.pass && e <= kAreaTol && runs[i]->seconds <= 30;
    slowest = std::max(slowest, runs[i]->seconds);
  }
  c.measured += fmt("; slowest %.1f s", slowest);
  return c;
}

CriterionResult latitude_exact(Suite& s) {
  CriterionResult c;
  c.expected = "cos(theta) = cos(theta0) e^{4 tbar} on [0, 0.9 tau]";
  c.tolerance = "1e-3 relative";
  std::vector<const FlowRun*> runs;
  for (int i = 0; i < 3; ++i) runs.push_back(&s.latitude(i));
  if (std::string f = failed_runs(runs); !f.empty()) {
    c.measured = f;
    return c;
  }
  c.pass = true;
  for (int i = 0; i < 3; ++i) {
    c.measured += fmt("%s%s: %.2e", i ? ", " : "", kLatitudeNames[i], runs[i]->cos_err);
    c.pass = c.pass && runs[i]->cos_err <= 1e-3;
  }
  return c;
}

CriterionResult extinction(Suite& s) {
  CriterionResult c;
  c.expected = "T = A0 r0^2 / (2 pi) for latitudes, r0 in {1, 2}; great circle alive at tbar = 1.5 with A = pi/2";
  c.tolerance = "2% relative on T; 1e-3 on A";
  std::vector<const FlowRun*> runs;
  for (int i = 0; i < 3; ++i) runs.push_back(&s.latitude(i));
  runs.push_back(&s.great_circle());
  if (std::string f = failed_runs(runs); !f.empty()) {
    c.measured = f;
    return c;
  }
  c.pass = true;
  for (int i = 0; i < 3; ++i) {
    const EvolutionResult& r = runs[i]->res;
    c.pass = c.pass && r.extinct;
    for (double r0 : {1.0, 2.0}) {
      const double predicted = r.a0 * r0 * r0 / (2 * kPi);
      const double measured = r.extinct ? t_of_tbar(r.final_tbar, r0) : std::numeric_limits<double>::infinity();
      const double rel = std::abs(measured - predicted) / predicted;
      c.measured += fmt("%s%s r0=%g: T=%.6f vs %.6f", c.measured.empty() ? "" : ", ", kLatitudeNames[i], r0, measured,
                        predicted);
      c.pass = c.pass && rel <= 0.02;
    }
  }
  const EvolutionResult& gc = runs[3]->res;
  double drift = 0;
  for (const FlowRecord& rec : gc.records) drift = std::max(drift, std::abs(rec.area - kPi / 2));
  c.measured += fmt("; great circle extinct=%s at tbar=%.3f, max |A - pi/2| = %.2e", gc.extinct ? "yes" : "no",
                    gc.final_tbar, drift);
  c.pass = c.pass && !gc.extinct && gc.final_tbar >= 1.5 && drift <= 1e-3;
  return c;
}

CriterionResult limit_radius(Suite& s) {
  CriterionResult c;
  const FlowRun& run = s.latitude(2);
  c.expected = "mean vertex norm of the final frame = r0 sqrt(1 - 2 A0/pi) (sqrt 2 for theta0 = pi/3, r0 = 2)";
  c.tolerance = "2% relative";
  if (!run.error.empty()) {
    c.measured = "run failed: " + run.error;
    return c;
  }
  const double expect = run.res.predicted.limit_radius;
  const double got = run.res.measured.limit_radius;
  c.measured = fmt("%.6f vs %.6f (sqrt 2 = %.6f)", got, expect, std::sqrt(2.0));
  c.pass = run.res.extinct && std::abs(got - expect) <= 0.02 * expect && std::abs(got - std::sqrt(2.0)) <= 0.02 * std::sqrt(2.0);
  return c;
}

CriterionResult clifford_limit(Suite& s) {
  CriterionResult c;
  const FlowRun& run = s.perturbed();
  c.expected = "distance of rescaled frames at tbar = 0.5, 1.0, 1.5 to the Clifford torus decreasing, <= 1e-2 at 1.5";
  c.tolerance = fmt("monotone up to %.0e; 60 s", kCliffordNoise);
  if (!run.error.empty()) {
    c.measured = "run failed: " + run.error;
    return c;
  }
  const auto& frames = run.res.frames;
  if (frames.size() < 3) {
    c.measured = "missing frames";
    return c;
  }
  double d[3];
  for (int i = 0; i < 3; ++i) d[i] = clifford_distance(rescale_a(frames[i]));
  c.measured = fmt("%.3e, %.3e, %.3e; %.1f s", d[0], d[1], d[2], run.seconds);
  c.pass = d[1] <= d[0] + kCliffordNoise && d[2] <= d[1] + kCliffordNoise && d[2] < d[0] && d[2] <= 1e-2 &&
           run.seconds <= 60;
  return c;
}

CriterionResult cylinder_limit(Suite& s) {
  CriterionResult c;
  const FlowRun& run = s.latitude(2);
  c.expected = "cylinder fit of rescaled frames at t/T = 0.90 .. 0.98 decreasing, radius R(T) sqrt(A0/pi) = 1/sqrt 2";
  c.tolerance = "<= 2e-2 at the last frame";
  if (!run.error.empty()) {
    c.measured = "run failed: " + run.error;
    return c;
  }
  const EvolutionResult& r = run.res;
  if (r.frames.size() < 6) {
    c.measured = "run ended before the last frame";
    return c;
  }
  const Point4 q = fiber_point(r.extinction_point, 1.0);
  const double radius = r.predicted.limit_radius * std::sqrt(r.a0 / kPi);
  double prev = std::numeric_limits<double>::infinity();
  c.pass = true;
  for (int i = 0; i < 5; ++i) {
    const double fit = cylinder_fit(rescale_b(r.frames[i], r.a0, 2.0, q), q, r.predicted.limit_radius, r.a0);
    c.measured += fmt("%s%.3e", i ? ", " : "", fit);
    c.pass = c.pass && fit < prev;
    prev = fit;
  }
  c.measured += fmt(" (cylinder radius %.6f)", radius);
  c.pass = c.pass && prev <= 2e-2;
  return c;
}

CriterionResult type_one(Suite& s) {
  CriterionResult c;
  c.expected = "(T - t) sup|sigma|^2 <= 1 + C_est on every run; = 1 on the great circle; G < 0 increasing";
  c.tolerance = "1e-9 on the great-circle identity; 100-point G grid";
  const std::vector<const FlowRun*> runs = s.all_runs();
  if (std::string f = failed_runs(runs); !f.empty()) {
    c.measured = f;
    return c;
  }
  c.pass = true;
  bool g_ok = true;
  double worst_ratio = 0;
  for (const FlowRun* r : runs) {
    const TypeIMonitor m = typeI_monitor(r->res.records, r->res.predicted, 100);
    c.pass = c.pass && m.bounded;
    worst_ratio = std::max(worst_ratio, m.typeI_sup / (1 + m.c_est));
    if (std::isfinite(r->res.predicted.tau)) g_ok = g_ok && m.g_increasing;
  }
  double gc_dev = 0;
  for (const FlowRecord& rec : runs[3]->res.records) gc_dev = std::max(gc_dev, std::abs(rec.typeI - 1));
  c.measured = fmt("max typeI / (1 + C_est) = %.4f; great circle |typeI - 1| <= %.1e; G %s", worst_ratio, gc_dev,
                   g_ok ? "ok" : "violated");
  c.pass = c.pass && gc_dev <= 1e-9 && g_ok;
  return c;
}

CriterionResult hopf_layer(Suite& s) {
  CriterionResult c;
  c.expected = "horizontal lifts; holonomy = 2A mod 2 pi on 10 curves; Lagrangian meshes; Clifford |z|^2 = 1/2";
  c.tolerance = "1e-8 per segment; 1e-4; 1e-3 at 128x128 and halving; 1e-7";
  const std::vector<SphereCurve> curves = test_curves(s.n());
  double horiz = 0, hol = 0;
  for (const SphereCurve& curve : curves) {
    const HorizontalLift lift = horizontal_lift(curve);
    horiz = std::max(horiz, horizontality_residual(lift));
    hol = std::max(hol, wrapped_gap(lift.holonomy_phase, 2 * curve.left_area()));
  }
  double lag = 0;
  for (const CurveFamilySpec& spec : {CurveFamilySpec::latitude(kPi / 4, 128), CurveFamilySpec::great_circle(128, {1, 2, 3}),
                                      CurveFamilySpec::perturbed_great_circle(3, 0.05, 128)}) {
    lag = std::max(lag, check_lagrangian(build_torus(horizontal_lift(make_family(spec)), 128, 1.0)));
  }
  double refine[3];
  bool halving = true;
  for (int i = 0; i < 3; ++i) {
    const std::size_t n = 32u << i;
    refine[i] = check_lagrangian(build_torus(horizontal_lift(make_family(CurveFamilySpec::perturbed_great_circle(3, 0.05, n))), n, 1.0));
    if (i > 0) halving = halving && refine[i] <= 0.5 * refine[i - 1];
  }
  const HopfTorusMesh cliff = build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(128))), 128, 1.0);
  double zdev = 0;
  for (const Point4& p : cliff.grid) zdev = std::max(zdev, std::abs(p.a * p.a + p.b * p.b - 0.5));
  c.measured = fmt("horizontality %.1e; holonomy gap %.1e; Lagrangian %.1e at 128x128; refinement %.1e, %.1e, %.1e; "
                   "Clifford %.1e",
                   horiz, hol, lag, refine[0], refine[1], refine[2], zdev);
  c.pass = horiz <= 1e-8 && hol <= 1e-4 && lag <= 1e-3 && halving && zdev <= 1e-7;
  return c;
}

CriterionResult structural(Suite& s) {
  CriterionResult c;
  c.expected = "R^2 + 4t = r0^2 in every record; t(tbar(t)) = t; A(c) + A(reverse c) = pi";
  c.tolerance = "1e-12; 1e-12; 1e-8";
  const std::vector<const FlowRun*> runs = s.all_runs();
  if (std::string f = failed_runs(runs); !f.empty()) {
    c.measured = f;
    return c;
  }
  double radius_law = 0;
  for (const FlowRun* r : runs) {
    const double r0 = r->res.records.empty() ? 0 : r->res.records.front().R;
    for (const FlowRecord& rec : r->res.records) radius_law = std::max(radius_law, std::abs(rec.R * rec.R + 4 * rec.t - r0 * r0));
  }
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(0, 1);
  double trip = 0;
  for (int i = 0; i < 1000; ++i) {
    const double r0 = 0.1 + 2.9 * u(g);
    const double t = 0.999 * u(g) * r0 * r0 / 4;
    trip = std::max(trip, std::abs(t_of_tbar(tbar_of_t(t, r0), r0) - t));
  }
  double complement = 0;
  for (const SphereCurve& curve : test_curves(s.n())) {
    const std::vector<Point3> rev(curve.points().rbegin(), curve.points().rend());
    complement = std::max(complement, std::abs(enclosed_area(curve) + enclosed_area(SphereCurve(rev)) - kPi));
  }
  c.measured = fmt("radius law %.1e; round trip %.1e; area complement %.1e", radius_law, trip, complement);
  c.pass = radius_law <= 1e-12 && trip <= 1e-12 && complement <= 1e-8;
  return c;
}

CriterionResult negative_controls(Suite& s) {
  CriterionResult c;
  c.expected = "sheared torus not Lagrangian; cfl = 2 breaks the area law; figure eight rejected";
  c.tolerance = "residual > 1e-2; area error > 1.571e-03";
  // Not over a latitude: the product tori |z|, |w| = const are invariant under the shear.
  const HopfTorusMesh mesh =
      build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(128, {0, 1, 0}))), 128, 1.0);
  const double sheared = check_lagrangian(apply_phase_shear(mesh, 0.3));

  std::string unstable;
  bool area_broken = false;
  {
    const SphereCurve c0 = make_family(CurveFamilySpec::latitude(kPi / 3, s.n()));
    const double a0 = c0.area(), window = 0.9 * extinction_tbar(a0);
    CsfParams p;
    p.cfl = 2.0;
    double worst = 0;
    Observer o{[&](const Observation& x) { worst = std::max(worst, std::abs(x.area - predicted_area(a0, x.tbar))); }};
    try {
      run_until({c0, 0.0, 0}, window, p, &o);
      unstable = fmt("area error %.2e", worst);
    } catch (const NumericalError& e) {
      unstable = std::string("run aborted: ") + e.what();
      worst = std::numeric_limits<double>::infinity();
    }
    area_broken = worst > kAreaTol;
  }

  bool rejected = false;
  std::string why;
  {
    std::ostringstream pts;
    pts.precision(17);
    for (int k = 0; k < 64; ++k) {
      const double a = 2 * kPi * (k + 0.5) / 64;
      pts << 0.2 * std::sin(a) << ' ' << 0.1 * std::sin(2 * a) << ' ' << 0.45 << '\n';
    }
    std::istringstream in(pts.str());
    try {
      read_point_list(in);
    } catch (const ValidationError& e) {
      rejected = true;
      why = e.what();
    }
  }
  c.measured = fmt("shear residual %.2e; cfl=2 %s; figure eight %s", sheared, unstable.c_str(),
                   rejected ? ("rejected (" + why + ")").c_str() : "accepted");
  c.pass = sheared > 1e-2 && area_broken && rejected;
  return c;
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names{"area-law",       "latitude-exact", "extinction", "limit-radius",
                                              "clifford-limit", "cylinder-limit", "type-one",   "hopf-layer",
                                              "structural",     "negative-controls"};
  return names;
}

bool criterion_selected(const VerifyOptions& options, int id) {
  if (options.filter.empty()) return true;
  const std::string& name = criterion_names().at(static_cast<std::size_t>(id - 1));
  std::stringstream ss(options.filter);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    if (tok == std::to_string(id) || name.find(tok) != std::string::npos) return true;
  }
  return false;
}

std::vector<CriterionResult> run_verification(const VerifyOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result) {
  if (options.cfl && !(*options.cfl > 0)) throw ValidationError("cfl must be positive");
  if (options.resolution < kMinCurvePoints) throw ValidationError("resolution too small");
  using Check = CriterionResult (*)(Suite&);
  static constexpr Check checks[] = {area_law,       latitude_exact, extinction, limit_radius, clifford_limit,
                                     cylinder_limit, type_one,       hopf_layer, structural,   negative_controls};
  Suite suite(options);
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!criterion_selected(options, id)) continue;
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = checks[id - 1](suite);
    } catch (const std::exception& e) {
      r.pass = false;
      r.measured = std::string("error: ") + e.what();
    }
    r.id = id;
    r.name = criterion_names()[static_cast<std::size_t>(id - 1)];
    r.seconds = seconds_since(t0);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hopfmcf
