#include "hopfmcf/flow_composer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hopfmcf/errors.hpp"

namespace hopfmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_r0(double r0) {
  if (!(r0 > 0) || !std::isfinite(r0)) throw ValidationError("r0 must be positive and finite");
}

SphereCurve initial_curve(const EvolutionConfig& config) {
  if (const auto* c = std::get_if<SphereCurve>(&config.initial_curve)) return *c;
  return make_family(std::get<CurveFamilySpec>(config.initial_curve));
}

}  // namespace

double tbar_of_t(double t, double r0) {
  check_r0(r0);
  if (!(t >= 0) || !(t < r0 * r0 / 4)) throw ValidationError("t must lie in [0, r0^2/4)");
  return -0.25 * std::log1p(-4 * t / (r0 * r0));
}

double t_of_tbar(double tbar, double r0) {
  check_r0(r0);
  if (!(tbar >= 0)) throw ValidationError("tbar must be non-negative");
  return -(r0 * r0 / 4) * std::expm1(-4 * tbar);
}

double radius_at(double t, double r0) {
  check_r0(r0);
  const double s = r0 * r0 - 4 * t;
  if (!(s >= 0)) throw ValidationError("t lies past r0^2/4");
  return std::sqrt(s);
}

const char* kind_name(SingularityKind k) {
  return k == SingularityKind::point_clifford ? "point_clifford" : "circle_cylinder";
}

SingularityReport predict(double a0, double r0) {
  check_r0(r0);
  if (!(a0 > 0) || !(a0 <= kPi / 2 + kEqualAreaTolerance)) {
    throw ValidationError("a0 must lie in (0, pi/2]");
  }
  SingularityReport r;
  if (std::abs(a0 - kPi / 2) <= kEqualAreaTolerance) {
    r.kind = SingularityKind::point_clifford;
    r.T = r0 * r0 / 4;
    r.tau = kInf;
    r.limit_radius = 0;
    return r;
  }
  r.kind = SingularityKind::circle_cylinder;
  r.T = a0 * r0 * r0 / (2 * kPi);
  r.tau = extinction_tbar(a0);
  r.limit_radius = r0 * std::sqrt(1 - 2 * a0 / kPi);
  return r;
}

void validate(const EvolutionConfig& config) {
  check_r0(config.r0);
  // Sanity only: cfl above the stable range is accepted here, run configs use validate(CsfParams).
  const CsfParams& c = config.csf;
  if (!(c.cfl > 0) || !std::isfinite(c.cfl)) throw ValidationError("cfl must be positive");
  if (c.resample_every < 1) throw ValidationError("resample_every must be at least 1");
  if (!(c.length_epsilon > 0)) throw ValidationError("length_epsilon must be positive");
  if (c.max_steps < 1) throw ValidationError("max_steps must be at least 1");
  if (config.n_beta < 8) throw ValidationError("n_beta must be at least 8");
  if (!(config.tbar_horizon > 0) || !std::isfinite(config.tbar_horizon)) {
    throw ValidationError("tbar_horizon must be positive and finite");
  }
  if (!(config.record_dtbar >= 0) || !std::isfinite(config.record_dtbar)) {
    throw ValidationError("record_dtbar must be non-negative");
  }
  for (double t : config.frame_times) {
    if (!(t >= 0) || !(t < config.r0 * config.r0 / 4)) throw ValidationError("frame time outside [0, r0^2/4)");
  }
}

EvolutionResult evolve(const EvolutionConfig& config) {
  validate(config);
  const double r0 = config.r0;
  SphereCurve c0 = initial_curve(config);

  EvolutionResult out;
  out.a0 = c0.area();
  out.predicted = predict(out.a0, r0);
  const SingularityReport& pred = out.predicted;
  for (double t : config.frame_times) {
    if (!(t < pred.T)) throw ValidationError("frame time " + std::to_string(t) + " is not before T");
  }

  std::vector<double> times = config.frame_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const double span = std::isfinite(pred.tau) ? pred.tau : config.tbar_horizon;
  const double stride = config.record_dtbar > 0 ? config.record_dtbar : span / 2000;
  const double r0sq = r0 * r0;
  Observer obs{[&](const Observation& x) {
                 if (!out.records.empty() && x.tbar <= out.records.back().tbar) return;
                 FlowRecord rec;
                 rec.tbar = x.tbar;
                 rec.t = t_of_tbar(x.tbar, r0);
                 const double rsq = r0sq - 4 * rec.t;
                 rec.R = std::sqrt(rsq);
                 rec.length = x.length;
                 rec.area = x.area;
                 rec.area_predicted = predicted_area(out.a0, x.tbar);
                 rec.max_kappa = x.max_kappa;
                 rec.sup_sigma_sq = (4 + x.max_kappa * x.max_kappa) / rsq;
                 rec.typeI = (pred.T - rec.t) * rec.sup_sigma_sq;
                 out.records.push_back(rec);
                 if (config.observe) config.observe(x);
               },
               stride};

  CsfState state{std::move(c0), 0.0, 0};
  std::vector<SphereCurve> curves;
  std::vector<double> curve_t;
  for (double t : times) {
    const double tb = tbar_of_t(t, r0);
    RunResult r = run_until(std::move(state), tb, config.csf, &obs);
    state = std::move(r.state);
    if (r.status == RunStatus::extinct) {
      out.extinct = true;
      out.extinction_point = r.extinction_point;
      break;
    }
    curves.push_back(state.curve);
    curve_t.push_back(t);
    out.frame_tbars.push_back(tb);
  }
  if (!out.extinct) {
    const double target =
        std::isfinite(pred.tau) ? kInf : std::max(config.tbar_horizon, out.frame_tbars.empty() ? 0.0 : out.frame_tbars.back());
    RunResult r = run_until(std::move(state), target, config.csf, &obs);
    state = std::move(r.state);
    out.extinct = r.status == RunStatus::extinct;
    if (out.extinct) out.extinction_point = r.extinction_point;
  }
  out.final_tbar = state.tbar;
  curves.push_back(state.curve);
  curve_t.push_back(t_of_tbar(state.tbar, r0));
  out.frame_tbars.push_back(state.tbar);

  out.frames.reserve(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    out.frames.push_back(build_torus(horizontal_lift(curves[i]), config.n_beta, radius_at(curve_t[i], r0), curve_t[i]));
  }

  SingularityReport& m = out.measured;
  m.kind = pred.kind;
  m.tau = out.extinct ? out.final_tbar : kInf;
  m.T = out.extinct ? t_of_tbar(out.final_tbar, r0) : kInf;
  const TypeIMonitor mon = typeI_monitor(out.records, pred);
  m.typeI_sup = mon.typeI_sup;
  if (pred.kind == SingularityKind::circle_cylinder) {
    const HopfTorusMesh& last = out.frames.back();
    double sum = 0;
    for (const Point4& p : last.grid) sum += norm(p);
    m.limit_radius = sum / static_cast<double>(last.grid.size());
    const Point4 q = fiber_point(out.extinction_point, 1.0);
    for (std::size_t i = out.frames.size() - 1; i-- > 0;) {
      if (out.frames[i].t < pred.T) {
        m.limit_fit_residual = cylinder_fit(rescale_b(out.frames[i], out.a0, r0, q), q, pred.limit_radius, out.a0);
        break;
      }
    }
  } else {
    m.limit_radius = 0;
    m.limit_fit_residual = clifford_distance(rescale_a(out.frames.back()));
  }
  return out;
}

std::vector<double> default_frame_times(const SingularityReport& predicted, double r0, std::size_t count,
                                        double tbar_horizon) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {0.0};
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    if (predicted.kind == SingularityKind::circle_cylinder) {
      out.push_back(i == 0 ? 0.0 : predicted.T * (1 - std::pow(0.02, f)));
    } else {
      out.push_back(t_of_tbar(f * tbar_horizon, r0));
    }
  }
  return out;
}

HopfTorusMesh rescale_a(const HopfTorusMesh& mesh) {
  if (!(mesh.radius > 0)) throw ValidationError("rescale_a: mesh radius must be positive");
  HopfTorusMesh out = mesh;
  const double inv = 1 / mesh.radius;
  for (Point4& p : out.grid) p = inv * p;
  out.radius = 1;
  return out;
}

double rescale_lambda(double t, double a0, double r0) {
  check_r0(r0);
  if (!(a0 > 0) || !(a0 < kPi / 2)) throw ValidationError("rescale_b needs 0 < a0 < pi/2");
  const double s = r0 * r0 - 4 * t;
  const double denom = s > 0 ? kPi / 2 - (kPi / 2 - a0) * (r0 * r0 / s) : -1.0;
  if (!(t >= 0) || !(denom > 0)) throw ValidationError("rescale_b: lambda is undefined at t >= T");
  return std::sqrt(a0 / denom);
}

std::vector<Point4> rescale_b(const HopfTorusMesh& mesh, double a0, double r0, const Point4& q) {
  if (std::abs(norm(q) - 1) > 1e-9) throw ValidationError("rescale_b: q must be a unit vector");
  const double lambda = rescale_lambda(mesh.t, a0, r0);
  const Point4 centre = mesh.radius * q;
  std::vector<Point4> out(mesh.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = centre + lambda * (mesh.grid[i] - centre);
  return out;
}

double cylinder_fit(const std::vector<Point4>& cloud, const Point4& q, double r_t, double a0, double window) {
  if (std::abs(norm(q) - 1) > 1e-9) throw ValidationError("cylinder_fit: q must be a unit vector");
  if (!(r_t > 0)) throw ValidationError("cylinder_fit: R_T must be positive");
  if (!(a0 > 0)) throw ValidationError("cylinder_fit: a0 must be positive");
  const double radius = r_t * std::sqrt(a0 / kPi);
  const Point4 centre = r_t * q;
  const HorizontalFrame f = horizontal_frame(q);
  double worst = 0;
  std::size_t used = 0;
  for (const Point4& p : cloud) {
    const Point4 d = p - centre;
    if (!(norm(d) <= window)) continue;
    ++used;
    const double dist = std::hypot(dot(d, f.h1), dot(d, f.h2));
    worst = std::max(worst, std::abs(dist - radius) / radius);
  }
  if (used == 0) throw ValidationError("cylinder_fit: no points inside the window");
  return worst;
}

double clifford_distance(const HopfTorusMesh& mesh) {
  double worst = 0;
  for (const Point4& p : mesh.grid) {
    const double z = std::hypot(p.a, p.b), w = std::hypot(p.c, p.d);
    worst = std::max(worst, std::abs(std::atan2(w, z) - kPi / 4));
  }
  return worst;
}

double type_one_g(double tbar, double tau) {
  return -0.25 * std::expm1(4 * (tbar - tau)) - (tau - tbar);
}

TypeIMonitor typeI_monitor(const std::vector<FlowRecord>& records, const SingularityReport& predicted,
                           std::size_t g_points) {
  TypeIMonitor m;
  const double tau = predicted.tau;
  for (const FlowRecord& r : records) {
    m.typeI_sup = std::max(m.typeI_sup, r.typeI);
    const double k2 = r.max_kappa * r.max_kappa;
    m.c_est = std::max(m.c_est, std::isfinite(tau) ? (tau - r.tbar) * k2 : k2 / 4);
  }
  // Rounding slack only: the two sides agree exactly when kappa is constant.
  const double bound = (1 + m.c_est) * (1 + 1e-12);
  for (const FlowRecord& r : records) m.bounded = m.bounded && r.typeI <= bound;

  if (std::isfinite(tau) && g_points >= 2) {
    double prev = type_one_g(0, tau);
    m.g_increasing = prev < 0;
    for (std::size_t i = 1; i < g_points; ++i) {
      const double g = type_one_g(tau * static_cast<double>(i) / static_cast<double>(g_points), tau);
      m.g_increasing = m.g_increasing && g > prev && g < 0;
      prev = g;
    }
  }
  return m;
}

}  // namespace hopfmcf
