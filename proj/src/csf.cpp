#include "hopfmcf/csf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hopfmcf/errors.hpp"
#include "hopfmcf/kernels.hpp"

namespace hopfmcf {

namespace {

std::string at_time(double tbar) {
  std::ostringstream os;
  os.precision(10);
  os << " at tbar=" << tbar;
  return os.str();
}

struct Workspace {
  std::vector<double> x, y, z, seg;
  std::vector<double> ox, oy, oz, kx, ky, kz, kn;

  void resize(std::size_t n) {
    for (auto* v : {&x, &y, &z}) v->resize(n + 2);
    seg.resize(n + 1);
    for (auto* v : {&ox, &oy, &oz, &kx, &ky, &kz, &kn}) v->resize(n);
  }
};

}  // namespace

void validate(const CsfParams& p) {
  if (!(p.cfl > 0 && p.cfl <= 0.5)) throw ValidationError("cfl must lie in (0, 0.5]");
  if (p.resample_every < 1) throw ValidationError("resample_every must be at least 1");
  if (!(p.length_epsilon > 0) || !std::isfinite(p.length_epsilon)) {
    throw ValidationError("length_epsilon must be positive");
  }
  if (p.max_steps < 1) throw ValidationError("max_steps must be at least 1");
}

CsfState step(const CsfState& s, const CsfParams& params, double tbar_limit, StepInfo* info) {
  if (!(params.cfl > 0) || !std::isfinite(params.cfl)) throw ValidationError("cfl must be positive");
  if (params.resample_every < 1) throw ValidationError("resample_every must be at least 1");

  const SphereCurve& c = s.curve;
  const std::size_t n = c.size();
  const auto pts = c.points();
  const auto len = c.segment_lengths();

  thread_local Workspace ws;
  ws.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    ws.x[k + 1] = pts[k].x;
    ws.y[k + 1] = pts[k].y;
    ws.z[k + 1] = pts[k].z;
    ws.seg[k + 1] = len[k];
  }
  ws.x[0] = pts[n - 1].x;
  ws.y[0] = pts[n - 1].y;
  ws.z[0] = pts[n - 1].z;
  ws.x[n + 1] = pts[0].x;
  ws.y[n + 1] = pts[0].y;
  ws.z[n + 1] = pts[0].z;
  ws.seg[0] = len[n - 1];

  const double h = c.min_segment();
  double dt = params.cfl * h * h;
  if (s.tbar + dt > tbar_limit) dt = std::max(0.0, tbar_limit - s.tbar);

  kernels::flow_step({ws.x.data(), ws.y.data(), ws.z.data(), ws.seg.data(), n, dt, kBaseRadius,
                      ws.ox.data(), ws.oy.data(), ws.oz.data(), ws.kx.data(), ws.ky.data(),
                      ws.kz.data(), ws.kn.data()});

  std::vector<Point3> next(n);
  double max_kappa = 0;
  for (std::size_t k = 0; k < n; ++k) {
    next[k] = {ws.ox[k], ws.oy[k], ws.oz[k]};
    if (!std::isfinite(next[k].x) || !std::isfinite(next[k].y) || !std::isfinite(next[k].z) ||
        !std::isfinite(ws.kn[k])) {
      throw NumericalError("non-finite curve update" + at_time(s.tbar));
    }
    max_kappa = std::max(max_kappa, ws.kn[k]);
  }
  if (info) *info = {dt, max_kappa};

  CsfState out{s.curve, s.tbar + dt, s.step_count + 1};
  try {
    out.curve = c.with_points(std::move(next));
  } catch (const ValidationError&) {
    throw NumericalError("curve collapsed to a repeated vertex" + at_time(out.tbar));
  }
  if (out.tbar > tbar_limit) out.tbar = tbar_limit;
  if (out.step_count % params.resample_every == 0) {
    out.curve = resample(out.curve, n);
    if (!is_simple(out.curve)) throw NumericalError("curve lost embeddedness" + at_time(out.tbar));
  }
  return out;
}

namespace {

void emit(Observer* obs, const CsfState& s, double max_kappa, bool force) {
  if (!obs || !obs->callback) return;
  if (!force && s.tbar < obs->next) return;
  obs->callback({s.tbar, s.curve.length(), s.curve.area(), max_kappa, &s.curve});
  if (obs->every > 0) {
    while (obs->next <= s.tbar) obs->next += obs->every;
  }
}

}  // namespace

RunResult run_until(CsfState s, double tbar_target, const CsfParams& params, Observer* observer) {
  if (!(tbar_target >= s.tbar)) throw ValidationError("run_until target lies before the current time");
  if (params.length_epsilon <= 0) throw ValidationError("length_epsilon must be positive");
  std::int64_t taken = 0;
  while (true) {
    if (s.curve.length() <= params.length_epsilon) {
      emit(observer, s, max_curvature(s.curve), true);
      const Point3 x = centroid_point(s.curve);
      return {std::move(s), RunStatus::extinct, x};
    }
    if (s.tbar >= tbar_target) {
      emit(observer, s, max_curvature(s.curve), true);
      return {std::move(s), RunStatus::reached_target, {}};
    }
    if (taken >= params.max_steps) {
      throw NumericalError("step budget exhausted" + at_time(s.tbar));
    }
    StepInfo info;
    CsfState next = step(s, params, tbar_target, &info);
    emit(observer, s, info.max_kappa, false);
    s = std::move(next);
    ++taken;
  }
}

Point3 centroid_point(const SphereCurve& c) {
  Point3 sum;
  for (const auto& p : c.points()) sum += p;
  const double r = norm(sum);
  if (!(r > 0)) throw NumericalError("curve centroid is at the origin");
  return (kBaseRadius / r) * sum;
}

double predicted_area(double a0, double tbar) {
  return kPi / 2 - (kPi / 2 - a0) * std::exp(4 * tbar);
}

double extinction_tbar(double a0) {
  if (!(a0 > 0)) throw ValidationError("initial area must be positive");
  if (a0 >= kPi / 2) return std::numeric_limits<double>::infinity();
  return 0.25 * std::log(kPi / (kPi - 2 * a0));
}

}  // namespace hopfmcf
