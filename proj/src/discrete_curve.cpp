#include "hopfmcf/discrete_curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

#include "hopfmcf/errors.hpp"
#include "hopfmcf/kernels.hpp"

namespace hopfmcf {

namespace {

constexpr double kMinSegment = 1e-12;
// Signed distances to a great-circle plane below this (unit sphere) count as zero.
constexpr double kPlaneGuard = 1e-14;

std::size_t next_index(std::size_t i, std::size_t n) { return i + 1 == n ? 0 : i + 1; }
std::size_t prev_index(std::size_t i, std::size_t n) { return i == 0 ? n - 1 : i - 1; }

Point3 unit(const Point3& p) { return p / norm(p); }

// Geodesic length between two points of S^2(rho) from their chord.  Faster
// than the atan2 form and as accurate for the short edges of a curve.
double arc_length(const Point3& p, const Point3& q) {
  const double half_chord = 0.5 * norm(p - q) / kBaseRadius;
  if (half_chord < 0.7) return 2 * kBaseRadius * std::asin(half_chord);
  return geodesic_distance(p, q, kBaseRadius);
}

// Geodesic interpolation between p and q on S^2(rho); theta is the angle between them.
Point3 slerp(const Point3& p, const Point3& q, double theta, double f) {
  if (f <= 0) return p;
  if (f >= 1) return q;
  const double s = std::sin(theta);
  if (s < 1e-300) return p;
  return (std::sin((1 - f) * theta) / s) * p + (std::sin(f * theta) / s) * q;
}

int guarded_sign(double v) {
  if (v > kPlaneGuard) return 1;
  if (v < -kPlaneGuard) return -1;
  return 0;
}

// p assumed on the great circle of a and b (all unit): is it on the minor arc?
bool within_arc(const Point3& a, const Point3& b, const Point3& p) {
  const Point3 n = cross(a, b);
  const double g = kPlaneGuard * norm(n);
  return dot(cross(a, p), n) >= -g && dot(cross(p, b), n) >= -g;
}

}  // namespace

SphereCurve::SphereCurve(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.size() < kMinCurvePoints) {
    throw ValidationError("curve needs at least " + std::to_string(kMinCurvePoints) +
                          " points, got " + std::to_string(points_.size()));
  }
  for (auto& p : points_) {
    const double r = norm(p);
    if (!std::isfinite(r) || r == 0) throw ValidationError("curve point is zero or not finite");
    p = project_to_sphere(p, kBaseRadius);
  }
  measure();
  left_area_ = turning_area(points_);
  side_ = *left_area_ <= kBaseSphereArea / 2 ? EnclosedSide::left : EnclosedSide::right;
}

SphereCurve::SphereCurve(Trusted, std::vector<Point3> points, EnclosedSide side)
    : points_(std::move(points)), side_(side) {
  measure();
}

SphereCurve::SphereCurve(Trusted, std::vector<Point3> points, std::vector<double> segments,
                         EnclosedSide side)
    : points_(std::move(points)), segments_(std::move(segments)), side_(side) {
  length_ = 0;
  for (double l : segments_) {
    if (!(l >= kMinSegment)) throw ValidationError("degenerate curve segment");
    length_ += l;
  }
}

SphereCurve SphereCurve::with_points(std::vector<Point3> points) const {
  if (points.size() < kMinCurvePoints) throw ValidationError("curve needs at least 8 points");
  return SphereCurve(Trusted{}, std::move(points), side_);
}

void SphereCurve::measure() {
  const std::size_t n = points_.size();
  segments_.resize(n);
  length_ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double l = arc_length(points_[i], points_[next_index(i, n)]);
    if (!(l >= kMinSegment)) {
      throw ValidationError("degenerate curve segment at index " + std::to_string(i));
    }
    segments_[i] = l;
    length_ += l;
  }
}

double SphereCurve::min_segment() const { return *std::min_element(segments_.begin(), segments_.end()); }

double SphereCurve::left_area() const { return left_area_ ? *left_area_ : turning_area(points_); }

double SphereCurve::area() const {
  const double left = left_area();
  return side_ == EnclosedSide::left ? left : kBaseSphereArea - left;
}

SphereCurve SphereCurve::reversed() const {
  std::vector<Point3> pts(points_.rbegin(), points_.rend());
  SphereCurve out(Trusted{}, std::move(pts), side_ == EnclosedSide::left ? EnclosedSide::right
                                                                         : EnclosedSide::left);
  if (left_area_) out.left_area_ = kBaseSphereArea - *left_area_;
  return out;
}

double turning_area(std::span<const Point3> pts) {
  const std::size_t n = pts.size();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 p = unit(pts[i]);
    const Point3 t_in = tangent_project(p, pts[i] - pts[prev_index(i, n)]);
    const Point3 t_out = tangent_project(p, pts[next_index(i, n)] - pts[i]);
    total += std::atan2(dot(p, cross(t_in, t_out)), dot(t_in, t_out));
  }
  return kBaseRadius * kBaseRadius * (2 * kPi - total);
}

Point3 curvature_vector(const SphereCurve& c, std::size_t i) {
  const std::size_t n = c.size();
  const auto seg = c.segment_lengths();
  const std::size_t ip = prev_index(i, n);
  return kernels::discrete_curvature(c[ip], c[i], c[next_index(i, n)], seg[ip], seg[i]);
}

std::vector<Point3> curvature_vectors(const SphereCurve& c) {
  std::vector<Point3> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = curvature_vector(c, i);
  return out;
}

double max_curvature(const SphereCurve& c) {
  double m = 0;
  for (std::size_t i = 0; i < c.size(); ++i) m = std::max(m, norm(curvature_vector(c, i)));
  return m;
}

double enclosed_area(const SphereCurve& c) {
  if (!is_simple(c)) throw ValidationError("enclosed_area: curve is not simple");
  return c.left_area();
}

bool arcs_intersect(const Point3& a0, const Point3& b0, const Point3& c0, const Point3& d0) {
  const Point3 a = unit(a0), b = unit(b0), c = unit(c0), d = unit(d0);
  const Point3 nab = cross(a, b), ncd = cross(c, d);
  const double lab = norm(nab), lcd = norm(ncd);
  if (lab == 0 || lcd == 0) return true;  // degenerate arc

  // Signed distances of each endpoint to the other arc's plane.
  const int sc = guarded_sign(dot(nab, c) / lab);
  const int sd = guarded_sign(dot(nab, d) / lab);
  const int sa = guarded_sign(dot(ncd, a) / lcd);
  const int sb = guarded_sign(dot(ncd, b) / lcd);

  if (sc != 0 && sd != 0 && sa != 0 && sb != 0) {
    const int acb = -sc, bda = sd, cbd = -sb, dac = sa;
    return acb == bda && bda == cbd && cbd == dac;
  }
  // Some endpoint lies on the other great circle: the arcs meet only if such
  // an endpoint lies on the other arc.
  if (sc == 0 && within_arc(a, b, c)) return true;
  if (sd == 0 && within_arc(a, b, d)) return true;
  if (sa == 0 && within_arc(c, d, a)) return true;
  if (sb == 0 && within_arc(c, d, b)) return true;
  return false;
}

bool is_simple(std::span<const Point3> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return false;
  std::vector<Point3> u(n), mid(n);
  std::vector<double> half(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = unit(pts[i]);
  for (std::size_t i = 0; i < n; ++i) {
    const Point3& p = u[i];
    const Point3& q = u[next_index(i, n)];
    mid[i] = 0.5 * (p + q);
    // Every point of a minor arc lies within half a chord of the chord midpoint.
    half[i] = 0.5 * norm(q - p);
  }
  // Sweep along the coordinate axis with the widest spread of midpoints.
  double lo[3] = {INFINITY, INFINITY, INFINITY}, hi[3] = {-INFINITY, -INFINITY, -INFINITY};
  double hmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m[3] = {mid[i].x, mid[i].y, mid[i].z};
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], m[a]);
      hi[a] = std::max(hi[a], m[a]);
    }
    hmax = std::max(hmax, half[i]);
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  auto key = [&](std::size_t i) { return axis == 0 ? mid[i].x : axis == 1 ? mid[i].y : mid[i].z; };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return key(l) < key(r); });

  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    const double limit = key(i) + (half[i] + hmax) * (1 + 1e-9) + 1e-15;
    for (std::size_t oj = oi + 1; oj < n && key(order[oj]) <= limit; ++oj) {
      const std::size_t j = order[oj];
      const std::size_t d = i > j ? i - j : j - i;
      if (d <= 1 || d == n - 1) continue;  // adjacent segments share a vertex
      const double reach = (half[i] + half[j]) * (1 + 1e-9) + 1e-15;
      const Point3 dm = mid[i] - mid[j];
      if (dot(dm, dm) > reach * reach) continue;
      if (arcs_intersect(u[i], u[next_index(i, n)], u[j], u[next_index(j, n)])) return false;
    }
  }
  return true;
}

bool is_simple(const SphereCurve& c) { return is_simple(c.points()); }

SphereCurve resample(const SphereCurve& c, std::size_t n) {
  if (n < kMinCurvePoints) {
    throw ValidationError("resample needs at least 8 points, got " + std::to_string(n));
  }
  constexpr int kMaxPasses = 24;
  constexpr double kUniformity = 1e-12;

  std::vector<Point3> src(c.points().begin(), c.points().end());
  std::vector<double> seg(c.segment_lengths().begin(), c.segment_lengths().end());
  std::vector<Point3> out(n);
  double last_spread = INFINITY;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const std::size_t m = src.size();
    double total = 0;
    for (double l : seg) total += l;
    const double spacing = total / static_cast<double>(n);

    std::size_t i = 0;
    double start = 0;  // arclength at src[i]
    for (std::size_t k = 0; k < n; ++k) {
      const double s = spacing * static_cast<double>(k);
      while (i + 1 < m && start + seg[i] <= s) {
        start += seg[i];
        ++i;
      }
      const double f = (s - start) / seg[i];
      out[k] = project_to_sphere(
          slerp(src[i], src[next_index(i, m)], seg[i] / kBaseRadius, f), kBaseRadius);
    }

    src = out;
    seg.resize(n);
    double lo = INFINITY, hi = 0;
    for (std::size_t k = 0; k < n; ++k) {
      seg[k] = arc_length(src[k], src[next_index(k, n)]);
      lo = std::min(lo, seg[k]);
      hi = std::max(hi, seg[k]);
    }
    // Segment lengths carry absolute rounding noise near 1e-16, so stop once
    // the spread stops shrinking.
    const double spread = hi - lo;
    if (spread <= kUniformity * hi + 1e-15 || spread > 0.5 * last_spread) break;
    last_spread = spread;
  }
  return SphereCurve(SphereCurve::Trusted{}, std::move(src), std::move(seg), c.enclosed_side());
}

// ---------------------------------------------------------------------------
// Families

CurveFamilySpec CurveFamilySpec::latitude(double theta0, std::size_t n) {
  CurveFamilySpec s;
  s.family = Family::latitude;
  s.theta0 = theta0;
  s.resolution = n;
  return s;
}

CurveFamilySpec CurveFamilySpec::great_circle(std::size_t n, Point3 axis) {
  CurveFamilySpec s;
  s.family = Family::great_circle;
  s.axis = axis;
  s.resolution = n;
  return s;
}

CurveFamilySpec CurveFamilySpec::perturbed_great_circle(int mode, double amplitude, std::size_t n) {
  CurveFamilySpec s;
  s.family = Family::perturbed_great_circle;
  s.mode = mode;
  s.amplitude = amplitude;
  s.resolution = n;
  return s;
}

CurveFamilySpec CurveFamilySpec::point_list(std::string path) {
  CurveFamilySpec s;
  s.family = Family::point_list;
  s.file = std::move(path);
  return s;
}

const char* family_name(CurveFamilySpec::Family f) {
  switch (f) {
    case CurveFamilySpec::Family::latitude: return "latitude";
    case CurveFamilySpec::Family::great_circle: return "great_circle";
    case CurveFamilySpec::Family::perturbed_great_circle: return "perturbed_great_circle";
    case CurveFamilySpec::Family::point_list: return "point_list";
  }
  return "unknown";
}

namespace {

Point3 polar_point(double theta, double phi) {
  return kBaseRadius * Point3{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                              std::cos(theta)};
}

double phi_at(std::size_t k, std::size_t n) {
  return 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
}

}  // namespace

SphereCurve make_family(const CurveFamilySpec& spec) {
  using Family = CurveFamilySpec::Family;
  if (spec.family == Family::point_list) return load_point_list(spec.file);

  const std::size_t n = spec.resolution;
  if (n < kMinCurvePoints) {
    throw ValidationError("curve resolution must be at least 8, got " + std::to_string(n));
  }
  std::vector<Point3> pts(n);
  switch (spec.family) {
    case Family::latitude: {
      if (!(spec.theta0 > 0 && spec.theta0 <= kPi / 2)) {
        throw ValidationError("latitude theta0 must lie in (0, pi/2]");
      }
      for (std::size_t k = 0; k < n; ++k) pts[k] = polar_point(spec.theta0, phi_at(k, n));
      break;
    }
    case Family::great_circle: {
      const double len = norm(spec.axis);
      if (!(len > 0) || !std::isfinite(len)) throw ValidationError("great circle axis must be nonzero");
      const Point3 a = spec.axis / len;
      const Point3 zhat{0, 0, 1};
      Point3 e1 = zhat - dot(zhat, a) * a;
      e1 = norm(e1) < 1e-12 ? Point3{1, 0, 0} : unit(e1);
      const Point3 e2 = cross(a, e1);
      for (std::size_t k = 0; k < n; ++k) {
        const double phi = phi_at(k, n);
        pts[k] = kBaseRadius * (std::cos(phi) * e1 + std::sin(phi) * e2);
      }
      break;
    }
    case Family::perturbed_great_circle: {
      if (spec.mode < 1) throw ValidationError("perturbation mode must be a positive integer");
      if (!std::isfinite(spec.amplitude) || std::abs(spec.amplitude) >= kBaseRadius * kPi / 2) {
        throw ValidationError("perturbation amplitude out of range");
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double phi = phi_at(k, n);
        const double shift = spec.amplitude * std::sin(spec.mode * phi) / kBaseRadius;
        pts[k] = polar_point(kPi / 2 - shift, phi);
      }
      break;
    }
    case Family::point_list: break;
  }
  SphereCurve curve(std::move(pts));
  if (!is_simple(curve)) throw ValidationError("generated curve is not simple; reduce the amplitude");
  return curve;
}

SphereCurve read_point_list(std::istream& in) {
  std::vector<Point3> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    Point3 p;
    if (!(ls >> p.x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ValidationError("point list line " + std::to_string(line_no) + ": expected x y z");
    }
    std::string rest;
    if (!(ls >> p.y >> p.z) || (ls >> rest)) {
      throw ValidationError("point list line " + std::to_string(line_no) + ": expected x y z");
    }
    pts.push_back(p);
  }
  SphereCurve curve(std::move(pts));
  if (!is_simple(curve)) throw ValidationError("point list curve is not simple");
  return curve;
}

SphereCurve load_point_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open point list '" + path + "'");
  return read_point_list(in);
}

}  // namespace hopfmcf
