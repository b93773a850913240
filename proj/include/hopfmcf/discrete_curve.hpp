// Closed polygonal curves on the sphere S^2(1/2) with geodesic edges.
//
// A SphereCurve is an immutable value: the vertex list plus cached segment
// lengths and total length.  The enclosed area comes from the discrete
// Gauss-Bonnet formula, which is exact for geodesic polygons:
//
//   A_left = rho^2 (2 pi - sum_i tau_i),
//
// where tau_i is the signed turning angle at vertex i (positive when turning
// left as seen from outside the sphere).  The curve also records which side
// of itself is the enclosed domain; on construction that is the side of area
// at most pi/2.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopfmcf/sphere_geometry.hpp"

namespace hopfmcf {

inline constexpr double kBaseRadius = 0.5;
// Total area of S^2(1/2).
inline constexpr double kBaseSphereArea = kPi;
inline constexpr std::size_t kMinCurvePoints = 8;

enum class EnclosedSide { left, right };

class SphereCurve {
 public:
  // Re-projects every point onto S^2(1/2) and checks N >= 8 and that no
  // segment is shorter than 1e-12.  Throws ValidationError otherwise.
  explicit SphereCurve(std::vector<Point3> points);

  // A curve with new vertex positions that keeps this curve's enclosed side.
  // Used by integrators; skips the area computation.
  SphereCurve with_points(std::vector<Point3> points) const;

  std::size_t size() const { return points_.size(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point3> points() const { return points_; }
  // segment_lengths()[i] is the geodesic length from vertex i to i+1 (mod N).
  std::span<const double> segment_lengths() const { return segments_; }
  double length() const { return length_; }
  double min_segment() const;

  // Area to the left of the direction of travel, in (0, pi) for simple curves.
  double left_area() const;
  EnclosedSide enclosed_side() const { return side_; }
  // Area of the enclosed side.
  double area() const;

  SphereCurve reversed() const;

 private:
  struct Trusted {};
  SphereCurve(Trusted, std::vector<Point3> points, EnclosedSide side);
  SphereCurve(Trusted, std::vector<Point3> points, std::vector<double> segments, EnclosedSide side);
  friend SphereCurve resample(const SphereCurve& c, std::size_t n);
  void measure();

  std::vector<Point3> points_;
  std::vector<double> segments_;
  double length_ = 0;
  std::optional<double> left_area_;
  EnclosedSide side_ = EnclosedSide::left;
};

// Signed-turning-angle area to the left of a closed polygon on S^2(1/2).
// No simplicity check.
double turning_area(std::span<const Point3> points);

// Discrete geodesic-curvature vector at vertex i (tangent at points[i]).
Point3 curvature_vector(const SphereCurve& c, std::size_t i);
std::vector<Point3> curvature_vectors(const SphereCurve& c);
double max_curvature(const SphereCurve& c);

// Left area of a simple curve; throws ValidationError when the curve is not
// simple.  enclosed_area(c) + enclosed_area(c.reversed()) = pi.
double enclosed_area(const SphereCurve& c);

// True iff no two non-adjacent segments (minor great-circle arcs) meet.
// Touching counts as meeting.
bool is_simple(const SphereCurve& c);
bool is_simple(std::span<const Point3> points);

// Do the minor arcs ab and cd share a point?  Inputs need not be unit length.
bool arcs_intersect(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

// n points at equal geodesic spacing along the polygon, starting at vertex 0.
// Repeats the redistribution until the output's own segment lengths are
// uniform, so resampling a uniform curve is a fixed point.
SphereCurve resample(const SphereCurve& c, std::size_t n);

// Initial data generators.
struct CurveFamilySpec {
  enum class Family { latitude, great_circle, perturbed_great_circle, point_list };

  Family family = Family::great_circle;
  std::size_t resolution = 512;
  double theta0 = kPi / 2;        // latitude: polar angle of the circle
  Point3 axis{0, 0, 1};           // great_circle: rotation axis
  int mode = 3;                   // perturbed_great_circle
  double amplitude = 0.05;        // perturbed_great_circle: geodesic displacement
  std::string file;               // point_list

  static CurveFamilySpec latitude(double theta0, std::size_t n);
  static CurveFamilySpec great_circle(std::size_t n, Point3 axis = {0, 0, 1});
  static CurveFamilySpec perturbed_great_circle(int mode, double amplitude, std::size_t n);
  static CurveFamilySpec point_list(std::string path);
};

const char* family_name(CurveFamilySpec::Family f);

SphereCurve make_family(const CurveFamilySpec& spec);

// Plain text, one "x y z" per line; '#' starts a comment.  Points are
// projected onto S^2(1/2); non-simple curves are rejected.
SphereCurve read_point_list(std::istream& in);
SphereCurve load_point_list(const std::string& path);

}  // namespace hopfmcf
