// File output: torus meshes (raw 4D and stereographic OBJ) and flow records.
//
// The grid is closed into a torus.  Rows wrap around the fiber; the last
// column is joined to the first one shifted by the holonomy, since the point
// (beta, v_end) continues to (beta + H, v_0).  When H is not a multiple of the
// row spacing the seam is a zipper of triangles between the two columns.

#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hopfmcf/flow_composer.hpp"

namespace hopfmcf {

using Triangle = std::array<std::size_t, 3>;

// Consistently oriented triangles over grid indices j * n_v + k.
std::vector<Triangle> torus_faces(const HopfTorusMesh& mesh);

// Text format:
//   # comment lines
//   vertices <n>
//   a b c d            (n lines)
//   faces <m>
//   i j k              (m lines, zero-based)
void write_v4(std::ostream& out, const HopfTorusMesh& mesh);

struct V4Mesh {
  std::vector<Point4> vertices;
  std::vector<Triangle> faces;
};
V4Mesh read_v4(std::istream& in);

// Stereographic image in R^3 of the mesh moved to S^3(1), projected from
// `pole` (a unit vector) onto its orthogonal complement with basis
// {J pole, h1(pole), h2(pole)}.  Throws NumericalError if a vertex sits on
// the pole.
std::vector<Point3> stereographic(const HopfTorusMesh& mesh, const Point4& pole);
void write_obj(std::ostream& out, const HopfTorusMesh& mesh, const Point4& pole);

// t, tbar, R, length, area, area_predicted, max_kappa, sup_sigma_sq, typeI
void write_records_csv(std::ostream& out, const std::vector<FlowRecord>& records);

}  // namespace hopfmcf
