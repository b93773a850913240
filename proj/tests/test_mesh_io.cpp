#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "doctest.h"
#include "hopfmcf/errors.hpp"
#include "hopfmcf/mesh_io.hpp"
#include "support.hpp"

using namespace hopfmcf;
using namespace hopfmcf::testing;

namespace {

// Every directed edge once and its reverse once: closed and consistently oriented.
void check_closed_oriented(const std::vector<Triangle>& faces, std::size_t n_vertices) {
  std::map<std::pair<std::size_t, std::size_t>, int> directed;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const Triangle& f : faces) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = f[i], b = f[(i + 1) % 3];
      REQUIRE(a != b);
      ++directed[{a, b}];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  bool ok = true;
  for (const auto& [e, count] : directed) ok = ok && count == 1 && directed.count({e.second, e.first}) == 1;
  CHECK(ok);
  const long long chi = static_cast<long long>(n_vertices) - static_cast<long long>(edges.size()) +
                        static_cast<long long>(faces.size());
  CHECK(chi == 0);
}

double max_edge(const HopfTorusMesh& mesh, const std::vector<Triangle>& faces) {
  double worst = 0;
  for (const Triangle& f : faces) {
    for (int i = 0; i < 3; ++i) worst = std::max(worst, norm(mesh.grid[f[i]] - mesh.grid[f[(i + 1) % 3]]));
  }
  return worst;
}

}  // namespace

TEST_CASE("torus faces close up") {
  auto& g = rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const double theta = uniform(g, 0.3, 1.5);
    const std::size_t nv = 16 + g() % 40, nb = 8 + g() % 20;
    const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(CurveFamilySpec::latitude(theta, nv))), nb, 1.0);
    const std::vector<Triangle> faces = torus_faces(mesh);
    CHECK(faces.size() == 2 * nb * nv);
    check_closed_oriented(faces, mesh.grid.size());
    // Seam triangles are no longer than the interior ones, up to one row step.
    const double row_step = 2 * std::sin(kPi / nb);
    const double col_step = norm(mesh.at(0, 1) - mesh.at(0, 0));
    CHECK(max_edge(mesh, faces) <= std::hypot(row_step, col_step) + row_step);
  }
  // Holonomy pi with an even row count: the seam is a plain shift.
  const HopfTorusMesh cliff = build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(32, {0, 1, 0}))), 16, 1.0);
  check_closed_oriented(torus_faces(cliff), cliff.grid.size());
}

TEST_CASE("v4 round trip") {
  const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(CurveFamilySpec::latitude(0.9, 24))), 12, 1.3, 0.05);
  std::stringstream ss;
  write_v4(ss, mesh);
  const std::string text = ss.str();
  CHECK(text.rfind("# ", 0) == 0);
  CHECK(text.find("vertices 288\n") != std::string::npos);
  CHECK(text.find("faces 576\n") != std::string::npos);
  const V4Mesh back = read_v4(ss);
  CHECK(back.vertices == mesh.grid);
  CHECK(back.faces == torus_faces(mesh));

  std::istringstream bad("vertices 1\n1 2 3 4\nfaces 1\n0 0 5\n");
  CHECK_THROWS_AS(read_v4(bad), ValidationError);
  std::istringstream truncated("vertices 3\n1 2 3 4\n");
  CHECK_THROWS_AS(read_v4(truncated), ValidationError);
}

TEST_CASE("stereographic projection") {
  const HopfTorusMesh mesh = build_torus(horizontal_lift(make_family(CurveFamilySpec::great_circle(32))), 16, 2.0);
  const Point4 pole{-1, 0, 0, 0};
  const std::vector<Point3> x = stereographic(mesh, pole);
  // Inverse map: ((|X|^2 - 1) n + 2 sum X_i e_i) / (|X|^2 + 1).
  const HorizontalFrame f = horizontal_frame(pole);
  const Point4 e0 = j_mul(pole);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = dot(x[i], x[i]);
    const Point4 p = ((s - 1) * pole + 2 * (x[i].x * e0 + x[i].y * f.h1 + x[i].z * f.h2)) / (s + 1);
    CHECK(norm(p - mesh.grid[i] / 2.0) <= 1e-13);
  }
  std::ostringstream obj;
  write_obj(obj, mesh, pole);
  const std::string text = obj.str();
  std::size_t v = 0, fc = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    fc += line.rfind("f ", 0) == 0;
  }
  CHECK(v == mesh.grid.size());
  CHECK(fc == 2 * mesh.grid.size());
  CHECK(text.find("f 1 ") != std::string::npos);

  const Point4 on_torus = mesh.grid[0] / 2.0;
  CHECK_THROWS_AS(stereographic(mesh, on_torus), NumericalError);
  CHECK_THROWS_AS(stereographic(mesh, Point4{2, 0, 0, 0}), ValidationError);
}

TEST_CASE("records csv") {
  std::vector<FlowRecord> recs{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}, {1.0 / 3, 2, 3, 4, 5, 6, 7, 8, 1e-300}};
  std::ostringstream out;
  write_records_csv(out, recs);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,tbar,R,length,area,area_predicted,max_kappa,sup_sigma_sq,typeI");
  std::getline(in, line);
  CHECK(line.rfind("0.10000000000000001,", 0) == 0);
  std::getline(in, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == 1.0 / 3);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) == 1e-300);
}
