#include "hopfmcf/mesh_io.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "hopfmcf/errors.hpp"

namespace hopfmcf {

namespace {

void put(std::ostream& out, const char* fmt, double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, a);
  out << buf;
}

void put_row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ' ';
    put(out, "%.17g", v);
    first = false;
  }
  out << '\n';
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    return line;
  }
  throw ValidationError("v4: unexpected end of file");
}

std::size_t read_count(std::istream& in, const std::string& keyword) {
  std::istringstream ss(next_content_line(in));
  std::string word;
  long long n = -1;
  if (!(ss >> word >> n) || word != keyword || n < 0) throw ValidationError("v4: expected '" + keyword + " <n>'");
  return static_cast<std::size_t>(n);
}

}  // namespace

std::vector<Triangle> torus_faces(const HopfTorusMesh& mesh) {
  const std::size_t nb = mesh.n_beta, nv = mesh.n_v;
  if (nb < 3 || nv < 3 || mesh.grid.size() != nb * nv) throw ValidationError("torus_faces: malformed mesh");
  auto id = [&](std::size_t j, std::size_t k) { return (j % nb) * nv + k; };
  std::vector<Triangle> faces;
  faces.reserve(2 * nb * nv);
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t k = 0; k + 1 < nv; ++k) {
      const std::size_t v00 = id(j, k), v10 = id(j + 1, k), v11 = id(j + 1, k + 1), v01 = id(j, k + 1);
      faces.push_back({v00, v10, v11});
      faces.push_back({v00, v11, v01});
    }
  }
  // Seam: row j of the last column meets the first column between rows j+m and j+m+1.
  const double shift = mesh.seam_phase / mesh.dbeta();
  const auto m = static_cast<std::size_t>(std::floor(shift)) % nb;
  for (std::size_t j = 0; j < nb; ++j) {
    const std::size_t a = id(j, nv - 1), b = id(j + 1, nv - 1), c = id(j + m, 0), d = id(j + m + 1, 0);
    faces.push_back({a, b, d});
    faces.push_back({a, d, c});
  }
  return faces;
}

void write_v4(std::ostream& out, const HopfTorusMesh& mesh) {
  const std::vector<Triangle> faces = torus_faces(mesh);
  out << "# hopf torus, rows beta_j = 2 pi j / " << mesh.n_beta << ", " << mesh.n_v << " columns along the curve\n";
  out << "# t ";
  put(out, "%.17g", mesh.t);
  out << " R ";
  put(out, "%.17g", mesh.radius);
  out << " seam_phase ";
  put(out, "%.17g", mesh.seam_phase);
  out << "\nvertices " << mesh.grid.size() << '\n';
  for (const Point4& p : mesh.grid) put_row(out, {p.a, p.b, p.c, p.d});
  out << "faces " << faces.size() << '\n';
  for (const Triangle& f : faces) out << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

V4Mesh read_v4(std::istream& in) {
  V4Mesh m;
  const std::size_t nv = read_count(in, "vertices");
  m.vertices.resize(nv);
  for (Point4& p : m.vertices) {
    std::istringstream ss(next_content_line(in));
    if (!(ss >> p.a >> p.b >> p.c >> p.d)) throw ValidationError("v4: bad vertex line");
  }
  const std::size_t nf = read_count(in, "faces");
  m.faces.resize(nf);
  for (Triangle& f : m.faces) {
    std::istringstream ss(next_content_line(in));
    if (!(ss >> f[0] >> f[1] >> f[2])) throw ValidationError("v4: bad face line");
    for (std::size_t i : f) {
      if (i >= nv) throw ValidationError("v4: face index out of range");
    }
  }
  return m;
}

std::vector<Point3> stereographic(const HopfTorusMesh& mesh, const Point4& pole) {
  const double pn = norm(pole);
  if (!(std::abs(pn - 1) <= 1e-9)) throw ValidationError("stereographic pole must be a unit vector");
  const Point4 n = pole / pn;
  const HorizontalFrame f = horizontal_frame(n);
  const Point4 e0 = j_mul(n);
  std::vector<Point3> out(mesh.grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Point4 p = mesh.grid[i] / mesh.radius;
    const double denom = 1 - dot(p, n);
    if (!(denom > 1e-9)) throw NumericalError("stereographic projection: vertex at the pole");
    out[i] = Point3{dot(p, e0), dot(p, f.h1), dot(p, f.h2)} / denom;
  }
  return out;
}

void write_obj(std::ostream& out, const HopfTorusMesh& mesh, const Point4& pole) {
  const std::vector<Point3> v = stereographic(mesh, pole);
  const std::vector<Triangle> faces = torus_faces(mesh);
  out << "# stereographic projection of a hopf torus, t ";
  put(out, "%.17g", mesh.t);
  out << '\n';
  for (const Point3& p : v) {
    out << "v ";
    put_row(out, {p.x, p.y, p.z});
  }
  for (const Triangle& f : faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_records_csv(std::ostream& out, const std::vector<FlowRecord>& records) {
  out << "t,tbar,R,length,area,area_predicted,max_kappa,sup_sigma_sq,typeI\n";
  for (const FlowRecord& r : records) {
    const double row[] = {r.t, r.tbar, r.R, r.length, r.area, r.area_predicted, r.max_kappa, r.sup_sigma_sq, r.typeI};
    for (std::size_t i = 0; i < 9; ++i) {
      if (i) out << ',';
      put(out, "%.17g", row[i]);
    }
    out << '\n';
  }
}

}  // namespace hopfmcf
