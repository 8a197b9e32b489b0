#include "dphase/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dp {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vtk_scalar(const std::string& path, const Mesh& mesh, const FemFunction& u,
                      const std::string& field_name) {
  if (u.size() != mesh.vertex_count())
    throw std::invalid_argument("write_vtk_scalar: coefficient/vertex count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk_scalar: cannot open " + path);
  out << "# vtk DataFile Version 3.0\n"
      << field_name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Point2& v : mesh.vertices)
    out << format_double(v.x) << ' ' << format_double(v.y) << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.vertex_count() << '\n';
  out << "SCALARS " << field_name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << format_double(u[i]) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write_vtk_scalar: write failed for " + path);
}

FemFunction read_vtk_scalar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_vtk_scalar: cannot open " + path);
  std::string tok;
  std::size_t n = 0;
  while (in >> tok) {
    if (tok == "POINT_DATA") {
      if (!(in >> n)) throw std::runtime_error("read_vtk_scalar: bad POINT_DATA count in " + path);
      break;
    }
  }
  if (n == 0) throw std::runtime_error("read_vtk_scalar: no POINT_DATA section in " + path);
  bool have_table = false;
  while (in >> tok) {
    if (tok == "LOOKUP_TABLE") {
      in >> tok;  // table name
      have_table = true;
      break;
    }
  }
  if (!have_table) throw std::runtime_error("read_vtk_scalar: no LOOKUP_TABLE in " + path);
  FemFunction u(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!(in >> u[i]))
      throw std::runtime_error("read_vtk_scalar: truncated scalar data in " + path);
  return u;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << header << '\n';
  for (const std::string& r : rows) out << r << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write_text_file: write failed for " + path);
}

}  // namespace dp
