#include "dphase/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dp {

namespace {

int find_adjacent_triangle(const Mesh& mesh, int a, int b) {
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int e = 0; e < 3; ++e) {
      int u = tri[e], v = tri[(e + 1) % 3];
      if ((u == a && v == b) || (u == b && v == a)) return static_cast<int>(t);
    }
  }
  return -1;
}

}  // namespace

void Mesh::finalize() {
  const std::size_t nt = triangles.size();
  areas.assign(nt, 0.0);
  basis_gradients.assign(nt, {});

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= static_cast<int>(vertices.size()))
        throw std::runtime_error("Mesh: triangle " + std::to_string(t) + " has out-of-range vertex");
    }
    const Point2& p0 = vertices[tri[0]];
    const Point2& p1 = vertices[tri[1]];
    const Point2& p2 = vertices[tri[2]];
    double det = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
    if (det <= 0.0)
      throw std::runtime_error("Mesh: triangle " + std::to_string(t) + " has non-positive area");
    areas[t] = 0.5 * det;
    // gradient of the barycentric coordinate of vertex k
    basis_gradients[t][0] = {(p1.y - p2.y) / det, (p2.x - p1.x) / det};
    basis_gradients[t][1] = {(p2.y - p0.y) / det, (p0.x - p2.x) / det};
    basis_gradients[t][2] = {(p0.y - p1.y) / det, (p1.x - p0.x) / det};
  }

  // Edges shared by exactly one triangle must coincide with boundary_edges.
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e], b = tri[(e + 1) % 3];
      auto key = std::minmax(a, b);
      edge_use[{key.first, key.second}]++;
    }
  }
  std::size_t boundary_in_mesh = 0;
  for (const auto& [edge, uses] : edge_use) {
    if (uses == 1) ++boundary_in_mesh;
    if (uses > 2) throw std::runtime_error("Mesh: edge shared by more than two triangles");
  }
  if (boundary_in_mesh != boundary_edges.size())
    throw std::runtime_error("Mesh: boundary edge list does not cover the topological boundary");

  std::vector<int> boundary_degree(vertices.size(), 0);
  for (auto& edge : boundary_edges) {
    auto key = std::minmax(edge.a, edge.b);
    auto it = edge_use.find({key.first, key.second});
    if (it == edge_use.end() || it->second != 1)
      throw std::runtime_error("Mesh: listed boundary edge is not on the boundary");
    boundary_degree[edge.a]++;
    boundary_degree[edge.b]++;

    if (edge.triangle < 0) edge.triangle = find_adjacent_triangle(*this, edge.a, edge.b);
    if (edge.triangle < 0) throw std::runtime_error("Mesh: boundary edge without adjacent triangle");

    const Point2& pa = vertices[edge.a];
    const Point2& pb = vertices[edge.b];
    double dx = pb.x - pa.x, dy = pb.y - pa.y;
    edge.length = std::hypot(dx, dy);
    if (edge.length <= 0.0) throw std::runtime_error("Mesh: degenerate boundary edge");

    // Outward normal: the perpendicular whose dot product with the midpoint
    // -> opposite-vertex direction is negative.
    const auto& tri = triangles[edge.triangle];
    int opposite = -1;
    for (int k = 0; k < 3; ++k)
      if (tri[k] != edge.a && tri[k] != edge.b) opposite = tri[k];
    if (opposite < 0) throw std::runtime_error("Mesh: boundary edge not an edge of its triangle");
    Point2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    Point2 inward{vertices[opposite].x - mid.x, vertices[opposite].y - mid.y};
    Point2 n{dy / edge.length, -dx / edge.length};
    if (n.x * inward.x + n.y * inward.y > 0.0) {
      n.x = -n.x;
      n.y = -n.y;
    }
    edge.normal = n;
  }
  // closed loops: every boundary vertex has exactly two incident boundary edges
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (boundary_degree[v] != 0 && boundary_degree[v] != 2)
      throw std::runtime_error("Mesh: boundary is not a union of closed loops at vertex " +
                               std::to_string(v));
  }
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas) s += a;
  return s;
}

double Mesh::boundary_length() const {
  double s = 0.0;
  for (const auto& e : boundary_edges) s += e.length;
  return s;
}

Mesh build_unit_square_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_unit_square_mesh: n must be >= 1");
  Mesh mesh;
  const double h = 1.0 / n;
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) mesh.vertices.push_back({i * h, j * h});
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  for (int i = 0; i < n; ++i) {
    mesh.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), -1, {}, 0.0});
    mesh.boundary_edges.push_back({vid(i + 1, n), vid(i, n), -1, {}, 0.0});
    mesh.boundary_edges.push_back({vid(n, i), vid(n, i + 1), -1, {}, 0.0});
    mesh.boundary_edges.push_back({vid(0, i + 1), vid(0, i), -1, {}, 0.0});
  }
  mesh.finalize();
  return mesh;
}

void write_mesh_text(std::ostream& out, const Mesh& mesh) {
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x << " " << v.y << "\n";
  for (const auto& t : mesh.triangles) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
  for (const auto& b : mesh.boundary_edges) out << "b " << b.a << " " << b.b << "\n";
}

Mesh read_mesh_text(std::istream& in) {
  Mesh mesh;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Point2 p;
      if (!(ss >> p.x >> p.y)) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "t") {
      std::array<int, 3> t{};
      if (!(ss >> t[0] >> t[1] >> t[2])) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad triangle");
      mesh.triangles.push_back(t);
    } else if (tag == "b") {
      BoundaryEdge e;
      if (!(ss >> e.a >> e.b)) throw std::runtime_error("mesh line " + std::to_string(lineno) + ": bad boundary edge");
      mesh.boundary_edges.push_back(e);
    } else {
      throw std::runtime_error("mesh line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
    }
  }
  mesh.finalize();
  return mesh;
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh_text(out, mesh);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh_text(in);
}

}  // namespace dp
