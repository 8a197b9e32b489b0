#ifndef DPHASE_MESH_HPP
#define DPHASE_MESH_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace dp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Oriented boundary edge with the outward unit normal of its adjacent
/// triangle.
struct BoundaryEdge {
  int a = -1;
  int b = -1;
  int triangle = -1;
  Point2 normal;
  double length = 0.0;
};

/// Conforming triangular mesh of a polygonal domain. Derived element data
/// (areas, P1 basis gradients) is filled by finalize() and the mesh is
/// treated as immutable afterwards.
class Mesh {
 public:
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  // per-triangle data, valid after finalize()
  std::vector<double> areas;
  std::vector<std::array<Point2, 3>> basis_gradients;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }

  /// Computes areas, P1 gradients, boundary normals and checks the mesh
  /// invariants: positive triangle areas, boundary edges forming closed
  /// loops, normals pointing out of their adjacent triangle.
  void finalize();

  double total_area() const;
  double boundary_length() const;
};

/// Structured mesh of (0,1)^2 with n subdivisions per side: (n+1)^2 vertices
/// and 2n^2 triangles, each square cell split along its SW-NE diagonal.
Mesh build_unit_square_mesh(int n);

/// Plain-text mesh format: lines "v x y", "t i j k", "b i j" (0-based).
void write_mesh_text(std::ostream& out, const Mesh& mesh);
Mesh read_mesh_text(std::istream& in);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

}  // namespace dp

#endif
