#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dphase/mesh.hpp"

using namespace dp;

TEST_CASE("unit square mesh has the structured counts") {
  struct Row {
    int n;
    std::size_t vertices, triangles, edges;
  };
  for (const Row& r : {Row{1, 4, 2, 4}, Row{2, 9, 8, 8}, Row{4, 25, 32, 16}}) {
    const Mesh mesh = build_unit_square_mesh(r.n);
    CHECK(mesh.vertex_count() == r.vertices);
    CHECK(mesh.triangle_count() == r.triangles);
    CHECK(mesh.boundary_edges.size() == r.edges);
  }
}

TEST_CASE("area and perimeter are exact") {
  for (int n : {1, 3, 8}) {
    const Mesh mesh = build_unit_square_mesh(n);
    CHECK(mesh.total_area() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mesh.boundary_length() == doctest::Approx(4.0).epsilon(1e-14));
  }
}

TEST_CASE("boundary normals are unit length and point out of the square") {
  const Mesh mesh = build_unit_square_mesh(5);
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    CHECK(std::hypot(e.normal.x, e.normal.y) == doctest::Approx(1.0).epsilon(1e-14));
    const Point2 pa = mesh.vertices[e.a];
    const Point2 pb = mesh.vertices[e.b];
    const Point2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    const Point2 outside{mid.x + 1e-3 * e.normal.x, mid.y + 1e-3 * e.normal.y};
    const bool left = outside.x < 0.0 || outside.x > 1.0 || outside.y < 0.0 || outside.y > 1.0;
    CHECK(left);
    CHECK(e.length == doctest::Approx(1.0 / 5).epsilon(1e-14));
  }
}

TEST_CASE("element data: positive areas, basis gradients sum to zero") {
  const Mesh mesh = build_unit_square_mesh(4);
  REQUIRE(mesh.areas.size() == mesh.triangle_count());
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    CHECK(mesh.areas[t] > 0.0);
    sum += mesh.areas[t];
    const auto& g = mesh.basis_gradients[t];
    CHECK(std::abs(g[0].x + g[1].x + g[2].x) < 1e-13);
    CHECK(std::abs(g[0].y + g[1].y + g[2].y) < 1e-13);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("P1 basis gradients reproduce affine functions exactly") {
  const Mesh mesh = build_unit_square_mesh(3);
  // u = 2x - 3y + 1 has gradient (2, -3) on every triangle
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    double gx = 0.0, gy = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Point2 v = mesh.vertices[mesh.triangles[t][k]];
      const double u = 2.0 * v.x - 3.0 * v.y + 1.0;
      gx += u * mesh.basis_gradients[t][k].x;
      gy += u * mesh.basis_gradients[t][k].y;
    }
    CHECK(gx == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gy == doctest::Approx(-3.0).epsilon(1e-13));
  }
}

TEST_CASE("text round trip preserves the mesh") {
  const Mesh mesh = build_unit_square_mesh(3);
  std::ostringstream out;
  write_mesh_text(out, mesh);
  std::istringstream in(out.str());
  const Mesh back = read_mesh_text(in);
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  REQUIRE(back.triangle_count() == mesh.triangle_count());
  REQUIRE(back.boundary_edges.size() == mesh.boundary_edges.size());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    CHECK(back.vertices[i].x == mesh.vertices[i].x);
    CHECK(back.vertices[i].y == mesh.vertices[i].y);
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
    CHECK(back.triangles[t] == mesh.triangles[t]);
  CHECK(back.total_area() == doctest::Approx(mesh.total_area()).epsilon(1e-15));
}

TEST_CASE("degenerate construction is rejected") {
  CHECK_THROWS(build_unit_square_mesh(0));
  CHECK_THROWS(build_unit_square_mesh(-2));
}
