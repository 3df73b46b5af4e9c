#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <set>
#include <sstream>

#include "helmdg/mesh.hpp"

using namespace helmdg;

namespace {

Point centroid(const TriMesh& m, std::size_t t) {
  const auto c = m.corners(t);
  return (1.0 / 3.0) * (c[0] + c[1] + c[2]);
}

void check_invariants(const TriMesh& m) {
  CHECK(long(m.num_vertices()) - long(m.num_edges()) + long(m.num_triangles()) == 1);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const auto c = m.corners(t);
    CHECK(cross(c[1] - c[0], c[2] - c[0]) > 0.0);
    CHECK(m.area(t) > 0.0);
  }
  for (const Edge& e : m.edges()) {
    const Point a = m.vertex(e.nodes[0]);
    const Point b = m.vertex(e.nodes[1]);
    CHECK(std::abs(norm(e.normal) - 1.0) < 1e-14);
    CHECK(std::abs(dot(e.normal, b - a)) < 1e-14);
    CHECK(std::abs(e.length - norm(b - a)) < 1e-14);
    if (e.is_boundary()) {
      const Point mid = 0.5 * (a + b);
      CHECK(dot(e.normal, mid - Point{1.0, 1.0}) > 0.0);
    } else {
      CHECK(dot(centroid(m, e.tau) - centroid(m, *e.tau_prime), e.normal) > 0.0);
    }
  }
  for (std::size_t v = 0; v < m.num_vertices(); ++v) {
    const auto patch = m.patch(v);
    REQUIRE(!patch.empty());
    for (std::size_t j = 0; j + 1 < patch.size(); ++j) {
      // consecutive triangles share an edge through v
      const auto& a = m.triangle(patch[j]);
      const auto& b = m.triangle(patch[j + 1]);
      int shared = 0;
      for (auto x : a) {
        for (auto y : b) shared += (x == y);
      }
      CHECK(shared == 2);
      // counterclockwise around v
      const Point z = m.vertex(v);
      CHECK(cross(centroid(m, patch[j]) - z, centroid(m, patch[j + 1]) - z) > 0.0);
    }
  }
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("counts for N=1 and N=4") {
    const TriMesh m1 = build_mesh(MeshKind::regular, 1);
    CHECK(m1.num_vertices() == 4);
    CHECK(m1.num_triangles() == 2);
    CHECK(m1.num_edges() == 5);
    CHECK(m1.num_interior_edges() == 1);
    CHECK(m1.num_boundary_edges() == 4);
    for (const Edge& e : m1.edges()) {
      if (!e.is_boundary()) CHECK(e.length == doctest::Approx(std::sqrt(2.0)));
    }
    const TriMesh m4 = build_mesh(MeshKind::regular, 4);
    CHECK(m4.num_vertices() == 25);
    CHECK(m4.num_triangles() == 32);
    CHECK(m4.num_edges() == 56);
    CHECK(m4.num_interior_edges() == 40);
    CHECK(m4.num_boundary_edges() == 16);
  }

  TEST_CASE("topology invariants on all kinds") {
    for (auto kind : {MeshKind::regular, MeshKind::chevron, MeshKind::perturbed}) {
      for (std::size_t n : {1u, 2u, 3u, 8u}) {
        CAPTURE(to_string(kind));
        CAPTURE(n);
        check_invariants(build_mesh(kind, n));
      }
    }
  }

  TEST_CASE("regular diagonal runs lower-left to upper-right") {
    const TriMesh m = build_mesh(MeshKind::regular, 1);
    for (const Edge& e : m.edges()) {
      if (e.is_boundary()) continue;
      const Point a = m.vertex(e.nodes[0]);
      const Point b = m.vertex(e.nodes[1]);
      CHECK(std::abs((b.x - a.x) - (b.y - a.y)) < 1e-14);
    }
    const auto box = m.bounding_box();
    CHECK(box.lo.x == 0.5);
    CHECK(box.hi.y == 1.5);
  }

  TEST_CASE("min angles") {
    for (std::size_t n : {1u, 4u, 16u}) {
      CHECK(build_mesh(MeshKind::regular, n).min_angle_deg() == doctest::Approx(45.0));
    }
    MeshParams p;
    p.amplitude = 2.0;
    p.min_angle_floor_deg = 10.0;
    CHECK(build_mesh(MeshKind::perturbed, 64, p).min_angle_deg() >= 10.0);
  }

  TEST_CASE("perturbed mesh is deterministic and keeps the boundary") {
    const TriMesh reg = build_mesh(MeshKind::regular, 8);
    const TriMesh a = build_mesh(MeshKind::perturbed, 8);
    const TriMesh b = build_mesh(MeshKind::perturbed, 8);
    MeshParams other;
    other.seed = 7;
    const TriMesh c = build_mesh(MeshKind::perturbed, 8, other);
    bool moved = false;
    bool differs = false;
    for (std::size_t v = 0; v < reg.num_vertices(); ++v) {
      CHECK(a.vertex(v).x == b.vertex(v).x);
      CHECK(a.vertex(v).y == b.vertex(v).y);
      const Point d = a.vertex(v) - reg.vertex(v);
      if (reg.is_boundary_vertex(v)) {
        CHECK(norm(d) == 0.0);
      } else {
        moved |= norm(d) > 0.0;
        CHECK(norm(d) <= 0.2 * std::pow(1.0 / 8.0, 1.5) + 1e-15);
      }
      differs |= norm(c.vertex(v) - a.vertex(v)) > 0.0;
    }
    CHECK(moved);
    CHECK(differs);
  }

  TEST_CASE("refinement nesting") {
    CHECK(is_nested(build_mesh(MeshKind::regular, 4), build_mesh(MeshKind::regular, 8)));
    CHECK(is_nested(build_mesh(MeshKind::chevron, 4), build_mesh(MeshKind::chevron, 8)));
    CHECK_FALSE(is_nested(build_mesh(MeshKind::regular, 4), build_mesh(MeshKind::regular, 6)));
  }

  TEST_CASE("invalid triangulations") {
    CHECK_THROWS_AS(TriMesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(TriMesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), std::invalid_argument);
    // edge 0-1 shared by three triangles
    CHECK_THROWS_AS(TriMesh({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {1, 1}},
                            {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(MeshKind::regular, 0), std::invalid_argument);
  }

  TEST_CASE("text round trip") {
    const TriMesh m = build_mesh(MeshKind::perturbed, 5);
    std::stringstream s;
    write_mesh(s, m);
    const TriMesh r = read_mesh(s);
    REQUIRE(r.num_vertices() == m.num_vertices());
    REQUIRE(r.num_triangles() == m.num_triangles());
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
      CHECK(r.vertex(v).x == m.vertex(v).x);
      CHECK(r.vertex(v).y == m.vertex(v).y);
    }
    for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(r.triangle(t) == m.triangle(t));
  }

  TEST_CASE("point location") {
    const TriMesh m = build_mesh(MeshKind::chevron, 6);
    const PointLocator loc(m);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      const auto hit = loc.locate(centroid(m, t));
      REQUIRE(hit);
      CHECK(hit->triangle == t);
      for (double b : hit->bary) CHECK(b == doctest::Approx(1.0 / 3.0));
    }
    CHECK_FALSE(loc.locate({3.0, 3.0}));
  }

  TEST_CASE("flipping an edge swaps its sides") {
    const TriMesh m = build_mesh(MeshKind::regular, 2);
    std::size_t e = 0;
    while (m.edge(e).is_boundary()) ++e;
    const TriMesh f = m.with_flipped_edge(e);
    CHECK(f.edge(e).tau == *m.edge(e).tau_prime);
    CHECK(*f.edge(e).tau_prime == m.edge(e).tau);
    CHECK(f.edge(e).normal.x == -m.edge(e).normal.x);
    CHECK(f.edge(e).normal.y == -m.edge(e).normal.y);
    CHECK_THROWS(m.with_flipped_edge(m.num_edges()));
  }

  TEST_CASE("mesh kind names") {
    for (auto kind : {MeshKind::regular, MeshKind::chevron, MeshKind::perturbed}) {
      CHECK(mesh_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(mesh_kind_from_string("delaunay"), std::invalid_argument);
  }
}
