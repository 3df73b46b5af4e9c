#ifndef HELMDG_MESH_HPP
#define HELMDG_MESH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace helmdg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);

struct BoundingBox {
  Point lo;
  Point hi;
};

/// Edge of the triangulation.
///
/// For an interior edge, `normal` points from `tau_prime` into `tau`, so the
/// jump of a broken function is v|tau_prime - v|tau. Boundary edges have no
/// `tau_prime` and carry the outward unit normal of the domain.
struct Edge {
  std::array<std::size_t, 2> nodes{};
  std::size_t tau = 0;
  std::optional<std::size_t> tau_prime;
  Point normal;
  Point tangent;
  double length = 0.0;

  bool is_boundary() const { return !tau_prime.has_value(); }
};

enum class MeshKind { regular, chevron, perturbed };

std::string to_string(MeshKind kind);
MeshKind mesh_kind_from_string(const std::string& name);

struct MeshParams {
  std::uint64_t seed = 1;
  double amplitude = 0.2;  // delta in delta * h^(1+q)
  double exponent = 0.5;   // q
  double min_angle_floor_deg = 10.0;
};

/// Immutable oriented triangulation with edge and vertex-patch topology.
class TriMesh {
 public:
  TriMesh(std::vector<Point> vertices,
          std::vector<std::array<std::size_t, 3>> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const std::array<std::size_t, 3>> triangles() const {
    return triangles_;
  }
  std::span<const Edge> edges() const { return edges_; }

  const Point& vertex(std::size_t v) const { return vertices_[v]; }
  const std::array<std::size_t, 3>& triangle(std::size_t t) const {
    return triangles_[t];
  }
  const Edge& edge(std::size_t e) const { return edges_[e]; }

  std::array<Point, 3> corners(std::size_t t) const;
  double area(std::size_t t) const { return areas_[t]; }
  double diameter(std::size_t t) const;
  /// h = max triangle diameter.
  double h() const { return h_; }

  /// Edges of triangle t; entry i is the edge opposite local vertex i.
  const std::array<std::size_t, 3>& triangle_edges(std::size_t t) const {
    return triangle_edges_[t];
  }

  /// Incident triangles of v in counterclockwise order. Interior vertices
  /// start at the smallest triangle index; boundary vertices start at the
  /// clockwise end of the open fan.
  std::span<const std::size_t> patch(std::size_t v) const {
    return patches_[v];
  }
  bool is_boundary_vertex(std::size_t v) const { return boundary_vertex_[v]; }

  std::size_t num_interior_edges() const;
  std::size_t num_boundary_edges() const;

  const BoundingBox& bounding_box() const { return bbox_; }

  /// Local index (0..2) of vertex v in triangle t, or 3 if absent.
  std::size_t local_index(std::size_t t, std::size_t v) const;

  /// Copy of this mesh with tau and tau' of one interior edge swapped
  /// (normal and tangent negated).
  TriMesh with_flipped_edge(std::size_t e) const;

  double min_angle_deg() const;

 private:
  void build_topology();
  void build_patches();

  std::vector<Point> vertices_;
  std::vector<std::array<std::size_t, 3>> triangles_;
  std::vector<double> areas_;
  std::vector<Edge> edges_;
  std::vector<std::array<std::size_t, 3>> triangle_edges_;
  std::vector<std::vector<std::size_t>> patches_;
  std::vector<bool> boundary_vertex_;
  BoundingBox bbox_;
  double h_ = 0.0;
};

/// Structured triangulation of [0.5,1.5]^2 with N cells per side.
TriMesh build_mesh(MeshKind kind, std::size_t n, const MeshParams& params = {});

TriMesh build_rectangle_mesh(MeshKind kind, std::size_t n, BoundingBox box,
                             const MeshParams& params = {});

/// Plain-text mesh format: `vertices V triangles T`, V lines `x y`, T lines
/// `i j k` (0-based, counterclockwise).
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);

/// Bucket-grid point location over the triangles of a mesh.
class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh);

  struct Hit {
    std::size_t triangle;
    std::array<double, 3> bary;
  };

  /// Triangle containing p (barycentric tolerance `tol`), if any.
  std::optional<Hit> locate(Point p, double tol = 1e-10) const;

 private:
  const TriMesh* mesh_;
  std::size_t nx_ = 1;
  std::size_t ny_ = 1;
  BoundingBox box_;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// True when every vertex of `coarse` is also a vertex of `fine`.
bool is_nested(const TriMesh& coarse, const TriMesh& fine, double tol = 1e-12);

}  // namespace helmdg

#endif  // HELMDG_MESH_HPP
