#include "helmdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace helmdg {

double norm(Point a) { return std::hypot(a.x, a.y); }

std::string to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::regular:
      return "regular";
    case MeshKind::chevron:
      return "chevron";
    case MeshKind::perturbed:
      return "perturbed";
  }
  return "unknown";
}

MeshKind mesh_kind_from_string(const std::string& name) {
  if (name == "regular") return MeshKind::regular;
  if (name == "chevron") return MeshKind::chevron;
  if (name == "perturbed") return MeshKind::perturbed;
  throw std::invalid_argument("unknown mesh kind '" + name + "'");
}

TriMesh::TriMesh(std::vector<Point> vertices,
                 std::vector<std::array<std::size_t, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  if (vertices_.empty() || triangles_.empty()) {
    throw std::invalid_argument("TriMesh: empty mesh");
  }
  areas_.resize(triangles_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (std::size_t v : triangles_[t]) {
      if (v >= vertices_.size()) {
        throw std::invalid_argument("TriMesh: triangle " + std::to_string(t) +
                                    " references missing vertex");
      }
    }
    const auto c = corners(t);
    const double a = 0.5 * cross(c[1] - c[0], c[2] - c[0]);
    if (!(a > 0.0)) {
      std::ostringstream msg;
      msg << "TriMesh: triangle " << t << " has non-positive signed area " << a;
      throw std::invalid_argument(msg.str());
    }
    areas_[t] = a;
    h_ = std::max(h_, diameter(t));
  }
  bbox_.lo = bbox_.hi = vertices_.front();
  for (const Point& p : vertices_) {
    bbox_.lo.x = std::min(bbox_.lo.x, p.x);
    bbox_.lo.y = std::min(bbox_.lo.y, p.y);
    bbox_.hi.x = std::max(bbox_.hi.x, p.x);
    bbox_.hi.y = std::max(bbox_.hi.y, p.y);
  }
  build_topology();
  build_patches();
}

std::array<Point, 3> TriMesh::corners(std::size_t t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double TriMesh::diameter(std::size_t t) const {
  const auto c = corners(t);
  return std::max({norm(c[1] - c[0]), norm(c[2] - c[1]), norm(c[0] - c[2])});
}

std::size_t TriMesh::local_index(std::size_t t, std::size_t v) const {
  const auto& tri = triangles_[t];
  for (std::size_t i = 0; i < 3; ++i) {
    if (tri[i] == v) return i;
  }
  return 3;
}

void TriMesh::build_topology() {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
  triangle_edges_.assign(triangles_.size(), {0, 0, 0});
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (std::size_t i = 0; i < 3; ++i) {
      // Edge opposite local vertex i, traversed counterclockwise in t.
      const std::size_t p = tri[(i + 1) % 3];
      const std::size_t q = tri[(i + 2) % 3];
      const auto key = std::minmax(p, q);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge e;
        e.nodes = {p, q};
        e.tau = t;
        const Point d = vertices_[q] - vertices_[p];
        e.length = norm(d);
        // Outward normal of t; flipped below once a second triangle shows up.
        e.normal = (1.0 / e.length) * Point{d.y, -d.x};
        lookup.emplace(key, edges_.size());
        triangle_edges_[t][i] = edges_.size();
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.tau_prime) {
          throw std::invalid_argument("TriMesh: edge shared by more than two "
                                      "triangles (at triangle " +
                                      std::to_string(t) + ")");
        }
        e.tau_prime = t;
        // Interior normal points from tau' into tau.
        e.normal = -1.0 * e.normal;
        triangle_edges_[t][i] = it->second;
      }
    }
  }
  boundary_vertex_.assign(vertices_.size(), false);
  for (Edge& e : edges_) {
    e.tangent = {-e.normal.y, e.normal.x};
    if (e.is_boundary()) {
      boundary_vertex_[e.nodes[0]] = true;
      boundary_vertex_[e.nodes[1]] = true;
    }
  }
}

void TriMesh::build_patches() {
  std::vector<std::vector<std::size_t>> incident(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (std::size_t v : triangles_[t]) incident[v].push_back(t);
  }
  patches_.assign(vertices_.size(), {});

  // Triangle across the edge (z, w) from t, if any.
  auto across = [&](std::size_t t, std::size_t z,
                    std::size_t w) -> std::optional<std::size_t> {
    const std::size_t lz = local_index(t, z);
    const std::size_t lw = local_index(t, w);
    const std::size_t opposite = 3 - lz - lw;
    const Edge& e = edges_[triangle_edges_[t][opposite]];
    if (e.is_boundary()) return std::nullopt;
    return e.tau == t ? *e.tau_prime : e.tau;
  };

  for (std::size_t z = 0; z < vertices_.size(); ++z) {
    const auto& inc = incident[z];
    if (inc.empty()) {
      throw std::invalid_argument("TriMesh: vertex " + std::to_string(z) +
                                  " belongs to no triangle");
    }
    std::size_t start = *std::min_element(inc.begin(), inc.end());
    if (boundary_vertex_[z]) {
      // Walk clockwise to the start of the open fan.
      for (std::size_t guard = 0; guard <= inc.size(); ++guard) {
        const auto& tri = triangles_[start];
        const std::size_t lz = local_index(start, z);
        auto prev = across(start, z, tri[(lz + 1) % 3]);
        if (!prev) break;
        start = *prev;
      }
    }
    auto& patch = patches_[z];
    std::size_t t = start;
    for (std::size_t guard = 0; guard < inc.size(); ++guard) {
      patch.push_back(t);
      const auto& tri = triangles_[t];
      const std::size_t lz = local_index(t, z);
      auto next = across(t, z, tri[(lz + 2) % 3]);
      if (!next || *next == start) break;
      t = *next;
    }
    if (patch.size() != inc.size()) {
      throw std::invalid_argument("TriMesh: vertex " + std::to_string(z) +
                                  " has a non-manifold neighbourhood");
    }
  }
}

std::size_t TriMesh::num_interior_edges() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(),
      [](const Edge& e) { return !e.is_boundary(); }));
}

std::size_t TriMesh::num_boundary_edges() const {
  return edges_.size() - num_interior_edges();
}

TriMesh TriMesh::with_flipped_edge(std::size_t e) const {
  if (e >= edges_.size() || edges_[e].is_boundary()) {
    throw std::invalid_argument("with_flipped_edge: not an interior edge");
  }
  TriMesh copy = *this;
  Edge& edge = copy.edges_[e];
  std::swap(edge.tau, *edge.tau_prime);
  edge.normal = -1.0 * edge.normal;
  edge.tangent = -1.0 * edge.tangent;
  return copy;
}

double TriMesh::min_angle_deg() const {
  double best = 180.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto c = corners(t);
    for (std::size_t i = 0; i < 3; ++i) {
      const Point a = c[(i + 1) % 3] - c[i];
      const Point b = c[(i + 2) % 3] - c[i];
      const double angle = std::atan2(std::abs(cross(a, b)), dot(a, b));
      best = std::min(best, angle * 180.0 / std::numbers::pi);
    }
  }
  return best;
}

namespace {

// splitmix64; counter-based so each vertex gets an independent stream.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = mix(mix(seed) ^ counter);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

TriMesh build_rectangle_mesh(MeshKind kind, std::size_t n, BoundingBox box,
                             const MeshParams& params) {
  if (n == 0) throw std::invalid_argument("build_mesh: N must be positive");
  const double wx = box.hi.x - box.lo.x;
  const double wy = box.hi.y - box.lo.y;
  if (!(wx > 0.0) || !(wy > 0.0)) {
    throw std::invalid_argument("build_mesh: empty bounding box");
  }
  const std::size_t side = n + 1;
  std::vector<Point> vertices;
  vertices.reserve(side * side);
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      // Pin the last row/column so the box is reproduced exactly.
      const double x = i == n ? box.hi.x : box.lo.x + wx * double(i) / double(n);
      const double y = j == n ? box.hi.y : box.lo.y + wy * double(j) / double(n);
      vertices.push_back({x, y});
    }
  }
  std::vector<std::array<std::size_t, 3>> triangles;
  triangles.reserve(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v00 = j * side + i;
      const std::size_t v10 = v00 + 1;
      const std::size_t v01 = v00 + side;
      const std::size_t v11 = v01 + 1;
      const bool flipped = kind == MeshKind::chevron && (i % 2 == 1);
      if (!flipped) {
        triangles.push_back({v00, v10, v11});
        triangles.push_back({v00, v11, v01});
      } else {
        triangles.push_back({v00, v10, v01});
        triangles.push_back({v10, v11, v01});
      }
    }
  }
  if (kind == MeshKind::perturbed) {
    const double spacing = std::max(wx, wy) / double(n);
    const double shift =
        params.amplitude * std::pow(spacing, 1.0 + params.exponent);
    for (std::size_t j = 1; j < n; ++j) {
      for (std::size_t i = 1; i < n; ++i) {
        const std::size_t v = j * side + i;
        const double theta =
            2.0 * std::numbers::pi * unit_uniform(params.seed, v);
        vertices[v].x += shift * std::cos(theta);
        vertices[v].y += shift * std::sin(theta);
      }
    }
  }
  TriMesh mesh(std::move(vertices), std::move(triangles));
  if (kind == MeshKind::perturbed &&
      mesh.min_angle_deg() < params.min_angle_floor_deg) {
    throw std::invalid_argument("build_mesh: perturbed mesh violates the "
                                "minimum angle floor");
  }
  return mesh;
}

TriMesh build_mesh(MeshKind kind, std::size_t n, const MeshParams& params) {
  return build_rectangle_mesh(kind, n, {{0.5, 0.5}, {1.5, 1.5}}, params);
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "vertices " << mesh.num_vertices() << " triangles "
      << mesh.num_triangles() << '\n';
  out.precision(17);
  for (const Point& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const auto& tri : mesh.triangles()) {
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
}

TriMesh read_mesh(std::istream& in) {
  std::string word_v;
  std::string word_t;
  std::size_t nv = 0;
  std::size_t nt = 0;
  if (!(in >> word_v >> nv >> word_t >> nt) || word_v != "vertices" ||
      word_t != "triangles") {
    throw std::runtime_error("read_mesh: malformed header");
  }
  std::vector<Point> vertices(nv);
  for (Point& p : vertices) {
    if (!(in >> p.x >> p.y)) throw std::runtime_error("read_mesh: truncated");
  }
  std::vector<std::array<std::size_t, 3>> triangles(nt);
  for (auto& tri : triangles) {
    if (!(in >> tri[0] >> tri[1] >> tri[2])) {
      throw std::runtime_error("read_mesh: truncated");
    }
  }
  return TriMesh(std::move(vertices), std::move(triangles));
}

PointLocator::PointLocator(const TriMesh& mesh) : mesh_(&mesh) {
  box_ = mesh.bounding_box();
  const auto side = static_cast<std::size_t>(
      std::ceil(std::sqrt(double(mesh.num_triangles()) / 2.0)));
  nx_ = ny_ = std::max<std::size_t>(1, side);
  buckets_.assign(nx_ * ny_, {});
  const double wx = std::max(box_.hi.x - box_.lo.x, 1e-300);
  const double wy = std::max(box_.hi.y - box_.lo.y, 1e-300);
  auto cell = [](double v, double lo, double w, std::size_t n) {
    const double c = std::floor((v - lo) / w * double(n));
    return static_cast<std::size_t>(std::clamp(c, 0.0, double(n - 1)));
  };
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const double x0 = std::min({c[0].x, c[1].x, c[2].x});
    const double x1 = std::max({c[0].x, c[1].x, c[2].x});
    const double y0 = std::min({c[0].y, c[1].y, c[2].y});
    const double y1 = std::max({c[0].y, c[1].y, c[2].y});
    for (std::size_t j = cell(y0, box_.lo.y, wy, ny_); j <= cell(y1, box_.lo.y, wy, ny_); ++j) {
      for (std::size_t i = cell(x0, box_.lo.x, wx, nx_); i <= cell(x1, box_.lo.x, wx, nx_); ++i) {
        buckets_[j * nx_ + i].push_back(t);
      }
    }
  }
}

std::optional<PointLocator::Hit> PointLocator::locate(Point p, double tol) const {
  const double wx = std::max(box_.hi.x - box_.lo.x, 1e-300);
  const double wy = std::max(box_.hi.y - box_.lo.y, 1e-300);
  const double fx = std::floor((p.x - box_.lo.x) / wx * double(nx_));
  const double fy = std::floor((p.y - box_.lo.y) / wy * double(ny_));
  const auto i = static_cast<std::size_t>(std::clamp(fx, 0.0, double(nx_ - 1)));
  const auto j = static_cast<std::size_t>(std::clamp(fy, 0.0, double(ny_ - 1)));
  for (std::size_t t : buckets_[j * nx_ + i]) {
    const auto c = mesh_->corners(t);
    const double two_area = 2.0 * mesh_->area(t);
    std::array<double, 3> lam{};
    bool inside = true;
    for (std::size_t k = 0; k < 3; ++k) {
      lam[k] = cross(c[(k + 2) % 3] - c[(k + 1) % 3], p - c[(k + 1) % 3]) / two_area;
      if (lam[k] < -tol) inside = false;
    }
    if (inside) return Hit{t, lam};
  }
  return std::nullopt;
}

bool is_nested(const TriMesh& coarse, const TriMesh& fine, double tol) {
  std::vector<Point> sorted(fine.vertices().begin(), fine.vertices().end());
  auto less = [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  };
  std::sort(sorted.begin(), sorted.end(), less);
  for (const Point& p : coarse.vertices()) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(),
                               Point{p.x - tol, -std::numeric_limits<double>::max()},
                               less);
    bool found = false;
    for (; it != sorted.end() && it->x <= p.x + tol; ++it) {
      if (std::abs(it->y - p.y) <= tol) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace helmdg
