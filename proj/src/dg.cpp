#include "helmdg/dg.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace helmdg {

std::array<Point, 3> basis_gradients(const TriMesh& mesh, std::size_t t) {
  const auto c = mesh.corners(t);
  const double two_area = 2.0 * mesh.area(t);
  std::array<Point, 3> g;
  for (std::size_t i = 0; i < 3; ++i) {
    const Point& a = c[(i + 1) % 3];
    const Point& b = c[(i + 2) % 3];
    g[i] = {(a.y - b.y) / two_area, (b.x - a.x) / two_area};
  }
  return g;
}

std::array<double, 3> barycentric(const TriMesh& mesh, std::size_t t, Point p) {
  const auto c = mesh.corners(t);
  const double two_area = 2.0 * mesh.area(t);
  std::array<double, 3> lam;
  for (std::size_t i = 0; i < 3; ++i) {
    lam[i] = cross(c[(i + 2) % 3] - c[(i + 1) % 3], p - c[(i + 1) % 3]) /
             two_area;
  }
  return lam;
}

DGFunction::DGFunction(MeshPtr mesh)
    : mesh_(std::move(mesh)),
      coeffs_(CVector::Zero(Eigen::Index(3 * mesh_->num_triangles()))) {}

DGFunction::DGFunction(MeshPtr mesh, CVector coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != Eigen::Index(3 * mesh_->num_triangles())) {
    throw std::invalid_argument("DGFunction: coefficient count must be 3T");
  }
}

cplx DGFunction::value(std::size_t t, const std::array<double, 3>& bary) const {
  return bary[0] * node_value(t, 0) + bary[1] * node_value(t, 1) +
         bary[2] * node_value(t, 2);
}

CVec2 DGFunction::gradient(std::size_t t) const {
  const auto g = basis_gradients(*mesh_, t);
  CVec2 out{0.0, 0.0};
  for (std::size_t i = 0; i < 3; ++i) {
    out.x += node_value(t, i) * g[i].x;
    out.y += node_value(t, i) * g[i].y;
  }
  return out;
}

CGFunction::CGFunction(MeshPtr mesh)
    : mesh_(std::move(mesh)),
      coeffs_(CVector::Zero(Eigen::Index(mesh_->num_vertices()))) {}

CGFunction::CGFunction(MeshPtr mesh, CVector coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != Eigen::Index(mesh_->num_vertices())) {
    throw std::invalid_argument("CGFunction: coefficient count must be V");
  }
}

cplx CGFunction::value(std::size_t t, const std::array<double, 3>& bary) const {
  const auto& tri = mesh_->triangle(t);
  return bary[0] * coeffs_[Eigen::Index(tri[0])] +
         bary[1] * coeffs_[Eigen::Index(tri[1])] +
         bary[2] * coeffs_[Eigen::Index(tri[2])];
}

CVec2 CGFunction::gradient(std::size_t t) const {
  const auto g = basis_gradients(*mesh_, t);
  const auto& tri = mesh_->triangle(t);
  CVec2 out{0.0, 0.0};
  for (std::size_t i = 0; i < 3; ++i) {
    out.x += coeffs_[Eigen::Index(tri[i])] * g[i].x;
    out.y += coeffs_[Eigen::Index(tri[i])] * g[i].y;
  }
  return out;
}

DGFunction CGFunction::to_dg() const {
  DGFunction out(mesh_);
  for (std::size_t t = 0; t < mesh_->num_triangles(); ++t) {
    const auto& tri = mesh_->triangle(t);
    for (std::size_t i = 0; i < 3; ++i) {
      out.coeffs()[Eigen::Index(3 * t + i)] = coeffs_[Eigen::Index(tri[i])];
    }
  }
  return out;
}

namespace {

using Triplet = Eigen::Triplet<double>;

RSparse from_triplets(Eigen::Index n, const std::vector<Triplet>& trips) {
  RSparse m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

// Point on edge e at parameter s in [0, 1].
Point edge_point(const TriMesh& mesh, const Edge& e, double s) {
  const Point& a = mesh.vertex(e.nodes[0]);
  const Point& b = mesh.vertex(e.nodes[1]);
  return a + s * (b - a);
}

}  // namespace

ComplexSparseSystem assemble_system(const TriMesh& mesh, const DGParams& params) {
  if (!(params.rho0 > 0.0)) {
    throw std::invalid_argument("assemble_system: rho0 must be positive");
  }
  if (!(params.mu >= 0.0)) {
    throw std::invalid_argument("assemble_system: mu must be nonnegative");
  }
  const auto n = Eigen::Index(3 * mesh.num_triangles());
  std::vector<Triplet> stiff;
  std::vector<Triplet> mass;
  std::vector<Triplet> bmass;
  std::vector<Triplet> pen;
  stiff.reserve(std::size_t(n) * 12);
  mass.reserve(std::size_t(n) * 3);

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = basis_gradients(mesh, t);
    const double area = mesh.area(t);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const auto row = Eigen::Index(3 * t + i);
        const auto col = Eigen::Index(3 * t + j);
        stiff.emplace_back(row, col, area * dot(g[i], g[j]));
        mass.emplace_back(row, col, area * (i == j ? 2.0 : 1.0) / 12.0);
      }
    }
  }

  // Degree-2 edge integrands: two Gauss points are exact.
  const auto& rule = GaussRule::get(2);
  for (const Edge& e : mesh.edges()) {
    if (e.is_boundary()) {
      const std::size_t t = e.tau;
      for (const auto& q : rule.points()) {
        const auto lam = barycentric(mesh, t, edge_point(mesh, e, q.s));
        for (std::size_t i = 0; i < 3; ++i) {
          for (std::size_t j = 0; j < 3; ++j) {
            bmass.emplace_back(Eigen::Index(3 * t + i), Eigen::Index(3 * t + j),
                               q.w * e.length * lam[i] * lam[j]);
          }
        }
      }
      continue;
    }
    const double sigma = params.rho0 / std::pow(e.length, 1.0 + params.mu);
    // [v] = v|tau' - v|tau.
    const std::array<std::size_t, 2> elems{*e.tau_prime, e.tau};
    const std::array<double, 2> sign{1.0, -1.0};
    std::array<std::array<Point, 3>, 2> grads{basis_gradients(mesh, elems[0]),
                                              basis_gradients(mesh, elems[1])};
    for (const auto& q : rule.points()) {
      const Point p = edge_point(mesh, e, q.s);
      const std::array<std::array<double, 3>, 2> lam{
          barycentric(mesh, elems[0], p), barycentric(mesh, elems[1], p)};
      const double w = q.w * e.length;
      for (std::size_t a = 0; a < 2; ++a) {      // test side
        for (std::size_t b = 0; b < 2; ++b) {    // trial side
          for (std::size_t i = 0; i < 3; ++i) {  // test basis
            for (std::size_t j = 0; j < 3; ++j) {  // trial basis
              const auto row = Eigen::Index(3 * elems[a] + i);
              const auto col = Eigen::Index(3 * elems[b] + j);
              const double jump_test = sign[a] * lam[a][i];
              const double jump_trial = sign[b] * lam[b][j];
              const double avg_dn_trial = 0.5 * dot(grads[b][j], e.normal);
              const double avg_dn_test = 0.5 * dot(grads[a][i], e.normal);
              const double consistency =
                  -(avg_dn_trial * jump_test + jump_trial * avg_dn_test);
              const double penalty = sigma * jump_trial * jump_test;
              stiff.emplace_back(row, col, w * (consistency + penalty));
              pen.emplace_back(row, col, w * penalty);
            }
          }
        }
      }
    }
  }

  ComplexSparseSystem sys;
  sys.stiffness = from_triplets(n, stiff);
  sys.mass = from_triplets(n, mass);
  sys.boundary_mass = from_triplets(n, bmass);
  sys.penalty = from_triplets(n, pen);
  const double k = params.k;
  sys.matrix = sys.stiffness.cast<cplx>() - (k * k) * sys.mass.cast<cplx>() +
               cplx(0.0, k) * sys.boundary_mass.cast<cplx>();
  sys.matrix.makeCompressed();
  return sys;
}

CVector assemble_rhs(const TriMesh& mesh, double k, const ProblemData& data,
                     const QuadratureSettings& quad) {
  CVector b = CVector::Zero(Eigen::Index(3 * mesh.num_triangles()));
  if (data.f) {
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
      const auto c = mesh.corners(t);
      const int levels = subdivision_levels(k, mesh.diameter(t), quad);
      const auto& rule = composite_rule(quad.triangle_degree, levels);
      const double area = mesh.area(t);
      for (const auto& q : rule.points()) {
        const Point p = q.b[0] * c[0] + q.b[1] * c[1] + q.b[2] * c[2];
        const cplx fw = data.f(p) * (q.w * area);
        for (std::size_t i = 0; i < 3; ++i) {
          b[Eigen::Index(3 * t + i)] += fw * q.b[i];
        }
      }
    }
  }
  if (data.g) {
    const auto& rule = GaussRule::get(quad.edge_points);
    for (const Edge& e : mesh.edges()) {
      if (!e.is_boundary()) continue;
      const std::size_t t = e.tau;
      // Split long edges the same way as elements.
      const int levels = subdivision_levels(k, e.length, quad);
      const std::size_t pieces = std::size_t(1) << levels;
      for (std::size_t piece = 0; piece < pieces; ++piece) {
        for (const auto& q : rule.points()) {
          const double s = (double(piece) + q.s) / double(pieces);
          const Point p = edge_point(mesh, e, s);
          const auto lam = barycentric(mesh, t, p);
          const cplx gw = data.g(p, e.normal) * (q.w * e.length / double(pieces));
          for (std::size_t i = 0; i < 3; ++i) {
            b[Eigen::Index(3 * t + i)] += gw * lam[i];
          }
        }
      }
    }
  }
  return b;
}

HelmholtzSolution solve_helmholtz(const MeshPtr& mesh, const DGParams& params,
                                  const ProblemData& data,
                                  const SolveOptions& solve,
                                  const QuadratureSettings& quad) {
  const ComplexSparseSystem sys = assemble_system(*mesh, params);
  const CVector rhs = assemble_rhs(*mesh, params.k, data, quad);
  try {
    SolveResult res = solve_sparse_complex(sys.matrix, rhs, solve);
    return {DGFunction(mesh, std::move(res.x)), res.report};
  } catch (const std::exception& err) {
    std::ostringstream msg;
    msg << "solve_helmholtz failed (k=" << params.k
        << ", triangles=" << mesh->num_triangles() << ", mu=" << params.mu
        << "; possibly near a discrete resonance): " << err.what();
    throw std::runtime_error(msg.str());
  }
}

CGFunction interpolate_p1(const std::function<cplx(Point)>& field,
                          const MeshPtr& mesh) {
  CGFunction out(mesh);
  for (std::size_t v = 0; v < mesh->num_vertices(); ++v) {
    out.coeffs()[Eigen::Index(v)] = field(mesh->vertex(v));
  }
  return out;
}

double penalty_energy(const DGFunction& v, const DGParams& params) {
  const TriMesh& mesh = v.mesh();
  const auto& rule = GaussRule::get(2);
  double total = 0.0;
  for (const Edge& e : mesh.edges()) {
    if (e.is_boundary()) continue;
    const double sigma = params.rho0 / std::pow(e.length, 1.0 + params.mu);
    double edge_sum = 0.0;
    for (const auto& q : rule.points()) {
      const Point p = edge_point(mesh, e, q.s);
      const cplx jump = v.value(*e.tau_prime, barycentric(mesh, *e.tau_prime, p)) -
                        v.value(e.tau, barycentric(mesh, e.tau, p));
      edge_sum += q.w * std::norm(jump);
    }
    total += sigma * e.length * edge_sum;
  }
  return total;
}

void write_system(std::ostream& out, const CSparse& matrix) {
  out.precision(17);
  for (Eigen::Index i = 0; i < matrix.outerSize(); ++i) {
    for (CSparse::InnerIterator it(matrix, i); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' '
          << it.value().imag() << '\n';
    }
  }
}

}  // namespace helmdg
