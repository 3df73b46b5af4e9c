#include "helmdg/errors.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace helmdg {

namespace {

double sq(CVec2 a) { return std::norm(a.x) + std::norm(a.y); }
CVec2 operator-(CVec2 a, CVec2 b) { return {a.x - b.x, a.y - b.y}; }

void check_mesh(const TriMesh& expected, const RecoveredGradient* g,
                const char* what) {
  if (g && (&g->x.mesh() != &expected || &g->y.mesh() != &expected)) {
    throw std::invalid_argument(std::string("compute_errors: ") + what +
                                " lives on another mesh");
  }
}

}  // namespace

ErrorRecord compute_errors(const DGFunction& uh, const ErrorInputs& inputs,
                           const ProblemData& exact, const DGParams& params,
                           const QuadratureSettings& quad) {
  const TriMesh& mesh = uh.mesh();
  check_mesh(mesh, inputs.ppr, "PPR gradient");
  check_mesh(mesh, inputs.richardson, "Richardson gradient");
  check_mesh(mesh, inputs.estimator, "estimator gradient");

  const CGFunction ui = interpolate_p1(exact.u, uh.mesh_ptr());
  DGFunction diff(uh.mesh_ptr(), uh.coeffs() - ui.to_dg().coeffs());

  double e1 = 0, e2 = 0, e3 = 0, l2 = 0, ref_h1 = 0, ref_l2 = 0;
  double d_grad = 0, d_l2 = 0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const int levels = subdivision_levels(params.k, mesh.diameter(t), quad);
    const auto& rule = composite_rule(quad.triangle_degree, levels);
    const double area = mesh.area(t);
    const CVec2 grad_h = uh.gradient(t);
    const CVec2 grad_d = diff.gradient(t);
    double s_e1 = 0, s_e2 = 0, s_e3 = 0, s_l2 = 0, s_rh = 0, s_rl = 0, s_dl = 0;
    for (const auto& q : rule.points()) {
      const Point p = q.b[0] * c[0] + q.b[1] * c[1] + q.b[2] * c[2];
      const cplx u = exact.u(p);
      const CVec2 gu = exact.grad_u(p);
      s_e1 += q.w * sq(gu - grad_h);
      if (inputs.ppr) s_e2 += q.w * sq(gu - inputs.ppr->value(t, q.b));
      if (inputs.richardson) s_e3 += q.w * sq(gu - inputs.richardson->value(t, q.b));
      s_l2 += q.w * std::norm(u - uh.value(t, q.b));
      s_rh += q.w * sq(gu);
      s_rl += q.w * std::norm(u);
      s_dl += q.w * std::norm(diff.value(t, q.b));
    }
    e1 += area * s_e1;
    e2 += area * s_e2;
    e3 += area * s_e3;
    l2 += area * s_l2;
    ref_h1 += area * s_rh;
    ref_l2 += area * s_rl;
    d_l2 += area * s_dl;
    d_grad += area * sq(grad_d);
  }

  ErrorRecord rec;
  rec.e1 = std::sqrt(e1);
  rec.e2 = std::sqrt(e2);
  if (inputs.richardson) rec.e3 = std::sqrt(e3);
  if (inputs.estimator) rec.eta = error_estimator(uh, *inputs.estimator);
  rec.k_l2 = params.k * std::sqrt(l2);
  rec.ref_h1 = std::sqrt(ref_h1);
  rec.ref_l2 = std::sqrt(ref_l2);
  rec.j0_uh_ui = penalty_energy(diff, params);
  rec.uh_ui_l2 = std::sqrt(d_l2);
  rec.uh_ui_1h = std::sqrt(d_grad + rec.j0_uh_ui);
  rec.uh_ui_triple = std::sqrt(d_grad + rec.j0_uh_ui +
                               params.k * params.k * d_l2);
  rec.uh_ui_1h_literal = std::sqrt(d_l2 + rec.j0_uh_ui);
  return rec;
}

double gradient_error(const RecoveredGradient& g, const ProblemData& exact,
                      double k, const QuadratureSettings& quad) {
  const TriMesh& mesh = g.x.mesh();
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const auto& rule =
        composite_rule(quad.triangle_degree, subdivision_levels(k, mesh.diameter(t), quad));
    double local = 0.0;
    for (const auto& q : rule.points()) {
      const Point p = q.b[0] * c[0] + q.b[1] * c[1] + q.b[2] * c[2];
      local += q.w * sq(exact.grad_u(p) - g.value(t, q.b));
    }
    total += local * mesh.area(t);
  }
  return std::sqrt(total);
}

double l2_error(const DGFunction& uh, const ProblemData& exact, double k,
                const QuadratureSettings& quad) {
  const TriMesh& mesh = uh.mesh();
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const auto& rule =
        composite_rule(quad.triangle_degree, subdivision_levels(k, mesh.diameter(t), quad));
    double local = 0.0;
    for (const auto& q : rule.points()) {
      const Point p = q.b[0] * c[0] + q.b[1] * c[1] + q.b[2] * c[2];
      local += q.w * std::norm(exact.u(p) - uh.value(t, q.b));
    }
    total += local * mesh.area(t);
  }
  return std::sqrt(total);
}

CVector elliptic_rhs(const ProblemData& exact, const TriMesh& mesh, double k,
                     const QuadratureSettings& quad) {
  CVector b = CVector::Zero(Eigen::Index(3 * mesh.num_triangles()));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto c = mesh.corners(t);
    const auto g = basis_gradients(mesh, t);
    const auto& rule =
        composite_rule(quad.triangle_degree, subdivision_levels(k, mesh.diameter(t), quad));
    CVec2 integral{0.0, 0.0};
    for (const auto& q : rule.points()) {
      const Point p = q.b[0] * c[0] + q.b[1] * c[1] + q.b[2] * c[2];
      const CVec2 gu = exact.grad_u(p);
      integral.x += q.w * gu.x;
      integral.y += q.w * gu.y;
    }
    for (std::size_t i = 0; i < 3; ++i) {
      b[Eigen::Index(3 * t + i)] += mesh.area(t) * dot(integral, g[i]);
    }
  }
  const auto& rule = GaussRule::get(quad.edge_points);
  for (const Edge& e : mesh.edges()) {
    const Point a = mesh.vertex(e.nodes[0]);
    const Point d = mesh.vertex(e.nodes[1]) - a;
    const std::size_t pieces = std::size_t(1) << subdivision_levels(k, e.length, quad);
    for (std::size_t piece = 0; piece < pieces; ++piece) {
      for (const auto& q : rule.points()) {
        const Point p = a + ((double(piece) + q.s) / double(pieces)) * d;
        const double w = q.w * e.length / double(pieces);
        if (e.is_boundary()) {
          const auto lam = barycentric(mesh, e.tau, p);
          const cplx ikw = cplx(0.0, k) * exact.u(p) * w;
          for (std::size_t i = 0; i < 3; ++i) {
            b[Eigen::Index(3 * e.tau + i)] += ikw * lam[i];
          }
          continue;
        }
        // -<du/dn_e, [phi]> with [phi] = phi|tau' - phi|tau.
        const cplx dn = dot(exact.grad_u(p), e.normal) * w;
        const auto lp = barycentric(mesh, *e.tau_prime, p);
        const auto lt = barycentric(mesh, e.tau, p);
        for (std::size_t i = 0; i < 3; ++i) {
          b[Eigen::Index(3 * *e.tau_prime + i)] -= dn * lp[i];
          b[Eigen::Index(3 * e.tau + i)] += dn * lt[i];
        }
      }
    }
  }
  return b;
}

HelmholtzSolution elliptic_projection(const ProblemData& exact,
                                      const MeshPtr& mesh,
                                      const DGParams& params,
                                      const SolveOptions& solve,
                                      const QuadratureSettings& quad) {
  const ComplexSparseSystem sys = assemble_system(*mesh, params);
  CSparse a = sys.stiffness.cast<cplx>() +
              cplx(0.0, params.k) * sys.boundary_mass.cast<cplx>();
  a.makeCompressed();
  const CVector rhs = elliptic_rhs(exact, *mesh, params.k, quad);
  try {
    SolveResult res = solve_sparse_complex(a, rhs, solve);
    return {DGFunction(mesh, std::move(res.x)), res.report};
  } catch (const std::exception& err) {
    std::ostringstream msg;
    msg << "elliptic_projection failed (k=" << params.k
        << ", triangles=" << mesh->num_triangles() << ", mu=" << params.mu
        << "): " << err.what();
    throw std::runtime_error(msg.str());
  }
}

}  // namespace helmdg
