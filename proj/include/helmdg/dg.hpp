#ifndef HELMDG_DG_HPP
#define HELMDG_DG_HPP

#include <array>
#include <memory>

#include "helmdg/exact.hpp"
#include "helmdg/linsolve.hpp"
#include "helmdg/mesh.hpp"
#include "helmdg/quadrature.hpp"

namespace helmdg {

using MeshPtr = std::shared_ptr<const TriMesh>;

/// Gradients of the three barycentric coordinates of triangle t.
std::array<Point, 3> basis_gradients(const TriMesh& mesh, std::size_t t);

/// Barycentric coordinates of p with respect to triangle t (p need not lie
/// inside).
std::array<double, 3> barycentric(const TriMesh& mesh, std::size_t t, Point p);

/// Broken P1 field: three vertex values per triangle, dof 3 t + i for local
/// vertex i of triangle t.
class DGFunction {
 public:
  explicit DGFunction(MeshPtr mesh);
  DGFunction(MeshPtr mesh, CVector coeffs);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }

  /// u_h(z, tau): value of the restriction to t at its local vertex i.
  cplx node_value(std::size_t t, std::size_t local) const {
    return coeffs_[Eigen::Index(3 * t + local)];
  }
  cplx value(std::size_t t, const std::array<double, 3>& bary) const;
  CVec2 gradient(std::size_t t) const;

 private:
  MeshPtr mesh_;
  CVector coeffs_;
};

/// Continuous P1 field, one value per vertex.
class CGFunction {
 public:
  explicit CGFunction(MeshPtr mesh);
  CGFunction(MeshPtr mesh, CVector coeffs);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }

  cplx value(std::size_t t, const std::array<double, 3>& bary) const;
  CVec2 gradient(std::size_t t) const;
  DGFunction to_dg() const;

 private:
  MeshPtr mesh_;
  CVector coeffs_;
};

struct DGParams {
  double k = 10.0;
  double mu = 0.0;
  double rho0 = 5.0;
};

/// A = S - k^2 M + i k B, with S = volume gradients + interior-edge
/// consistency terms + penalty. `penalty` holds the rho0/h_e^{1+mu} jump
/// block alone (already contained in S).
struct ComplexSparseSystem {
  CSparse matrix;
  CVector rhs;
  RSparse stiffness;
  RSparse mass;
  RSparse boundary_mass;
  RSparse penalty;
};

ComplexSparseSystem assemble_system(const TriMesh& mesh, const DGParams& params);

/// b_i = (f, phi_i) + <g, phi_i>_Gamma.
CVector assemble_rhs(const TriMesh& mesh, double k, const ProblemData& data,
                     const QuadratureSettings& quad = {});

struct HelmholtzSolution {
  DGFunction uh;
  SolveReport report;
};

/// Solves the DG scheme; solver failures are rethrown with k, N and mu in
/// the message.
HelmholtzSolution solve_helmholtz(const MeshPtr& mesh, const DGParams& params,
                                  const ProblemData& data,
                                  const SolveOptions& solve = {},
                                  const QuadratureSettings& quad = {});

CGFunction interpolate_p1(const std::function<cplx(Point)>& field,
                          const MeshPtr& mesh);

/// J0(v, v) = sum over interior edges of rho0 / h_e^{1+mu} ||[v]||^2_e.
double penalty_energy(const DGFunction& v, const DGParams& params);

/// Writes `i j re im` lines sorted by (i, j).
void write_system(std::ostream& out, const CSparse& matrix);

}  // namespace helmdg

#endif  // HELMDG_DG_HPP
