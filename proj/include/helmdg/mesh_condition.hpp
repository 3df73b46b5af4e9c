#ifndef HELMDG_MESH_CONDITION_HPP
#define HELMDG_MESH_CONDITION_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "helmdg/mesh.hpp"

namespace helmdg {

/// Edge coefficients of one triangle, indexed like TriMesh::triangle_edges
/// (entry i belongs to the edge opposite local vertex i).
///
///   beta  = cot(theta_e) (h_{e+1}^2 - h_{e-1}^2) / 12
///   gamma = cot(theta_e) |tau| / 3
///
/// with theta_e the angle opposite e and e+1, e-1 the next and previous
/// edges in counterclockwise order.
struct EdgeCoefficients {
  std::array<double, 3> beta{};
  std::array<double, 3> gamma{};
};

EdgeCoefficients edge_coefficients(const std::array<Point, 3>& tri);

struct MeshConditionReport {
  // Interior edges, in mesh edge order restricted to interior edges.
  std::vector<std::size_t> interior_edges;
  std::vector<double> parallelogram_defect;
  std::vector<double> beta_tau;
  std::vector<double> beta_tau_prime;
  std::vector<double> gamma_tau;
  std::vector<double> gamma_tau_prime;

  std::vector<std::size_t> boundary_edges;
  std::vector<double> isosceles_defect;
  std::vector<double> beta_boundary;
  std::vector<double> gamma_boundary;

  double h = 0.0;
  double max_parallelogram_defect = 0.0;
  double mean_parallelogram_defect = 0.0;
  double max_isosceles_defect = 0.0;
  double mean_isosceles_defect = 0.0;
  /// max over interior edges of |beta_e - beta'_e|.
  double max_beta_mismatch = 0.0;

  double max_defect() const {
    return std::max(max_parallelogram_defect, max_isosceles_defect);
  }
};

MeshConditionReport measure_mesh_condition(const TriMesh& mesh);

/// Defects below this count as zero.
inline constexpr double kExactDefect = 1e-13;

struct AlphaEstimate {
  bool exact = false;               // every defect vanishes
  double alpha = 0.0;               // min of the two parts below
  double slope = 0.0;
  std::optional<double> interior;   // from parallelogram defects
  std::optional<double> boundary;   // from isosceles defects
};

/// Least-squares fit of log(max defect) against log(h) over a refinement
/// family, separately for interior and boundary defects; needs at least
/// three reports. A part with all defects zero has no value (alpha = inf).
AlphaEstimate estimate_alpha(std::span<const MeshConditionReport> family);

/// phi = c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2.
struct Quadratic {
  std::array<double, 6> c{};
  double operator()(Point p) const;
  Point gradient(Point p) const;
};

/// v = c0 + cx x + cy y.
struct Linear {
  std::array<double, 3> c{};
  double operator()(Point p) const { return c[0] + c[1] * p.x + c[2] * p.y; }
  Point gradient() const { return {c[1], c[2]}; }
};

/// |LHS - RHS| of the element identity relating the interpolation error of
/// a quadratic to tangential edge derivatives weighted by beta_e, gamma_e.
/// The left side is integrated over the triangle, the right side edge by
/// edge, each with a rule exact for its integrand.
double verify_fundamental_identity(const std::array<Point, 3>& tri,
                                   const Quadratic& phi, const Linear& v);

}  // namespace helmdg

#endif  // HELMDG_MESH_CONDITION_HPP
