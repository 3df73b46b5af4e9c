#ifndef HELMDG_RECOVERY_HPP
#define HELMDG_RECOVERY_HPP

#include <string>
#include <vector>

#include "helmdg/dg.hpp"

namespace helmdg {

/// Weights lambda_j used to collapse the per-element node values u_h(z, tau)
/// into one continuous value: `first` puts all weight on the first triangle
/// of the vertex patch, `average` spreads it evenly.
enum class LambdaPolicy { first, average };

std::string to_string(LambdaPolicy policy);
LambdaPolicy lambda_policy_from_string(const std::string& name);

/// lambda weights for vertex z, aligned with mesh.patch(z).
std::vector<double> lambda_weights(const TriMesh& mesh, std::size_t z,
                                   LambdaPolicy policy);

CGFunction dg_to_cg(const DGFunction& uh, LambdaPolicy policy);

struct RecoveryPatch {
  std::size_t center = 0;
  /// Sampling nodes; the center comes first.
  std::vector<std::size_t> nodes;
  /// Local frame is (p - center) / scale.
  double scale = 1.0;
  /// Element layers added beyond the first ring.
  int growth = 0;
  double condition = 0.0;
};

struct RecoveryOptions {
  std::size_t min_nodes = 6;
  int max_growth = 3;
  double rank_tol = 1e-10;
  double max_condition = 1e8;
};

struct RecoveredGradient {
  CGFunction x;
  CGFunction y;

  CVec2 value(std::size_t t, const std::array<double, 3>& bary) const {
    return {x.value(t, bary), y.value(t, bary)};
  }
  CVec2 at_vertex(std::size_t v) const {
    return {x.coeffs()[Eigen::Index(v)], y.coeffs()[Eigen::Index(v)]};
  }
};

/// Polynomial preserving recovery on a fixed mesh: per vertex, the gradient
/// at the vertex of the least-squares quadratic through the patch samples.
/// The operator is linear, so per-vertex weights are precomputed once.
class RecoveryOperator {
 public:
  explicit RecoveryOperator(MeshPtr mesh, const RecoveryOptions& options = {});

  const RecoveryPatch& patch(std::size_t z) const { return patches_[z]; }
  const TriMesh& mesh() const { return *mesh_; }

  /// Recovery of a continuous P1 field.
  RecoveredGradient apply(const CGFunction& w) const;
  /// G_h u_h: collapse u_h to a continuous field, then recover.
  RecoveredGradient apply(const DGFunction& uh, LambdaPolicy policy) const;

 private:
  MeshPtr mesh_;
  std::vector<RecoveryPatch> patches_;
  std::vector<std::vector<double>> weights_x_;
  std::vector<std::vector<double>> weights_y_;
};

RecoveredGradient recover_gradient(const DGFunction& uh, LambdaPolicy policy,
                                   const RecoveryOptions& options = {});

/// P1 interpolation of a coarse-mesh recovered gradient onto the vertices
/// of a nested fine mesh.
RecoveredGradient prolongate(const RecoveredGradient& coarse,
                             const MeshPtr& fine);

/// (4 G_fine - I G_coarse) / 3 at the fine vertices.
RecoveredGradient richardson_extrapolate(const RecoveredGradient& coarse,
                                         const RecoveredGradient& fine);

/// (sum over triangles of ||G - grad u_h||^2)^{1/2}.
double error_estimator(const DGFunction& uh, const RecoveredGradient& g);

}  // namespace helmdg

#endif  // HELMDG_RECOVERY_HPP
