#ifndef HELMDG_ERRORS_HPP
#define HELMDG_ERRORS_HPP

#include <optional>

#include "helmdg/dg.hpp"
#include "helmdg/recovery.hpp"

namespace helmdg {

/// Absolute error quantities of one discrete solution. Reference norms of
/// the exact solution are kept so callers can report relative values.
struct ErrorRecord {
  double e1 = 0.0;                   // |u - u_h| broken H1 seminorm
  double e2 = 0.0;                   // ||grad u - G_h u_h||_0
  std::optional<double> e3;          // ||grad u - RG u_h||_0
  std::optional<double> eta;         // a posteriori estimator
  double uh_ui_1h = 0.0;             // ||u_h - u_I||_{1,h}
  double uh_ui_triple = 0.0;         // |||u_h - u_I|||_{1,h}
  double uh_ui_l2 = 0.0;             // ||u_h - u_I||_0
  double uh_ui_1h_literal = 0.0;     // L2 instead of gradient in ||.||_{1,h}
  double k_l2 = 0.0;                 // k ||u - u_h||_0
  double j0_uh_ui = 0.0;             // J0(u_h - u_I, u_h - u_I)
  double ref_h1 = 0.0;               // ||grad u||_0
  double ref_l2 = 0.0;               // ||u||_0
};

struct ErrorInputs {
  const RecoveredGradient* ppr = nullptr;
  const RecoveredGradient* richardson = nullptr;
  /// Gradient fed to the estimator; no estimator when null.
  const RecoveredGradient* estimator = nullptr;
};

/// Oscillation-adaptive element integration: each triangle is split until
/// k * (sub-triangle diameter) <= 1 (capped), then the configured rule is
/// applied per sub-triangle.
ErrorRecord compute_errors(const DGFunction& uh, const ErrorInputs& inputs,
                           const ProblemData& exact, const DGParams& params,
                           const QuadratureSettings& quad = {});

/// ||grad u - G||_0 for a recovered gradient G.
double gradient_error(const RecoveredGradient& g, const ProblemData& exact,
                      double k, const QuadratureSettings& quad = {});

/// ||u - u_h||_0.
double l2_error(const DGFunction& uh, const ProblemData& exact, double k,
                const QuadratureSettings& quad = {});

/// Elliptic projection: u_h^+ with a_h(u_h^+, v) + i k <u_h^+, v> =
/// a_h(u, v) + i k <u, v> for all v in V_h.
HelmholtzSolution elliptic_projection(const ProblemData& exact,
                                      const MeshPtr& mesh,
                                      const DGParams& params,
                                      const SolveOptions& solve = {},
                                      const QuadratureSettings& quad = {});

/// Right-hand side a_h(u, phi_i) + i k <u, phi_i> for a smooth u.
CVector elliptic_rhs(const ProblemData& exact, const TriMesh& mesh, double k,
                     const QuadratureSettings& quad = {});

}  // namespace helmdg

#endif  // HELMDG_ERRORS_HPP
