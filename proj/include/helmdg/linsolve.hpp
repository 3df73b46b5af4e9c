#ifndef HELMDG_LINSOLVE_HPP
#define HELMDG_LINSOLVE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace helmdg {

using CSparse = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
using RSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;

struct SolveOptions {
  double tol = 1e-10;
  /// Iterative refinement sweeps after the direct solve.
  int max_refinement = 4;
};

struct SolveReport {
  /// ||A x - b|| / ||b||, recomputed from the caller's A and b.
  double relative_residual = 0.0;
  std::vector<double> residual_history;
  std::size_t n = 0;
  std::size_t nnz = 0;
  double factor_seconds = 0.0;
  double solve_seconds = 0.0;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

struct SolveResult {
  CVector x;
  SolveReport report;
};

/// Direct sparse LU (fill-reducing ordering) plus iterative refinement until
/// ||A x - b|| <= tol ||b||. Requires tol in (1e-14, 1e-4).
SolveResult solve_sparse_complex(const CSparse& a, const CVector& b,
                                 const SolveOptions& options = {});

}  // namespace helmdg

#endif  // HELMDG_LINSOLVE_HPP
