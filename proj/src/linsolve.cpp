#include "helmdg/linsolve.hpp"

#include <chrono>
#include <complex>
#include <sstream>

#include <Eigen/UmfPackSupport>

namespace helmdg {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// b - A x accumulated in long double.
CVector residual(const CSparse& a, const CVector& x, const CVector& b) {
  using lcplx = std::complex<long double>;
  CVector r(b.size());
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    lcplx acc(b[i].real(), b[i].imag());
    for (CSparse::InnerIterator it(a, i); it; ++it) {
      acc -= lcplx(it.value().real(), it.value().imag()) *
             lcplx(x[it.col()].real(), x[it.col()].imag());
    }
    r[i] = {double(acc.real()), double(acc.imag())};
  }
  return r;
}

}  // namespace

SolveResult solve_sparse_complex(const CSparse& a, const CVector& b,
                                 const SolveOptions& options) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("solve_sparse_complex: matrix is not square");
  }
  if (b.size() != a.rows()) {
    throw std::invalid_argument("solve_sparse_complex: size mismatch");
  }
  if (!(options.tol > 1e-14 && options.tol < 1e-4)) {
    throw std::invalid_argument("solve_sparse_complex: tol must lie in "
                                "(1e-14, 1e-4)");
  }
  SolveResult out;
  out.report.n = static_cast<std::size_t>(a.rows());
  out.report.nnz = static_cast<std::size_t>(a.nonZeros());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x = CVector::Zero(b.size());
    return out;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor> acol = a;
  acol.makeCompressed();
  Eigen::UmfPackLU<Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor>> lu;
  // Deterministic single-threaded factorization with AMD/COLAMD ordering.
  lu.compute(acol);
  if (lu.info() != Eigen::Success) {
    throw SingularSystemError("solve_sparse_complex: factorization failed "
                              "(numerically singular matrix)");
  }
  out.report.factor_seconds = seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  out.x = lu.solve(b);
  if (lu.info() != Eigen::Success || !out.x.allFinite()) {
    throw SingularSystemError("solve_sparse_complex: triangular solve failed");
  }
  CVector r = residual(a, out.x, b);
  double rel = r.norm() / bnorm;
  out.report.residual_history.push_back(rel);
  for (int it = 0; it < options.max_refinement && rel > options.tol; ++it) {
    out.x += lu.solve(r);
    r = residual(a, out.x, b);
    rel = r.norm() / bnorm;
    out.report.residual_history.push_back(rel);
  }
  out.report.solve_seconds = seconds_since(t1);
  out.report.relative_residual = rel;
  if (!(rel <= options.tol)) {
    std::ostringstream msg;
    msg << "solve_sparse_complex: relative residual " << rel
        << " above tolerance " << options.tol;
    throw NonConvergenceError(msg.str(), out.report.residual_history);
  }
  return out;
}

}  // namespace helmdg
