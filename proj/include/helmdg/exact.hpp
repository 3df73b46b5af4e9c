#ifndef HELMDG_EXACT_HPP
#define HELMDG_EXACT_HPP

#include <array>
#include <complex>
#include <functional>

#include "helmdg/mesh.hpp"

namespace helmdg {

using cplx = std::complex<double>;

/// Complex 2-vector.
struct CVec2 {
  cplx x;
  cplx y;
};

inline cplx dot(CVec2 a, Point n) { return a.x * n.x + a.y * n.y; }

/// Bessel function of the first kind, order 0 or 1, for 0 <= x <= 300.
double bessel_j(int order, double x);
double bessel_j0(double x);
double bessel_j1(double x);

struct ExactValues {
  cplx u;
  CVec2 grad_u;
  cplx f;
};

/// Field callbacks consumed by the discretization: value, gradient, source
/// f = -Laplace(u) - k^2 u, and boundary data g = du/dn + i k u.
struct ProblemData {
  std::function<cplx(Point)> u;
  std::function<CVec2(Point)> grad_u;
  std::function<cplx(Point)> f;
  std::function<cplx(Point, Point)> g;
};

/// u = cos(k r)/r - (cos k + i sin k) / (k (J0(k) + i J1(k))) J0(k r), with
/// r the distance to the origin.
class BesselSolution {
 public:
  explicit BesselSolution(double k);

  double k() const { return k_; }
  cplx coefficient() const { return coeff_; }

  ExactValues evaluate(Point p) const;
  cplx u(Point p) const;
  CVec2 grad_u(Point p) const;
  cplx f(Point p) const;
  /// Robin data for the unit outward normal n.
  cplx g(Point p, Point n) const;

  ProblemData data() const;

 private:
  double radius(Point p) const;

  double k_;
  cplx coeff_;
};

/// Global linear solution u = c0 + cx x + cy y with f = -k^2 u; it lies in
/// the discrete space, so the scheme must reproduce it.
class LinearSolution {
 public:
  LinearSolution(double k, cplx c0, cplx cx, cplx cy)
      : k_(k), c_{c0, cx, cy} {}

  cplx u(Point p) const { return c_[0] + c_[1] * p.x + c_[2] * p.y; }
  CVec2 grad_u(Point) const { return {c_[1], c_[2]}; }
  cplx f(Point p) const { return -k_ * k_ * u(p); }
  cplx g(Point p, Point n) const {
    return dot(grad_u(p), n) + cplx(0.0, k_) * u(p);
  }

  ProblemData data() const;

 private:
  double k_;
  std::array<cplx, 3> c_;
};

}  // namespace helmdg

#endif  // HELMDG_EXACT_HPP
