#include "helmdg/exact.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace helmdg {

namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticStart = 25.0;

// Power series; long double keeps the cancellation error below 1e-17 for
// x <= 8.
double series(int order, double x) {
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = order == 0 ? 1.0L : half;
  long double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * (m + order));
    sum += term;
    if (std::fabs(term) < 1e-22L) break;
  }
  return static_cast<double>(sum);
}

// Miller's backward recurrence normalised by J0 + 2 sum J_2k = 1.
double backward_recurrence(int order, double x) {
  const long double lx = x;
  int start = static_cast<int>(x) + 40;
  if (start % 2 != 0) ++start;
  long double next = 0.0L;  // J_{n+1}
  long double cur = 1e-300L;  // J_n
  long double norm_sum = 0.0L;
  long double j0 = 0.0L;
  long double j1 = 0.0L;
  for (int n = start; n >= 1; --n) {
    const long double prev = (2.0L * n / lx) * cur - next;  // J_{n-1}
    next = cur;
    cur = prev;
    if (n - 1 == 1) j1 = cur;
    if (n - 1 == 0) j0 = cur;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm_sum += 2.0L * cur;
    if (std::fabs(cur) > 1e300L) {
      cur *= 1e-300L;
      next *= 1e-300L;
      norm_sum *= 1e-300L;
      j1 *= 1e-300L;
      j0 *= 1e-300L;
    }
  }
  norm_sum += j0;
  return static_cast<double>((order == 0 ? j0 : j1) / norm_sum);
}

// Hankel asymptotic expansion; the phase is formed from cos(x), sin(x) to
// avoid the rounding of x - (2 nu + 1) pi / 4 at large x.
double asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * eight_x);
    if (k % 2 == 1) {
      q += ((k / 2) % 2 == 0 ? term : -term);
    } else {
      p += ((k / 2) % 2 == 0 ? term : -term);
    }
    if (k >= 8 && std::abs(term) < 1e-18) break;
  }
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double r = std::numbers::sqrt2 / 2.0;
  double cos_chi = 0.0;
  double sin_chi = 0.0;
  if (order == 0) {  // chi = x - pi/4
    cos_chi = r * (c + s);
    sin_chi = r * (s - c);
  } else {  // chi = x - 3 pi/4
    cos_chi = r * (s - c);
    sin_chi = -r * (s + c);
  }
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) {
    throw std::invalid_argument("bessel_j: only orders 0 and 1 are supported");
  }
  if (!(x >= 0.0) || x > 300.0) {
    throw std::invalid_argument("bessel_j: argument " + std::to_string(x) +
                                " outside the validated range [0, 300]");
  }
  if (x <= kSeriesLimit) return series(order, x);
  if (x <= kAsymptoticStart) return backward_recurrence(order, x);
  return asymptotic(order, x);
}

double bessel_j0(double x) { return bessel_j(0, x); }
double bessel_j1(double x) { return bessel_j(1, x); }

BesselSolution::BesselSolution(double k) : k_(k) {
  if (!(k > 0.0)) throw std::invalid_argument("BesselSolution: k must be > 0");
  const cplx phase(std::cos(k), std::sin(k));
  const cplx denom = k * cplx(bessel_j0(k), bessel_j1(k));
  coeff_ = phase / denom;
}

double BesselSolution::radius(Point p) const {
  const double r = norm(p);
  if (r < 0.1) {
    throw std::invalid_argument("BesselSolution: radius below 0.1 is too close "
                                "to the singularity at the origin");
  }
  return r;
}

ExactValues BesselSolution::evaluate(Point p) const {
  const double r = radius(p);
  const double kr = k_ * r;
  const double c = std::cos(kr);
  const double s = std::sin(kr);
  const double j0 = bessel_j0(kr);
  const double j1 = bessel_j1(kr);
  ExactValues out;
  out.u = c / r - coeff_ * j0;
  const cplx du = -k_ * s / r - c / (r * r) + coeff_ * (k_ * j1);
  out.grad_u = {du * (p.x / r), du * (p.y / r)};
  // The J0(kr) part solves the homogeneous equation.
  out.f = -k_ * s / (r * r) - c / (r * r * r);
  return out;
}

cplx BesselSolution::u(Point p) const {
  const double r = radius(p);
  return std::cos(k_ * r) / r - coeff_ * bessel_j0(k_ * r);
}

CVec2 BesselSolution::grad_u(Point p) const { return evaluate(p).grad_u; }

cplx BesselSolution::f(Point p) const {
  const double r = radius(p);
  const double kr = k_ * r;
  return -k_ * std::sin(kr) / (r * r) - std::cos(kr) / (r * r * r);
}

cplx BesselSolution::g(Point p, Point n) const {
  const ExactValues v = evaluate(p);
  return dot(v.grad_u, n) + cplx(0.0, k_) * v.u;
}

ProblemData BesselSolution::data() const {
  const BesselSolution self = *this;
  return {[self](Point p) { return self.u(p); },
          [self](Point p) { return self.grad_u(p); },
          [self](Point p) { return self.f(p); },
          [self](Point p, Point n) { return self.g(p, n); }};
}

ProblemData LinearSolution::data() const {
  const LinearSolution self = *this;
  return {[self](Point p) { return self.u(p); },
          [self](Point p) { return self.grad_u(p); },
          [self](Point p) { return self.f(p); },
          [self](Point p, Point n) { return self.g(p, n); }};
}

}  // namespace helmdg
