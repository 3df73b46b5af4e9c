#include "helmdg/mesh_condition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "helmdg/quadrature.hpp"

namespace helmdg {

namespace {

double signed_area(const std::array<Point, 3>& tri) {
  return 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
}

// Edge i runs from vertex i+1 to vertex i+2 (counterclockwise).
std::array<double, 3> edge_lengths(const std::array<Point, 3>& tri) {
  std::array<double, 3> len{};
  for (std::size_t i = 0; i < 3; ++i) {
    len[i] = norm(tri[(i + 2) % 3] - tri[(i + 1) % 3]);
  }
  return len;
}

}  // namespace

EdgeCoefficients edge_coefficients(const std::array<Point, 3>& tri) {
  const double area = signed_area(tri);
  if (!(area > 0.0)) {
    throw std::invalid_argument("edge_coefficients: degenerate or clockwise "
                                "triangle");
  }
  const auto len = edge_lengths(tri);
  EdgeCoefficients out;
  for (std::size_t i = 0; i < 3; ++i) {
    const Point a = tri[(i + 1) % 3] - tri[i];
    const Point b = tri[(i + 2) % 3] - tri[i];
    const double cot = dot(a, b) / cross(a, b);
    const double next = len[(i + 1) % 3];
    const double prev = len[(i + 2) % 3];
    out.beta[i] = cot * (next * next - prev * prev) / 12.0;
    out.gamma[i] = cot * area / 3.0;
  }
  return out;
}

MeshConditionReport measure_mesh_condition(const TriMesh& mesh) {
  MeshConditionReport rep;
  rep.h = mesh.h();
  std::vector<EdgeCoefficients> coeffs(mesh.num_triangles());
  std::vector<std::array<double, 3>> lengths(mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    coeffs[t] = edge_coefficients(mesh.corners(t));
    lengths[t] = edge_lengths(mesh.corners(t));
  }
  auto local_edge = [&](std::size_t t, std::size_t e) {
    const auto& te = mesh.triangle_edges(t);
    return static_cast<std::size_t>(std::find(te.begin(), te.end(), e) -
                                    te.begin());
  };

  double sum_par = 0.0;
  double sum_iso = 0.0;
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    const std::size_t t = edge.tau;
    const std::size_t i = local_edge(t, e);
    const double next = lengths[t][(i + 1) % 3];
    const double prev = lengths[t][(i + 2) % 3];
    if (edge.is_boundary()) {
      const double d = std::abs(next - prev);
      rep.boundary_edges.push_back(e);
      rep.isosceles_defect.push_back(d);
      rep.beta_boundary.push_back(coeffs[t].beta[i]);
      rep.gamma_boundary.push_back(coeffs[t].gamma[i]);
      rep.max_isosceles_defect = std::max(rep.max_isosceles_defect, d);
      sum_iso += d;
      continue;
    }
    const std::size_t tp = *edge.tau_prime;
    const std::size_t ip = local_edge(tp, e);
    const double next_p = lengths[tp][(ip + 1) % 3];
    const double prev_p = lengths[tp][(ip + 2) % 3];
    const double d = std::abs(prev - prev_p) + std::abs(next - next_p);
    rep.interior_edges.push_back(e);
    rep.parallelogram_defect.push_back(d);
    rep.beta_tau.push_back(coeffs[t].beta[i]);
    rep.beta_tau_prime.push_back(coeffs[tp].beta[ip]);
    rep.gamma_tau.push_back(coeffs[t].gamma[i]);
    rep.gamma_tau_prime.push_back(coeffs[tp].gamma[ip]);
    rep.max_parallelogram_defect = std::max(rep.max_parallelogram_defect, d);
    rep.max_beta_mismatch = std::max(
        rep.max_beta_mismatch, std::abs(coeffs[t].beta[i] - coeffs[tp].beta[ip]));
    sum_par += d;
  }
  if (!rep.interior_edges.empty()) {
    rep.mean_parallelogram_defect = sum_par / double(rep.interior_edges.size());
  }
  if (!rep.boundary_edges.empty()) {
    rep.mean_isosceles_defect = sum_iso / double(rep.boundary_edges.size());
  }
  return rep;
}

namespace {

// Slope of log(defect) against log(h); nullopt when every defect vanishes.
std::optional<double> fit_slope(std::span<const MeshConditionReport> family,
                                double (*defect)(const MeshConditionReport&)) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& r : family) {
    const double d = defect(r);
    if (d < kExactDefect) continue;
    const double x = std::log(r.h);
    const double y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n == 0) return std::nullopt;
  if (n < 2) {
    throw std::invalid_argument("estimate_alpha: too few meshes with a "
                                "nonzero defect");
  }
  const double dn = double(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

AlphaEstimate estimate_alpha(std::span<const MeshConditionReport> family) {
  if (family.size() < 3) {
    throw std::invalid_argument("estimate_alpha: need at least three meshes");
  }
  AlphaEstimate out;
  const auto par = fit_slope(family, [](const MeshConditionReport& r) {
    return r.max_parallelogram_defect;
  });
  const auto iso = fit_slope(family, [](const MeshConditionReport& r) {
    return r.max_isosceles_defect;
  });
  if (par) out.interior = *par - 1.0;
  if (iso) out.boundary = *iso - 1.0;
  if (!par && !iso) {
    out.exact = true;
    return out;
  }
  out.slope = std::min(par.value_or(HUGE_VAL), iso.value_or(HUGE_VAL));
  out.alpha = out.slope - 1.0;
  return out;
}

double Quadratic::operator()(Point p) const {
  return c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x +
         c[4] * p.x * p.y + c[5] * p.y * p.y;
}

Point Quadratic::gradient(Point p) const {
  return {c[1] + 2.0 * c[3] * p.x + c[4] * p.y,
          c[2] + c[4] * p.x + 2.0 * c[5] * p.y};
}

double verify_fundamental_identity(const std::array<Point, 3>& tri,
                                   const Quadratic& phi, const Linear& v) {
  const double area = signed_area(tri);
  if (!(area > 0.0)) {
    throw std::invalid_argument("verify_fundamental_identity: degenerate or "
                                "clockwise triangle");
  }

  // Left side: integral of grad(phi - phi_I) . grad(v) over the triangle.
  const Point e1 = tri[1] - tri[0];
  const Point e2 = tri[2] - tri[0];
  const double f1 = phi(tri[1]) - phi(tri[0]);
  const double f2 = phi(tri[2]) - phi(tri[0]);
  const double det = cross(e1, e2);
  const Point grad_interp{(f1 * e2.y - f2 * e1.y) / det,
                          (e1.x * f2 - e2.x * f1) / det};
  const auto& rule = TriangleRule::get(2);
  double lhs = 0.0;
  const Point gv = v.gradient();
  for (const auto& q : rule.points()) {
    const Point p = q.b[0] * tri[0] + q.b[1] * tri[1] + q.b[2] * tri[2];
    lhs += q.w * area * dot(phi.gradient(p) - grad_interp, gv);
  }

  // Right side: tangential/normal second derivatives along each edge.
  const double hxx = 2.0 * phi.c[3];
  const double hxy = phi.c[4];
  const double hyy = 2.0 * phi.c[5];
  auto hess = [&](Point a, Point b) {
    return a.x * (hxx * b.x + hxy * b.y) + a.y * (hxy * b.x + hyy * b.y);
  };
  const auto coeffs = edge_coefficients(tri);
  const auto& edge_rule = GaussRule::get(2);
  double rhs = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const Point a = tri[(i + 1) % 3];
    const Point b = tri[(i + 2) % 3];
    const double len = norm(b - a);
    // Clockwise tangent and inward normal; with the counterclockwise pair
    // both sides differ by a sign.
    const Point t = (1.0 / len) * (a - b);
    const Point n{t.y, -t.x};
    for (const auto& q : edge_rule.points()) {
      const double integrand =
          (coeffs.beta[i] * hess(t, t) + coeffs.gamma[i] * hess(t, n)) *
          dot(gv, t);
      rhs += q.w * len * integrand;
    }
  }
  return std::abs(lhs - rhs);
}

}  // namespace helmdg
