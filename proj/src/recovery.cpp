#include "helmdg/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

namespace helmdg {

std::string to_string(LambdaPolicy policy) {
  return policy == LambdaPolicy::first ? "first" : "average";
}

LambdaPolicy lambda_policy_from_string(const std::string& name) {
  if (name == "first") return LambdaPolicy::first;
  if (name == "average") return LambdaPolicy::average;
  throw std::invalid_argument("unknown lambda policy '" + name + "'");
}

std::vector<double> lambda_weights(const TriMesh& mesh, std::size_t z,
                                   LambdaPolicy policy) {
  const std::size_t n = mesh.patch(z).size();
  std::vector<double> w(n, 0.0);
  if (policy == LambdaPolicy::first) {
    w[0] = 1.0;
  } else {
    std::fill(w.begin(), w.end(), 1.0 / double(n));
  }
  return w;
}

CGFunction dg_to_cg(const DGFunction& uh, LambdaPolicy policy) {
  const TriMesh& mesh = uh.mesh();
  CGFunction out(uh.mesh_ptr());
  for (std::size_t z = 0; z < mesh.num_vertices(); ++z) {
    const auto patch = mesh.patch(z);
    const auto w = lambda_weights(mesh, z, policy);
    cplx value = 0.0;
    for (std::size_t j = 0; j < patch.size(); ++j) {
      if (w[j] == 0.0) continue;
      value += w[j] * uh.node_value(patch[j], mesh.local_index(patch[j], z));
    }
    out.coeffs()[Eigen::Index(z)] = value;
  }
  return out;
}

namespace {

std::vector<std::size_t> grow(const TriMesh& mesh,
                              const std::vector<std::size_t>& nodes) {
  std::set<std::size_t> out(nodes.begin(), nodes.end());
  for (std::size_t v : nodes) {
    for (std::size_t t : mesh.patch(v)) {
      const auto& tri = mesh.triangle(t);
      out.insert(tri.begin(), tri.end());
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace

RecoveryOperator::RecoveryOperator(MeshPtr mesh, const RecoveryOptions& options)
    : mesh_(std::move(mesh)) {
  const TriMesh& m = *mesh_;
  const std::size_t nv = m.num_vertices();
  patches_.resize(nv);
  weights_x_.resize(nv);
  weights_y_.resize(nv);

  for (std::size_t z = 0; z < nv; ++z) {
    std::vector<std::size_t> ring = grow(m, {z});
    int growth = 0;
    for (;;) {
      // Center first, then ascending vertex index.
      std::vector<std::size_t> nodes{z};
      for (std::size_t v : ring) {
        if (v != z) nodes.push_back(v);
      }
      const Point center = m.vertex(z);
      double scale = 0.0;
      for (std::size_t v : nodes) scale = std::max(scale, norm(m.vertex(v) - center));

      bool ok = nodes.size() >= options.min_nodes && scale > 0.0;
      Eigen::MatrixXd design;
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
      double cond = 0.0;
      if (ok) {
        design.resize(Eigen::Index(nodes.size()), 6);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          const Point p = (1.0 / scale) * (m.vertex(nodes[j]) - center);
          design.row(Eigen::Index(j)) << 1.0, p.x, p.y, p.x * p.x, p.x * p.y,
              p.y * p.y;
        }
        qr.setThreshold(options.rank_tol);
        qr.compute(design);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
        const auto& sv = svd.singularValues();
        cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                       : std::numeric_limits<double>::infinity();
        ok = qr.rank() == 6 && cond <= options.max_condition;
      }
      if (ok) {
        // Rows 1 and 2 of the pseudo-inverse give d/dx, d/dy at the center.
        const Eigen::MatrixXd pinv = qr.solve(
            Eigen::MatrixXd::Identity(Eigen::Index(nodes.size()),
                                      Eigen::Index(nodes.size())));
        auto& wx = weights_x_[z];
        auto& wy = weights_y_[z];
        wx.resize(nodes.size());
        wy.resize(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          wx[j] = pinv(1, Eigen::Index(j)) / scale;
          wy[j] = pinv(2, Eigen::Index(j)) / scale;
        }
        patches_[z] = {z, std::move(nodes), scale, growth, cond};
        break;
      }
      if (growth >= options.max_growth) {
        throw std::runtime_error("RecoveryOperator: vertex " + std::to_string(z) +
                                 " has no unisolvent sampling patch after " +
                                 std::to_string(options.max_growth) +
                                 " growth layers");
      }
      ring = grow(m, ring);
      ++growth;
    }
  }
}

RecoveredGradient RecoveryOperator::apply(const CGFunction& w) const {
  if (&w.mesh() != mesh_.get()) {
    throw std::invalid_argument("RecoveryOperator: field lives on another mesh");
  }
  RecoveredGradient out{CGFunction(mesh_), CGFunction(mesh_)};
  const CVector& values = w.coeffs();
  for (std::size_t z = 0; z < patches_.size(); ++z) {
    const auto& nodes = patches_[z].nodes;
    cplx gx = 0.0;
    cplx gy = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const cplx v = values[Eigen::Index(nodes[j])];
      gx += weights_x_[z][j] * v;
      gy += weights_y_[z][j] * v;
    }
    out.x.coeffs()[Eigen::Index(z)] = gx;
    out.y.coeffs()[Eigen::Index(z)] = gy;
  }
  return out;
}

RecoveredGradient RecoveryOperator::apply(const DGFunction& uh,
                                          LambdaPolicy policy) const {
  return apply(dg_to_cg(uh, policy));
}

RecoveredGradient recover_gradient(const DGFunction& uh, LambdaPolicy policy,
                                   const RecoveryOptions& options) {
  return RecoveryOperator(uh.mesh_ptr(), options).apply(uh, policy);
}

RecoveredGradient prolongate(const RecoveredGradient& coarse,
                             const MeshPtr& fine) {
  const TriMesh& cmesh = coarse.x.mesh();
  if (!is_nested(cmesh, *fine)) {
    throw std::invalid_argument("prolongate: meshes are not nested");
  }
  const PointLocator locator(cmesh);
  RecoveredGradient out{CGFunction(fine), CGFunction(fine)};
  for (std::size_t v = 0; v < fine->num_vertices(); ++v) {
    const auto hit = locator.locate(fine->vertex(v));
    if (!hit) {
      throw std::invalid_argument("prolongate: fine vertex outside the coarse "
                                  "mesh");
    }
    out.x.coeffs()[Eigen::Index(v)] = coarse.x.value(hit->triangle, hit->bary);
    out.y.coeffs()[Eigen::Index(v)] = coarse.y.value(hit->triangle, hit->bary);
  }
  return out;
}

RecoveredGradient richardson_extrapolate(const RecoveredGradient& coarse,
                                         const RecoveredGradient& fine) {
  const MeshPtr& fmesh = fine.x.mesh_ptr();
  const RecoveredGradient ci = prolongate(coarse, fmesh);
  RecoveredGradient out{
      CGFunction(fmesh, (4.0 * fine.x.coeffs() - ci.x.coeffs()) / 3.0),
      CGFunction(fmesh, (4.0 * fine.y.coeffs() - ci.y.coeffs()) / 3.0)};
  return out;
}

double error_estimator(const DGFunction& uh, const RecoveredGradient& g) {
  if (&uh.mesh() != &g.x.mesh() || &uh.mesh() != &g.y.mesh()) {
    throw std::invalid_argument("error_estimator: mismatched meshes");
  }
  const TriMesh& mesh = uh.mesh();
  const auto& rule = TriangleRule::get(6);
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const CVec2 grad = uh.gradient(t);
    double local = 0.0;
    for (const auto& q : rule.points()) {
      const CVec2 gv = g.value(t, q.b);
      local += q.w * (std::norm(gv.x - grad.x) + std::norm(gv.y - grad.y));
    }
    total += local * mesh.area(t);
  }
  return std::sqrt(total);
}

}  // namespace helmdg
