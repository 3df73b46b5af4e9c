#include "helmdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace helmdg {

namespace {

using Node = TriangleRule::Node;

void add_orbit3(std::vector<Node>& nodes, double a, double w) {
  const double b = 0.5 * (1.0 - a);
  nodes.push_back({{a, b, b}, w});
  nodes.push_back({{b, a, b}, w});
  nodes.push_back({{b, b, a}, w});
}

void add_orbit6(std::vector<Node>& nodes, double a, double b, double w) {
  const double c = 1.0 - a - b;
  nodes.push_back({{a, b, c}, w});
  nodes.push_back({{a, c, b}, w});
  nodes.push_back({{b, a, c}, w});
  nodes.push_back({{b, c, a}, w});
  nodes.push_back({{c, a, b}, w});
  nodes.push_back({{c, b, a}, w});
}

}  // namespace

const TriangleRule& TriangleRule::get(int degree) {
  // Symmetric Dunavant rules.
  static const TriangleRule centroid(1, {{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0}});
  static const TriangleRule deg2 = [] {
    std::vector<Node> n;
    add_orbit3(n, 2.0 / 3.0, 1.0 / 3.0);
    return TriangleRule(2, std::move(n));
  }();
  static const TriangleRule deg4 = [] {
    std::vector<Node> n;
    add_orbit3(n, 0.108103018168070, 0.223381589678011);
    add_orbit3(n, 0.816847572980459, 0.109951743655322);
    return TriangleRule(4, std::move(n));
  }();
  static const TriangleRule deg6 = [] {
    std::vector<Node> n;
    add_orbit3(n, 0.501426509658179, 0.116786275726379);
    add_orbit3(n, 0.873821971016996, 0.050844906370207);
    add_orbit6(n, 0.053145049844817, 0.310352451033784, 0.082851075618374);
    return TriangleRule(6, std::move(n));
  }();
  if (degree <= 1) return centroid;
  if (degree == 2) return deg2;
  if (degree <= 4) return deg4;
  if (degree <= 6) return deg6;
  throw std::invalid_argument("TriangleRule: degree above 6 not available");
}

TriangleRule TriangleRule::composite(const TriangleRule& base, int levels) {
  if (levels < 0) throw std::invalid_argument("composite: negative levels");
  // Sub-triangles as barycentric corner triples of the parent.
  using Tri = std::array<std::array<double, 3>, 3>;
  std::vector<Tri> tris{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
  for (int l = 0; l < levels; ++l) {
    std::vector<Tri> next;
    next.reserve(tris.size() * 4);
    auto mid = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
      return std::array<double, 3>{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]),
                                   0.5 * (a[2] + b[2])};
    };
    for (const Tri& t : tris) {
      const auto m01 = mid(t[0], t[1]);
      const auto m12 = mid(t[1], t[2]);
      const auto m20 = mid(t[2], t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m12, m20, m01});
    }
    tris = std::move(next);
  }
  const double scale = 1.0 / double(tris.size());
  std::vector<Node> nodes;
  nodes.reserve(tris.size() * base.size());
  for (const Tri& t : tris) {
    for (const Node& q : base.points()) {
      Node out{{0, 0, 0}, q.w * scale};
      for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < 3; ++j) out.b[j] += q.b[c] * t[c][j];
      }
      nodes.push_back(out);
    }
  }
  return TriangleRule(base.degree(), std::move(nodes));
}

GaussRule::GaussRule(std::size_t npoints) {
  if (npoints == 0) throw std::invalid_argument("GaussRule: zero points");
  nodes_.resize(npoints);
  const std::size_t n = npoints;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) /
                          double(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map from [-1, 1] to [0, 1].
    nodes_[i] = {0.5 * (1.0 - x), 0.5 * w};
    nodes_[n - 1 - i] = {0.5 * (1.0 + x), 0.5 * w};
  }
}

const GaussRule& GaussRule::get(std::size_t npoints) {
  static std::mutex lock;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard guard(lock);
  auto it = cache.find(npoints);
  if (it == cache.end()) it = cache.emplace(npoints, GaussRule(npoints)).first;
  return it->second;
}

int subdivision_levels(double k, double diameter, const QuadratureSettings& q) {
  int levels = 0;
  double hsub = diameter;
  while (k * hsub > q.oscillation_limit && levels < q.max_levels) {
    hsub *= 0.5;
    ++levels;
  }
  return levels;
}

const TriangleRule& composite_rule(int degree, int levels) {
  static std::mutex lock;
  static std::map<std::pair<int, int>, TriangleRule> cache;
  std::lock_guard guard(lock);
  const auto key = std::make_pair(degree, levels);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, TriangleRule::composite(TriangleRule::get(degree), levels))
             .first;
  }
  return it->second;
}

}  // namespace helmdg
