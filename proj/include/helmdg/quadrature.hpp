#ifndef HELMDG_QUADRATURE_HPP
#define HELMDG_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace helmdg {

/// Triangle rule in barycentric coordinates; weights sum to 1 and are
/// multiplied by the triangle area by the caller.
class TriangleRule {
 public:
  struct Node {
    std::array<double, 3> b;
    double w;
  };

  /// Smallest built-in symmetric rule exact to at least `degree` (max 6).
  static const TriangleRule& get(int degree);

  /// `base` applied on each of the 4^levels congruent sub-triangles of a
  /// uniform red refinement.
  static TriangleRule composite(const TriangleRule& base, int levels);

  int degree() const { return degree_; }
  std::span<const Node> points() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  TriangleRule(int degree, std::vector<Node> nodes)
      : degree_(degree), nodes_(std::move(nodes)) {}

  int degree_;
  std::vector<Node> nodes_;
};

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
class GaussRule {
 public:
  struct Node {
    double s;
    double w;
  };

  static const GaussRule& get(std::size_t npoints);

  std::size_t size() const { return nodes_.size(); }
  int degree() const { return int(2 * nodes_.size()) - 1; }
  std::span<const Node> points() const { return nodes_; }

 private:
  explicit GaussRule(std::size_t npoints);

  std::vector<Node> nodes_;
};

/// Quadrature configuration shared by assembly and error evaluation.
struct QuadratureSettings {
  int triangle_degree = 6;
  std::size_t edge_points = 6;
  /// Elements are refined until k * (sub-triangle diameter) <= 1.
  double oscillation_limit = 1.0;
  int max_levels = 6;
};

/// Number of uniform refinement levels needed so that k * h_sub <= limit.
int subdivision_levels(double k, double diameter, const QuadratureSettings& q);

/// Cached composite rule for the configured degree at a given level.
const TriangleRule& composite_rule(int degree, int levels);

}  // namespace helmdg

#endif  // HELMDG_QUADRATURE_HPP
