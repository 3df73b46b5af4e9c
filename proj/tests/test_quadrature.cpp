#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "helmdg/quadrature.hpp"

using namespace helmdg;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Average of l1^a l2^b l3^c over a triangle: 2 a! b! c! / (a+b+c+2)!.
double exact_average(int a, int b, int c) {
  return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
}

double rule_average(const TriangleRule& r, int a, int b, int c) {
  double s = 0.0;
  for (const auto& q : r.points()) {
    s += q.w * std::pow(q.b[0], a) * std::pow(q.b[1], b) * std::pow(q.b[2], c);
  }
  return s;
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("triangle rules are exact to their degree") {
    for (int d = 1; d <= 6; ++d) {
      const TriangleRule& r = TriangleRule::get(d);
      CHECK(r.degree() >= d);
      double wsum = 0.0;
      for (const auto& q : r.points()) {
        wsum += q.w;
        CHECK(q.b[0] + q.b[1] + q.b[2] == doctest::Approx(1.0).epsilon(1e-15));
      }
      CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
      for (int a = 0; a <= d; ++a) {
        for (int b = 0; a + b <= d; ++b) {
          const int c = d - a - b;
          CAPTURE(d);
          CAPTURE(a);
          CAPTURE(b);
          CHECK(rule_average(r, a, b, c) ==
                doctest::Approx(exact_average(a, b, c)).epsilon(1e-13));
        }
      }
    }
    CHECK_THROWS(TriangleRule::get(7));
  }

  TEST_CASE("composite rules keep exactness") {
    const TriangleRule& r = composite_rule(6, 2);
    CHECK(r.size() == 16 * TriangleRule::get(6).size());
    CHECK(rule_average(r, 3, 2, 1) == doctest::Approx(exact_average(3, 2, 1)).epsilon(1e-13));
    CHECK(&composite_rule(6, 2) == &r);
  }

  TEST_CASE("gauss rules") {
    for (std::size_t n = 1; n <= 8; ++n) {
      const GaussRule& g = GaussRule::get(n);
      CHECK(g.size() == n);
      for (int p = 0; p <= g.degree(); ++p) {
        double s = 0.0;
        for (const auto& q : g.points()) s += q.w * std::pow(q.s, p);
        CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("subdivision levels") {
    const QuadratureSettings q;
    CHECK(subdivision_levels(10.0, 0.05, q) == 0);
    CHECK(subdivision_levels(10.0, 0.2, q) == 1);
    CHECK(subdivision_levels(100.0, 0.35, q) == 6);
    for (double diam : {0.01, 0.1, 0.3, 1.0}) {
      const int l = subdivision_levels(50.0, diam, q);
      if (l < q.max_levels) CHECK(50.0 * diam / std::pow(2.0, l) <= 1.0);
    }
  }
}
