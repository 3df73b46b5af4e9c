#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include <Eigen/Dense>

#include "helmdg/dg.hpp"

using namespace helmdg;

namespace {

MeshPtr make(MeshKind kind, std::size_t n) {
  return std::make_shared<const TriMesh>(build_mesh(kind, n));
}

double max_abs_diff(const CSparse& a, const CSparse& b) {
  return Eigen::MatrixXcd(a - b).cwiseAbs().maxCoeff();
}

double max_abs_diff(const RSparse& a, const RSparse& b) {
  return Eigen::MatrixXd(a - b).cwiseAbs().maxCoeff();
}

ProblemData constant_data(cplx f, cplx g) {
  ProblemData d;
  d.u = [](Point) { return cplx(0); };
  d.grad_u = [](Point) { return CVec2{}; };
  d.f = [f](Point) { return f; };
  d.g = [g](Point, Point) { return g; };
  return d;
}

}  // namespace

TEST_SUITE("dg") {
  TEST_CASE("unit jump on the N=1 mesh") {
    const TriMesh m = build_mesh(MeshKind::regular, 1);
    const auto sys = assemble_system(m, {10.0, 0.0, 5.0});
    const Edge* interior = nullptr;
    for (const Edge& e : m.edges()) {
      if (!e.is_boundary()) interior = &e;
    }
    REQUIRE(interior);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    for (int i = 0; i < 3; ++i) v[Eigen::Index(3 * interior->tau + i)] = 1.0;
    // gradient and consistency terms vanish; rho0 / h_e * |e| with h_e = |e|
    CHECK(v.dot(sys.stiffness * v) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(v.dot(sys.penalty * v) == doctest::Approx(5.0).epsilon(1e-14));
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(6);
    CHECK(std::abs(one.dot(sys.stiffness * one)) < 1e-13);
    CHECK((sys.stiffness * one).norm() < 1e-13);
  }

  TEST_CASE("matrix splits into S - k^2 M + i k B and is symmetric") {
    for (auto kind : {MeshKind::regular, MeshKind::perturbed}) {
      const TriMesh m = build_mesh(kind, 6);
      for (double mu : {0.0, 1.0, 2.0}) {
        const DGParams p{7.0, mu, 5.0};
        const auto s = assemble_system(m, p);
        CSparse expect = s.stiffness.cast<cplx>() - (p.k * p.k) * s.mass.cast<cplx>() +
                         cplx(0, p.k) * s.boundary_mass.cast<cplx>();
        CHECK(max_abs_diff(s.matrix, expect) <= 1e-12);
        const CSparse at = s.matrix.transpose();
        const double amax = Eigen::MatrixXcd(s.matrix).cwiseAbs().maxCoeff();
        CHECK(max_abs_diff(s.matrix, at) <= 1e-14 * amax);
        for (const RSparse* part : {&s.stiffness, &s.mass, &s.boundary_mass}) {
          const RSparse pt = part->transpose();
          CHECK(max_abs_diff(*part, pt) <= 1e-14 * amax);
        }
      }
    }
  }

  TEST_CASE("mass matrix integrates products") {
    const TriMesh m = build_mesh(MeshKind::chevron, 3);
    const auto s = assemble_system(m, {});
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(Eigen::Index(3 * m.num_triangles()));
    CHECK(one.dot(s.mass * one) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(one.dot(s.boundary_mass * one) == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("penalty block scales with rho0") {
    const TriMesh m = build_mesh(MeshKind::perturbed, 4);
    for (double mu : {0.0, 1.0}) {
      const auto a5 = assemble_system(m, {10.0, mu, 5.0});
      const auto a10 = assemble_system(m, {10.0, mu, 10.0});
      const RSparse diff = a10.stiffness - a5.stiffness;
      CHECK(max_abs_diff(diff, a5.penalty) <= 1e-12);
      CHECK(max_abs_diff(a10.penalty, RSparse(2.0 * a5.penalty)) <= 1e-12);
    }
  }

  TEST_CASE("penalty energy matches the penalty block") {
    const MeshPtr m = make(MeshKind::perturbed, 5);
    const DGParams p{10.0, 1.0, 5.0};
    const auto s = assemble_system(*m, p);
    std::mt19937_64 gen(3);
    std::normal_distribution<double> n01;
    CVector c(Eigen::Index(3 * m->num_triangles()));
    for (auto& x : c) x = cplx(n01(gen), n01(gen));
    const DGFunction v(m, c);
    const double quad = (c.adjoint() * s.penalty.cast<cplx>() * c)(0).real();
    CHECK(penalty_energy(v, p) == doctest::Approx(quad).epsilon(1e-12));
  }

  TEST_CASE("flipping the orientation of an edge leaves A unchanged") {
    const TriMesh m = build_mesh(MeshKind::perturbed, 4);
    const DGParams p{10.0, 1.0, 5.0};
    const auto base = assemble_system(m, p);
    for (std::size_t e = 0; e < m.num_edges(); ++e) {
      if (m.edge(e).is_boundary()) continue;
      const auto flipped = assemble_system(m.with_flipped_edge(e), p);
      CHECK(max_abs_diff(base.matrix, flipped.matrix) <= 1e-13);
    }
  }

  TEST_CASE("stiffness is positive semidefinite at rho0 = 5") {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n01;
    for (auto kind : {MeshKind::regular, MeshKind::chevron, MeshKind::perturbed}) {
      const TriMesh m = build_mesh(kind, 4);
      for (double mu : {0.0, 1.0, 2.0}) {
        const auto s = assemble_system(m, {10.0, mu, 5.0});
        for (int trial = 0; trial < 1000; ++trial) {
          Eigen::VectorXd v(s.stiffness.rows());
          for (auto& x : v) x = n01(gen);
          CHECK(v.dot(s.stiffness * v) > 0.0);
        }
      }
    }
  }

  TEST_CASE("rhs on a single triangle") {
    const TriMesh m({{0, 0}, {2, 0}, {0, 1}}, {{0, 1, 2}});
    const CVector b = assemble_rhs(m, 1.0, constant_data(1.0, 0.0));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(b[i] - 1.0 / 3.0) < 1e-15);
    const CVector g = assemble_rhs(m, 1.0, constant_data(0.0, cplx(0, 1)));
    // edge lengths 2, sqrt 5, 1; each edge splits evenly between its ends
    const double l0 = 2.0, l1 = std::sqrt(5.0), l2 = 1.0;
    CHECK(std::abs(g[0] - cplx(0, 0.5 * (l0 + l2))) < 1e-14);
    CHECK(std::abs(g[1] - cplx(0, 0.5 * (l0 + l1))) < 1e-14);
    CHECK(std::abs(g[2] - cplx(0, 0.5 * (l1 + l2))) < 1e-14);
  }

  TEST_CASE("boundary data only reaches boundary dofs") {
    const TriMesh m = build_mesh(MeshKind::regular, 4);
    const CVector b = assemble_rhs(m, 1.0, constant_data(0.0, 1.0));
    CHECK(std::abs(b.sum() - 4.0) < 1e-13);
    for (std::size_t t = 0; t < m.num_triangles(); ++t) {
      const auto& tri = m.triangle(t);
      for (int i = 0; i < 3; ++i) {
        if (!m.is_boundary_vertex(tri[std::size_t(i)])) {
          CHECK(b[Eigen::Index(3 * t + i)] == cplx(0));
        }
      }
    }
  }

  TEST_CASE("linear solutions are reproduced") {
    for (auto kind : {MeshKind::regular, MeshKind::perturbed}) {
      const MeshPtr m = make(kind, 8);
      for (double mu : {0.0, 1.0}) {
        const LinearSolution exact(3.0, cplx(1, 2), cplx(-0.5, 0.25), cplx(2, -1));
        const auto sol = solve_helmholtz(m, {3.0, mu, 5.0}, exact.data());
        double worst = 0.0;
        for (std::size_t t = 0; t < m->num_triangles(); ++t) {
          for (std::size_t i = 0; i < 3; ++i) {
            const Point z = m->vertex(m->triangle(t)[i]);
            worst = std::max(worst, std::abs(sol.uh.node_value(t, i) - exact.u(z)));
          }
        }
        CHECK(worst <= 1e-10);
      }
    }
  }

  TEST_CASE("zero data") {
    const MeshPtr m = make(MeshKind::perturbed, 4);
    const ProblemData z = constant_data(0.0, 0.0);
    CHECK(assemble_rhs(*m, 5.0, z).norm() == 0.0);
    CHECK(solve_helmholtz(m, {5.0, 0.0, 5.0}, z).uh.coeffs().norm() == 0.0);
  }

  TEST_CASE("superposition") {
    const MeshPtr m = make(MeshKind::chevron, 4);
    const DGParams p{6.0, 0.0, 5.0};
    const ProblemData a = constant_data(1.0, 0.0);
    const ProblemData b = constant_data(0.0, cplx(0, 1));
    const ProblemData ab = constant_data(2.0, cplx(0, 1));
    const auto ua = solve_helmholtz(m, p, a).uh.coeffs();
    const auto ub = solve_helmholtz(m, p, b).uh.coeffs();
    const auto uab = solve_helmholtz(m, p, ab).uh.coeffs();
    CHECK((uab - (2.0 * ua + ub)).norm() <= 1e-9 * uab.norm());
  }

  TEST_CASE("parameter checks") {
    const TriMesh m = build_mesh(MeshKind::regular, 2);
    CHECK_THROWS_AS(assemble_system(m, {10.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(assemble_system(m, {10.0, -1.0, 5.0}), std::invalid_argument);
    const MeshPtr p = make(MeshKind::regular, 2);
    CHECK_THROWS_AS(DGFunction(p, CVector::Zero(5)), std::invalid_argument);
    CHECK_THROWS_AS(CGFunction(p, CVector::Zero(5)), std::invalid_argument);
  }

  TEST_CASE("system dump is sorted") {
    const auto s = assemble_system(build_mesh(MeshKind::regular, 1), {});
    std::ostringstream out;
    write_system(out, s.matrix);
    std::istringstream in(out.str());
    long pi = -1, pj = -1, i = 0, j = 0;
    double re = 0, im = 0;
    int lines = 0;
    while (in >> i >> j >> re >> im) {
      CHECK((i > pi || (i == pi && j > pj)));
      pi = i;
      pj = j;
      ++lines;
    }
    CHECK(lines == s.matrix.nonZeros());
  }
}
