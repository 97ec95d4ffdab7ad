#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "boltz/mesh_basis.hpp"

using namespace boltz;

TEST_CASE("gauss_legendre_unit small rules") {
  auto r1 = gauss_legendre_unit(1);
  CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  auto r2 = gauss_legendre_unit(2);
  const double h = 1.0 / (2.0 * std::sqrt(3.0));
  CHECK(std::abs(r2.nodes[0] - (0.5 - h)) < 1e-15);
  CHECK(std::abs(r2.nodes[1] - (0.5 + h)) < 1e-15);
  CHECK(std::abs(r2.weights[0] - 0.5) < 1e-15);
  CHECK(std::abs(r2.weights[1] - 0.5) < 1e-15);

  auto r3 = gauss_legendre_unit(3);
  const double g = 0.5 * std::sqrt(3.0 / 5.0);
  CHECK(std::abs(r3.nodes[0] - (0.5 - g)) < 1e-15);
  CHECK(std::abs(r3.nodes[1] - 0.5) < 1e-15);
  CHECK(std::abs(r3.nodes[2] - (0.5 + g)) < 1e-15);
  CHECK(std::abs(r3.weights[0] - 5.0 / 18.0) < 1e-15);
  CHECK(std::abs(r3.weights[1] - 8.0 / 18.0) < 1e-15);
  CHECK(std::abs(r3.weights[2] - 5.0 / 18.0) < 1e-15);

  CHECK_THROWS_AS(gauss_legendre_unit(0), std::invalid_argument);
}

TEST_CASE("nodal basis invariants") {
  for (int k = 0; k <= 8; ++k) {
    NodalBasis basis(k);
    double wsum = 0.0;
    for (int q = 0; q <= k; ++q) {
      wsum += basis.weight(q);
      CHECK(basis.weight(q) > 0.0);
      CHECK(basis.node(q) > 0.0);
      CHECK(basis.node(q) < 1.0);
      CHECK(std::abs(basis.node(q) + basis.node(k - q) - 1.0) < 1e-14);
      if (q > 0) CHECK(basis.node(q) > basis.node(q - 1));
      for (int p = 0; p <= k; ++p) {
        CHECK(std::abs(basis.lagrange_eval(p, basis.node(q)) - (p == q ? 1.0 : 0.0)) < 1e-13);
      }
    }
    CHECK(std::abs(wsum - 1.0) < 1e-14);
  }
}

TEST_CASE("lagrange_eval cardinal values and range check") {
  NodalBasis basis(2);
  CHECK(lagrange_eval(basis, 1, basis.node(1)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(lagrange_eval(basis, 0, basis.node(2))) < 1e-14);
  double sum = 0.0;
  for (int p = 0; p <= 2; ++p) sum += lagrange_eval(basis, p, 0.3);
  CHECK(std::abs(sum - 1.0) < 1e-14);
  CHECK_THROWS_AS(lagrange_eval(basis, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lagrange_eval(basis, -1, 0.5), std::invalid_argument);
}

TEST_CASE("partition of unity at random points including extrapolation") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> s_dist(-1.0, 2.0);
  for (int k = 1; k <= 4; ++k) {
    NodalBasis basis(k);
    for (int t = 0; t < 100; ++t) {
      const double s = s_dist(rng);
      double sum = 0.0;
      for (int p = 0; p <= k; ++p) sum += basis.lagrange_eval(p, s);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("quadrature exact for random polynomials of degree 2n-1") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    const auto rule = gauss_legendre_unit(n);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> c(static_cast<std::size_t>(2 * n));
      for (auto& ci : c) ci = c_dist(rng);
      double exact = 0.0;
      for (std::size_t m = 0; m < c.size(); ++m) exact += c[m] / static_cast<double>(m + 1);
      double quad = 0.0;
      for (int q = 0; q < n; ++q) {
        double pv = 0.0, xp = 1.0;
        for (double ci : c) {
          pv += ci * xp;
          xp *= rule.nodes[static_cast<std::size_t>(q)];
        }
        quad += rule.weights[static_cast<std::size_t>(q)] * pv;
      }
      CHECK(std::abs(quad - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("gauss_legendre on a general interval") {
  const auto r = gauss_legendre(5, -2.0, 3.0);
  double s = 0.0, m4 = 0.0;
  for (int q = 0; q < 5; ++q) {
    s += r.weights[static_cast<std::size_t>(q)];
    m4 += r.weights[static_cast<std::size_t>(q)] * std::pow(r.nodes[static_cast<std::size_t>(q)], 4);
  }
  CHECK(std::abs(s - 5.0) < 1e-13);
  CHECK(std::abs(m4 - (243.0 + 32.0) / 5.0) < 1e-12);
}

TEST_CASE("spatial mesh geometry") {
  SpatialMesh mesh(0.0, 1.0, 8, Boundary::Periodic);
  CHECK(mesh.dx() == doctest::Approx(0.125));
  CHECK(mesh.cell_left(3) == doctest::Approx(0.375));
  CHECK_THROWS(SpatialMesh(1.0, 0.0, 4, Boundary::Periodic));
  CHECK_THROWS(SpatialMesh(0.0, 1.0, 0, Boundary::Periodic));
}

TEST_CASE("locate_upstream examples") {
  SpatialMesh mesh(0.0, 1.0, 4, Boundary::Periodic);
  const double dx = mesh.dx();
  auto a = locate_upstream(mesh, 2, 0.0, 0.3);
  CHECK(a.j_star == 2);
  CHECK(a.alpha == 0.0);
  auto b = locate_upstream(mesh, 2, 1.7, 0.0);
  CHECK(b.j_star == 2);
  CHECK(b.alpha == 0.0);
  // one full cell
  auto c = locate_upstream(mesh, 0, 1.0, dx);
  CHECK(c.j_star == 3);
  CHECK(c.alpha == 0.0);
  auto c2 = locate_upstream(mesh, 2, 2.0, dx / 2.0);
  CHECK(c2.j_star == 1);
  CHECK(c2.alpha == 0.0);
  // quarter cell from the first cell wraps to the last with alpha 3/4
  auto d = locate_upstream(mesh, 0, 1.0, 0.25 * dx);
  CHECK(d.j_star == 3);
  CHECK(std::abs(d.alpha - 0.75) < 1e-14);
}

TEST_CASE("tracing identity holds modulo the period") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> v_dist(-7.0, 7.0);
  std::uniform_real_distribution<double> t_dist(0.0, 0.1);
  SpatialMesh mesh(0.0, 1.0, 13, Boundary::Periodic);
  for (int t = 0; t < 500; ++t) {
    const double v = v_dist(rng), tau = t_dist(rng);
    const int j = t % mesh.n_cells();
    const auto foot = locate_upstream(mesh, j, v, tau);
    CHECK(foot.j_star >= 0);
    CHECK(foot.j_star < mesh.n_cells());
    CHECK(foot.alpha >= 0.0);
    CHECK(foot.alpha < 1.0);
    const double got = mesh.cell_left(foot.j_star) + foot.alpha * mesh.dx();
    const double want = mesh.cell_left(j) - v * tau;
    const double diff = std::remainder(got - want, mesh.length());
    CHECK(std::abs(diff) < 1e-12 * mesh.dx() + 1e-15);
  }
}

TEST_CASE("neumann tracing clamps into the domain") {
  SpatialMesh mesh(0.0, 1.0, 10, Boundary::Neumann);
  auto left = locate_upstream(mesh, 0, 3.0, 0.05);
  CHECK(left.j_star == 0);
  CHECK(left.alpha == 0.0);
  auto right = locate_upstream(mesh, 9, -3.0, 0.05);
  CHECK(right.j_star == 9);
  CHECK(right.alpha == 0.0);
  auto inner = locate_upstream(mesh, 5, 1.0, 0.025);
  CHECK(inner.j_star == 4);
  CHECK(std::abs(inner.alpha - 0.75) < 1e-12);
}
