#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "boltz/transport.hpp"

using namespace boltz;

namespace {

DiscretizationPtr disc(int n_cells, int k, int nv = 8, Boundary bc = Boundary::Periodic) {
  return make_discretization(SpatialMesh(0.0, 1.0, n_cells, bc), k, VelocityGrid(7.0, nv));
}

// Fills f(x, vx, vy) = g(x, vx) at every node, independent of vy.
template <class G>
DistributionField sample(const DiscretizationPtr& d, G g) {
  DistributionField f(d);
  const int nv = d->grid.n_points();
  for (int node = 0; node < d->n_nodes(); ++node)
    for (int ix = 0; ix < nv; ++ix)
      for (int iy = 0; iy < nv; ++iy) f.at(node, ix, iy) = g(d->node_x(node), d->grid.point(ix));
  return f;
}

double mass_at(const DistributionField& f, int ix, int iy) {
  double s = 0.0;
  for (int node = 0; node < f.n_nodes(); ++node) s += f.disc().node_weight(node) * f.at(node, ix, iy);
  return s;
}

}  // namespace

TEST_CASE("shift matrices at alpha zero are the identity") {
  for (int k = 0; k <= 4; ++k) {
    NodalBasis basis(k);
    auto m = build_shift_matrices(basis, 0.0);
    for (int r = 0; r <= k; ++r)
      for (int c = 0; c <= k; ++c) {
        CHECK(std::abs(m.a(r, c) - (r == c ? 1.0 : 0.0)) < 1e-13);
        CHECK(std::abs(m.b(r, c)) < 1e-13);
      }
  }
}

TEST_CASE("shift matrices reject alpha outside [0, 1)") {
  NodalBasis basis(2);
  CHECK_THROWS_AS(build_shift_matrices(basis, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_shift_matrices(basis, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(build_shift_matrices(basis, std::nan("")), std::invalid_argument);
}

TEST_CASE("rows of A + B sum to one") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> a_dist(0.0, 1.0);
  for (int k = 1; k <= 3; ++k) {
    NodalBasis basis(k);
    std::vector<double> alphas = {0.1, 0.5, 0.9};
    for (int t = 0; t < 50; ++t) alphas.push_back(a_dist(rng));
    for (double alpha : alphas) {
      auto m = build_shift_matrices(basis, alpha);
      for (int r = 0; r <= k; ++r) {
        double s = 0.0;
        for (int c = 0; c <= k; ++c) s += m.a(r, c) + m.b(r, c);
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("shift matrices match an independent L2 projection") {
  // Projection of the two-cell polynomial onto the shifted cell, computed with a fine rule.
  NodalBasis basis(2);
  const double alpha = 0.37;
  auto m = build_shift_matrices(basis, alpha);
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) {
      const auto left = gauss_legendre(12, 0.0, 1.0 - alpha), right = gauss_legendre(12, 1.0 - alpha, 1.0);
      double a = 0.0, b = 0.0;
      for (std::size_t q = 0; q < left.nodes.size(); ++q) {
        const double s = left.nodes[q];
        a += left.weights[q] * basis.lagrange_eval(row, s) * basis.lagrange_eval(col, s + alpha);
      }
      for (std::size_t q = 0; q < right.nodes.size(); ++q) {
        const double s = right.nodes[q];
        b += right.weights[q] * basis.lagrange_eval(row, s) * basis.lagrange_eval(col, s + alpha - 1.0);
      }
      CHECK(std::abs(m.a(row, col) - a / basis.weight(row)) < 1e-13);
      CHECK(std::abs(m.b(row, col) - b / basis.weight(row)) < 1e-13);
    }
}

TEST_CASE("shift plan structure") {
  auto d = disc(10, 2, 16);
  auto p0 = build_shift_plan(d, 0.0);
  CHECK(p0.is_identity());
  for (int ix = 0; ix < 16; ++ix) {
    CHECK(p0.at(ix).offset == 0);
    CHECK(p0.at(ix).alpha == 0.0);
  }
  const double tau = 2.0 * d->mesh.dx() / d->grid.max_speed();
  auto p = build_shift_plan(d, tau);
  int max_off = 0;
  for (int ix = 0; ix < 16; ++ix) {
    max_off = std::max(max_off, std::abs(p.at(ix).offset));
    const auto& a = p.at(ix);
    const auto& b = p.at(15 - ix);
    const int osum = a.offset + b.offset;
    const double asum = a.alpha + b.alpha;
    CHECK((osum == 0 || osum == -1));
    CHECK((std::abs(asum) < 1e-12 || std::abs(asum - 1.0) < 1e-12));
  }
  CHECK(max_off == 2);
}

TEST_CASE("constant fields are unchanged by any shift") {
  for (Boundary bc : {Boundary::Periodic, Boundary::Neumann}) {
    auto d = disc(7, 3, 8, bc);
    DistributionField f(d, 0.731);
    auto p = build_shift_plan(d, 0.0123);
    auto g = shift_apply(p, f);
    for (double x : g.values()) CHECK(std::abs(x - 0.731) < 1e-12);
  }
}

TEST_CASE("polynomials of degree k are shifted exactly in the interior") {
  for (int k = 1; k <= 3; ++k) {
    auto d = disc(12, k, 8);
    const double tau = 0.0137;
    auto poly = [k](double x) {
      double v = 1.0;
      for (int m = 1; m <= k; ++m) v += std::pow(-0.6, m) * std::pow(x, m) * (m + 1);
      return v;
    };
    auto f = sample(d, [&](double x, double) { return poly(x); });
    auto plan = build_shift_plan(d, tau);
    auto g = shift_apply(plan, f);
    const int nv = d->grid.n_points();
    const int kp = k + 1;
    for (int ix = 0; ix < nv; ++ix) {
      const double v = d->grid.point(ix);
      for (int j = 0; j < d->mesh.n_cells(); ++j) {
        // skip cells whose upstream region wraps across the periodic seam
        const auto up = plan.upstream(j, ix);
        if (up.second < up.first || d->mesh.cell_left(j) - v * tau < 0.0 ||
            d->mesh.cell_left(j) + d->mesh.dx() - v * tau > 1.0)
          continue;
        for (int p = 0; p < kp; ++p) {
          const int node = j * kp + p;
          const double want = poly(d->node_x(node) - v * tau);
          CHECK(std::abs(g.at(node, ix, 0) - want) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("x squared shift example with k = 2") {
  auto d = disc(8, 2, 8);
  const double tau = 0.004;
  auto f = sample(d, [](double x, double) { return x * x; });
  auto g = shift_apply(build_shift_plan(d, tau), f);
  const int j = 4;
  for (int ix = 0; ix < 8; ++ix)
    for (int p = 0; p < 3; ++p) {
      const double x = d->node_x(j, p) - d->grid.point(ix) * tau;
      CHECK(std::abs(g.at(j * 3 + p, ix, 3) - x * x) < 1e-12);
    }
}

TEST_CASE("periodic shifts conserve mass per velocity point") {
  auto d = disc(9, 2, 8);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistributionField f(d);
  for (auto& x : f.values()) x = u(rng);
  auto g = shift_apply(build_shift_plan(d, 0.0311), f);
  for (int ix = 0; ix < 8; ++ix)
    for (int iy = 0; iy < 8; ++iy) CHECK(std::abs(mass_at(g, ix, iy) - mass_at(f, ix, iy)) <= 1e-12 * mass_at(f, ix, iy));
}

TEST_CASE("composition of shifts equals one shift for polynomial data") {
  auto d = disc(10, 2, 8);
  auto f = sample(d, [](double x, double) { return 0.5 + x - 0.7 * x * x; });
  // Periodic extension of a non-periodic polynomial is discontinuous at the seam, so compare
  // only cells whose combined upstream region stays away from the seam.
  const double t1 = 0.0021, t2 = 0.0047;
  auto g = shift_apply(build_shift_plan(d, t2), shift_apply(build_shift_plan(d, t1), f));
  auto h = shift_apply(build_shift_plan(d, t1 + t2), f);
  for (int ix = 0; ix < 8; ++ix) {
    const double reach = std::abs(d->grid.point(ix)) * (t1 + t2);
    for (int j = 0; j < 10; ++j) {
      const double xl = d->mesh.cell_left(j), xr = xl + d->mesh.dx();
      if (xl - reach - d->mesh.dx() < 0.0 || xr + reach + d->mesh.dx() > 1.0) continue;
      for (int p = 0; p < 3; ++p) CHECK(std::abs(g.at(j * 3 + p, ix, 1) - h.at(j * 3 + p, ix, 1)) < 1e-12);
    }
  }
}

TEST_CASE("repeated periodic shifts keep mass and do not grow the l2 norm") {
  auto d = disc(16, 2, 8);
  auto f = sample(d, [](double x, double) { return 1.0 + 0.5 * std::sin(2.0 * std::numbers::pi * x); });
  const double m0 = mass_at(f, 2, 2);
  const double n0 = l2_norm(f);
  auto plan = build_shift_plan(d, 0.3 * d->mesh.dx() / 7.0 * 2.9);
  for (int it = 0; it < 1000; ++it) f = shift_apply(plan, f);
  for (int ix = 0; ix < 8; ++ix) CHECK(std::abs(mass_at(f, ix, 2) - m0) <= 1e-10 * m0);
  CHECK(l2_norm(f) <= n0 * (1.0 + 1e-6));
}

TEST_CASE("neumann shifts copy boundary cells when the foot leaves the domain") {
  auto d = disc(6, 1, 8, Boundary::Neumann);
  auto f = sample(d, [](double x, double v) { return 1.0 + x + 0.01 * v; });
  const double tau = 0.5 * d->mesh.dx() / 7.0;
  auto g = shift_apply(build_shift_plan(d, tau), f);
  for (int ix = 0; ix < 8; ++ix) {
    const double v = d->grid.point(ix);
    const int j = v > 0.0 ? 0 : 5;
    for (int p = 0; p < 2; ++p) CHECK(g.at(j * 2 + p, ix, 0) == f.at(j * 2 + p, ix, 0));
  }
}

TEST_CASE("parallel and serial shift agree bitwise; mismatched plans are rejected") {
  auto d = disc(11, 3, 8);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DistributionField f(d);
  for (auto& x : f.values()) x = u(rng);
  auto plan = build_shift_plan(d, 0.0191);
  auto a = shift_apply(plan, f);
  auto b = shift_apply_serial(plan, f);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.values()[i] == b.values()[i]);
  DistributionField other(disc(12, 3, 8));
  CHECK_THROWS_AS(shift_apply(plan, other), std::invalid_argument);
}

TEST_CASE("plan cache reuses plans per duration") {
  auto d = disc(5, 1, 8);
  ShiftPlanCache cache(d);
  const auto& p1 = cache.get(0.01);
  const auto& p2 = cache.get(0.01);
  CHECK(&p1 == &p2);
  cache.get(-0.01);
  CHECK(cache.size() == 2);
}
