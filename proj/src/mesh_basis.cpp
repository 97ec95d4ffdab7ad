#include "boltz/mesh_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace boltz {

SpatialMesh::SpatialMesh(double x_left, double x_right, int n_cells, Boundary boundary)
    : x_left_(x_left), x_right_(x_right), n_cells_(n_cells), boundary_(boundary) {
  if (n_cells <= 0) throw std::invalid_argument("SpatialMesh: n_cells must be positive");
  if (!(x_right > x_left)) throw std::invalid_argument("SpatialMesh: x_right must exceed x_left");
  dx_ = (x_right - x_left) / n_cells;
}

namespace {

// Legendre P_n and its derivative at x by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p_prev = 1.0;
  double p = x;
  if (n == 0) return {1.0, 0.0};
  for (int m = 2; m <= n; ++m) {
    const double p_next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
    p_prev = p;
    p = p_next;
  }
  const double dp = n * (x * p - p_prev) / (x * x - 1.0);
  return {p, dp};
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n <= 0) throw std::invalid_argument("gauss_legendre: n must be >= 1, got " + std::to_string(n));
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root, then Newton.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre_with_derivative(n, x);
      dp = d;
      const double step = p / d;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // roots come out in decreasing order; store ascending
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = mid;
  return rule;
}

QuadratureRule gauss_legendre_unit(int n) { return gauss_legendre(n, 0.0, 1.0); }

NodalBasis::NodalBasis(int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("NodalBasis: degree must be >= 0");
  rule_ = gauss_legendre_unit(degree + 1);
  denominators_.assign(static_cast<std::size_t>(degree + 1), 1.0);
  for (int p = 0; p <= degree; ++p) {
    double d = 1.0;
    for (int q = 0; q <= degree; ++q) {
      if (q != p) d *= node(p) - node(q);
    }
    denominators_[static_cast<std::size_t>(p)] = d;
  }
}

double NodalBasis::lagrange_eval(int p, double s) const {
  if (p < 0 || p > degree_) {
    throw std::invalid_argument("lagrange_eval: index " + std::to_string(p) + " out of range for degree " +
                                std::to_string(degree_));
  }
  double num = 1.0;
  for (int q = 0; q <= degree_; ++q) {
    if (q != p) num *= s - node(q);
  }
  return num / denominators_[static_cast<std::size_t>(p)];
}

double NodalBasis::interpolate(std::span<const double> values, double s) const {
  double sum = 0.0;
  for (int p = 0; p <= degree_; ++p) sum += values[static_cast<std::size_t>(p)] * lagrange_eval(p, s);
  return sum;
}

double lagrange_eval(const NodalBasis& basis, int p, double s) { return basis.lagrange_eval(p, s); }

CellShift cell_shift(double dx, double v, double tau) {
  const double shift = v * tau / dx;
  const double fl = std::floor(-shift);
  CellShift out{static_cast<int>(fl), -shift - fl};
  if (out.alpha >= 1.0) {
    out.alpha = 0.0;
    out.offset += 1;
  }
  return out;
}

UpstreamFoot locate_upstream(const SpatialMesh& mesh, int j, double v, double tau) {
  const int n = mesh.n_cells();
  const CellShift cs = cell_shift(mesh.dx(), v, tau);
  int j_star = j + cs.offset;
  if (mesh.boundary() == Boundary::Periodic) {
    j_star %= n;
    if (j_star < 0) j_star += n;
    return {j_star, cs.alpha};
  }
  // Neumann: the upstream cell [foot, foot + dx] is clamped into the domain.
  if (j_star < 0) return {0, 0.0};
  if (j_star > n - 1 || (j_star == n - 1 && cs.alpha > 0.0)) return {n - 1, 0.0};
  return {j_star, cs.alpha};
}

}  // namespace boltz
