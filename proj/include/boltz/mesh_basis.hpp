#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace boltz {

enum class Boundary { Periodic, Neumann };

/// Uniform 1D partition of [x_left, x_right] into n_cells elements.
/// Cells are addressed 0-based in code (cell j covers [x_left + j*dx, x_left + (j+1)*dx]).
class SpatialMesh {
public:
  SpatialMesh(double x_left, double x_right, int n_cells, Boundary boundary);

  double x_left() const { return x_left_; }
  double x_right() const { return x_right_; }
  int n_cells() const { return n_cells_; }
  double dx() const { return dx_; }
  double length() const { return x_right_ - x_left_; }
  Boundary boundary() const { return boundary_; }

  /// Left interface x_{j-1/2} of 0-based cell j.
  double cell_left(int j) const { return x_left_ + j * dx_; }

  bool operator==(const SpatialMesh&) const = default;

private:
  double x_left_;
  double x_right_;
  int n_cells_;
  double dx_;
  Boundary boundary_;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Throws std::invalid_argument for n == 0.
QuadratureRule gauss_legendre_unit(int n);

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Lagrange basis of degree k on the k+1 Gauss-Legendre points of [0, 1].
class NodalBasis {
public:
  explicit NodalBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  std::span<const double> nodes() const { return rule_.nodes; }
  std::span<const double> weights() const { return rule_.weights; }
  double node(int q) const { return rule_.nodes[static_cast<std::size_t>(q)]; }
  double weight(int q) const { return rule_.weights[static_cast<std::size_t>(q)]; }

  /// Cardinal polynomial p evaluated at s; s may lie outside [0, 1].
  double lagrange_eval(int p, double s) const;

  /// Evaluates the polynomial with nodal values `values` at local coordinate s.
  double interpolate(std::span<const double> values, double s) const;

  bool operator==(const NodalBasis& other) const { return degree_ == other.degree_; }

private:
  int degree_;
  QuadratureRule rule_;
  std::vector<double> denominators_;
};

/// Free-function form of NodalBasis::lagrange_eval; throws std::invalid_argument if p is out of range.
double lagrange_eval(const NodalBasis& basis, int p, double s);

struct UpstreamFoot {
  int j_star;    ///< 0-based upstream cell
  double alpha;  ///< fraction in [0, 1)
};

/// Cell shift for a characteristic of speed v over duration tau, as (offset, alpha) with
/// x_{j-1/2} - v*tau = x_{j+offset-1/2} + alpha*dx for every cell j.
struct CellShift {
  int offset;
  double alpha;
};

CellShift cell_shift(double dx, double v, double tau);

/// Upstream tracing x_{j-1/2} - v*tau = x_{j*-1/2} + alpha*dx. Periodic meshes wrap j*;
/// Neumann meshes clamp the upstream cell into the domain (alpha = 0 when clamped).
UpstreamFoot locate_upstream(const SpatialMesh& mesh, int j, double v, double tau);

}  // namespace boltz
