#pragma once

#include <memory>
#include <span>
#include <vector>

#include "boltz/mesh_basis.hpp"

namespace boltz {

/// Uniform cell-centred grid on [-L, L] per velocity dimension: v_i = -L + (i + 1/2) dv.
class VelocityGrid {
public:
  VelocityGrid(double half_width, int n_points);

  double half_width() const { return half_width_; }
  int n_points() const { return n_points_; }
  double dv() const { return dv_; }
  double point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  std::span<const double> points() const { return points_; }
  /// Number of values in one velocity slice (N_v^2).
  int slice_size() const { return n_points_ * n_points_; }
  double max_speed() const { return half_width_; }

  bool operator==(const VelocityGrid& o) const { return half_width_ == o.half_width_ && n_points_ == o.n_points_; }

private:
  double half_width_;
  int n_points_;
  double dv_;
  std::vector<double> points_;
};

/// Phase-space discretization shared by fields: mesh x nodal basis x velocity grid.
struct Discretization {
  SpatialMesh mesh;
  NodalBasis basis;
  VelocityGrid grid;

  int n_nodes() const { return mesh.n_cells() * basis.size(); }
  /// Physical coordinate of spatial node (cell j, local node p).
  double node_x(int j, int p) const { return mesh.cell_left(j) + basis.node(p) * mesh.dx(); }
  double node_x(int node) const { return node_x(node / basis.size(), node % basis.size()); }
  /// Quadrature weight omega_p * dx of a spatial node.
  double node_weight(int node) const { return basis.weight(node % basis.size()) * mesh.dx(); }
};

using DiscretizationPtr = std::shared_ptr<const Discretization>;

DiscretizationPtr make_discretization(const SpatialMesh& mesh, int degree, const VelocityGrid& grid);

/// Nodal values f(x_{j,p}, v_x, v_y), stored node-major with v_y fastest.
class DistributionField {
public:
  DistributionField() = default;
  explicit DistributionField(DiscretizationPtr disc, double fill = 0.0);

  const Discretization& disc() const { return *disc_; }
  const DiscretizationPtr& disc_ptr() const { return disc_; }
  int n_nodes() const { return disc_->n_nodes(); }
  int slice_size() const { return disc_->grid.slice_size(); }
  std::size_t size() const { return values_.size(); }

  std::span<double> slice(int node) {
    return std::span<double>(values_).subspan(static_cast<std::size_t>(node) * slice_size(), slice_size());
  }
  std::span<const double> slice(int node) const {
    return std::span<const double>(values_).subspan(static_cast<std::size_t>(node) * slice_size(), slice_size());
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double& at(int node, int ix, int iy) {
    return values_[(static_cast<std::size_t>(node) * disc_->grid.n_points() + ix) * disc_->grid.n_points() + iy];
  }
  double at(int node, int ix, int iy) const {
    return values_[(static_cast<std::size_t>(node) * disc_->grid.n_points() + ix) * disc_->grid.n_points() + iy];
  }

  bool same_shape(const DistributionField& o) const;

  DistributionField& operator+=(const DistributionField& o);
  DistributionField& operator-=(const DistributionField& o);
  DistributionField& operator*=(double a);
  /// this += a * o
  DistributionField& axpy(double a, const DistributionField& o);

  double min_value() const;
  bool all_finite() const;

private:
  DiscretizationPtr disc_;
  std::vector<double> values_;
};

/// Conserved moments (rho, rho u, E) per spatial node, with d_v = 2 derived quantities.
class MacroField {
public:
  MacroField() = default;
  explicit MacroField(DiscretizationPtr disc);

  const Discretization& disc() const { return *disc_; }
  const DiscretizationPtr& disc_ptr() const { return disc_; }
  int n_nodes() const { return static_cast<int>(rho.size()); }

  double u1(int i) const { return mom1[idx(i)] / rho[idx(i)]; }
  double u2(int i) const { return mom2[idx(i)] / rho[idx(i)]; }
  /// T = (E/rho - |u|^2) / 2.
  double temperature(int i) const;

  /// Throws DegenerateMoments if rho <= 0 or T <= 0 at any node.
  void check_nondegenerate() const;

  std::vector<double> rho;
  std::vector<double> mom1;
  std::vector<double> mom2;
  std::vector<double> energy;

private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  DiscretizationPtr disc_;
};

/// Builds conserved moments from primitive (rho, u1, u2, T): E = 2 rho T + rho |u|^2.
void set_primitive(MacroField& U, int node, double rho, double u1, double u2, double T);

/// Rectangle-rule moments without any degeneracy check.
MacroField moments_raw(const DistributionField& f);

/// Moments U = sum f phi dv^2; throws DegenerateMoments when rho <= 0 at some node.
MacroField moments(const DistributionField& f);

/// Writes M[rho, u, T] on the grid into `out` (size N_v^2).
void maxwellian_slice(const VelocityGrid& grid, double rho, double u1, double u2, double T, std::span<double> out);

/// Nodal Maxwellian of U; throws DegenerateMoments on nonpositive rho or T.
DistributionField maxwellian(const MacroField& U);

/// Weighted l1 distance sum omega_p dx dv^2 |f - M_f|.
double ap_error(const DistributionField& f);

/// Pointwise 1D Euler flux <v1 phi M[U]> = (rho u1, rho u1 u + rho T e1, E u1 + 2 rho T u1).
struct EulerFlux {
  std::vector<double> mass;
  std::vector<double> mom1;
  std::vector<double> mom2;
  std::vector<double> energy;
};

EulerFlux euler_flux(const MacroField& U);

struct ErrorNorms {
  double e1;
  double e2;
};

/// Relative weighted l1/l2 density differences ||rho_a - rho_b|| / ||rho_a|| with weights omega_p dx.
ErrorNorms error_norms(const MacroField& a, const MacroField& b);

/// Same as error_norms for arbitrary nodal quantities on a common discretization.
ErrorNorms relative_norms(std::span<const double> a, std::span<const double> b, const Discretization& disc);

/// Evaluates the piecewise polynomials of `fine` (conserved components) at the nodes of `coarse`.
/// A node falling exactly on a fine interface takes the mean of the two one-sided limits.
MacroField restrict_to(const MacroField& fine, const DiscretizationPtr& coarse);

/// Total mass, momentum and energy integrated over the spatial domain.
struct Totals {
  double mass;
  double mom1;
  double mom2;
  double energy;
};

Totals totals(const MacroField& U);

/// sqrt(sum omega_p dx dv^2 f^2)
double l2_norm(const DistributionField& f);

}  // namespace boltz
