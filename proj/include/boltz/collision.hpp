#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "boltz/velocity.hpp"

namespace boltz {

/// How q_direct reads f at off-grid post-collisional velocities.
enum class PostCollisionInterp {
  Bilinear,       ///< bilinear on the grid, zero outside [-L, L]^2
  Trigonometric,  ///< band-limited (Fourier) interpolant, zero outside [-L, L]^2
};

struct DirectQuadratureOptions {
  int n_angles = 8;
  PostCollisionInterp interp = PostCollisionInterp::Trigonometric;
  /// When positive, only collisions with |v' - v| <= R and |v'_* - v| <= R contribute, matching the
  /// truncation of the spectral plan.
  double truncation = 0.0;
};

/// Direct double-sum quadrature of the 2D Maxwell-molecule operator (kernel 1/(2 pi)):
/// v_* over the grid with weight dv^2 and sigma over n_angles uniform angles (Gauss-Legendre on the
/// admissible arcs when truncated). Cost O(M N^4).
std::vector<double> q_direct(std::span<const double> fv, const VelocityGrid& grid,
                             const DirectQuadratureOptions& opts = {});

struct CollisionPlanOptions {
  int n_angles = 8;
  /// Truncation radius; <= 0 selects L/2.
  double truncation = 0.0;
  /// Gauss-Legendre points for the radial mode integrals.
  int radial_points = 64;
};

struct CollisionWorkspace;

/// Fast spectral evaluation of the truncated, periodized operator on [-L, L]^2.
///
/// The gain term is a sum over n_angles directions e_p of products of two Fourier multipliers
/// applied to f (directions e_p and e_p-perp); the loss term is f times a single multiplier.
/// Multipliers are radial integrals int_{-R}^{R} cos(pi rho s / L) d rho evaluated by quadrature.
/// Nyquist modes are excluded, which makes discrete mass conservation exact.
class CollisionPlan {
public:
  CollisionPlan(const VelocityGrid& grid, const CollisionPlanOptions& opts = {});
  ~CollisionPlan();
  CollisionPlan(const CollisionPlan&) = delete;
  CollisionPlan& operator=(const CollisionPlan&) = delete;

  int n_points() const { return n_; }
  double half_width() const { return half_width_; }
  double truncation() const { return truncation_; }
  int n_angles() const { return n_angles_; }

  /// Gain multiplier of direction p along e_p, indexed by FFT storage order (kx * N + ky).
  std::span<const double> gain_mode(int p) const;
  /// Gain multiplier of direction p along e_p-perp.
  std::span<const double> gain_mode_perp(int p) const;
  std::span<const double> loss_mode() const { return loss_; }
  /// Signed mode number of FFT storage index i.
  int mode_of_index(int i) const { return i < n_ / 2 ? i : i - n_; }

  std::unique_ptr<CollisionWorkspace> make_workspace() const;

  /// Q(fv) into out; both of size N_v^2.
  void evaluate(std::span<const double> fv, std::span<double> out, CollisionWorkspace& ws) const;

private:
  int n_;
  double half_width_;
  double truncation_;
  int n_angles_;
  std::vector<double> gain_;       // n_angles blocks of N^2
  std::vector<double> gain_perp_;  // n_angles blocks of N^2
  std::vector<double> loss_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

std::unique_ptr<CollisionPlan> build_collision_plan(const VelocityGrid& grid, int n_angles = 8);

/// Q(fv) via the spectral plan.
std::vector<double> q_spectral(const CollisionPlan& plan, std::span<const double> fv);

/// Q at every spatial node (OpenMP over nodes, one workspace per thread).
DistributionField collision_field(const CollisionPlan& plan, const DistributionField& f);

/// Serial reference for collision_field.
DistributionField collision_field_serial(const CollisionPlan& plan, const DistributionField& f);

/// beta = max_v Q^-(f); for the constant kernel 1/(2 pi) this is rho at every node.
std::vector<double> penalty_beta(const MacroField& U);

/// Q_P = beta (M[U] - f).
DistributionField q_p(const DistributionField& f, const DistributionField& M, std::span<const double> beta);
DistributionField q_p(const DistributionField& f, const MacroField& U, std::span<const double> beta);

/// G_P = Q(f) - Q_P(f).
DistributionField g_p(const DistributionField& Q_of_f, const DistributionField& Q_P);
DistributionField g_p(const DistributionField& f, const DistributionField& Q_of_f, const MacroField& U,
                      std::span<const double> beta);

}  // namespace boltz
