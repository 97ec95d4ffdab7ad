#pragma once

#include <map>
#include <vector>

#include "boltz/velocity.hpp"

namespace boltz {

/// Row-major (k+1) x (k+1) matrices A(alpha), B(alpha) of the SLDG reconstruction
/// S[f]_j = A f_{j*} + B f_{j*+1}.
struct ShiftMatrices {
  int n = 0;
  std::vector<double> A;
  std::vector<double> B;

  double a(int row, int col) const { return A[static_cast<std::size_t>(row * n + col)]; }
  double b(int row, int col) const { return B[static_cast<std::size_t>(row * n + col)]; }
};

/// Throws std::invalid_argument unless 0 <= alpha < 1.
ShiftMatrices build_shift_matrices(const NodalBasis& basis, double alpha);

struct VelocityShift {
  int offset = 0;     ///< j* - j
  double alpha = 0.0;
  ShiftMatrices matrices;
};

/// Shift plans for one duration tau: one entry per first-component velocity point.
class ShiftPlan {
public:
  ShiftPlan(DiscretizationPtr disc, double tau);

  double tau() const { return tau_; }
  const Discretization& disc() const { return *disc_; }
  const VelocityShift& at(int ix) const { return shifts_[static_cast<std::size_t>(ix)]; }
  int n_velocities() const { return static_cast<int>(shifts_.size()); }
  bool is_identity() const { return identity_; }

  /// Upstream cells read by cell j at velocity index ix: first cell and whether the second
  /// (first + 1, wrapped) contributes. Neumann clamping returns a single unshifted boundary cell.
  struct Upstream {
    int first;
    int second;
    bool clamped;
  };
  Upstream upstream(int j, int ix) const;

private:
  DiscretizationPtr disc_;
  double tau_;
  std::vector<VelocityShift> shifts_;
  bool identity_ = true;
};

ShiftPlan build_shift_plan(const DiscretizationPtr& disc, double tau);

/// Applies the per-velocity recombination to every cell (OpenMP over cells).
DistributionField shift_apply(const ShiftPlan& plan, const DistributionField& f);

/// Serial reference for shift_apply.
DistributionField shift_apply_serial(const ShiftPlan& plan, const DistributionField& f);

/// Plans keyed by duration. Not thread safe; one cache per simulation.
class ShiftPlanCache {
public:
  explicit ShiftPlanCache(DiscretizationPtr disc) : disc_(std::move(disc)) {}

  const ShiftPlan& get(double tau);
  std::size_t size() const { return plans_.size(); }
  void clear() { plans_.clear(); }

private:
  DiscretizationPtr disc_;
  std::map<double, ShiftPlan> plans_;
};

}  // namespace boltz
