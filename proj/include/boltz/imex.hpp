#pragma once

#include <memory>
#include <span>
#include <vector>

#include "boltz/collision.hpp"
#include "boltz/limiter.hpp"
#include "boltz/tableau.hpp"
#include "boltz/transport.hpp"

namespace boltz {

struct StepOptions {
  LimiterConfig limiter;
  /// Rebuild the stage Maxwellian and beta from the actual stage moments before storing Q_P and G_P.
  /// When false the stored Q_P is the one used in the implicit solve.
  bool refresh_stage_equilibrium = true;
  /// Evaluate the collision term as Q(f) - Q(M) with M the stage Maxwellian, so that discrete
  /// equilibria are exact zeros of the operator even when the velocity grid under-resolves them.
  bool subtract_equilibrium_collision = true;
  /// Multiplier on the penalty coefficient beta = rho.
  double penalty_scale = 1.0;
};

struct StepReport {
  /// max over nodes |U~(i) - <f(i) phi>| / max|<f(i) phi>| per stage (0 for stages without a solve).
  std::vector<double> predictor_defect;
  long limited_cells = 0;
};

/// One IMEX-RK scheme bound to a discretization: tableau, derived coefficients, collision plan and a
/// shift-plan cache. Not thread safe; each simulation owns one.
class ImexScheme {
public:
  /// Throws std::invalid_argument for non-GSA tableaux or tableaux without a Shu-Osher form.
  ImexScheme(DiscretizationPtr disc, ButcherPair tableau, std::shared_ptr<const CollisionPlan> collision,
             StepOptions options = {});

  const ButcherPair& tableau() const { return tableau_; }
  const TableauClass& classification() const { return class_; }
  const ShuOsherCoeffs& coeffs() const { return coeffs_; }
  const StepOptions& options() const { return options_; }
  StepOptions& options() { return options_; }
  const Discretization& disc() const { return *disc_; }
  ShiftPlanCache& cache() { return cache_; }

  /// Advances f^n by dt with the stage equations in their original form. eps holds one Knudsen
  /// number per spatial node. Throws StepFailure on degenerate moments or non-finite values.
  DistributionField step(const DistributionField& fn, double t, double dt, std::span<const double> eps,
                         StepReport* report = nullptr);

  /// Same step evaluated through the Shu-Osher rewriting.
  DistributionField step_shu_osher(const DistributionField& fn, double t, double dt, std::span<const double> eps,
                                   StepReport* report = nullptr);

  /// Predicted stage moments U~(i) = w_n <S~_{i,0}[f^n]> + sum_j history_j <S~_{i,j}[f(j)]>.
  /// `shifted_fn` is S~_{i,0}[f^n] (limited if enabled); `stages` holds f(0) .. f(i-1).
  MacroField moments_update(int stage, const DistributionField& shifted_fn, std::span<const DistributionField> stages,
                            double dt);

  /// Stiff-limit scheme on the moments: every distribution is replaced by the Maxwellian of its moments.
  MacroField limiting_euler_step(const MacroField& Un, double t, double dt);

private:
  DistributionField shift(const DistributionField& f, double tau);
  DistributionField shifted_fn(const DistributionField& fn, double tau, long& limited);
  DistributionField solve_stage(const DistributionField& rhs, const MacroField& U_pred, int stage, double t, double dt,
                                std::span<const double> eps);
  void store_collision_terms(const DistributionField& f, const MacroField& U_pred, int stage, double t,
                             std::span<const double> eps, DistributionField& qp, DistributionField& gp);
  DistributionField run(const DistributionField& fn, double t, double dt, std::span<const double> eps,
                        StepReport* report, bool shu_osher);

  DiscretizationPtr disc_;
  ButcherPair tableau_;
  TableauClass class_;
  ShuOsherCoeffs coeffs_;
  std::shared_ptr<const CollisionPlan> collision_;
  StepOptions options_;
  ShiftPlanCache cache_;
};

}  // namespace boltz
