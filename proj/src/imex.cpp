#include "boltz/imex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "boltz/errors.hpp"

namespace boltz {

namespace {

std::string stage_message(int stage, const std::string& what) {
  return "stage " + std::to_string(stage + 1) + ": " + what;
}

double predictor_defect(const MacroField& pred, const MacroField& actual) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < pred.rho.size(); ++i) {
    diff = std::max({diff, std::abs(pred.rho[i] - actual.rho[i]), std::abs(pred.mom1[i] - actual.mom1[i]),
                     std::abs(pred.mom2[i] - actual.mom2[i]), std::abs(pred.energy[i] - actual.energy[i])});
    scale = std::max({scale, std::abs(actual.rho[i]), std::abs(actual.mom1[i]), std::abs(actual.mom2[i]),
                      std::abs(actual.energy[i])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

ImexScheme::ImexScheme(DiscretizationPtr disc, ButcherPair tableau, std::shared_ptr<const CollisionPlan> collision,
                       StepOptions options)
    : disc_(std::move(disc)),
      tableau_(std::move(tableau)),
      class_(classify(tableau_)),
      coeffs_(shu_osher_coeffs(tableau_)),
      collision_(std::move(collision)),
      options_(options),
      cache_(disc_) {
  if (!class_.gsa) throw std::invalid_argument("ImexScheme: tableau '" + tableau_.name + "' is not globally stiffly accurate");
  if (!collision_) throw std::invalid_argument("ImexScheme: missing collision plan");
  if (!(disc_->grid == VelocityGrid(collision_->half_width(), collision_->n_points()))) {
    throw std::invalid_argument("ImexScheme: collision plan does not match the velocity grid");
  }
  options_.limiter.samples_for(disc_->basis.degree());
}

DistributionField ImexScheme::shift(const DistributionField& f, double tau) {
  if (tau == 0.0) return f;
  if (cache_.size() > 256) cache_.clear();
  const ShiftPlan& plan = cache_.get(tau);
  DistributionField s = shift_apply(plan, f);
  if (!options_.limiter.enabled) return s;
  return lmpp_apply(s, f, plan, options_.limiter);
}

DistributionField ImexScheme::shifted_fn(const DistributionField& fn, double tau, long& limited) {
  limited = 0;
  if (cache_.size() > 256) cache_.clear();
  const ShiftPlan& plan = cache_.get(tau);
  DistributionField s = shift_apply(plan, fn);
  if (!options_.limiter.enabled) return s;
  return lmpp_apply(s, fn, plan, options_.limiter, &limited);
}

MacroField ImexScheme::moments_update(int stage, const DistributionField& shifted_fn, std::span<const DistributionField> stages,
                                      double dt) {
  const auto& st = coeffs_.stages[static_cast<std::size_t>(stage)];
  DistributionField combo = shifted_fn;
  combo *= st.fn_weight;
  const double cti = tableau_.ct[static_cast<std::size_t>(stage)];
  for (std::size_t j = 0; j < st.history.size(); ++j) {
    if (st.history[j] == 0.0) continue;
    combo.axpy(st.history[j], shift(stages[j], (cti - tableau_.ct[j]) * dt));
  }
  MacroField U = moments_raw(combo);
  U.check_nondegenerate();
  return U;
}

DistributionField ImexScheme::solve_stage(const DistributionField& rhs, const MacroField& U_pred, int stage, double t,
                                          double dt, std::span<const double> eps) {
  const double diag = tableau_.at(stage, stage);
  DistributionField f = rhs;
  if (diag != 0.0) {
    const DistributionField M = maxwellian(U_pred);
    const int n = f.n_nodes();
#pragma omp parallel for schedule(static)
    for (int node = 0; node < n; ++node) {
      const auto k = static_cast<std::size_t>(node);
      const double z = dt * diag * U_pred.rho[k] / eps[k];
      const double inv = 1.0 / (1.0 + z);
      auto out = f.slice(node);
      auto m = M.slice(node);
      for (std::size_t v = 0; v < out.size(); ++v) out[v] = (out[v] + z * m[v]) * inv;
    }
  }
  if (!f.all_finite()) throw StepFailure(stage_message(stage, "non-finite distribution values"), stage + 1, t);
  return f;
}

void ImexScheme::store_collision_terms(const DistributionField& f, const MacroField& U_pred, int stage, double t,
                                       std::span<const double> eps, DistributionField& qp, DistributionField& gp) {
  (void)stage;
  (void)t;
  const MacroField U = options_.refresh_stage_equilibrium ? moments(f) : U_pred;
  auto beta = penalty_beta(U);
  for (double& b : beta) b *= options_.penalty_scale;
  const DistributionField M = maxwellian(U);
  qp = q_p(f, M, beta);
  gp = collision_field(*collision_, f);
  if (options_.subtract_equilibrium_collision) gp -= collision_field(*collision_, M);
  const int n = f.n_nodes();
#pragma omp parallel for schedule(static)
  for (int node = 0; node < n; ++node) {
    const double inv = 1.0 / eps[static_cast<std::size_t>(node)];
    auto q = qp.slice(node);
    auto g = gp.slice(node);
    for (std::size_t v = 0; v < q.size(); ++v) {
      q[v] *= inv;
      g[v] = g[v] * inv - q[v];
    }
  }
}

DistributionField ImexScheme::run(const DistributionField& fn, double t, double dt, std::span<const double> eps,
                                  StepReport* report, bool shu_osher) {
  if (!(fn.disc().mesh == disc_->mesh) || !(fn.disc().grid == disc_->grid) || !(fn.disc().basis == disc_->basis)) {
    throw std::invalid_argument("ImexScheme: field does not match the scheme discretization");
  }
  if (eps.size() != static_cast<std::size_t>(fn.n_nodes())) throw std::invalid_argument("ImexScheme: epsilon size mismatch");
  for (double e : eps) {
    if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("ImexScheme: epsilon must be positive and finite");
  }
  const int s = tableau_.s;
  const bool ck = coeffs_.form == ShuOsherCoeffs::Form::CK;
  const auto& c = tableau_.c;
  const auto& ct = tableau_.ct;
  if (report) {
    report->predictor_defect.assign(static_cast<std::size_t>(s), 0.0);
    report->limited_cells = 0;
  }
  std::vector<DistributionField> F;
  F.reserve(static_cast<std::size_t>(s));
  std::vector<DistributionField> QP(static_cast<std::size_t>(s)), GP(static_cast<std::size_t>(s)), E(static_cast<std::size_t>(s));

  int stage = 0;
  try {
    for (stage = 0; stage < s; ++stage) {
      const auto I = static_cast<std::size_t>(stage);
      if (ck && stage == 0) {
        F.push_back(fn);
        const MacroField U = moments(fn);
        store_collision_terms(fn, U, 0, t, eps, QP[0], GP[0]);
        continue;
      }
      long limited = 0;
      const DistributionField sfn = shifted_fn(fn, ct[I] * dt, limited);
      if (report) report->limited_cells += limited;
      const MacroField U_pred = moments_update(stage, sfn, F, dt);
      const auto& st = coeffs_.stages[I];

      DistributionField rhs = sfn;
      if (!shu_osher) {
        for (int j = 0; j < stage; ++j) {
          const auto J = static_cast<std::size_t>(j);
          const double a = tableau_.a(stage, j), at = tableau_.at(stage, j);
          const double tau_e = (c[I] - c[J]) * dt, tau_i = (ct[I] - ct[J]) * dt;
          if (tau_e == tau_i) {
            if (a == 0.0 && at == 0.0) continue;
            DistributionField combo = GP[J];
            combo *= a;
            combo.axpy(at, QP[J]);
            rhs.axpy(dt, shift(combo, tau_e));
          } else {
            if (a != 0.0) rhs.axpy(dt * a, shift(GP[J], tau_e));
            if (at != 0.0) rhs.axpy(dt * at, shift(QP[J], tau_i));
          }
        }
      } else if (ck) {
        rhs *= st.fn_weight;
        for (int j = 1; j < stage; ++j) {
          const auto J = static_cast<std::size_t>(j);
          if (st.history[J] != 0.0) rhs.axpy(st.history[J], shift(F[J], (c[I] - c[J]) * dt));
        }
        for (int j = 0; j < stage; ++j) {
          const auto J = static_cast<std::size_t>(j);
          if (st.explicit_weights[J] != 0.0) rhs.axpy(dt * st.explicit_weights[J], shift(GP[J], (c[I] - c[J]) * dt));
        }
        if (st.implicit_first != 0.0) rhs.axpy(dt * st.implicit_first, shift(QP[0], c[I] * dt));
      } else {
        rhs *= st.fn_weight;
        DistributionField Ei(disc_);
        for (int j = 0; j < stage; ++j) {
          const auto J = static_cast<std::size_t>(j);
          if (st.history[J] != 0.0) rhs.axpy(st.history[J], shift(F[J], (ct[I] - ct[J]) * dt));
          const double a = tableau_.a(stage, j), at = tableau_.at(stage, j);
          if (a != 0.0) Ei.axpy(a, shift(GP[J], (c[I] - c[J]) * dt));
          if (at != 0.0) Ei.axpy(-at / tableau_.at(j, j), shift(E[J], (ct[I] - ct[J]) * dt));
        }
        rhs.axpy(dt, Ei);
        E[I] = std::move(Ei);
      }

      DistributionField fi = solve_stage(rhs, U_pred, stage, t, dt, eps);
      if (report) report->predictor_defect[I] = predictor_defect(U_pred, moments_raw(fi));
      if (stage < s - 1) store_collision_terms(fi, U_pred, stage, t, eps, QP[I], GP[I]);
      F.push_back(std::move(fi));
    }
  } catch (const DegenerateMoments& e) {
    throw StepFailure(stage_message(stage, e.what()), stage + 1, t);
  }
  return std::move(F.back());
}

DistributionField ImexScheme::step(const DistributionField& fn, double t, double dt, std::span<const double> eps,
                                   StepReport* report) {
  return run(fn, t, dt, eps, report, false);
}

DistributionField ImexScheme::step_shu_osher(const DistributionField& fn, double t, double dt,
                                             std::span<const double> eps, StepReport* report) {
  return run(fn, t, dt, eps, report, true);
}

MacroField ImexScheme::limiting_euler_step(const MacroField& Un, double t, double dt) {
  const int s = tableau_.s;
  const bool ck = coeffs_.form == ShuOsherCoeffs::Form::CK;
  const auto& ct = tableau_.ct;
  std::vector<DistributionField> M;
  M.reserve(static_cast<std::size_t>(s));
  MacroField U = Un;
  int stage = 0;
  try {
    const DistributionField Mn = maxwellian(Un);
    for (stage = 0; stage < s; ++stage) {
      const auto I = static_cast<std::size_t>(stage);
      if (ck && stage == 0) {
        M.push_back(Mn);
        continue;
      }
      long limited = 0;
      const DistributionField sMn = shifted_fn(Mn, ct[I] * dt, limited);
      U = moments_update(stage, sMn, M, dt);
      if (stage < s - 1) M.push_back(maxwellian(U));
      else M.emplace_back();
    }
  } catch (const DegenerateMoments& e) {
    throw StepFailure(stage_message(stage, std::string(e.what()) + " in the limiting scheme"), stage + 1, t);
  }
  return U;
}

}  // namespace boltz
