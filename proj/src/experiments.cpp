#include <cmath>
#include <limits>

#include "boltz/errors.hpp"
#include "boltz/harness.hpp"

namespace boltz {

namespace {

const RunResult& require_completed(const RunResult& r) {
  if (r.failure) throw StepFailure(r.failure->message, r.failure->stage, r.failure->time);
  return r;
}

std::vector<double> velocity_u1(const MacroField& U) {
  std::vector<double> out(U.rho.size());
  for (int i = 0; i < U.n_nodes(); ++i) out[static_cast<std::size_t>(i)] = U.u1(i);
  return out;
}

std::vector<double> temperature(const MacroField& U) {
  std::vector<double> out(U.rho.size());
  for (int i = 0; i < U.n_nodes(); ++i) out[static_cast<std::size_t>(i)] = U.temperature(i);
  return out;
}

double order(double coarse_error, double fine_error) { return (std::log(coarse_error) - std::log(fine_error)) / std::log(2.0); }

}  // namespace

ConvergenceTable run_convergence(const RunConfig& base, const std::vector<int>& n_cells) {
  if (n_cells.size() < 2) throw ConfigError("convergence: need at least two resolutions");
  for (std::size_t i = 1; i < n_cells.size(); ++i) {
    if (n_cells[i] != 2 * n_cells[i - 1]) throw ConfigError("convergence: resolutions must double");
  }
  ConvergenceTable table{base.degree, base.cfl, base.epsilon.value, {}};
  std::vector<MacroField> finals;
  for (int n : n_cells) {
    RunConfig cfg = base;
    cfg.n_cells = n;
    cfg.output_dir.clear();
    finals.push_back(require_completed(run_simulation(cfg)).final_moments());
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 1; i < finals.size(); ++i) {
    const MacroField coarse = restrict_to(finals[i - 1], finals[i].disc_ptr());
    const ErrorNorms e = error_norms(finals[i], coarse);
    ConvergenceRow row{n_cells[i], e.e1, nan, e.e2, nan};
    if (!table.rows.empty()) {
      row.order1 = order(table.rows.back().e1, e.e1);
      row.order2 = order(table.rows.back().e2, e.e2);
    }
    table.rows.push_back(row);
  }
  return table;
}

ApDecayResult run_ap_decay(const RunConfig& base, const std::vector<std::string>& schemes,
                           const std::vector<double>& epsilons, const std::string& table_scheme) {
  ApDecayResult out;
  for (const auto& name : schemes) {
    for (double eps : epsilons) {
      RunConfig cfg = base;
      cfg.scheme = name;
      cfg.epsilon = EpsilonSpec{false, eps};
      cfg.output_dir.clear();
      const RunResult r = run_simulation(cfg);
      ApSeries s{name, eps, {}, {}};
      for (const auto& row : r.diagnostics) {
        s.t.push_back(row.t);
        s.ap_error.push_back(row.ap_error);
      }
      out.series.push_back(std::move(s));
      if (name != table_scheme) continue;
      require_completed(r);
      const MacroField limit = run_limiting(cfg);
      const MacroField& U = r.final_moments();
      const Discretization& disc = U.disc();
      out.table.push_back({eps, relative_norms(limit.rho, U.rho, disc).e2,
                           relative_norms(velocity_u1(limit), velocity_u1(U), disc).e2,
                           relative_norms(temperature(limit), temperature(U), disc).e2});
    }
  }
  return out;
}

MacroField reference_solution(const RunConfig& cfg) {
  RunConfig ref = cfg;
  ref.scheme = "FBEuler";
  ref.n_cells = cfg.reference_n_cells;
  ref.dt = cfg.reference_dt;
  ref.output_dir.clear();
  ref.snapshot_every = 0;
  if (!cfg.epsilon.profile && cfg.epsilon.value < 1e-4) return run_limiting(ref);
  return require_completed(run_simulation(ref)).final_moments();
}

ProfileComparison compare_with_reference(const RunConfig& cfg, const MacroField& reference) {
  ProfileComparison c;
  c.run = run_simulation(cfg);
  const MacroField& U = c.run.final_moments();
  c.reference = restrict_to(reference, U.disc_ptr());
  c.rho_error = error_norms(c.reference, U);
  return c;
}

}  // namespace boltz
