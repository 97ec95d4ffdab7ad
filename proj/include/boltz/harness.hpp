#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "boltz/imex.hpp"
#include "boltz/limiter.hpp"

namespace boltz {

enum class TestKind { Accuracy, Ap, Sod, Mixing };
enum class InitialCondition { SmoothMaxwellian, RelaxingBiMaxwellian, ShockTube, MixingBiMaxwellian };

TestKind parse_test_kind(const std::string& s);
std::string to_string(TestKind t);
InitialCondition parse_initial_condition(const std::string& s);
std::string to_string(InitialCondition ic);

/// eps0 + (tanh(1 - 10(x - 1/2)) + tanh(1 + 10(x - 1/2))) / 2
double mixing_epsilon(double x, double eps0);

struct EpsilonSpec {
  /// Use the mixing-regime profile with eps0 = value instead of a constant.
  bool profile = false;
  double value = 1.0;

  double at(double x) const { return profile ? mixing_epsilon(x, value) : value; }
};

struct RunConfig {
  TestKind test = TestKind::Accuracy;
  double x_left = 0.0;
  double x_right = 1.0;
  int n_cells = 16;
  Boundary boundary = Boundary::Periodic;
  int degree = 2;
  double half_width = 7.0;
  int n_velocities = 32;
  int n_angles = 8;
  std::string scheme = "ARS443";
  double cfl = 0.5;
  /// Fixed step size; 0 derives it from cfl.
  double dt = 0.0;
  EpsilonSpec epsilon;
  double t_final = 0.1;
  InitialCondition initial = InitialCondition::SmoothMaxwellian;
  LimiterConfig limiter;
  bool refresh_stage_equilibrium = true;
  /// Multiplier on the penalty coefficient beta = rho.
  double penalty_scale = 1.0;
  /// Evaluate the collision term as Q(f) - Q(M).
  bool subtract_equilibrium = true;
  /// Fine reference resolution for the shock-tube and mixing comparisons.
  int reference_n_cells = 200;
  double reference_dt = 3e-4;
  std::string output_dir;
  /// Snapshot every n steps (the initial and final states are always written); 0 writes only those two.
  int snapshot_every = 0;

  double dx() const { return (x_right - x_left) / n_cells; }
  /// dt if set, otherwise cfl dx / L.
  double time_step() const { return dt > 0.0 ? dt : cfl * dx() / half_width; }
};

/// Defaults of the four experiments: mesh, boundary, initial data, epsilon, final time, limiter.
RunConfig preset(TestKind test);

/// INI-style file: optional [section] headers, `key = value` lines, '#' or ';' comments.
/// Keys are looked up as "section.key"; a `test` key selects the preset the other keys modify.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Applies one setting by dotted key (or a bare key accepted by the command line); throws ConfigError.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void validate(const RunConfig& cfg);

DiscretizationPtr make_run_discretization(const RunConfig& cfg);
DistributionField initial_distribution(const RunConfig& cfg, const DiscretizationPtr& disc);
std::vector<double> epsilon_field(const RunConfig& cfg, const Discretization& disc);

struct DiagnosticsRow {
  int step;
  double t;
  double dt;
  double mass;
  double mom1;
  double mom2;
  double energy;
  /// Relative drifts with respect to the initial totals (absolute when the initial total vanishes).
  double mass_drift;
  double mom1_drift;
  double mom2_drift;
  double energy_drift;
  double min_f;
  double ap_error;
  double l2_norm;
  /// max over nodes of dt beta / eps.
  double stiffness;
  long limited_cells;
};

struct Snapshot {
  int step;
  double t;
  MacroField U;
};

struct FailureInfo {
  std::string message;
  int stage;
  double time;
  int step;
};

struct RunResult {
  RunConfig config;
  DistributionField f;
  int steps = 0;
  double t = 0.0;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Snapshot> snapshots;
  double min_f = 0.0;
  double max_stiffness = 0.0;
  /// Largest dt beta / eps covered by the positivity analysis of the tableau (infinite if unconditional, NaN if n/a).
  double positivity_zmax = 0.0;
  std::optional<FailureInfo> failure;

  bool completed() const { return !failure; }
  const MacroField& final_moments() const { return snapshots.back().U; }
};

/// Steps from 0 to t_final, shortening the last step to land on t_final. A step failure or a
/// non-finite diagnostic stops the run and is reported in `failure`; the state before it is kept.
RunResult run_simulation(const RunConfig& cfg);

/// Advances the initial moments with the limiting scheme of the configured tableau.
MacroField run_limiting(const RunConfig& cfg);

/// Writes snapshot_NNNNNN.csv files, diagnostics.csv and summary.json into cfg.output_dir.
void write_run_outputs(const RunResult& result, const std::string& dir);

struct ConvergenceRow {
  int n_cells;
  double e1;
  double order1;
  double e2;
  double order2;
};

struct ConvergenceTable {
  int degree;
  double cfl;
  double epsilon;
  std::vector<ConvergenceRow> rows;
};

/// Self-convergence of the density: e_N = ||rho_N - rho_{N/2}|| / ||rho_N|| evaluated at the nodes of the
/// N-cell mesh; order_N = (log e_{N/2} - log e_N) / log 2. Rows start at the second entry of the list.
ConvergenceTable run_convergence(const RunConfig& base, const std::vector<int>& n_cells);
void write_convergence_csv(const ConvergenceTable& table, const std::string& path);

struct ApSeries {
  std::string scheme;
  double epsilon;
  std::vector<double> t;
  std::vector<double> ap_error;
};

struct MomentDifference {
  double epsilon;
  double e_rho;
  double e_u1;
  double e_T;
};

struct ApDecayResult {
  std::vector<ApSeries> series;
  /// Relative l2 differences at t_final of `table_scheme` against its limiting scheme.
  std::vector<MomentDifference> table;
};

ApDecayResult run_ap_decay(const RunConfig& base, const std::vector<std::string>& schemes,
                           const std::vector<double>& epsilons, const std::string& table_scheme = "ARS443");
void write_ap_outputs(const ApDecayResult& result, const std::string& dir);

/// Kinetic FBEuler solution on the reference mesh (reference_n_cells, reference_dt) for moderate
/// epsilon, limiting-scheme solution on the same mesh when every epsilon is below 1e-4.
MacroField reference_solution(const RunConfig& cfg);

struct ProfileComparison {
  RunResult run;
  /// Reference evaluated at the nodes of the run mesh.
  MacroField reference;
  ErrorNorms rho_error;
};

ProfileComparison compare_with_reference(const RunConfig& cfg, const MacroField& reference);

/// Writes x,rho,u1,u2,T rows of a macro field.
void write_profile_csv(const MacroField& U, const std::string& path);

/// Formats with 17 significant digits.
std::string format_real(double v);

}  // namespace boltz
