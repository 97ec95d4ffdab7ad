#include "boltz/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "boltz/analysis.hpp"
#include "boltz/collision.hpp"
#include "boltz/errors.hpp"

namespace boltz {

namespace {

constexpr double kPi = std::numbers::pi;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a real number, got '" + value + "'");
  }
  return out;
}

int to_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  const std::string v = lower(trim(value));
  if (v == "1" || v == "true" || v == "on" || v == "yes" || v == "lmpp") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no" || v == "none") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

// Bare names accepted on the command line and at the top of a config file.
const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"test", "run.test"},           {"scheme", "time.scheme"},       {"nx", "mesh.n_cells"},
      {"n_cells", "mesh.n_cells"},    {"k", "mesh.degree"},            {"degree", "mesh.degree"},
      {"cfl", "time.cfl"},            {"dt", "time.dt"},               {"t_final", "time.t_final"},
      {"t-final", "time.t_final"},    {"epsilon", "physics.epsilon"},  {"limiter", "limiter.enabled"},
      {"output_dir", "output.dir"},   {"output-dir", "output.dir"},    {"boundary", "mesh.boundary"},
      {"initial", "physics.initial"}, {"nv", "velocity.n_points"},
  };
  return m;
}

std::string canonical_key(const std::string& key) {
  const std::string k = lower(trim(key));
  const auto it = aliases().find(k);
  return it == aliases().end() ? k : it->second;
}

}  // namespace

TestKind parse_test_kind(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "accuracy") return TestKind::Accuracy;
  if (v == "ap") return TestKind::Ap;
  if (v == "sod") return TestKind::Sod;
  if (v == "mixing") return TestKind::Mixing;
  throw ConfigError("config: unknown test '" + s + "' (accuracy|ap|sod|mixing)");
}

std::string to_string(TestKind t) {
  switch (t) {
    case TestKind::Accuracy: return "accuracy";
    case TestKind::Ap: return "ap";
    case TestKind::Sod: return "sod";
    case TestKind::Mixing: return "mixing";
  }
  return "";
}

InitialCondition parse_initial_condition(const std::string& s) {
  const std::string v = lower(trim(s));
  if (v == "smooth-maxwellian") return InitialCondition::SmoothMaxwellian;
  if (v == "relaxing-bimaxwellian") return InitialCondition::RelaxingBiMaxwellian;
  if (v == "shock-tube") return InitialCondition::ShockTube;
  if (v == "mixing-bimaxwellian") return InitialCondition::MixingBiMaxwellian;
  throw ConfigError("config: unknown initial condition '" + s +
                    "' (smooth-maxwellian|relaxing-bimaxwellian|shock-tube|mixing-bimaxwellian)");
}

std::string to_string(InitialCondition ic) {
  switch (ic) {
    case InitialCondition::SmoothMaxwellian: return "smooth-maxwellian";
    case InitialCondition::RelaxingBiMaxwellian: return "relaxing-bimaxwellian";
    case InitialCondition::ShockTube: return "shock-tube";
    case InitialCondition::MixingBiMaxwellian: return "mixing-bimaxwellian";
  }
  return "";
}

double mixing_epsilon(double x, double eps0) {
  return eps0 + 0.5 * (std::tanh(1.0 - 10.0 * (x - 0.5)) + std::tanh(1.0 + 10.0 * (x - 0.5)));
}

RunConfig preset(TestKind test) {
  RunConfig c;
  c.test = test;
  switch (test) {
    case TestKind::Accuracy:
      break;
    case TestKind::Ap:
      c.n_cells = 32;
      c.epsilon.value = 1e-2;
      c.t_final = 0.2;
      c.initial = InitialCondition::RelaxingBiMaxwellian;
      break;
    case TestKind::Sod:
      c.n_cells = 80;
      c.boundary = Boundary::Neumann;
      c.scheme = "FBEuler";
      c.epsilon.value = 1e-2;
      c.t_final = 0.2;
      c.initial = InitialCondition::ShockTube;
      c.limiter.enabled = true;
      c.reference_n_cells = 200;
      c.reference_dt = 3e-4;
      break;
    case TestKind::Mixing:
      c.n_cells = 40;
      c.scheme = "FBEuler";
      c.epsilon.profile = true;
      c.epsilon.value = 1e-6;
      c.t_final = 0.3;
      c.initial = InitialCondition::MixingBiMaxwellian;
      c.reference_n_cells = 160;
      c.reference_dt = 2e-4;
      break;
  }
  return c;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = canonical_key(raw_key);
  const std::string v = trim(value);
  if (key == "run.test") cfg.test = parse_test_kind(v);
  else if (key == "mesh.n_cells") cfg.n_cells = to_int(key, v);
  else if (key == "mesh.x_left") cfg.x_left = to_real(key, v);
  else if (key == "mesh.x_right") cfg.x_right = to_real(key, v);
  else if (key == "mesh.boundary") {
    const std::string b = lower(v);
    if (b == "periodic") cfg.boundary = Boundary::Periodic;
    else if (b == "neumann") cfg.boundary = Boundary::Neumann;
    else throw ConfigError("config: '" + key + "' expects periodic|neumann, got '" + v + "'");
  } else if (key == "mesh.degree") cfg.degree = to_int(key, v);
  else if (key == "velocity.half_width") cfg.half_width = to_real(key, v);
  else if (key == "velocity.n_points") cfg.n_velocities = to_int(key, v);
  else if (key == "velocity.n_angles") cfg.n_angles = to_int(key, v);
  else if (key == "time.scheme") cfg.scheme = v;
  else if (key == "time.cfl") cfg.cfl = to_real(key, v);
  else if (key == "time.dt") cfg.dt = to_real(key, v);
  else if (key == "time.t_final") cfg.t_final = to_real(key, v);
  else if (key == "physics.epsilon") {
    if (lower(v) == "profile") cfg.epsilon.profile = true;
    else {
      cfg.epsilon.profile = false;
      cfg.epsilon.value = to_real(key, v);
    }
  } else if (key == "physics.eps0") {
    cfg.epsilon.profile = true;
    cfg.epsilon.value = to_real(key, v);
  } else if (key == "physics.initial") cfg.initial = parse_initial_condition(v);
  else if (key == "physics.refresh_equilibrium") cfg.refresh_stage_equilibrium = to_bool(key, v);
  else if (key == "physics.penalty_scale") cfg.penalty_scale = to_real(key, v);
  else if (key == "physics.subtract_equilibrium") cfg.subtract_equilibrium = to_bool(key, v);
  else if (key == "limiter.enabled") cfg.limiter.enabled = to_bool(key, v);
  else if (key == "limiter.samples") cfg.limiter.sample_count = to_int(key, v);
  else if (key == "reference.n_cells") cfg.reference_n_cells = to_int(key, v);
  else if (key == "reference.dt") cfg.reference_dt = to_real(key, v);
  else if (key == "output.dir") cfg.output_dir = v;
  else if (key == "output.snapshot_every") cfg.snapshot_every = to_int(key, v);
  else throw ConfigError("config: unknown key '" + raw_key + "'");
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
  if (c.n_cells < 1) fail("mesh.n_cells must be positive");
  if (!(c.x_right > c.x_left)) fail("mesh.x_right must exceed mesh.x_left");
  if (c.degree < 0 || c.degree > 8) fail("mesh.degree must be in [0, 8]");
  if (!(c.half_width > 0.0)) fail("velocity.half_width must be positive");
  if (c.n_velocities < 4 || c.n_velocities % 2 != 0) fail("velocity.n_points must be even and >= 4");
  if (c.n_angles < 1) fail("velocity.n_angles must be positive");
  if (!(c.cfl > 0.0) && !(c.dt > 0.0)) fail("time.cfl or time.dt must be positive");
  if (c.dt < 0.0) fail("time.dt must be nonnegative");
  if (!(c.t_final >= 0.0)) fail("time.t_final must be nonnegative");
  if (!(c.epsilon.value > 0.0)) fail("physics.epsilon must be positive");
  if (!(c.penalty_scale > 0.0)) fail("physics.penalty_scale must be positive");
  if (c.reference_n_cells < 1 || !(c.reference_dt > 0.0)) fail("reference settings must be positive");
  if (c.snapshot_every < 0) fail("output.snapshot_every must be nonnegative");
  try {
    c.limiter.samples_for(c.degree);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  try {
    resolve_tableau(c.scheme);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("time.scheme: ") + e.what());
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  std::vector<std::pair<std::string, std::string>> settings;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      settings.emplace_back(name, node.data());
    } else {
      for (const auto& [key, leaf] : node) {
        if (!leaf.empty()) throw ConfigError(source + ": nested value under '" + name + "." + key + "'");
        settings.emplace_back(name + "." + key, leaf.data());
      }
    }
  }
  RunConfig cfg;
  for (const auto& [k, v] : settings) {
    if (canonical_key(k) == "run.test") cfg = preset(parse_test_kind(v));
  }
  for (const auto& [k, v] : settings) {
    if (canonical_key(k) == "run.test") continue;
    try {
      apply_setting(cfg, k, v);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in, path);
}

DiscretizationPtr make_run_discretization(const RunConfig& cfg) {
  return make_discretization(SpatialMesh(cfg.x_left, cfg.x_right, cfg.n_cells, cfg.boundary), cfg.degree,
                             VelocityGrid(cfg.half_width, cfg.n_velocities));
}

DistributionField initial_distribution(const RunConfig& cfg, const DiscretizationPtr& disc) {
  DistributionField f(disc);
  const auto& grid = disc->grid;
  std::vector<double> second(static_cast<std::size_t>(grid.slice_size()));
  for (int node = 0; node < disc->n_nodes(); ++node) {
    const double x = disc->node_x(node);
    auto out = f.slice(node);
    switch (cfg.initial) {
      case InitialCondition::SmoothMaxwellian: {
        const double rho = (2.0 + std::sin(2 * kPi * x)) / 2.0;
        const double T = (5.0 + 2.0 * std::cos(2 * kPi * x)) / 20.0;
        maxwellian_slice(grid, rho, 0.75, -0.75, T, out);
        break;
      }
      case InitialCondition::RelaxingBiMaxwellian: {
        const double rho = (2.0 + std::sin(2 * kPi * x)) / 2.0;
        const double T = (5.0 + 2.0 * std::cos(2 * kPi * x)) / 20.0;
        maxwellian_slice(grid, rho / 2, 1.25, -0.75, T, out);
        maxwellian_slice(grid, rho / 2, -0.45, -0.75, T, second);
        for (std::size_t v = 0; v < out.size(); ++v) out[v] += second[v];
        break;
      }
      case InitialCondition::ShockTube:
        if (x <= 0.5) maxwellian_slice(grid, 1.0, 0.0, 0.0, 1.0, out);
        else maxwellian_slice(grid, 0.125, 0.0, 0.0, 0.25, out);
        break;
      case InitialCondition::MixingBiMaxwellian: {
        const double rho = (2.0 + std::sin(2 * kPi * x)) / 3.0;
        const double u = std::cos(2 * kPi * x);
        const double T = (3.0 + std::cos(2 * kPi * x)) / 4.0;
        maxwellian_slice(grid, rho / 2, u, 0.0, T, out);
        maxwellian_slice(grid, rho / 2, -u, 0.0, T, second);
        for (std::size_t v = 0; v < out.size(); ++v) out[v] += second[v];
        break;
      }
    }
  }
  return f;
}

std::vector<double> epsilon_field(const RunConfig& cfg, const Discretization& disc) {
  std::vector<double> eps(static_cast<std::size_t>(disc.n_nodes()));
  for (int node = 0; node < disc.n_nodes(); ++node) eps[static_cast<std::size_t>(node)] = cfg.epsilon.at(disc.node_x(node));
  return eps;
}

namespace {

double drift(double now, double start) {
  const double d = now - start;
  return std::abs(start) > 1e-300 ? d / std::abs(start) : d;
}

double max_stiffness(const MacroField& U, std::span<const double> eps, double dt, double scale) {
  const auto beta = penalty_beta(U);
  double z = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) z = std::max(z, scale * dt * beta[i] / eps[i]);
  return z;
}

DiagnosticsRow diagnose(const DistributionField& f, const MacroField& U, const Totals& start, int step, double t,
                        double dt, std::span<const double> eps, double scale, long limited) {
  const Totals now = totals(U);
  DiagnosticsRow r{};
  r.step = step;
  r.t = t;
  r.dt = dt;
  r.mass = now.mass;
  r.mom1 = now.mom1;
  r.mom2 = now.mom2;
  r.energy = now.energy;
  r.mass_drift = drift(now.mass, start.mass);
  r.mom1_drift = drift(now.mom1, start.mom1);
  r.mom2_drift = drift(now.mom2, start.mom2);
  r.energy_drift = drift(now.energy, start.energy);
  r.min_f = f.min_value();
  r.ap_error = ap_error(f);
  r.l2_norm = l2_norm(f);
  r.stiffness = dt > 0.0 ? max_stiffness(U, eps, dt, scale) : 0.0;
  r.limited_cells = limited;
  return r;
}

bool finite_row(const DiagnosticsRow& r) {
  for (double v : {r.mass, r.mom1, r.mom2, r.energy, r.min_f, r.ap_error, r.l2_norm}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

// Number of steps and the size of the last one so that the sum lands on t_final.
std::pair<int, double> step_schedule(double t_final, double dt) {
  if (t_final <= 0.0) return {0, 0.0};
  const double ratio = t_final / dt;
  int n = static_cast<int>(std::ceil(ratio - 1e-9));
  n = std::max(n, 1);
  return {n, t_final - (n - 1) * dt};
}

double tableau_zmax(const ButcherPair& t) {
  if (!classify(t).type_CK) return std::numeric_limits<double>::quiet_NaN();
  return positivity_zmax(t).z_max;
}

}  // namespace

RunResult run_simulation(const RunConfig& cfg) {
  validate(cfg);
  RunResult res;
  res.config = cfg;
  const auto disc = make_run_discretization(cfg);
  const auto tableau = resolve_tableau(cfg.scheme);
  std::shared_ptr<const CollisionPlan> plan(build_collision_plan(disc->grid, cfg.n_angles));
  StepOptions opts;
  opts.limiter = cfg.limiter;
  opts.refresh_stage_equilibrium = cfg.refresh_stage_equilibrium;
  opts.penalty_scale = cfg.penalty_scale;
  opts.subtract_equilibrium_collision = cfg.subtract_equilibrium;
  ImexScheme scheme(disc, tableau, plan, opts);
  res.positivity_zmax = tableau_zmax(tableau);

  const auto eps = epsilon_field(cfg, *disc);
  const double dt = cfg.time_step();
  const auto [n_steps, last_dt] = step_schedule(cfg.t_final, dt);

  DistributionField f = initial_distribution(cfg, disc);
  MacroField U = moments_raw(f);
  const Totals start = totals(U);
  res.diagnostics.push_back(diagnose(f, U, start, 0, 0.0, 0.0, eps, cfg.penalty_scale, 0));
  res.snapshots.push_back({0, 0.0, U});
  res.min_f = res.diagnostics.back().min_f;

  double t = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    const double h = n == n_steps ? last_dt : dt;
    StepReport rep;
    try {
      f = scheme.step(f, t, h, eps, &rep);
    } catch (const StepFailure& e) {
      res.failure = FailureInfo{e.what(), e.stage(), e.time(), n};
      break;
    }
    t = n == n_steps ? cfg.t_final : t + h;
    const MacroField Un = moments_raw(f);
    const DiagnosticsRow row = diagnose(f, Un, start, n, t, h, eps, cfg.penalty_scale, rep.limited_cells);
    res.diagnostics.push_back(row);
    if (!finite_row(row)) {
      res.failure = FailureInfo{"non-finite diagnostics", 0, t, n};
      break;
    }
    U = Un;
    res.steps = n;
    res.t = t;
    res.min_f = std::min(res.min_f, row.min_f);
    res.max_stiffness = std::max(res.max_stiffness, row.stiffness);
    if (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0 && n != n_steps) res.snapshots.push_back({n, t, U});
  }
  if (res.snapshots.back().step != res.steps) res.snapshots.push_back({res.steps, res.t, U});
  res.f = std::move(f);
  if (!cfg.output_dir.empty()) write_run_outputs(res, cfg.output_dir);
  return res;
}

MacroField run_limiting(const RunConfig& cfg) {
  validate(cfg);
  const auto disc = make_run_discretization(cfg);
  std::shared_ptr<const CollisionPlan> plan(build_collision_plan(disc->grid, cfg.n_angles));
  StepOptions opts;
  opts.limiter = cfg.limiter;
  ImexScheme scheme(disc, resolve_tableau(cfg.scheme), plan, opts);
  MacroField U = moments_raw(initial_distribution(cfg, disc));
  const double dt = cfg.time_step();
  const auto [n_steps, last_dt] = step_schedule(cfg.t_final, dt);
  double t = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    const double h = n == n_steps ? last_dt : dt;
    U = scheme.limiting_euler_step(U, t, h);
    t += h;
  }
  return U;
}

}  // namespace boltz
