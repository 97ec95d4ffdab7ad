#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "boltz/errors.hpp"
#include "boltz/harness.hpp"

namespace boltz {

namespace {

std::ofstream open_output(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

nlohmann::ordered_json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["test"] = to_string(c.test);
  j["x_left"] = c.x_left;
  j["x_right"] = c.x_right;
  j["n_cells"] = c.n_cells;
  j["boundary"] = c.boundary == Boundary::Periodic ? "periodic" : "neumann";
  j["degree"] = c.degree;
  j["half_width"] = c.half_width;
  j["n_velocities"] = c.n_velocities;
  j["n_angles"] = c.n_angles;
  j["scheme"] = c.scheme;
  j["cfl"] = c.cfl;
  j["dt"] = c.time_step();
  j["epsilon"] = c.epsilon.profile ? nlohmann::ordered_json("profile") : nlohmann::ordered_json(c.epsilon.value);
  if (c.epsilon.profile) j["eps0"] = c.epsilon.value;
  j["t_final"] = c.t_final;
  j["initial"] = to_string(c.initial);
  j["limiter"] = c.limiter.enabled;
  j["refresh_equilibrium"] = c.refresh_stage_equilibrium;
  j["penalty_scale"] = c.penalty_scale;
  j["subtract_equilibrium"] = c.subtract_equilibrium;
  return j;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_profile_csv(const MacroField& U, const std::string& path) {
  auto out = open_output(path);
  out << "x,rho,u1,u2,T\n";
  const auto& disc = U.disc();
  for (int i = 0; i < U.n_nodes(); ++i) {
    out << format_real(disc.node_x(i)) << ',' << format_real(U.rho[static_cast<std::size_t>(i)]) << ','
        << format_real(U.u1(i)) << ',' << format_real(U.u2(i)) << ',' << format_real(U.temperature(i)) << '\n';
  }
}

void write_run_outputs(const RunResult& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& s : r.snapshots) {
    char name[40];
    std::snprintf(name, sizeof name, "snapshot_%06d.csv", s.step);
    write_profile_csv(s.U, (std::filesystem::path(dir) / name).string());
  }
  {
    auto out = open_output((std::filesystem::path(dir) / "diagnostics.csv").string());
    out << "step,t,dt,mass,mom1,mom2,energy,mass_drift,mom1_drift,mom2_drift,energy_drift,min_f,ap_error,l2_norm,"
           "stiffness,limited_cells\n";
    for (const auto& d : r.diagnostics) {
      out << d.step;
      for (double v : {d.t, d.dt, d.mass, d.mom1, d.mom2, d.energy, d.mass_drift, d.mom1_drift, d.mom2_drift,
                       d.energy_drift, d.min_f, d.ap_error, d.l2_norm, d.stiffness}) {
        out << ',' << format_real(v);
      }
      out << ',' << d.limited_cells << '\n';
    }
  }
  nlohmann::ordered_json j;
  j["config"] = config_json(r.config);
  j["completed"] = r.completed();
  j["steps"] = r.steps;
  j["t"] = r.t;
  const auto& last = r.diagnostics.back();
  j["mass_drift"] = real(last.mass_drift);
  j["momentum_drift"] = {real(last.mom1_drift), real(last.mom2_drift)};
  j["energy_drift"] = real(last.energy_drift);
  j["min_f"] = real(r.min_f);
  j["ap_error"] = real(last.ap_error);
  j["l2_norm"] = real(last.l2_norm);
  j["max_stiffness"] = real(r.max_stiffness);
  j["positivity_z_max"] = std::isinf(r.positivity_zmax) ? nlohmann::ordered_json("unconditional") : real(r.positivity_zmax);
  if (r.failure) {
    j["failure"] = {{"message", r.failure->message}, {"stage", r.failure->stage}, {"time", r.failure->time},
                    {"step", r.failure->step}};
  }
  auto out = open_output((std::filesystem::path(dir) / "summary.json").string());
  out << j.dump(2) << '\n';
}

void write_convergence_csv(const ConvergenceTable& t, const std::string& path) {
  auto out = open_output(path);
  out << "n_cells,e1,order1,e2,order2\n";
  for (const auto& r : t.rows) {
    out << r.n_cells << ',' << format_real(r.e1) << ',' << format_real(r.order1) << ',' << format_real(r.e2) << ','
        << format_real(r.order2) << '\n';
  }
}

void write_ap_outputs(const ApDecayResult& r, const std::string& dir) {
  {
    auto out = open_output((std::filesystem::path(dir) / "ap_error.csv").string());
    out << "scheme,epsilon,t,ap_error\n";
    for (const auto& s : r.series) {
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        out << s.scheme << ',' << format_real(s.epsilon) << ',' << format_real(s.t[i]) << ','
            << format_real(s.ap_error[i]) << '\n';
      }
    }
  }
  auto out = open_output((std::filesystem::path(dir) / "moment_differences.csv").string());
  out << "epsilon,e_rho,e_u1,e_T\n";
  for (const auto& m : r.table) {
    out << format_real(m.epsilon) << ',' << format_real(m.e_rho) << ',' << format_real(m.e_u1) << ','
        << format_real(m.e_T) << '\n';
  }
}

}  // namespace boltz
