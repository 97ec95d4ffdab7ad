#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "boltz/errors.hpp"
#include "boltz/harness.hpp"
#include "boltz/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStepFailure = 2;
constexpr int kExitConfig = 3;

struct Overrides {
  std::string config;
  std::string test, scheme, limiter, output_dir, epsilon;
  std::optional<int> nx, k;
  std::optional<double> cfl, t_final;
  std::vector<std::string> settings;

  void add_to(CLI::App* app) {
    app->add_option("--config", config, "INI-style configuration file");
    app->add_option("--test", test, "experiment preset: accuracy|ap|sod|mixing");
    app->add_option("--scheme", scheme, "builtin tableau name or tableau file");
    app->add_option("--nx", nx, "number of spatial cells");
    app->add_option("--k", k, "polynomial degree");
    app->add_option("--cfl", cfl, "CFL number, dt = cfl dx / L");
    app->add_option("--epsilon", epsilon, "Knudsen number or 'profile'");
    app->add_option("--t-final", t_final, "final time");
    app->add_option("--limiter", limiter, "on|off");
    app->add_option("--output-dir", output_dir, "output directory");
    app->add_option("--set", settings, "extra setting section.key=value")->take_all();
  }

  boltz::RunConfig build() const {
    boltz::RunConfig cfg;
    if (!config.empty()) cfg = boltz::load_config(config);
    if (!test.empty()) {
      const auto kind = boltz::parse_test_kind(test);
      if (config.empty()) cfg = boltz::preset(kind);
      else cfg.test = kind;
    }
    if (!scheme.empty()) boltz::apply_setting(cfg, "scheme", scheme);
    if (nx) cfg.n_cells = *nx;
    if (k) cfg.degree = *k;
    if (cfl) cfg.cfl = *cfl;
    if (!epsilon.empty()) boltz::apply_setting(cfg, "epsilon", epsilon);
    if (t_final) cfg.t_final = *t_final;
    if (!limiter.empty()) boltz::apply_setting(cfg, "limiter", limiter);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    for (const auto& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw boltz::ConfigError("--set expects section.key=value, got '" + s + "'");
      boltz::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    boltz::validate(cfg);
    return cfg;
  }
};

void apply_thread_env() {
  const char* env = std::getenv("BOLTZ_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw boltz::ConfigError(std::string("BOLTZ_THREADS must be a positive integer, got '") + env + "'");
  omp_set_num_threads(static_cast<int>(n));
}

std::vector<double> parse_reals(const std::string& list) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw boltz::ConfigError("expected a comma-separated list of numbers, got '" + list + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = list.find(',', pos);
    out.push_back(list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int cmd_run(const Overrides& o, bool with_reference) {
  const auto cfg = o.build();
  const auto r = boltz::run_simulation(cfg);
  std::printf("steps %d  t %s  mass drift %s  min f %s  ap_error %s\n", r.steps, boltz::format_real(r.t).c_str(),
              boltz::format_real(r.diagnostics.back().mass_drift).c_str(), boltz::format_real(r.min_f).c_str(),
              boltz::format_real(r.diagnostics.back().ap_error).c_str());
  if (r.failure) {
    std::fprintf(stderr, "step failure at step %d, stage %d, t = %s: %s\n", r.failure->step, r.failure->stage,
                 boltz::format_real(r.failure->time).c_str(), r.failure->message.c_str());
    return kExitStepFailure;
  }
  if (with_reference) {
    const auto ref = boltz::reference_solution(cfg);
    const auto on_run = boltz::restrict_to(ref, r.final_moments().disc_ptr());
    const auto e = boltz::error_norms(on_run, r.final_moments());
    std::printf("density difference to reference: e1 %s  e2 %s\n", boltz::format_real(e.e1).c_str(),
                boltz::format_real(e.e2).c_str());
    if (!cfg.output_dir.empty()) {
      boltz::write_profile_csv(on_run, (std::filesystem::path(cfg.output_dir) / "reference.csv").string());
    }
  }
  return kExitOk;
}

int cmd_convergence(const Overrides& o, const std::string& nx_list) {
  auto cfg = o.build();
  std::vector<int> n;
  for (double v : parse_reals(nx_list)) n.push_back(static_cast<int>(v));
  const auto table = boltz::run_convergence(cfg, n);
  std::printf("%6s %24s %8s %24s %8s\n", "N_x", "e1", "order", "e2", "order");
  for (const auto& r : table.rows) {
    std::printf("%6d %24s %8.3f %24s %8.3f\n", r.n_cells, boltz::format_real(r.e1).c_str(), r.order1,
                boltz::format_real(r.e2).c_str(), r.order2);
  }
  if (!cfg.output_dir.empty()) {
    char name[96];
    std::snprintf(name, sizeof name, "convergence_k%d_cfl%g_eps%g.csv", cfg.degree, cfg.cfl, cfg.epsilon.value);
    boltz::write_convergence_csv(table, (std::filesystem::path(cfg.output_dir) / name).string());
  }
  return kExitOk;
}

int cmd_ap(Overrides o, const std::string& schemes, const std::string& epsilons) {
  if (o.test.empty() && o.config.empty()) o.test = "ap";
  const auto cfg = o.build();
  const auto result = boltz::run_ap_decay(cfg, split(schemes), parse_reals(epsilons));
  for (const auto& s : result.series) {
    std::printf("%-10s eps %-8g final ap_error %s\n", s.scheme.c_str(), s.epsilon,
                boltz::format_real(s.ap_error.back()).c_str());
  }
  for (const auto& m : result.table) {
    std::printf("eps %-8g e_rho %s  e_u1 %s  e_T %s\n", m.epsilon, boltz::format_real(m.e_rho).c_str(),
                boltz::format_real(m.e_u1).c_str(), boltz::format_real(m.e_T).c_str());
  }
  if (!cfg.output_dir.empty()) boltz::write_ap_outputs(result, cfg.output_dir);
  return kExitOk;
}

int cmd_analyze(const std::string& name, bool text) {
  const auto t = boltz::resolve_tableau(name);
  if (text) std::cout << boltz::tableau_report_text(t);
  std::cout << boltz::tableau_report_json(t) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-Lagrangian DG solver for the 1D2V Boltzmann equation"};
  app.require_subcommand(1);

  Overrides run_opts, conv_opts, ap_opts;
  bool with_reference = false;
  auto* run = app.add_subcommand("run", "run one simulation");
  run_opts.add_to(run);
  run->add_flag("--reference", with_reference, "also compute the fine reference solution and compare densities");

  auto* conv = app.add_subcommand("convergence", "density self-convergence study");
  conv_opts.add_to(conv);
  std::string nx_list = "4,8,16,32";
  conv->add_option("--nx-list", nx_list, "comma-separated doubling resolutions");

  auto* ap = app.add_subcommand("ap-test", "relaxation to equilibrium and limiting-scheme comparison");
  ap_opts.add_to(ap);
  std::string schemes = "ARS443,DP2A242", epsilons = "1e-2,1e-4,1e-6";
  ap->add_option("--schemes", schemes, "comma-separated tableaux");
  ap->add_option("--epsilons", epsilons, "comma-separated Knudsen numbers");

  auto* analyze = app.add_subcommand("analyze-tableau", "classification, order and positivity analysis");
  std::string tableau;
  bool text = false;
  analyze->add_option("NAME", tableau, "builtin name or tableau file")->required();
  analyze->add_flag("--text", text, "print a readable summary before the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    apply_thread_env();
    if (*run) return cmd_run(run_opts, with_reference);
    if (*conv) return cmd_convergence(conv_opts, nx_list);
    if (*ap) return cmd_ap(ap_opts, schemes, epsilons);
    if (*analyze) return cmd_analyze(tableau, text);
  } catch (const boltz::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const boltz::StepFailure& e) {
    std::fprintf(stderr, "step failure at stage %d, t = %s: %s\n", e.stage(), boltz::format_real(e.time()).c_str(),
                 e.what());
    return kExitStepFailure;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
