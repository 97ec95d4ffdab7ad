#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <doctest.h>

#include "boltz/errors.hpp"
#include "boltz/harness.hpp"

using namespace boltz;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("boltz_test_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

RunConfig quick(TestKind kind) {
  RunConfig c = preset(kind);
  c.n_cells = 4;
  c.n_velocities = 16;
  c.t_final = 0.02;
  return c;
}

}  // namespace

TEST_CASE("config file: sections, aliases and preset selection") {
  std::istringstream in(
      "# comment\n"
      "test = ap\n"
      "[mesh]\n"
      "n_cells = 12\n"
      "degree = 1\n"
      "[time]\n"
      "scheme = DP2A242\n"
      "cfl = 2\n"
      "[physics]\n"
      "epsilon = 1e-6\n");
  const RunConfig c = parse_config(in);
  CHECK(c.test == TestKind::Ap);
  CHECK(c.initial == InitialCondition::RelaxingBiMaxwellian);
  CHECK(c.t_final == 0.2);
  CHECK(c.n_cells == 12);
  CHECK(c.degree == 1);
  CHECK(c.scheme == "DP2A242");
  CHECK(c.cfl == 2.0);
  CHECK(c.epsilon.value == 1e-6);
  CHECK_FALSE(c.epsilon.profile);
}

TEST_CASE("config file: errors") {
  std::istringstream bad_key("[mesh]\nwidth = 3\n");
  CHECK_THROWS_AS(parse_config(bad_key), ConfigError);
  std::istringstream bad_value("[time]\ncfl = fast\n");
  CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
  std::istringstream bad_syntax("[mesh]\nn_cells = 4\n[time\n");
  try {
    parse_config(bad_syntax, "case.ini");
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("case.ini:3") != std::string::npos);
  }
  RunConfig c;
  CHECK_THROWS_AS(apply_setting(c, "test", "shock"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "limiter", "maybe"), ConfigError);
  c.n_cells = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = RunConfig{};
  c.scheme = "RK4";
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/boltz.ini"), ConfigError);
}

TEST_CASE("presets") {
  const RunConfig sod = preset(TestKind::Sod);
  CHECK(sod.n_cells == 80);
  CHECK(sod.boundary == Boundary::Neumann);
  CHECK(sod.limiter.enabled);
  CHECK(sod.reference_n_cells == 200);
  CHECK(sod.reference_dt == 3e-4);
  const RunConfig mix = preset(TestKind::Mixing);
  CHECK(mix.epsilon.profile);
  CHECK(mix.epsilon.value == 1e-6);
  CHECK(mix.t_final == 0.3);
  const RunConfig acc = preset(TestKind::Accuracy);
  CHECK(acc.half_width == 7.0);
  CHECK(acc.n_velocities == 32);
  CHECK(acc.time_step() == doctest::Approx(0.5 / 16 / 7.0).epsilon(1e-15));
}

TEST_CASE("mixing epsilon profile") {
  const double eps0 = 1e-6;
  CHECK(mixing_epsilon(0.5, eps0) == doctest::Approx(eps0 + std::tanh(1.0)).epsilon(1e-14));
  CHECK(mixing_epsilon(0.5, eps0) == doctest::Approx(0.7616).epsilon(1e-4));
  const double end = eps0 + 0.5 * (std::tanh(6.0) + std::tanh(-4.0));
  CHECK(mixing_epsilon(0.0, eps0) == doctest::Approx(end).epsilon(1e-12));
  CHECK(mixing_epsilon(1.0, eps0) == doctest::Approx(end).epsilon(1e-12));
  CHECK(mixing_epsilon(0.3, eps0) == doctest::Approx(mixing_epsilon(0.7, eps0)).epsilon(1e-14));
}

TEST_CASE("initial data moments") {
  RunConfig c = preset(TestKind::Sod);
  c.n_cells = 8;
  const auto disc = make_run_discretization(c);
  const MacroField U = moments_raw(initial_distribution(c, disc));
  for (int i = 0; i < U.n_nodes(); ++i) {
    const bool left = disc->node_x(i) <= 0.5;
    CHECK(U.rho[static_cast<std::size_t>(i)] == doctest::Approx(left ? 1.0 : 0.125).epsilon(1e-9));
    CHECK(U.temperature(i) == doctest::Approx(left ? 1.0 : 0.25).epsilon(1e-6));
  }
}

TEST_CASE("time stepping lands on t_final") {
  RunConfig c = quick(TestKind::Accuracy);
  c.t_final = 0.0123;
  const RunResult r = run_simulation(c);
  REQUIRE(r.completed());
  CHECK(r.t == c.t_final);
  const int expected = static_cast<int>(std::ceil(c.t_final / c.time_step() - 1e-12));
  CHECK(r.steps == expected);
  CHECK(r.diagnostics.back().dt < c.time_step());
  CHECK(r.diagnostics.size() == static_cast<std::size_t>(r.steps + 1));
}

TEST_CASE("smooth accuracy run conserves mass") {
  RunConfig c = preset(TestKind::Accuracy);
  c.n_cells = 8;
  c.t_final = 0.05;
  const RunResult r = run_simulation(c);
  REQUIRE(r.completed());
  for (const auto& d : r.diagnostics) {
    CHECK(std::abs(d.mass_drift) <= 1e-9);
    CHECK(std::isfinite(d.l2_norm));
  }
}

TEST_CASE("step failure is recorded, not thrown") {
  RunConfig c = preset(TestKind::Sod);
  c.n_cells = 8;
  c.n_velocities = 16;
  c.scheme = "DP2A242";
  c.epsilon.value = 1e-8;
  c.cfl = 2.0;
  const RunResult r = run_simulation(c);
  REQUIRE(r.failure);
  CHECK(r.failure->step == 1);
  CHECK(r.failure->stage == 2);
  CHECK(r.steps == 0);
  CHECK(r.final_moments().rho.size() == static_cast<std::size_t>(8 * 3));
  CHECK_FALSE(r.completed());
}

TEST_CASE("outputs are written and deterministic") {
  RunConfig c = quick(TestKind::Ap);
  c.snapshot_every = 2;
  const auto a = scratch_dir("a"), b = scratch_dir("b");
  c.output_dir = a.string();
  const RunResult ra = run_simulation(c);
  c.output_dir = b.string();
  run_simulation(c);
  REQUIRE(ra.completed());
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    const auto name = entry.path().filename();
    REQUIRE(std::filesystem::exists(b / name));
    CHECK(slurp(entry.path()) == slurp(b / name));
    ++files;
  }
  CHECK(files >= 4);
  const std::string snap = slurp(a / "snapshot_000000.csv");
  CHECK(snap.rfind("x,rho,u1,u2,T\n", 0) == 0);
  CHECK(slurp(a / "diagnostics.csv").rfind("step,t,dt,mass,", 0) == 0);
  CHECK(slurp(a / "summary.json").find("\"completed\": true") != std::string::npos);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST_CASE("format_real round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) CHECK(std::stod(format_real(v)) == v);
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("convergence table layout") {
  RunConfig c = preset(TestKind::Accuracy);
  c.n_velocities = 16;
  c.t_final = 0.01;
  CHECK_THROWS_AS(run_convergence(c, {4, 6}), ConfigError);
  const auto table = run_convergence(c, {2, 4, 8});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].n_cells == 4);
  CHECK(std::isnan(table.rows[0].order1));
  CHECK(std::isfinite(table.rows[1].order1));
  CHECK(table.rows[1].e1 < table.rows[0].e1);
}

TEST_CASE("limited multistage transport keeps a jump admissible") {
  RunConfig c = preset(TestKind::Sod);
  c.n_cells = 16;
  c.n_velocities = 16;
  c.scheme = "ARS443";
  c.epsilon.value = 1e6;
  c.t_final = 5 * c.time_step();
  const RunResult limited = run_simulation(c);
  REQUIRE(limited.completed());
  CHECK(limited.min_f >= -1e-12);
  c.limiter.enabled = false;
  const RunResult raw = run_simulation(c);
  CHECK_FALSE(raw.completed());
}
