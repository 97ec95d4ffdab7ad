#include <memory>

#include <benchmark/benchmark.h>

#include "boltz/collision.hpp"
#include "boltz/harness.hpp"
#include "boltz/transport.hpp"

namespace {

struct Fixture {
  boltz::DiscretizationPtr disc;
  boltz::DistributionField f;
  std::unique_ptr<boltz::CollisionPlan> plan;
};

const Fixture& fixture() {
  static const Fixture fx = [] {
    boltz::RunConfig cfg = boltz::preset(boltz::TestKind::Accuracy);
    cfg.n_cells = 32;
    Fixture out;
    out.disc = boltz::make_run_discretization(cfg);
    out.f = boltz::initial_distribution(cfg, out.disc);
    out.plan = boltz::build_collision_plan(out.disc->grid, cfg.n_angles);
    return out;
  }();
  return fx;
}

void BM_collision_parallel(benchmark::State& state) {
  const auto& fx = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(boltz::collision_field(*fx.plan, fx.f));
}

void BM_collision_serial(benchmark::State& state) {
  const auto& fx = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(boltz::collision_field_serial(*fx.plan, fx.f));
}

void BM_shift_parallel(benchmark::State& state) {
  const auto& fx = fixture();
  const auto plan = boltz::build_shift_plan(fx.disc, 0.37 * fx.disc->mesh.dx() / 7.0);
  for (auto _ : state) benchmark::DoNotOptimize(boltz::shift_apply(plan, fx.f));
}

void BM_shift_serial(benchmark::State& state) {
  const auto& fx = fixture();
  const auto plan = boltz::build_shift_plan(fx.disc, 0.37 * fx.disc->mesh.dx() / 7.0);
  for (auto _ : state) benchmark::DoNotOptimize(boltz::shift_apply_serial(plan, fx.f));
}

}  // namespace

BENCHMARK(BM_collision_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_collision_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shift_parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_shift_serial)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
