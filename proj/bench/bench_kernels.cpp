// OpenMP kernels against their single-threaded references. Run with
// OMP_NUM_THREADS set to compare thread counts.
#include <benchmark/benchmark.h>

#include "nullwave/crossval.hpp"
#include "nullwave/data_gauge.hpp"
#include "nullwave/dn_core.hpp"
#include "nullwave/geometry.hpp"

using namespace nullwave;

namespace {

struct Setup {
  WaveProfile profile = WaveProfile::bump(0.3, 0.0, 2.0);
  Nonlinearity model = Nonlinearity::membrane();
  RectInitialData data;
  DNGrid grid;
  DiagonalBuild diag;
  DNState state;

  explicit Setup(double h) {
    RectInitialData::Perturbation p;
    p.family = RectInitialData::Family::Bump;
    p.eps_bar = 1e-3;
    p.center = 0.5;
    p.width = 1.5;
    data = RectInitialData::perturbed(profile, p);
    grid = DNGrid::symmetric(5.0, h);
    diag = build_diagonal_data(data, profile, model, grid);
    state = march(grid, diag.data, profile, model);
  }
};

const Setup& setup(int k) {
  static const Setup coarse(0.05), fine(0.025);
  return k == 0 ? coarse : fine;
}

double h_of(int k) { return k == 0 ? 0.05 : 0.025; }

void BM_march(benchmark::State& st) {
  const Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(march(s.grid, s.diag.data, s.profile, s.model));
  st.counters["nodes"] = static_cast<double>(s.grid.size()) / 2;
}

void BM_march_serial(benchmark::State& st) {
  const Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference::march_serial(s.grid, s.diag.data, s.profile, s.model));
  }
}

void BM_frame(benchmark::State& st) {
  const Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(integrate_frame(s.state, s.diag.slice, s.grid, s.profile, s.model));
  }
}

void BM_frame_serial(benchmark::State& st) {
  const Setup& s = setup(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    benchmark::DoNotOptimize(
        reference::integrate_frame_serial(s.state, s.diag.slice, s.grid, s.profile, s.model));
  }
}

RectGrid rect_grid(int k) {
  RectGrid g;
  g.x_min = -10.0;
  g.x_max = 10.0;
  g.dx = h_of(k);
  g.t_final = 2.0;
  g.snapshot_times = {1.0, 2.0};
  return g;
}

void BM_rect(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  const Setup& s = setup(k);
  const RectGrid g = rect_grid(k);
  for (auto _ : st) benchmark::DoNotOptimize(rect_solve(s.data, s.model, g, s.profile));
}

void BM_rect_serial(benchmark::State& st) {
  const int k = static_cast<int>(st.range(0));
  const Setup& s = setup(k);
  const RectGrid g = rect_grid(k);
  for (auto _ : st) {
    benchmark::DoNotOptimize(reference::rect_solve_serial(s.data, s.model, g, s.profile));
  }
}

}  // namespace

BENCHMARK(BM_march)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_march_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frame)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_frame_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rect_serial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
