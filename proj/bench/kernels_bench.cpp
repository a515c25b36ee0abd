// Serial reference vs OpenMP for each parallel kernel. Run with
// OMP_NUM_THREADS set to compare thread counts.

#include "fracid/app/fixtures.hpp"
#include "fracid/control/tuning.hpp"
#include "fracid/kernels/parallel.hpp"
#include "fracid/sim/gl.hpp"
#include "fracid/sysid/freq_domain.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace fracid;
using kernels::Backend;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = U(rng);
    return v;
}

Backend backend(const benchmark::State& st) {
    return st.range(0) ? Backend::OpenMP : Backend::Serial;
}

void BM_HistoryDot(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto w = noise(n + 1, 1), x = noise(n + 1, 2);
    const auto b = backend(st);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::history_dot(b, w, x, n, n));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_HistoryDot)->ArgsProduct({{0, 1}, {1 << 12, 1 << 16, 1 << 20}});

void BM_CausalConvolve(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto b = noise(n, 3), u = noise(n, 4);
    std::vector<double> out(n);
    const auto be = backend(st);
    for (auto _ : st) {
        kernels::causal_convolve(be, b, u, out, n);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_CausalConvolve)->ArgsProduct({{0, 1}, {4000, 16000}})->Unit(benchmark::kMillisecond);

void BM_GlClosedLoop(benchmark::State& st) {
    const auto& bank = app::builtin_fixtures();
    sim::SimConfig cfg;
    cfg.T = static_cast<double>(st.range(1));
    cfg.backend = backend(st);
    for (auto _ : st) benchmark::DoNotOptimize(sim::closed_loop_step(bank.fo[0].model, bank.controller, 1.0, cfg));
}
BENCHMARK(BM_GlClosedLoop)->ArgsProduct({{0, 1}, {200, 1000}})->Unit(benchmark::kMillisecond);

void BM_QSweep(benchmark::State& st) {
    const auto& g = app::find_discrete(app::builtin_fixtures(), "G30_100")->model;
    const auto data = synth_freq_data(g, default_grid(g.Ts()));
    const std::vector<RationalOrder> qs{{1}, {1, 2}, {1, 4}, {1, 10}, {1, 20}};
    for (auto _ : st)
        benchmark::DoNotOptimize(sysid::q_sweep(data, RationalOrder(5, 2), qs, sysid::Aggregation::Stacked, backend(st)));
}
BENCHMARK(BM_QSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TuneRestarts(benchmark::State& st) {
    control::TuningProblem p;
    p.plants = app::fo_plants(app::builtin_fixtures());
    p.restarts = 4;
    p.simplex.max_iterations = 50;
    for (auto _ : st) benchmark::DoNotOptimize(control::tune(p, backend(st)));
}
BENCHMARK(BM_TuneRestarts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
