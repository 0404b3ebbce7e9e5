// Hot-path timings: symbol evaluation, per-step propagator factors, the
// nonlinear pipeline, and the estimate-suite scans.

#include <benchmark/benchmark.h>

#include <numbers>

#include "cks/estimates.hpp"
#include "cks/init.hpp"
#include "cks/interaction.hpp"
#include "cks/propagator.hpp"
#include "cks/spectral.hpp"
#include "cks/stepper.hpp"
#include "cks/symbol.hpp"

namespace {

using namespace cks;
constexpr double pi = std::numbers::pi;

GridSpec grid64() { return GridSpec({64, 64, 64}, {2 * pi, 2 * pi, 2 * pi}); }

SimState state64(double A, double alpha) {
    const GridSpec g = grid64();
    return SimState{ShearFrame{0.0, FlowParams(A, alpha)},
                    to_spectral(gaussian_bump(g, 4.0, 0.6, {pi, pi, pi})),
                    0.0};
}

void symbol_closed_form(benchmark::State& st) {
    const FlowParams flow(20.0, 2.0);
    const FreqPoint p(3.0, -7.0, 2.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(accumulated_symbol(p, 0.0, 0.7, flow, -1));
}
BENCHMARK(symbol_closed_form);

void symbol_quadrature(benchmark::State& st) {
    const FlowParams flow(20.0, 1.5);
    const FreqPoint p(3.0, -7.0, 2.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(
            accumulated_symbol_quad(p, 0.0, 0.7, flow, -1));
}
BENCHMARK(symbol_quadrature);

// One step's worth of damping factors on 64^3; alpha = 2 hits the closed
// form, alpha = 1.5 the per-mode quadrature.
void propagator_factors_64(benchmark::State& st) {
    const double alpha = st.range(0) / 100.0;
    const GridSpec g = grid64();
    const ShearFrame frame{0.0, FlowParams(10.0, alpha)};
    for (auto _ : st)
        benchmark::DoNotOptimize(propagator_factors(g, frame, 0.3, 0.31));
}
BENCHMARK(propagator_factors_64)->Arg(200)->Arg(150)
    ->Unit(benchmark::kMillisecond);

void nonlinear_eval_64(benchmark::State& st) {
    const SimState s = state64(10.0, 2.0);
    for (auto _ : st)
        benchmark::DoNotOptimize(nonlinear_eval(s.n_hat, s.frame, s.t));
}
BENCHMARK(nonlinear_eval_64)->Unit(benchmark::kMillisecond);

void heun_step_64(benchmark::State& st) {
    StepConfig cfg;
    for (auto _ : st) {
        st.PauseTiming();
        SimState s = state64(10.0, 2.0);
        st.ResumeTiming();
        step(s, 0.01, cfg);
        benchmark::DoNotOptimize(s.n_hat.c.data());
    }
}
BENCHMARK(heun_step_64)->Unit(benchmark::kMillisecond);

void fft_round_trip_64(benchmark::State& st) {
    const Field f = gaussian_bump(grid64(), 4.0, 0.6, {pi, pi, pi});
    for (auto _ : st) {
        Field back = to_physical(to_spectral(f));
        benchmark::DoNotOptimize(back.v.data());
    }
}
BENCHMARK(fft_round_trip_64)->Unit(benchmark::kMillisecond);

void weighted_moment_scan(benchmark::State& st) {
    const std::vector<std::array<int, 3>> ws = {
        {0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    for (auto _ : st)
        benchmark::DoNotOptimize(weighted_moments(1.5, 10.0, ws));
}
BENCHMARK(weighted_moment_scan)->Unit(benchmark::kMillisecond);

void inequality_cloud(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(sample_inequality(
            InequalityId::moment_lower, 1.0, st.range(0), 1));
}
BENCHMARK(inequality_cloud)->Arg(20000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
