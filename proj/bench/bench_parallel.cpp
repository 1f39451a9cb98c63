// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include "logpot/analysis.hpp"
#include "logpot/kernels.hpp"
#include "logpot/spectral.hpp"
#include "logpot/symbols.hpp"

using namespace logpot;

namespace {

const KernelParams kParams = KernelParams::make(2, 0.5, 2.0);

void BM_Profile(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(tabulate_profile(kParams, 1e-3, 10.0, static_cast<int>(st.range(0))));
}

void BM_ProfileSerial(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(tabulate_profile_serial(kParams, 1e-3, 10.0, static_cast<int>(st.range(0))));
}

void BM_Multiplier(benchmark::State& st) {
    const auto g = SpectralGrid::make(2, 20.0, static_cast<int>(st.range(0)));
    const auto u = random_bandlimited_field(g, g.M / 4, 1);
    const auto m = inhom_multiplier(kParams);
    u.coeffs();
    for (auto _ : st) benchmark::DoNotOptimize(apply_multiplier(u, m));
}

void BM_MultiplierSerial(benchmark::State& st) {
    const auto g = SpectralGrid::make(2, 20.0, static_cast<int>(st.range(0)));
    const auto u = random_bandlimited_field(g, g.M / 4, 1);
    const auto m = inhom_multiplier(kParams);
    u.coeffs();
    for (auto _ : st) benchmark::DoNotOptimize(apply_multiplier_serial(u, m));
}

void BM_Dyadic(benchmark::State& st) {
    const auto d = SymbolDescriptor::make(SymbolId::bridge_ratio, KernelParams::make(1, 0.5, 2.0));
    const auto part = build_partition(-24, 10);
    for (auto _ : st) benchmark::DoNotOptimize(synthesize_l1_kernel(d, part));
}

void BM_DyadicSerial(benchmark::State& st) {
    const auto d = SymbolDescriptor::make(SymbolId::bridge_ratio, KernelParams::make(1, 0.5, 2.0));
    const auto part = build_partition(-24, 10);
    for (auto _ : st) benchmark::DoNotOptimize(synthesize_l1_kernel_serial(d, part));
}

} // namespace

BENCHMARK(BM_Profile)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProfileSerial)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Multiplier)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplierSerial)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dyadic)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DyadicSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
