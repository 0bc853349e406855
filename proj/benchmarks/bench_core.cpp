#include <qbound/bounds.hpp>
#include <qbound/random.hpp>

#include <benchmark/benchmark.h>

using namespace qbound;

namespace {

BipartiteDensityMatrix sample(int dB, std::uint64_t seed) {
    Rng rng(seed);
    return random_mixed_induced(BipartiteDims(2, dB), 2 * dB, rng);
}

void BM_HermitianEigensystem(benchmark::State& state) {
    const auto rho = sample(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigensystem(rho.matrix()));
}
BENCHMARK(BM_HermitianEigensystem)->Arg(2)->Arg(8)->Arg(32);

void BM_Negativity(benchmark::State& state) {
    const auto rho = sample(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(negativity(rho));
}
BENCHMARK(BM_Negativity)->Arg(2)->Arg(8)->Arg(32);

void BM_DiscordClosedForm(benchmark::State& state) {
    const auto rho = sample(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(geometric_discord_2norm_qubitA(rho).value);
}
BENCHMARK(BM_DiscordClosedForm)->Arg(2)->Arg(8)->Arg(32);

void BM_DiscordOptimizer(benchmark::State& state) {
    const auto rho = sample(static_cast<int>(state.range(0)), 4);
    for (auto _ : state) {
        Rng rng(5);
        benchmark::DoNotOptimize(geometric_discord_2norm_opt(rho, rng).value);
    }
}
BENCHMARK(BM_DiscordOptimizer)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TraceDiscordUpper(benchmark::State& state) {
    const auto rho = sample(static_cast<int>(state.range(0)), 6);
    for (auto _ : state) {
        Rng rng(7);
        benchmark::DoNotOptimize(trace_discord_upper(rho, 4, rng).value);
    }
}
BENCHMARK(BM_TraceDiscordUpper)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CheckEq21(benchmark::State& state) {
    const auto rho = sample(32, 8);
    for (auto _ : state) benchmark::DoNotOptimize(check_eq21_historical(rho, Rng(9)).margin);
}
BENCHMARK(BM_CheckEq21);

}  // namespace

BENCHMARK_MAIN();
