#include <vector>

#include <benchmark/benchmark.h>

#include "gibbslab/diagnostics/autocorrelation.hpp"
#include "gibbslab/numerics/distributions.hpp"
#include "gibbslab/numerics/rng.hpp"

using namespace gibbslab;

namespace {

void BM_Iat(benchmark::State& state) {
    RngStream rng(6, 0);
    std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
    double x = 0.0;
    for (auto& v : xs) v = x = 0.9 * x + rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(iat(xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Iat)->Arg(100000)->Arg(1000000);

void BM_DrawTruncatedNormalTail(benchmark::State& state) {
    RngStream rng(7, 0);
    const DistSpec law = TruncatedNormal{0.0, 1.0, 8.0, kInf};
    for (auto _ : state) benchmark::DoNotOptimize(draw(law, rng));
}
BENCHMARK(BM_DrawTruncatedNormalTail);

void BM_DrawGamma(benchmark::State& state) {
    RngStream rng(8, 0);
    const DistSpec law = Gamma{0.3, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(draw(law, rng));
}
BENCHMARK(BM_DrawGamma);

}  // namespace
