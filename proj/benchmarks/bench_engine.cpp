#include <benchmark/benchmark.h>

#include "gibbslab/engine/sampler.hpp"
#include "gibbslab/models/gmrf_hybrid.hpp"
#include "gibbslab/models/heavy_tail_hmm.hpp"
#include "gibbslab/models/jump_transform.hpp"
#include "gibbslab/models/latent_poisson.hpp"
#include "gibbslab/models/repeated_measurements.hpp"
#include "gibbslab/models/synthetic.hpp"

using namespace gibbslab;

namespace {

template <class M>
void sweeps(benchmark::State& state, const M& model, const Parametrization& p) {
    SamplerConfig cfg;
    cfg.parametrization = p;
    cfg.pilot_iterations = 200;
    auto s = p.is_centered() ? Sampler::centered(model, cfg, RngStream(1, 0))
                             : Sampler::noncentered(model, cfg, RngStream(1, 0));
    for (auto _ : state) {
        s.step();
        benchmark::DoNotOptimize(s.theta());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(model.size()));
}

void BM_RepeatedMeasurements(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(2, n);
    RepeatedMeasurements m({1.0, 1.0}, synthetic::repeated_measurements(0.5, 1.0, 1.0, n, rng));
    sweeps(state, m, state.range(1) ? Parametrization::noncentered() : Parametrization::centered());
}
BENCHMARK(BM_RepeatedMeasurements)->ArgsProduct({{10, 100, 1000, 10000}, {0, 1}});

void BM_HeavyTail(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RngStream rng(3, n);
    HeavyTailHmm::Params p;
    HeavyTailHmm m(p, synthetic::heavy_tail_hmm(0.0, p, n, rng));
    sweeps(state, m, Parametrization::noncentered());
}
BENCHMARK(BM_HeavyTail)->Arg(10)->Arg(100);

void BM_GmrfHybrid(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    RngStream rng(4, side);
    const auto q = car_lattice_precision(side, side);
    const auto obs = spread_sites(side * side, side);
    GmrfHybrid m(q, obs, synthetic::gmrf(1.0, q, obs, rng));
    sweeps(state, m, Parametrization::data_based("hybrid"));
}
BENCHMARK(BM_GmrfHybrid)->Arg(6)->Arg(20)->Arg(50);

void BM_LatentPoissonNoncentered(benchmark::State& state) {
    LatentPoisson m({1.0, 1.0, PoissonConstruction::Rectangle}, static_cast<std::size_t>(state.range(0)));
    sweeps(state, m, Parametrization::noncentered());
}
BENCHMARK(BM_LatentPoissonNoncentered)->Arg(7)->Arg(100);

void BM_JumpTransform(benchmark::State& state) {
    RngStream rng(5, 0);
    const auto in = draw_jump_inputs(rng, 100000);
    for (auto _ : state) {
        const auto path = simulate_jump_transform(in, {3.0, 1.0}, static_cast<double>(state.range(0)), 3);
        benchmark::DoNotOptimize(path.final_value());
    }
}
BENCHMARK(BM_JumpTransform)->Arg(50)->Arg(1000);

}  // namespace
