#include "isac/allocation.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_Waterfill(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> g(static_cast<std::size_t>(state.range(0)));
    for (double& v : g) v = expo(rng);
    for (auto _ : state) {
        auto a = isac::waterfill(g, 10.0);
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_Waterfill)->Arg(2)->Arg(4)->Arg(8)->Arg(32);

void BM_Pareto(benchmark::State& state) {
    isac::SystemConfig cfg;
    cfg.p = 10.0;
    const std::vector<double> lambdas{1.0, 0.1, 0.05, 0.01};
    std::mt19937_64 rng(2);
    std::exponential_distribution<double> expo(1.0);
    std::vector<std::vector<double>> draws(64, std::vector<double>(4));
    for (auto& d : draws) {
        for (double& v : d) v = expo(rng);
    }
    const double alpha = static_cast<double>(state.range(0)) / 10.0;
    std::size_t i = 0;
    for (auto _ : state) {
        auto pt = isac::pareto_allocate(draws[i++ % draws.size()], lambdas, cfg, alpha);
        benchmark::DoNotOptimize(pt);
    }
}
BENCHMARK(BM_Pareto)->Arg(2)->Arg(5)->Arg(8);

}  // namespace
