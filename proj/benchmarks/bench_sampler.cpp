#include "isac/montecarlo.hpp"

#include <benchmark/benchmark.h>

namespace {

const std::vector<double> kLambdas{1.0, 0.1, 0.05, 0.01};

void BM_ZfGains(benchmark::State& state) {
    isac::SystemConfig cfg;
    const auto corr = isac::correlation_from_eigenvalues(kLambdas, 7);
    const isac::ChannelSampler sampler(cfg, corr.U, 1);
    isac::ChannelSampler::Workspace ws;
    std::vector<double> rho(cfg.M);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        sampler.gains(trial++, rho, ws);
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(BM_ZfGains);

void BM_OutageCurve(benchmark::State& state) {
    isac::SystemConfig cfg;
    const auto corr = isac::correlation_from_eigenvalues(kLambdas, 7);
    std::vector<double> ps;
    for (int db = 10; db <= 20; ++db) ps.push_back(isac::db_to_linear(db));
    const std::vector<isac::Design> designs{isac::Design::sensing_centric(),
                                            isac::Design::comm_centric(),
                                            isac::Design::pareto(0.5)};
    for (auto _ : state) {
        auto c = isac::estimate_op_curves(designs, cfg, corr, cfg.R0, ps, 10000, 1);
        benchmark::DoNotOptimize(c);
    }
    state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_OutageCurve)->Unit(benchmark::kMillisecond);

}  // namespace
