#include "isac/rates.hpp"
#include "isac/specfun.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_E1(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(isac::specfun::exp_integral_e1(x));
}
BENCHMARK(BM_E1)->Arg(1)->Arg(10)->Arg(100);

void BM_Digamma(benchmark::State& state) {
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(isac::specfun::digamma(x));
        x = x < 50.0 ? x + 0.7 : 0.3;
    }
}
BENCHMARK(BM_Digamma);

void BM_EcrClosedForm(benchmark::State& state) {
    const std::vector<double> s{3.0, 1.2, 0.4, 0.05};
    const int k_prime = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(isac::ecr_closed_form(s, k_prime));
}
BENCHMARK(BM_EcrClosedForm)->Arg(0)->Arg(4);

}  // namespace
