#include <benchmark/benchmark.h>

#include "abmod/change_of_variable.hpp"
#include "abmod/classification.hpp"
#include "abmod/module.hpp"
#include "abmod/ore.hpp"

using namespace abmod;

namespace {

TruncSeries sample_unit(int order) {
    TruncSeries s = TruncSeries::one(order);
    for (int n = 1; n < order; ++n) s.set(n, rat_of((n * 7) % 5 - 2, (n % 3) + 1));
    return s;
}

void SeriesMul(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    TruncSeries a = sample_unit(order), b = sample_unit(order);
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
    state.SetComplexityN(order);
}
BENCHMARK(SeriesMul)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void OreProduct(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    OreOperator P = op_from_factors(order, {rat_of(7, 2), rat_of(9, 2), rat_of(13, 2)},
                                    {sample_unit(order), sample_unit(order)});
    for (auto _ : state) benchmark::DoNotOptimize(P * P);
}
BENCHMARK(OreProduct)->RangeMultiplier(2)->Range(16, 64);

void KernelModel(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    FrescoPresentation pres;
    pres.lambda1 = rat_of(7, 2);
    pres.p = {2, 3};
    pres.S = {sample_unit(order), sample_unit(order)};
    pres.order = order;
    auto [E, gen] = module_from_presentation(pres);
    (void)gen;
    Rat mu = pres.exponents().back() + 2;
    for (auto _ : state) benchmark::DoNotOptimize(kernel_dim(E, mu, order));
}
BENCHMARK(KernelModel)->RangeMultiplier(2)->Range(8, 32);

void Saturation(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    FrescoPresentation pres;
    pres.lambda1 = rat_of(7, 2);
    pres.p = {2, 3};
    pres.S = {sample_unit(order), sample_unit(order)};
    pres.order = order;
    auto [E, gen] = module_from_presentation(pres);
    (void)gen;
    for (auto _ : state) benchmark::DoNotOptimize(saturate_and_bernstein(E, 5));
}
BENCHMARK(Saturation)->RangeMultiplier(2)->Range(24, 48);

void PushforwardRank3(benchmark::State& state) {
    int order = static_cast<int>(state.range(0));
    FrescoPresentation pres = make_E_gamma(rat_of(7, 2), 2, 2, Rat(1), order);
    ChangeOfVariable theta{{Rat(1), Rat(1)}};
    for (auto _ : state) benchmark::DoNotOptimize(pushforward(pres, theta));
}
BENCHMARK(PushforwardRank3)->RangeMultiplier(2)->Range(24, 48);

} // namespace

BENCHMARK_MAIN();
