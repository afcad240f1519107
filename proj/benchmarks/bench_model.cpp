#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "anoqrl/grad.hpp"
#include "anoqrl/observable.hpp"
#include "anoqrl/qmodel.hpp"
#include "anoqrl/qstate.hpp"
#include "anoqrl/rng.hpp"

namespace {

using namespace anoqrl;

QModelConfig config_for(benchmark::State &state) {
    QModelConfig c;
    c.n_qubits = static_cast<std::size_t>(state.range(0));
    c.locality = static_cast<std::size_t>(state.range(1));
    c.n_outputs = 3;
    return c;
}

std::vector<double> features(std::size_t n, Rng &rng) {
    std::vector<double> x(n);
    for (auto &v : x) {
        v = rng.uniform(-1.5, 1.5);
    }
    return x;
}

void BM_Forward(benchmark::State &state) {
    const auto c = config_for(state);
    Rng rng{1};
    const auto params = init_params(c, rng);
    const auto x = features(c.n_qubits, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forward(c, params, x));
    }
}
BENCHMARK(BM_Forward)->Args({4, 3})->Args({6, 6})->Args({8, 3});

void BM_VectorJacobian(benchmark::State &state) {
    const auto c = config_for(state);
    Rng rng{2};
    const auto params = init_params(c, rng);
    const auto x = features(c.n_qubits, rng);
    const std::vector<double> w{1.0, 0.0, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vector_jacobian(c, params, x, w, true));
    }
}
BENCHMARK(BM_VectorJacobian)->Args({4, 3})->Args({6, 6})->Args({8, 3});

void BM_ReducedDensity(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    Rng rng{3};
    auto sv = encode(features(n, rng));
    apply_entangler(sv);
    std::vector<std::size_t> qubits(k);
    std::iota(qubits.begin(), qubits.end(), std::size_t{0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(reduced_density(sv, qubits));
    }
}
BENCHMARK(BM_ReducedDensity)->Args({4, 3})->Args({6, 6})->Args({8, 4});

void BM_Spectrum(benchmark::State &state) {
    Rng rng{4};
    const auto hp = HermitianParams::random(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum(hp));
    }
}
BENCHMARK(BM_Spectrum)->Arg(2)->Arg(3)->Arg(6);

} // namespace

BENCHMARK_MAIN();
