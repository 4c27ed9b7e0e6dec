// Serial reference kernels against the OpenMP versions at 1 thread and at
// all threads. Sizes are Gaussian windows at oversampling 16/15.
#include "gabor/kernels.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

using namespace gabor;

namespace {

LatticeParams lattice_for(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const int a = L / 16;
    return make_lattice(L, a, a);
}

// Arg(1): serial reference, Arg(2): OpenMP with one thread, Arg(3): all threads.
enum Variant { kReference = 1, kOneThread = 2, kAllThreads = 3 };

struct ThreadScope {
    int saved = omp_get_max_threads();
    explicit ThreadScope(benchmark::State& state) {
        if (state.range(1) == kOneThread) omp_set_num_threads(1);
        state.counters["threads"] = state.range(1) == kAllThreads ? saved : 1;
    }
    ~ThreadScope() { omp_set_num_threads(saved); }
};

void BM_analysis(benchmark::State& state) {
    const LatticeParams lat = lattice_for(state);
    const ComplexSignal g = gaussian_window(lat), f = random_window(lat, 1);
    CoefficientArray c;
    ThreadScope scope(state);
    for (auto _ : state) {
        if (state.range(1) == kReference) kernels::reference::analysis(f, g, lat, c);
        else kernels::analysis(f, g, lat, c);
        benchmark::DoNotOptimize(c.data());
    }
}

void BM_walnut(benchmark::State& state) {
    const LatticeParams lat = lattice_for(state);
    const ComplexSignal g = gaussian_window(lat);
    Eigen::MatrixXcd S;
    ThreadScope scope(state);
    for (auto _ : state) {
        if (state.range(1) == kReference) kernels::reference::walnut_matrix(g, lat, S);
        else kernels::walnut_matrix(g, lat, S);
        benchmark::DoNotOptimize(S.data());
    }
}

void BM_janssen_apply(benchmark::State& state) {
    const LatticeParams lat = lattice_for(state);
    const ComplexSignal g = gaussian_window(lat), f = random_window(lat, 2);
    Eigen::MatrixXcd coeffs;
    kernels::janssen_coefficients(g, lat, coeffs);
    ComplexSignal out;
    ThreadScope scope(state);
    for (auto _ : state) {
        if (state.range(1) == kReference) kernels::reference::janssen_apply(coeffs, f, lat, out);
        else kernels::janssen_apply(coeffs, f, lat, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_zak(benchmark::State& state) {
    const LatticeParams lat = lattice_for(state);
    const ComplexSignal f = random_window(lat, 3);
    Eigen::MatrixXcd z;
    ThreadScope scope(state);
    for (auto _ : state) {
        if (state.range(1) == kReference) kernels::reference::zak(f, lat.M, z);
        else kernels::zak(f, lat.M, z);
        benchmark::DoNotOptimize(z.data());
    }
}

void sizes(benchmark::internal::Benchmark* b) {
    for (int L : {240, 960}) {
        for (int v : {kReference, kOneThread, kAllThreads}) b->Args({L, v});
    }
    b->ArgNames({"L", "variant"})->Unit(benchmark::kMicrosecond);
}

} // namespace

BENCHMARK(BM_analysis)->Apply(sizes);
BENCHMARK(BM_walnut)->Apply(sizes);
BENCHMARK(BM_janssen_apply)->Apply(sizes);
BENCHMARK(BM_zak)->Apply(sizes);

BENCHMARK_MAIN();
