// Benchmarks comparing the serial reference kernels against their
// OpenMP-parallel counterparts. Build with -DCMAKE_BUILD_TYPE=Release and run
// ./vfree-bench; both paths produce bit-identical results (asserted in the
// test suite), so the numbers here are directly comparable.

#include <benchmark/benchmark.h>

#include "vfree/exact_seq.hpp"
#include "vfree/gog.hpp"
#include "vfree/modular_seq.hpp"
#include "vfree/padic.hpp"
#include "vfree/rationality.hpp"

using namespace vfree;

namespace {

GraphOfGroups free_product(std::initializer_list<u64> orders) {
    GraphOfGroups g;
    int i = 0;
    for (u64 o : orders) g.vertices["v" + std::to_string(i++)] = o;
    for (int j = 0; j + 1 < i; ++j)
        g.edges.push_back({"e" + std::to_string(j), "v" + std::to_string(j),
                           "v" + std::to_string(j + 1), 1});
    return g;
}

const GraphOfGroups& psl2() {
    static GraphOfGroups g = free_product({2, 3});
    return g;
}

void BM_modular_convolution(benchmark::State& state, Exec exec) {
    const u64 terms = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        auto f = f_mod(psl2(), 3, 1, terms, exec); // p | m: guarded fixed-point path
        benchmark::DoNotOptimize(f);
    }
}

void BM_exact_convolution(benchmark::State& state, Exec exec) {
    const u64 terms = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        auto f = f_sequence(psl2(), terms, exec);
        benchmark::DoNotOptimize(f);
    }
}

void BM_factorial_units(benchmark::State& state, Exec exec) {
    const u64 max_n = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        FactorialUnits table(3, 64, max_n, exec);
        benchmark::DoNotOptimize(table.unit(max_n));
    }
}

void BM_valuation_scan(benchmark::State& state, Exec exec) {
    const u64 terms = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        auto r = lemma_main_check(psl2(), 7, terms, exec);
        benchmark::DoNotOptimize(r);
    }
}

void BM_fit_verification(benchmark::State& state, Exec exec) {
    static const GraphOfGroups h6 = free_product({2, 6});
    const u64 terms = static_cast<u64>(state.range(0));
    static std::vector<mpz_class> f = f_mod(h6, 3, 9, 400);
    std::vector<mpz_class> series(f.begin() + 1, f.begin() + 1 + terms);
    RationalFit fit = fit_rational(series, 3, 9, -1, 43, 50);
    for (auto _ : state) {
        bool ok = fit_reproduces_prefix(fit, series, exec);
        benchmark::DoNotOptimize(ok);
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_modular_convolution, serial, Exec::serial)->Arg(1500);
BENCHMARK_CAPTURE(BM_modular_convolution, parallel, Exec::parallel)->Arg(1500);
BENCHMARK_CAPTURE(BM_exact_convolution, serial, Exec::serial)->Arg(600);
BENCHMARK_CAPTURE(BM_exact_convolution, parallel, Exec::parallel)->Arg(600);
BENCHMARK_CAPTURE(BM_factorial_units, serial, Exec::serial)->Arg(100000);
BENCHMARK_CAPTURE(BM_factorial_units, parallel, Exec::parallel)->Arg(100000);
BENCHMARK_CAPTURE(BM_valuation_scan, serial, Exec::serial)->Arg(5000);
BENCHMARK_CAPTURE(BM_valuation_scan, parallel, Exec::parallel)->Arg(5000);
BENCHMARK_CAPTURE(BM_fit_verification, serial, Exec::serial)->Arg(400);
BENCHMARK_CAPTURE(BM_fit_verification, parallel, Exec::parallel)->Arg(400);

BENCHMARK_MAIN();
