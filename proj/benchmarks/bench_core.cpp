#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "hrb/audit.hpp"
#include "hrb/discrete_ops.hpp"
#include "hrb/lab.hpp"
#include "hrb/rng.hpp"
#include "hrb/weights.hpp"

namespace {

hrb::LatticeSeq random_u(long ell, long span, uint64_t seed) {
    hrb::SplitMix64 rng(seed);
    std::vector<hrb::cplx> v(static_cast<size_t>(span) + 1);
    for (auto& z : v) z = hrb::cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    return hrb::LatticeSeq(ell, v, ell);
}

void BM_weight_product(benchmark::State& state) {
    const hrb::PrecisionCtx ctx = hrb::PrecisionCtx::standard();
    long ell = state.range(0);
    long n = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hrb::rho_sw_product(ell, 2.5, ell + (n++ % 1000), ctx));
    }
}
BENCHMARK(BM_weight_product)->Arg(1)->Arg(3)->Arg(5);

void BM_weight_gamma_dd(benchmark::State& state) {
    const hrb::PrecisionCtx ctx = hrb::PrecisionCtx::extended();
    long n = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hrb::rho_sw_gamma(2, 2.5, 2 + (n++ % 1000), ctx));
    }
}
BENCHMARK(BM_weight_gamma_dd);

void BM_cached_oracle_build(benchmark::State& state) {
    long n_hi = state.range(0);
    for (auto _ : state) {
        hrb::SeqOracle g = hrb::make_g_oracle_cached(2, 2.5, n_hi);
        benchmark::DoNotOptimize(g.value(n_hi - 1));
    }
}
BENCHMARK(BM_cached_oracle_build)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_p_laplacian(benchmark::State& state) {
    long span = state.range(0);
    hrb::LatticeSeq u = random_u(2, span, 17);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hrb::p_laplacian(u, 2, 2.5));
    }
    state.SetItemsProcessed(state.iterations() * span);
}
BENCHMARK(BM_p_laplacian)->Arg(256)->Arg(4096);

void BM_functional_gap(benchmark::State& state) {
    const hrb::PrecisionCtx ctx = hrb::PrecisionCtx::standard();
    hrb::WeightSpec w{hrb::Family::sw, 2, 2.5, 0.0};
    hrb::LatticeSeq u = random_u(2, state.range(0), 29);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hrb::functional_gap(u, 2, 2.5, w, ctx));
    }
}
BENCHMARK(BM_functional_gap)->Arg(64)->Arg(512);

void BM_remainder_sum(benchmark::State& state) {
    hrb::SeqOracle g = hrb::make_g_oracle(2, 2.5);
    hrb::LatticeSeq u = random_u(2, 64, 31);
    for (auto _ : state) {
        double s = 0.0;
        for (long k = 1; k <= 2; ++k) s += hrb::remainder_R_k(2, k, 2.0, 2.5, g, u);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_remainder_sum);

}  // namespace

BENCHMARK_MAIN();
