// Serial reference vs OpenMP build of each data-parallel kernel, over a few
// grid sizes. Run with --benchmark_filter to pick one kernel.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "sphere_eq/kernels.hpp"
#include "sphere_eq/laplace_beltrami.hpp"

using namespace sphere_eq;
using cplx = std::complex<double>;

namespace {

struct Setup {
    GridPtr grid;
    LegendreTable table;
    ThetaStencil stencil;
    std::vector<double> values;
    std::vector<cplx> spec;
    std::vector<double> coeffs;

    explicit Setup(int n_theta)
        : grid(make_grid(n_theta, 2 * n_theta)),
          table(max_degree_cap(*grid), grid->cos_theta, grid->sin_theta),
          stencil(ThetaStencil::build(*grid)) {
        std::mt19937_64 rng(1);
        std::normal_distribution<double> d;
        values.resize(grid->size());
        for (double& v : values) v = d(rng);
        spec.resize(static_cast<std::size_t>(grid->n_theta) * (grid->n_phi / 2 + 1));
        kernels::serial::ring_forward(values, grid->n_theta, grid->n_phi, spec);
        const int L = table.degree_cap();
        coeffs.resize(static_cast<std::size_t>(L + 1) * (L + 1));
        kernels::serial::legendre_analysis(table, spec, grid->n_phi, grid->theta_weights, coeffs);
    }
};

template <bool Parallel>
void ring_forward(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    std::vector<cplx> out(s.spec.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::ring_forward(s.values, s.grid->n_theta, s.grid->n_phi, out);
        else kernels::serial::ring_forward(s.values, s.grid->n_theta, s.grid->n_phi, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void legendre_analysis(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    std::vector<double> out(s.coeffs.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::omp::legendre_analysis(s.table, s.spec, s.grid->n_phi, s.grid->theta_weights, out);
        else
            kernels::serial::legendre_analysis(s.table, s.spec, s.grid->n_phi, s.grid->theta_weights, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void legendre_synthesis(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    std::vector<cplx> out(s.spec.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::legendre_synthesis(s.table, s.coeffs, s.grid->n_phi, out);
        else kernels::serial::legendre_synthesis(s.table, s.coeffs, s.grid->n_phi, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void fd_apply(benchmark::State& state) {
    Setup s(static_cast<int>(state.range(0)));
    std::vector<cplx> out(s.spec.size());
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::fd_apply(s.stencil, s.spec, s.grid->n_phi, out);
        else kernels::serial::fd_apply(s.stencil, s.spec, s.grid->n_phi, out);
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

#define SPHERE_EQ_BENCH_PAIR(fn)                                                      \
    BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/serial")->Arg(48)->Arg(96)->Arg(192);   \
    BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/omp")->Arg(48)->Arg(96)->Arg(192)

SPHERE_EQ_BENCH_PAIR(ring_forward);
SPHERE_EQ_BENCH_PAIR(legendre_analysis);
SPHERE_EQ_BENCH_PAIR(legendre_synthesis);
SPHERE_EQ_BENCH_PAIR(fd_apply);

BENCHMARK_MAIN();
