#include <benchmark/benchmark.h>

#include "tomo/bases.hpp"
#include "tomo/linalg.hpp"
#include "tomo/measurement.hpp"
#include "tomo/recovery.hpp"
#include "tomo/rng.hpp"

namespace {

tomo::HermitianMatrix random_hermitian(std::size_t d, tomo::Rng& rng) {
    tomo::HermitianMatrix h(d);
    for (std::size_t i = 0; i < d; ++i) {
        h.set(i, i, rng.gaussian());
        for (std::size_t j = i + 1; j < d; ++j)
            h.set(i, j, tomo::cplx{rng.gaussian(), rng.gaussian()});
    }
    return h;
}

void bm_hermitian_eig(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    tomo::Rng rng(7);
    const tomo::HermitianMatrix h = random_hermitian(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(tomo::hermitian_eig(h));
}
BENCHMARK(bm_hermitian_eig)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void bm_forward_map(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const auto scheme = tomo::MeasurementScheme::from_bases(
        tomo::build_scheme(tomo::PolynomialFamily::chebyshev_u(), d, tomo::default_alpha(d)));
    tomo::Rng rng(7);
    const tomo::HermitianMatrix h = random_hermitian(d, rng);
    for (auto _ : state) benchmark::DoNotOptimize(scheme.forward_map(h));
}
BENCHMARK(bm_forward_map)->Arg(8)->Arg(16)->Arg(32);

void bm_build_scheme(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const auto family = tomo::PolynomialFamily::chebyshev_u();
    for (auto _ : state)
        benchmark::DoNotOptimize(tomo::build_scheme(family, d, tomo::default_alpha(d)));
}
BENCHMARK(bm_build_scheme)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void bm_solve_trace_min(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const auto scheme = tomo::MeasurementScheme::from_bases(
        tomo::build_scheme(tomo::PolynomialFamily::chebyshev_u(), d, tomo::default_alpha(d)));
    tomo::Rng rng(7);
    const tomo::DensityMatrix sigma = tomo::sample_haar_pure(d, rng);
    tomo::OutcomeTable b = scheme.forward_map(sigma.matrix());
    b += tomo::sample_noise(scheme.n_povms(), scheme.n_outcomes(), 1e-4, rng);
    tomo::SolverOptions opts;
    opts.rel_tol = 1e-7;
    for (auto _ : state)
        benchmark::DoNotOptimize(tomo::solve_trace_min(scheme, b, 1e-4, opts));
}
BENCHMARK(bm_solve_trace_min)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void bm_solve_least_squares(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const auto scheme = tomo::MeasurementScheme::from_bases(
        tomo::build_scheme(tomo::PolynomialFamily::chebyshev_u(), d, tomo::default_alpha(d)));
    tomo::Rng rng(7);
    const tomo::DensityMatrix sigma = tomo::sample_haar_pure(d, rng);
    tomo::OutcomeTable b = scheme.forward_map(sigma.matrix());
    b += tomo::sample_noise(scheme.n_povms(), scheme.n_outcomes(), 1e-4, rng);
    tomo::SolverOptions opts;
    opts.rel_tol = 1e-7;
    for (auto _ : state)
        benchmark::DoNotOptimize(tomo::solve_least_squares(scheme, b, opts));
}
BENCHMARK(bm_solve_least_squares)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
