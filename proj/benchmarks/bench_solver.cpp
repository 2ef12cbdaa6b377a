#include <random>

#include <benchmark/benchmark.h>

#include "chisini/solver.hpp"

namespace {

struct Instance {
    chisini::Functional T;
    chisini::RandomVariable f;
    chisini::SigmaAlgebra sigma;
};

Instance make_instance(std::size_t n, std::size_t atoms, std::uint64_t seed,
                       bool entropic) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.1, 1.0), v(-3.0, 3.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (double& x : w) { x = u(rng); s += x; }
    for (double& x : w) x /= s;

    std::vector<chisini::Event> parts(atoms, chisini::Event::none(n));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = i < atoms ? i : rng() % atoms;
        parts[k] = parts[k].unite(chisini::Event::single(i, n));
    }

    chisini::RandomVariable f = chisini::RandomVariable::zero(n);
    for (double& x : f.values) x = v(rng);

    return {entropic ? chisini::Functional::entropic(w, 1.0)
                     : chisini::Functional::linear(w),
            f, chisini::SigmaAlgebra::from_atoms(parts)};
}

void BM_ConditionalSolveLinear(benchmark::State& state) {
    const auto inst = make_instance(16, static_cast<std::size_t>(state.range(0)), 7, false);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            chisini::conditional_chisini(inst.T, inst.f, inst.sigma));
}

void BM_ConditionalSolveEntropic(benchmark::State& state) {
    const auto inst = make_instance(16, static_cast<std::size_t>(state.range(0)), 7, true);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            chisini::conditional_chisini(inst.T, inst.f, inst.sigma));
}

void BM_VerifySystem(benchmark::State& state) {
    const auto inst = make_instance(20, static_cast<std::size_t>(state.range(0)), 11, false);
    const auto sol = chisini::conditional_chisini(inst.T, inst.f, inst.sigma);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            chisini::verify_system(inst.T, inst.f, sol.g, inst.sigma));
}

}  // namespace

BENCHMARK(BM_ConditionalSolveLinear)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_ConditionalSolveEntropic)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(BM_VerifySystem)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
