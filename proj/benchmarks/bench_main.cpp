#include <benchmark/benchmark.h>

#include <random>

#include "novtel/complex.hpp"

namespace {

using namespace novtel;

Matrix<NovikovScalar> random_matrix(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coeff(-3, 3), num(0, 4), den(1, 4);
    Matrix<NovikovScalar> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const int c = coeff(rng);
            if (c) m(i, j) = NovikovScalar::monomial(rat(c), rat(num(rng), den(rng)));
        }
    return m;
}

void BM_snf_exact(benchmark::State& state) {
    const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(snf_exact(m));
}
BENCHMARK(BM_snf_exact)->Arg(4)->Arg(8)->Arg(16);

void BM_snf_mod(benchmark::State& state) {
    const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 11);
    const Rational lambda = rat(5);
    for (auto _ : state) benchmark::DoNotOptimize(snf_mod(m, lambda));
}
BENCHMARK(BM_snf_mod)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_homology(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    GradedComplex c;
    std::vector<std::string> a, b;
    for (std::size_t i = 0; i < n; ++i) {
        a.push_back("a" + std::to_string(i));
        b.push_back("b" + std::to_string(i));
    }
    c.set_generators(0, a);
    c.set_generators(1, b);
    Matrix<NovikovScalar> d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = NovikovScalar::monomial(rat(1), rat(i));
    c.set_differential(0, d);
    for (auto _ : state) benchmark::DoNotOptimize(homology_barcode(c));
}
BENCHMARK(BM_homology)->Arg(8)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
