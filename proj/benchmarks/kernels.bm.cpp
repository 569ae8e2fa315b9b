#include <benchmark/benchmark.h>

#include <random>

#include "ltower/fixed_points.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/lattice.hpp"
#include "ltower/rep_theory.hpp"
#include "ltower/strata.hpp"

using namespace ltower;

namespace {

LocalMatrix companion2(const FieldPtr& F, std::vector<Fq> c0, std::vector<Fq> c1) {
    return LocalMatrix::companion({Laurent(F, 0, std::move(c0)), Laurent(F, 0, std::move(c1)), Laurent::constant(F, 1)});
}

void BM_Tower(benchmark::State& state) {
    const auto q = static_cast<unsigned>(state.range(0));
    const auto n = static_cast<unsigned>(state.range(1));
    const int m = static_cast<int>(state.range(2));
    const RingPtr R = CoeffRing::base(FqField::make(q, 1), m + 1);
    const FormalOModule X = make_module(R, q, n, std::vector<RingElem>(n - 1, R->pi()));
    for (auto _ : state) {
        TowerAlgebra T = build_tower(X, m);
        benchmark::DoNotOptimize(T.rank());
    }
}
BENCHMARK(BM_Tower)->Args({2, 2, 1})->Args({3, 2, 1})->Args({2, 1, 3})->Args({2, 3, 1})->Unit(benchmark::kMillisecond);

void BM_CheckLevel(benchmark::State& state) {
    const RingPtr R = CoeffRing::base(FqField::make(3, 1), 2);
    const TowerAlgebra T = build_tower(make_module(R, 3, 2, {R->pi()}), 1);
    for (auto _ : state) benchmark::DoNotOptimize(check_level(T.phi).ok);
}
BENCHMARK(BM_CheckLevel)->Unit(benchmark::kMillisecond);

void BM_Summands(benchmark::State& state) {
    const ChainRing R(FqField::make(static_cast<unsigned>(state.range(0)), 1), static_cast<int>(state.range(2)));
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_summands(R, n, n / 2).size());
}
BENCHMARK(BM_Summands)->Args({2, 3, 1})->Args({2, 4, 1})->Args({3, 3, 2})->Args({2, 4, 2});

void BM_Flags(benchmark::State& state) {
    const ChainRing R(FqField::make(static_cast<unsigned>(state.range(0)), 1), 1);
    const int n = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_flags(R, n).size());
}
BENCHMARK(BM_Flags)->Args({2, 3})->Args({3, 3})->Args({2, 4});

void BM_StrataFixed(benchmark::State& state) {
    const FieldPtr F = FqField::make(2, 1);
    const LocalMatrix g = companion2(F, {1}, {1});
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(strata_fixed_count(g, m, 1));
}
BENCHMARK(BM_StrataFixed)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

void BM_Hnf(benchmark::State& state) {
    const FieldPtr F = FqField::make(3, 1);
    std::mt19937_64 rng(1);
    const int n = static_cast<int>(state.range(0));
    std::vector<LocalMatrix> bases;
    for (int k = 0; k < 64; ++k) {
        LocalMatrix B(F, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::vector<Fq> d(4);
                for (auto& x : d) x = static_cast<Fq>(rng() % 3);
                B.at(i, j) = Laurent(F, i == j ? static_cast<int>(rng() % 3) : 0, d);
            }
        if (B.det().is_zero()) continue;
        bases.push_back(B);
    }
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(Lattice::from_basis(bases[k++ % bases.size()]).volume());
}
BENCHMARK(BM_Hnf)->Arg(2)->Arg(3)->Arg(4);

void BM_LatticeWalk(benchmark::State& state) {
    const FieldPtr F = FqField::make(2, 1);
    const int B = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(for_each_normalized_lattice(F, 2, B, [](const Lattice&) {}));
}
BENCHMARK(BM_LatticeWalk)->Arg(2)->Arg(4)->Arg(6);

void BM_FixedPointsStructured(benchmark::State& state) {
    const FieldPtr F = FqField::make(3, 1);
    const LocalMatrix gb = companion2(F, {1}, {});
    const LocalMatrix I = LocalMatrix::identity(F, 2);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_fixed_points_structured(gb, I, m).count);
}
BENCHMARK(BM_FixedPointsStructured)->Arg(1)->Arg(2)->Arg(3);

void BM_FixedPointsBruteForce(benchmark::State& state) {
    const FieldPtr F = FqField::make(2, 1);
    const LocalMatrix gb = companion2(F, {1}, {1});
    const LocalMatrix I = LocalMatrix::identity(F, 2);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(count_fixed_points_bruteforce(gb, I, m).count);
}
BENCHMARK(BM_FixedPointsBruteForce)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_CharacterTable(benchmark::State& state) {
    const GroupPtr G = state.range(0) == 0 ? group_gl(2, 3, 1) : state.range(0) == 1 ? group_gl(2, 2, 2) : group_quaternion_quotient(3, 2);
    state.SetLabel(G->name());
    for (auto _ : state) benchmark::DoNotOptimize(character_table(G).chars.size());
}
BENCHMARK(BM_CharacterTable)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_JlMatch(benchmark::State& state) {
    const auto q = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(jl_match(q).pairs.size());
}
BENCHMARK(BM_JlMatch)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
