#include <benchmark/benchmark.h>

#include <random>

#include "msl/decomposition.hpp"
#include "msl/unicellular.hpp"

using namespace msl;

namespace {

std::vector<cplx> points(int n, std::uint64_t stream) {
    auto rng = make_rng(0, stream);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<cplx> z;
    for (int i = 0; i < n; ++i) z.push_back(std::polar(0.9 * std::sqrt(u(rng)), 2.0 * kPi * u(rng)));
    return z;
}

void BM_Carleson(benchmark::State &state) {
    const auto z = points(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(carleson_constant(z));
}
BENCHMARK(BM_Carleson)->RangeMultiplier(4)->Range(4, 256);

void BM_CompressedShift(benchmark::State &state) {
    const BlaschkeProduct b(points(static_cast<int>(state.range(0)), 2));
    for (auto _ : state) benchmark::DoNotOptimize(compressed_shift_matrix(b));
}
BENCHMARK(BM_CompressedShift)->RangeMultiplier(4)->Range(4, 256);

void BM_OuterFunction(benchmark::State &state) {
    const BoundaryGrid grid(static_cast<int>(state.range(0)));
    const RVec w = modulus_from_levels(grid, 1.0, {{ArcSet::arc(Rational(0), Rational(1, 3)), 0.25}});
    for (auto _ : state) benchmark::DoNotOptimize(outer_from_log_modulus(grid, w));
}
BENCHMARK(BM_OuterFunction)->RangeMultiplier(4)->Range(256, 16384);

void BM_BuildPsi(benchmark::State &state) {
    const BoundaryGrid grid(static_cast<int>(state.range(0)));
    const std::vector<DiscFunction> phi{DiscFunction::constant(0.8),
                                        cplx(0.6) * DiscFunction::blaschke(BlaschkeProduct({cplx(0.3, 0.2)})),
                                        cplx(0.5) * DiscFunction::chi()};
    const ColumnData col = make_column(phi, grid);
    for (auto _ : state) benchmark::DoNotOptimize(build_psi(col));
}
BENCHMARK(BM_BuildPsi)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_JordanModel(benchmark::State &state) {
    const int d = static_cast<int>(state.range(0));
    auto lam = points(d / 2, 3);
    std::vector<cplx> diag = lam;
    diag.insert(diag.end(), lam.begin(), lam.end());
    auto rng = make_rng(0, 4);
    CMat x(d, d), dm = CMat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        dm(i, i) = diag[i];
        for (int j = 0; j < d; ++j) x(i, j) = complex_normal(rng);
    }
    x += 2.0 * std::sqrt(static_cast<double>(d)) * CMat::Identity(d, d);
    const CMat t = x * dm * x.inverse();
    for (auto _ : state) benchmark::DoNotOptimize(jordan_model(t, lam));
}
BENCHMARK(BM_JordanModel)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_SimilarToFiniteDefect(benchmark::State &state) {
    const auto z = points(static_cast<int>(state.range(0)), 5);
    const std::size_t h = z.size() / 2;
    const BlaschkeProduct b1(std::vector<cplx>(z.begin(), z.begin() + h), 1.0, true);
    const BlaschkeProduct b2(std::vector<cplx>(z.begin() + h, z.end()), 1.0, true);
    const CMat t = compressed_shift_matrix(b1 * b2);
    for (auto _ : state) benchmark::DoNotOptimize(similar_to_finite_defect(t, {b1, b2}));
}
BENCHMARK(BM_SimilarToFiniteDefect)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ShiftSubspaces(benchmark::State &state) {
    const double r = 1.0 / std::sqrt(2.0);
    MatrixInnerFunction theta(2, 1, {r * DiscFunction::chi(), DiscFunction::constant(r)});
    MatrixInnerFunction phi(1, 2, {DiscFunction::constant(r), cplx(-r) * DiscFunction::chi()});
    const InnerPair pair = make_inner_pair(theta, phi, BoundaryGrid(1024));
    for (auto _ : state) benchmark::DoNotOptimize(build_shift_subspaces(pair, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ShiftSubspaces)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CoronaScan(benchmark::State &state) {
    const MatrixInnerFunction th = example_theta(DiscFunction::singular_exp(1.0), DiscFunction::singular_exp(1.0));
    const auto path = corona_path(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(corona_infimum_scan(th, path));
}
BENCHMARK(BM_CoronaScan)->Arg(20)->Arg(50);

} // namespace
BENCHMARK_MAIN();
