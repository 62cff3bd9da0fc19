#include <benchmark/benchmark.h>

#include <cmath>

#include "holomorse/dt_wallcross.hpp"
#include "holomorse/fs_polygon.hpp"
#include "holomorse/lg_core.hpp"
#include "holomorse/sw_network.hpp"
#include "holomorse/thimble_periods.hpp"

using namespace holomorse;

namespace {

// z^n / n - z, lightly perturbed so the critical values are generic
HoloPotential perturbed_an(int n) {
    num::Poly c(std::size_t(n + 1), 0.0);
    c[1] = cx(-1.0, 0.05);
    c[2] = cx(0.11, -0.07);
    c[std::size_t(n)] = 1.0 / n;
    return HoloPotential::univariate(c);
}

}  // namespace

static void BM_CriticalPoints(benchmark::State& st) {
    auto W = perturbed_an(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(lg::find_critical_points(W));
}
BENCHMARK(BM_CriticalPoints)->DenseRange(3, 9, 2);

static void BM_BpsMatrix(benchmark::State& st) {
    auto W = perturbed_an(int(st.range(0)));
    auto crit = lg::find_critical_points(W).points;
    for (auto _ : st) benchmark::DoNotOptimize(lg::bps_matrix(W, crit));
}
BENCHMARK(BM_BpsMatrix)->DenseRange(3, 6, 1)->Unit(benchmark::kMillisecond);

static void BM_ExponentialPeriod(benchmark::State& st) {
    auto W = HoloPotential::univariate({0.0, -1.0, 0.0, 1.0 / 3.0});
    auto crit = lg::find_critical_points(W).points;
    const Phase zeta = Phase::from_angle(0.3);
    for (auto _ : st) benchmark::DoNotOptimize(periods::exponential_period(W, crit, 0, zeta, 0.5 * zeta.value()));
}
BENCHMARK(BM_ExponentialPeriod)->Unit(benchmark::kMicrosecond);

static void BM_StokesFactorAiry(benchmark::State& st) {
    auto W = HoloPotential::univariate({0.0, -1.0, 0.0, 1.0 / 3.0});
    auto crit = lg::find_critical_points(W).points;
    for (auto _ : st) benchmark::DoNotOptimize(periods::stokes_factor(W, crit, 0, 1));
}
BENCHMARK(BM_StokesFactorAiry)->Unit(benchmark::kMillisecond);

static void BM_EnumeratePolygons(benchmark::State& st) {
    // values on a slightly bent arc, so long convex chains exist
    const int n = int(st.range(0));
    std::vector<cx> v;
    for (int k = 0; k < n; ++k) v.push_back(std::polar(1.0, -0.2 - 2.6 * k / (n - 1)) + cx(0.0, 0.01 * k * k));
    auto cfg = fs::make_config(v, Phase(cx(0, 1)));
    for (auto _ : st)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                if (p != q) benchmark::DoNotOptimize(fs::enumerate_polygons(cfg, p, q));
}
BENCHMARK(BM_EnumeratePolygons)->DenseRange(3, 9, 2)->Unit(benchmark::kMicrosecond);

static void BM_TruncateLattice(benchmark::State& st) {
    fs::LatticeVacuumModel m{{0.0}, 2, {1.0, cx(0.1, 1.0)}, Phase::from_angle(2.0)};
    std::vector<fs::LatticeStep> steps{{0, 0, {1, 0}, 1}, {0, 0, {-1, 0}, 1}, {0, 0, {0, 1}, 1}, {0, 0, {0, -1}, 1}};
    const double N = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(fs::truncate_lattice(m, steps, {0, {0, 0}}, std::nullopt, N));
}
BENCHMARK(BM_TruncateLattice)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

static void BM_CentralChargeMap(benchmark::State& st) {
    auto qd = sw::make_qd({cx(0.1, 0.2), -3.0, 0.0, 1.0});
    for (auto _ : st) benchmark::DoNotOptimize(sw::central_charge_map(qd));
}
BENCHMARK(BM_CentralChargeMap)->Unit(benchmark::kMicrosecond);

static void BM_TraceTrajectory(benchmark::State& st) {
    auto qd = sw::make_qd({cx(0.1, 0.2), -3.0, 0.0, 1.0});
    const Phase zeta = Phase::from_angle(0.7);
    auto starts = sw::critical_starts(qd, 0, zeta, 0.05);
    for (auto _ : st) benchmark::DoNotOptimize(sw::trace_trajectory(qd, starts[0].z0, starts[0].sqrt0, zeta, {}, 0));
}
BENCHMARK(BM_TraceTrajectory)->Unit(benchmark::kMicrosecond);

static void BM_SpectrumScan(benchmark::State& st) {
    auto qd = sw::make_qd({cx(0.1, 0.2), -3.0, 0.0, 1.0});
    sw::ScanConfig sc;
    sc.phase_grid = int(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(sw::find_saddle_connections(qd, sc));
}
BENCHMARK(BM_SpectrumScan)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_PentagonCheck(benchmark::State& st) {
    auto cpt = [](std::vector<dt::SpectrumEntry> v) {
        const std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            auto e = v[i];
            for (int& x : e.gamma) x = -x;
            e.Z = -e.Z;
            v.push_back(e);
        }
        return v;
    };
    const cx z1 = std::polar(1.0, 1.2), z2 = std::polar(1.0, 0.5);
    auto A = cpt({{{1, 0}, 1, z1}, {{0, 1}, 1, z2}});
    auto B = cpt({{{1, 0}, 1, z2}, {{0, 1}, 1, z1}, {{1, 1}, 1, z1 + z2}});
    dt::WcfOptions opt;
    opt.N = int(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(dt::wcf_check(A, B, {{0, 1}, {-1, 0}}, opt));
}
BENCHMARK(BM_PentagonCheck)->DenseRange(4, 12, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
