#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "holomorse/error.hpp"
#include "holomorse/sw_network.hpp"
#include "oracles.hpp"

using namespace holomorse;
using oracle::kPi;

namespace {

template <class F>
std::optional<ErrorCode> code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

// 2 * int_a^b sqrt(p) dz along the straight segment, with the square root
// continued by nearest sign and z = a + (b - a)(1 - cos t)/2 to soften the ends.
cx segment_period(const num::Poly& p, cx a, cx b) {
    const int n = 4000;
    cx prev = 0.0, s = 0.0;
    bool have = false;
    const auto g = num::gauss_legendre(10);
    for (int k = 0; k < n; ++k) {
        const double m = (k + 0.5) * kPi / n, h = kPi / n;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double t = m + 0.5 * h * g.x[i];
            const cx z = a + (b - a) * (1.0 - std::cos(t)) / 2.0;
            cx r = std::sqrt(num::polyval(p, z));
            if (have && std::abs(r + prev) < std::abs(r - prev)) r = -r;
            prev = r;
            have = true;
            s += 0.5 * h * g.w[i] * r * (b - a) * std::sin(t) / 2.0;
        }
    }
    return 2.0 * s;
}

num::Poly ad(cx u) { return {u, -3.0, 0.0, 1.0}; }

sw::ScanConfig small_scan() {
    sw::ScanConfig c;
    c.phase_grid = 400;
    return c;
}

const sw::BpsSpectrum& spectrum_at(cx u) {
    static std::map<std::pair<double, double>, sw::BpsSpectrum> cache;
    auto key = std::make_pair(u.real(), u.imag());
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, sw::find_saddle_connections(sw::make_qd(ad(u)), small_scan())).first;
    return it->second;
}

std::set<std::vector<int>> charges_up_to_sign(const sw::BpsSpectrum& s) {
    std::set<std::vector<int>> out;
    for (const auto& e : s.entries) {
        auto g = e.gamma;
        auto neg = g;
        for (int& v : neg) v = -v;
        out.insert(std::max(g, neg));
    }
    return out;
}

}  // namespace

TEST(TurningPoints, Examples) {
    auto t = sw::turning_points({-1.0, 0.0, 1.0});
    ASSERT_EQ(t.size(), 2u);
    EXPECT_NEAR(std::abs(t[0] + 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(t[1] - 1.0), 0.0, 1e-12);
    auto c = sw::turning_points({-1.0, 0.0, 0.0, 1.0});
    ASSERT_EQ(c.size(), 3u);
    for (cx r : c) EXPECT_NEAR(std::abs(r * r * r - 1.0), 0.0, 1e-12);
    EXPECT_EQ(code_of([] { sw::turning_points({0.0, 0.0, 1.0}); }), ErrorCode::NonSimpleRoot);
    EXPECT_EQ(code_of([] { sw::make_qd({1.0}); }), ErrorCode::InvalidInput);
}

TEST(CentralCharge, QuadraticIsIPi) {
    auto qd = sw::make_qd({-1.0, 0.0, 1.0});
    cx Z = sw::central_charge(qd, {0, 1});
    EXPECT_LT(std::abs(Z - cx(0, kPi)), 1e-8);
    EXPECT_LT(std::abs(std::abs(segment_period(qd.poly, -1.0, 1.0)) - kPi), 1e-8);
}

TEST(CentralCharge, RandomCubicsMatchSegmentQuadrature) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N;
    int done = 0;
    for (int trial = 0; trial < 20; ++trial) {
        num::Poly p{cx(N(rng), N(rng)), cx(N(rng), N(rng)), 0.0, 1.0};
        sw::QuadraticDifferential qd;
        try {
            qd = sw::make_qd(p);
        } catch (const Error&) {
            continue;
        }
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                cx Z;
                try {
                    Z = sw::central_charge(qd, {a, b});
                } catch (const Error& e) {
                    EXPECT_EQ(e.code(), ErrorCode::ContourThroughRoot);
                    continue;
                }
                cx ref = segment_period(p, qd.turning_points[std::size_t(a)], qd.turning_points[std::size_t(b)]);
                EXPECT_LT(std::min(std::abs(Z - ref), std::abs(Z + ref)), 1e-8 * (1.0 + std::abs(ref)));
                EXPECT_GE(Z.imag(), -1e-12);
                ++done;
            }
    }
    EXPECT_GT(done, 30);
}

TEST(CentralCharge, ContourThroughRoot) {
    // roots -1, 0, 1 on a line: the outer segment passes through 0
    auto qd = sw::make_qd({0.0, -1.0, 0.0, 1.0});
    EXPECT_EQ(code_of([&] { sw::central_charge(qd, {0, 2}); }), ErrorCode::ContourThroughRoot);
}

TEST(Lattice, PairingMatchesBilinearRelation) {
    // for the holomorphic form dz/sqrt(p), Im(conj(A) B) > 0 exactly when <A, B> = +1
    std::mt19937_64 rng(13);
    std::normal_distribution<double> N;
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        num::Poly p{cx(N(rng), N(rng)), cx(N(rng), N(rng)), 0.0, 1.0};
        sw::QuadraticDifferential qd;
        sw::ChargeLattice L;
        try {
            qd = sw::make_qd(p);
            L = sw::charge_lattice(qd);
        } catch (const Error&) {
            continue;
        }
        ASSERT_EQ(L.rank, 2);
        EXPECT_EQ(L.pairing[0][1], -L.pairing[1][0]);
        EXPECT_EQ(std::abs(L.pairing[0][1]), 1);
        auto A = sw::cycle_periods(qd, L.cycles[0]).companions.at(0);
        auto B = sw::cycle_periods(qd, L.cycles[1]).companions.at(0);
        EXPECT_EQ((std::conj(A) * B).imag() > 0 ? 1 : -1, L.pairing[0][1]);
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

TEST(Trajectory, ConstantDifferentialIsStraight) {
    // p = 1 has no turning points; the ODE alone is still well defined
    sw::QuadraticDifferential qd{{1.0}, {}};
    sw::TrajConfig cfg;
    cfg.escape_radius = 10.0;
    auto t = sw::trace_trajectory(qd, cx(0, 0.5), 1.0, Phase::from_angle(0.0), cfg);
    EXPECT_EQ(t.end, sw::TrajEnd::Escaped);
    for (cx z : t.z) EXPECT_NEAR(z.imag(), 0.5, 1e-12);
    EXPECT_GT(t.z.back().real(), 9.0);
}

TEST(Trajectory, ThreeProngedWeb) {
    // p = z: w = (2/3) z^{3/2} is real along the web, which is three straight rays
    auto qd = sw::make_qd({0.0, 1.0});
    auto starts = sw::critical_starts(qd, 0, Phase::from_angle(0.0), 0.05);
    ASSERT_EQ(starts.size(), 3u);
    std::vector<double> dirs;
    for (const auto& s : starts) {
        auto t = sw::trace_trajectory(qd, s.z0, s.sqrt0, Phase::from_angle(0.0), {}, 0);
        EXPECT_EQ(t.end, sw::TrajEnd::Escaped);
        const double phi = std::arg(t.z.back());
        for (cx z : t.z) EXPECT_LT(std::abs((z * std::polar(1.0, -phi)).imag()), 1e-7 * (1.0 + std::abs(z)));
        cx w = 2.0 / 3.0 * std::pow(t.z.back(), 1.5);
        EXPECT_LT(std::abs(std::remainder(std::arg(w), kPi)), 1e-7);
        dirs.push_back(phi);
        EXPECT_LT(t.im_drift, 1e-8 * t.length);
    }
    std::sort(dirs.begin(), dirs.end());
    EXPECT_NEAR(dirs[0], -2 * kPi / 3, 1e-7);
    EXPECT_NEAR(dirs[1], 0.0, 1e-7);
    EXPECT_NEAR(dirs[2], 2 * kPi / 3, 1e-7);
}

TEST(Trajectory, SaddleConnectionAlongSegment) {
    auto qd = sw::make_qd({-1.0, 0.0, 1.0});
    int hits = 0;
    for (double ang : {kPi / 2, -kPi / 2}) {
        Phase zeta = Phase::from_angle(ang);
        for (const auto& s : sw::critical_starts(qd, 0, zeta, 0.05)) {
            auto t = sw::trace_trajectory(qd, s.z0, s.sqrt0, zeta, {}, 0);
            if (t.end != sw::TrajEnd::HitTurningPoint) continue;
            EXPECT_EQ(t.hit, 1);
            for (cx z : t.z) EXPECT_LT(std::abs(z.imag()), 1e-8);
            ++hits;
        }
    }
    EXPECT_EQ(hits, 2);
}

TEST(Trajectory, ImDriftOnRandomCubics) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N;
    std::uniform_real_distribution<double> U(-kPi, kPi);
    for (int trial = 0; trial < 10; ++trial) {
        num::Poly p{cx(N(rng), N(rng)), cx(N(rng), N(rng)), 0.0, 1.0};
        auto qd = sw::make_qd(p);
        Phase zeta = Phase::from_angle(U(rng));
        cx z0(N(rng), N(rng));
        auto t = sw::trace_trajectory(qd, z0, std::sqrt(num::polyval(p, z0)), zeta);
        EXPECT_LT(t.im_drift, 1e-8 * std::max(1.0, t.length));
        // the ODE action agrees with the conserved quantity up to the same drift
        EXPECT_LT(std::abs((std::conj(zeta.value()) * t.action).imag()), 1e-8 * std::max(1.0, t.length));
    }
}

TEST(Spectrum, QuadraticOneState) {
    auto qd = sw::make_qd({-1.0, 0.0, 1.0});
    auto s = sw::find_saddle_connections(qd, small_scan());
    ASSERT_EQ(sw::count_states(s), 1);
    for (const auto& e : s.entries) {
        EXPECT_EQ(e.omega, 1);
        EXPECT_EQ(std::abs(e.gamma.at(0)), 1);
    }
    EXPECT_LT(std::abs(s.Z.at(0) - cx(0, kPi)), 1e-8);
    auto rep = sw::support_check(s, sw::central_charge_map(qd));
    EXPECT_NEAR(rep.A, 1.0 / kPi, 1e-9);
    EXPECT_TRUE(rep.pass);
    EXPECT_LT(s.max_alignment, 1e-6);
}

TEST(Spectrum, MinimalChamber) {
    const auto& s = spectrum_at(cx(0.1, 0.2));
    EXPECT_EQ(sw::count_states(s), 2);
    auto ch = charges_up_to_sign(s);
    EXPECT_EQ(ch.size(), 2u);
    EXPECT_LT(s.max_alignment, 1e-6);
}

TEST(Spectrum, MaximalChamber) {
    const auto& s = spectrum_at(cx(0.0, 3.0));
    EXPECT_EQ(sw::count_states(s), 3);
    auto ch = charges_up_to_sign(s);
    ASSERT_EQ(ch.size(), 3u);
    // two charges and their sum, up to sign
    std::vector<std::vector<int>> v(ch.begin(), ch.end());
    bool sum = false;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const int k = 3 - i - j;
            std::vector<int> s2{v[std::size_t(i)][0] + v[std::size_t(j)][0], v[std::size_t(i)][1] + v[std::size_t(j)][1]};
            std::vector<int> d2{v[std::size_t(i)][0] - v[std::size_t(j)][0], v[std::size_t(i)][1] - v[std::size_t(j)][1]};
            auto neg = [](std::vector<int> g) { for (int& x : g) x = -x; return g; };
            for (const auto& c : {s2, d2})
                if (c == v[std::size_t(k)] || neg(c) == v[std::size_t(k)]) sum = true;
        }
    EXPECT_TRUE(sum);
    EXPECT_LT(s.max_alignment, 1e-6);
}

TEST(Spectrum, CptAndPhases) {
    for (cx u : {cx(0.1, 0.2), cx(0.0, 3.0)}) {
        const auto& s = spectrum_at(u);
        auto cm = sw::CentralChargeMap{s.Z, {}};
        std::map<std::vector<int>, int> om;
        for (const auto& e : s.entries) om[e.gamma] = e.omega;
        for (const auto& [g, w] : om) {
            auto n = g;
            for (int& x : n) x = -x;
            ASSERT_TRUE(om.count(n));
            EXPECT_EQ(om[n], w);
        }
        for (const auto& e : s.entries) {
            cx z = cm(e.gamma);
            EXPECT_LT(std::abs(std::arg(z / e.phase.value())), 1e-9);
        }
        for (std::size_t i = 1; i < s.entries.size(); ++i)
            EXPECT_LE(std::arg(s.entries[i - 1].phase.value()), std::arg(s.entries[i].phase.value()) + 1e-12);
    }
}

TEST(Spectrum, NearbyParametersAgree) {
    auto a = charges_up_to_sign(spectrum_at(cx(0.1, 0.2)));
    auto b = charges_up_to_sign(spectrum_at(cx(0.12, 0.21)));
    EXPECT_EQ(a, b);
}

TEST(Support, ZeroCentralCharge) {
    sw::BpsSpectrum s;
    sw::BpsEntry e;
    e.gamma = {1, 0};
    s.entries.push_back(e);
    sw::CentralChargeMap Z{{0.0, 1.0}, {}};
    EXPECT_EQ(code_of([&] { sw::support_check(s, Z); }), ErrorCode::ZeroCentralCharge);
}

TEST(Support, ExternalBound) {
    const auto& s = spectrum_at(cx(0.0, 3.0));
    sw::CentralChargeMap Z{s.Z, {}};
    auto own = sw::support_check(s, Z);
    EXPECT_TRUE(own.pass);
    EXPECT_TRUE(sw::support_check(s, Z, own.A).pass);
    EXPECT_FALSE(sw::support_check(s, Z, 0.5 * own.A).pass);
}
