#include <gtest/gtest.h>

#include <random>

#include "holomorse/error.hpp"
#include "holomorse/lg_core.hpp"
#include "oracles.hpp"

using namespace holomorse;
using lg::CriticalPoint;

namespace {

HoloPotential airy() { return HoloPotential::univariate({0.0, -1.0, 0.0, 1.0 / 3.0}); }
HoloPotential a3() { return HoloPotential::univariate({0.0, -1.0, 0.0, 0.0, 0.25}); }

std::vector<CriticalPoint> crit_of(const HoloPotential& W) { return lg::find_critical_points(W).points; }

// distance of w to the segment [a, b]
double seg_dist(cx w, cx a, cx b) {
    cx d = b - a;
    double t = std::clamp(((w - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(a + t * d - w);
}

}  // namespace

TEST(CriticalPoints, QuadraticHasOnePoint) {
    auto r = lg::find_critical_points(HoloPotential::univariate({0.0, 0.0, 1.0}));
    ASSERT_EQ(r.points.size(), 1u);
    EXPECT_NEAR(std::abs(r.points[0].position[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.points[0].value), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(r.points[0].hessian_det - 2.0), 0.0, 1e-12);
}

TEST(CriticalPoints, AiryValues) {
    auto pts = crit_of(airy());
    ASSERT_EQ(pts.size(), 2u);
    for (const auto& p : pts) {
        double x = p.position[0].real();
        EXPECT_NEAR(std::abs(x), 1.0, 1e-12);
        EXPECT_NEAR(std::abs(p.position[0].imag()), 0.0, 1e-12);
        // W(+-1) = -+2/3
        EXPECT_NEAR(std::abs(p.value - cx(-2.0 / 3.0 * x, 0.0)), 0.0, 1e-12);
    }
}

TEST(CriticalPoints, CubeIsDegenerate) {
    try {
        lg::find_critical_points(HoloPotential::univariate({0.0, 0.0, 0.0, 1.0}));
        FAIL() << "expected DegenerateCritical";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateCritical);
    }
}

TEST(CriticalPoints, CoincidentValuesRejected) {
    // z^4/4 - z^2/2: W(1) = W(-1)
    try {
        lg::find_critical_points(HoloPotential::univariate({0.0, 0.0, -0.5, 0.0, 0.25}));
        FAIL() << "expected CoincidentValues";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::CoincidentValues);
    }
}

TEST(CriticalPoints, TwoVariablesFindsBezoutCount) {
    // W = x^3/3 - x + y^3/3 - 2y + x y / 5: gradient roots by Newton from a dense grid
    std::map<Exponent, cx> t{{{3, 0}, 1.0 / 3.0}, {{1, 0}, -1.0}, {{0, 3}, 1.0 / 3.0},
                             {{0, 1}, -2.0},     {{1, 1}, 0.2}};
    HoloPotential W(2, t);
    auto r = lg::find_critical_points(W);
    EXPECT_EQ(r.expected, 4);
    EXPECT_TRUE(r.complete);
    ASSERT_EQ(r.points.size(), 4u);
    for (const auto& p : r.points) {
        auto g = W.gradient(p.position);
        EXPECT_LT(std::abs(g[0]) + std::abs(g[1]), 1e-10);
    }
}

TEST(SolitonPhase, Examples) {
    CriticalPoint p, q;
    p.value = 1.0;
    q.value = 0.0;
    EXPECT_NEAR(std::abs(lg::soliton_phase(p, q).value() - 1.0), 0.0, 1e-15);
    p.value = -2.0 / 3.0;
    q.value = 2.0 / 3.0;
    EXPECT_NEAR(std::abs(lg::soliton_phase(p, q).value() + 1.0), 0.0, 1e-15);
    p.value = cx(0, 1);
    q.value = 0.0;
    EXPECT_NEAR(std::abs(lg::soliton_phase(p, q).value() - cx(0, 1)), 0.0, 1e-15);
}

TEST(SolitonPhase, Antisymmetric) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    for (int k = 0; k < 100; ++k) {
        CriticalPoint p, q;
        p.value = {N(rng), N(rng)};
        q.value = {N(rng), N(rng)};
        EXPECT_LT(std::abs(lg::soliton_phase(p, q).value() + lg::soliton_phase(q, p).value()), 1e-15);
    }
}

TEST(SolitonPhase, CoincidentValues) {
    CriticalPoint p, q;
    EXPECT_THROW(lg::soliton_phase(p, q), Error);
}

TEST(Flow, LinearCapture) {
    HoloPotential W = HoloPotential::univariate({0.0, 0.0, 0.5});
    auto crit = crit_of(W);
    auto tr = lg::flow_gradient(W, Phase(1.0), {cx(1.0), cx(0.0)}, crit);
    EXPECT_EQ(tr.reason, lg::Termination::CapturedAt);
    EXPECT_EQ(tr.captured_id, 0);
    // samples stay on the positive real axis, as u = e^{-x}
    for (const auto& u : tr.samples) {
        EXPECT_NEAR(u[0].imag(), 0.0, 1e-12);
        EXPECT_GT(u[0].real(), 0.0);
    }
}

TEST(Flow, LinearEscape) {
    HoloPotential W = HoloPotential::univariate({0.0, 0.0, 0.5});
    auto crit = crit_of(W);
    auto tr = lg::flow_gradient(W, Phase(1.0), {cx(0.0, 1.0), cx(0.0)}, crit);
    EXPECT_EQ(tr.reason, lg::Termination::Escaped);
    for (const auto& u : tr.samples) EXPECT_NEAR(u[0].real(), 0.0, 1e-12);
    EXPECT_GT(std::abs(tr.samples.back()[0]), 10.0);
}

TEST(Flow, AiryShootingReachesOtherVacuum) {
    HoloPotential W = airy();
    auto crit = crit_of(W);
    const auto& p = lg::by_id(crit, 1);  // z = +1
    // at zeta = -1 soliton phase the unstable direction of +1 is the real axis towards 0
    auto tr = lg::flow_gradient(W, Phase(-1.0), {p.position[0] - 1e-6, cx(0.0)}, crit);
    EXPECT_EQ(tr.reason, lg::Termination::CapturedAt);
    EXPECT_NEAR(std::abs(lg::by_id(crit, tr.captured_id).position[0] + 1.0), 0.0, 1e-9);
}

TEST(Flow, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (int deg = 2; deg <= 5; ++deg) {
        auto W = oracle::random_univariate(rng, deg);
        cx zeta = std::polar(1.0, N(rng));
        for (int k = 0; k < 100; ++k) {
            Point u{cx(N(rng), N(rng)), cx(0.0)};
            auto fd = oracle::fd_gradient(W, zeta, u);
            cx g = std::conj(std::conj(zeta) * W.gradient(u)[0]);
            double scale = std::max(1.0, std::abs(g));
            EXPECT_LT(std::abs(g.real() - fd[0]) / scale, 1e-6);
            EXPECT_LT(std::abs(g.imag() - fd[1]) / scale, 1e-6);
        }
    }
}

TEST(Flow, ConservationAndMonotonicityOnRandomPotentials) {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> N;
    for (int trial = 0; trial < 8; ++trial) {
        auto W = oracle::random_univariate(rng, 2 + trial % 4);
        auto crit = crit_of(W);
        Phase zeta = Phase::from_angle(N(rng));
        for (int k = 0; k < 4; ++k) {
            Point u0{cx(N(rng), N(rng)), cx(0.0)};
            auto tr = lg::flow_gradient(W, zeta, u0, crit);
            double dW = std::abs(tr.values.back() - tr.values.front());
            EXPECT_LT(tr.im_drift, 1e-8 * (1.0 + dW));
            EXPECT_TRUE(tr.monotone);
            for (std::size_t i = 1; i < tr.values.size(); ++i)
                EXPECT_LE((tr.values[i] / zeta.value()).real(), (tr.values[i - 1] / zeta.value()).real() + 1e-8);
        }
    }
}

TEST(Solitons, AiryCountAndMidpoint) {
    HoloPotential W = airy();
    auto crit = crit_of(W);
    auto c = lg::count_solitons(W, crit, 1, 0);
    EXPECT_EQ(std::abs(c.count), 1);
    ASSERT_EQ(c.solitons.size(), 1u);
    double best = 1e9;
    for (const auto& u : c.solitons[0].samples) best = std::min(best, std::abs(u[0]));
    EXPECT_LT(best, 1e-6);
    // CV-1: reversing the pair flips the sign
    EXPECT_EQ(lg::count_solitons(W, crit, 0, 1).count, -c.count);
}

TEST(Solitons, A3AllPairsAndShooting) {
    HoloPotential W = a3();
    auto crit = crit_of(W);
    ASSERT_EQ(crit.size(), 3u);
    for (const auto& p : crit)
        for (const auto& q : crit) {
            if (p.id == q.id) continue;
            auto c = lg::count_solitons(W, crit, p.id, q.id);
            EXPECT_EQ(std::abs(c.count), 1);
            EXPECT_EQ(lg::shooting_count(W, crit, p.id, q.id), int(c.solitons.size()));
        }
}

TEST(Solitons, SingleVacuumIsEmpty) {
    HoloPotential W = HoloPotential::univariate({0.0, 0.0, 0.5});
    auto crit = crit_of(W);
    auto B = lg::bps_matrix(W, crit);
    EXPECT_EQ(B.dim, 1);
    EXPECT_EQ(B.mu[0][0], 0);
}

TEST(Solitons, SegmentImageAndShootingOnPerturbedA4) {
    // generic deformation of z^5/5 - z
    HoloPotential W = HoloPotential::univariate({0.0, cx(-1.0, 0.05), cx(0.11, -0.07), cx(0.03, 0.02), 0.0, 0.2});
    auto crit = crit_of(W);
    ASSERT_EQ(crit.size(), 4u);
    for (const auto& p : crit)
        for (const auto& q : crit) {
            if (p.id >= q.id) continue;
            lg::SolitonCount c;
            try {
                c = lg::count_solitons(W, crit, p.id, q.id);
            } catch (const Error& e) {
                // a third value on the segment: the pair is not generic
                EXPECT_EQ(e.code(), ErrorCode::NonGenericConfig);
                continue;
            }
            for (const auto& s : c.solitons)
                for (const auto& u : s.samples) EXPECT_LT(seg_dist(W.value(u), p.value, q.value), 1e-8);
            EXPECT_EQ(lg::shooting_count(W, crit, p.id, q.id), int(c.solitons.size()));
        }
}

TEST(BpsMatrix, AntisymmetricPhases) {
    HoloPotential W = a3();
    auto crit = crit_of(W);
    auto B = lg::bps_matrix(W, crit);
    for (int i = 0; i < B.dim; ++i)
        for (int j = 0; j < B.dim; ++j) {
            EXPECT_EQ(B.mu[i][j], -B.mu[j][i]);
            EXPECT_LT(std::abs(B.phase_table[i][j] + B.phase_table[j][i]), 1e-14);
        }
}

TEST(Thimble, QuadraticIsImaginaryAxis) {
    HoloPotential W = HoloPotential::univariate({0.0, 0.0, 0.5});
    auto crit = crit_of(W);
    auto t = lg::trace_thimble(W, crit, 0, Phase(1.0));
    ASSERT_EQ(t.rays.size(), 2u);
    for (const auto& r : t.rays)
        for (const auto& u : r.samples) EXPECT_NEAR(u[0].real(), 0.0, 1e-9);
    EXPECT_LT(lg::thimble_image_distance(t, 0.0), 1e-9);
}

TEST(Thimble, AiryImageOnHalfLine) {
    HoloPotential W = airy();
    auto crit = crit_of(W);
    auto t = lg::trace_thimble(W, crit, 1, Phase(1.0));
    EXPECT_EQ(t.rays.size(), 2u);
    EXPECT_LT(lg::thimble_image_distance(t, cx(-2.0 / 3.0)), 1e-6);
}

TEST(Thimble, OnStokesRay) {
    HoloPotential W = airy();
    auto crit = crit_of(W);
    // zeta_{-1,+1} = (2/3 - (-2/3)) / |.| = 1 from the vacuum at -1
    try {
        lg::trace_thimble(W, crit, 0, Phase(1.0));
        FAIL() << "expected OnStokesRay";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OnStokesRay);
    }
}
