#pragma once

// Brute-force counterparts of the polygon and lattice enumerations. They
// re-derive the geometric predicates instead of calling the library's.

#include <cmath>
#include <complex>
#include <functional>
#include <set>
#include <vector>

#include "holomorse/fs_polygon.hpp"
#include "oracles.hpp"

namespace oracle {

using holomorse::exact::QPoint;
using holomorse::exact::Rational;
namespace fs = holomorse::fs;
namespace exact = holomorse::exact;

inline Rational cr(const QPoint& a, const QPoint& b) { return a.re * b.im - a.im * b.re; }
inline Rational dt(const QPoint& a, const QPoint& b) { return a.re * b.re + a.im * b.im; }

// Closed polygon (w_inf, W(p), ..., W(q)) with w_inf pushed far out along
// zeta: clockwise and convex, collinear vertices allowed if they do not
// backtrack, turning exactly once.
inline bool brute_convex(const std::vector<QPoint>& vals, const QPoint& zeta, const std::vector<int>& seq) {
    Rational R = 1;
    for (const auto& v : vals) {
        if (abs(v.re) > R) R = abs(v.re);
        if (abs(v.im) > R) R = abs(v.im);
    }
    R *= Rational(1LL << 40);
    std::vector<QPoint> P{{R * zeta.re, R * zeta.im}};
    for (int i : seq) P.push_back(vals[std::size_t(i)]);
    const std::size_t n = P.size();
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        QPoint a = P[i], b = P[(i + 1) % n], c = P[(i + 2) % n];
        QPoint e1{b.re - a.re, b.im - a.im}, e2{c.re - b.re, c.im - b.im};
        Rational x = cr(e1, e2);
        if (x > 0) return false;
        if (x == 0 && dt(e1, e2) <= 0) return false;
        auto d1 = exact::to_cx(e1), d2 = exact::to_cx(e2);
        turning += std::arg(d2 / d1);
    }
    return std::abs(turning + 2.0 * kPi) < 1e-6;
}

inline std::set<std::vector<int>> brute_polygons(const std::vector<QPoint>& vals, const QPoint& zeta, int p, int q) {
    std::set<std::vector<int>> out;
    std::vector<int> others;
    for (int i = 0; i < int(vals.size()); ++i)
        if (i != p && i != q) others.push_back(i);
    // every ordered selection of interior vertices
    const int m = int(others.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> pick;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) pick.push_back(others[std::size_t(i)]);
        std::sort(pick.begin(), pick.end());
        do {
            std::vector<int> seq{p};
            seq.insert(seq.end(), pick.begin(), pick.end());
            seq.push_back(q);
            if (brute_convex(vals, zeta, seq)) out.insert(seq);
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return out;
}

struct BruteLattice {
    long long rank = 0;
    std::set<std::vector<fs::LatticeVertex>> chains;
};


// All step sequences up to a length cap, filtered by the same rules stated
// independently: admissible edges, clockwise turns, bigon exempt from N.
inline BruteLattice brute_lattice(const fs::LatticeVacuumModel& m, const std::vector<fs::LatticeStep>& steps,
                           const fs::LatticeVertex& src, double N, int cap) {
    BruteLattice out;
    const QPoint zq = exact::rationalize(m.zeta.value(), fs::kDefaultDenominator);
    auto edge = [&](const fs::LatticeStep& s) -> holomorse::cx {
        holomorse::cx e = m.base_values[std::size_t(s.to)] - m.base_values[std::size_t(s.from)];
        for (int i = 0; i < m.rank; ++i) e += double(s.delta[std::size_t(i)]) * m.Z[std::size_t(i)];
        return e;
    };
    std::vector<int> idx;
    std::function<void()> rec = [&]() {
        if (!idx.empty()) {
            bool ok = true;
            double len = 0;
            std::vector<fs::LatticeVertex> vs{src};
            long long w = 1;
            QPoint prev;
            for (std::size_t k = 0; k < idx.size() && ok; ++k) {
                const auto& s = steps[std::size_t(idx[k])];
                if (s.from != vs.back().vacuum) ok = false;
                cx e = edge(s);
                QPoint q = exact::rationalize(e, fs::kDefaultDenominator);
                if (!(cr(zq, q) > 0)) ok = false;
                if (k > 0) {
                    Rational x = cr(prev, q);
                    if (!(x < 0 || (x == 0 && dt(prev, q) > 0))) ok = false;
                }
                prev = q;
                len += std::abs(e);
                fs::LatticeVertex u{s.to, vs.back().gamma};
                for (int i = 0; i < m.rank; ++i) u.gamma[std::size_t(i)] += s.delta[std::size_t(i)];
                vs.push_back(u);
                w *= std::abs(s.mu);
            }
            if (ok && (idx.size() == 1 || len < N) && w != 0) {
                out.chains.insert(vs);
                out.rank += w;
            }
        }
        if (int(idx.size()) == cap) return;
        for (int i = 0; i < int(steps.size()); ++i) {
            idx.push_back(i);
            rec();
            idx.pop_back();
        }
    };
    rec();
    return out;
}

}  // namespace oracle
