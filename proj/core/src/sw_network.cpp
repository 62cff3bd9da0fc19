#include "holomorse/sw_network.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <thread>

#include "holomorse/error.hpp"

namespace holomorse::sw {

namespace {

using num::kPi;

double min_root_gap(const std::vector<cx>& r) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = i + 1; j < r.size(); ++j) g = std::min(g, std::abs(r[i] - r[j]));
    return std::isfinite(g) ? g : 1.0;
}

cx pick_sheet(cx s, cx ref) { return std::abs(s - ref) <= std::abs(-s - ref) ? s : -s; }

cx ipow(cx z, int k) {
    cx r = 1.0;
    for (int i = 0; i < k; ++i) r *= z;
    return r;
}

// Integrals of sqrt(p) dz and z^k dz / sqrt(p) from the turning point e to z1,
// on the sheet where sqrt(p(z1)) = s1. z = e + (z1 - e) v^2 removes the
// square-root endpoint behaviour.
void endpoint_integrals(const QuadraticDifferential& qd, cx e, cx z1, cx s1, int ncomp, cx& action,
                        std::vector<cx>& comp) {
    static const num::GaussRule g = num::gauss_legendre(24);
    const cx d = z1 - e;
    action = 0.0;
    comp.assign(std::size_t(ncomp), cx(0.0));
    // nodes from v = 1 down to 0 so the sheet is carried by continuity
    std::vector<std::pair<double, double>> nodes;
    for (std::size_t k = 0; k < g.x.size(); ++k) nodes.push_back({0.5 * (g.x[k] + 1.0), 0.5 * g.w[k]});
    std::sort(nodes.begin(), nodes.end(), [](auto& a, auto& b) { return a.first > b.first; });
    cx ref = s1;
    double vref = 1.0;
    for (const auto& [v, w] : nodes) {
        cx z = e + d * v * v;
        cx s = pick_sheet(std::sqrt(num::polyval(qd.poly, z)), ref * (v / vref));
        ref = s;
        vref = v;
        cx dz = 2.0 * d * v;
        action += w * s * dz;
        for (int k = 0; k < ncomp; ++k) comp[std::size_t(k)] += w * ipow(z, k) / s * dz;
    }
}

double segment_distance(cx a, cx b, cx w) {
    cx d = b - a;
    double t = std::clamp(((w - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(a + t * d - w);
}

struct SegmentEval {
    cx Z{};
    std::vector<cx> comp;
    cx germ_a{}, germ_b{};
};

SegmentEval segment_eval(const QuadraticDifferential& qd, cx a, cx b, int order, int ncomp) {
    const num::GaussRule g = num::gauss_legendre(order);
    const cx c = 0.5 * (a + b), h = 0.5 * (b - a);
    const std::size_t n = g.x.size();
    std::vector<double> th(n);
    for (std::size_t k = 0; k < n; ++k) th[k] = 0.5 * kPi * (g.x[k] + 1.0);
    std::vector<cx> s(n);
    // carry the sheet outwards from the middle node
    const std::size_t m = n / 2;
    s[m] = std::sqrt(num::polyval(qd.poly, c - h * std::cos(th[m])));
    for (std::size_t k = m + 1; k < n; ++k) s[k] = pick_sheet(std::sqrt(num::polyval(qd.poly, c - h * std::cos(th[k]))), s[k - 1]);
    for (std::size_t k = m; k-- > 0;) s[k] = pick_sheet(std::sqrt(num::polyval(qd.poly, c - h * std::cos(th[k]))), s[k + 1]);
    SegmentEval out;
    out.comp.assign(std::size_t(ncomp), cx(0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cx z = c - h * std::cos(th[k]);
        cx dz = h * std::sin(th[k]) * 0.5 * kPi * g.w[k];
        out.Z += 2.0 * s[k] * dz;
        for (int j = 0; j < ncomp; ++j) out.comp[std::size_t(j)] += 2.0 * ipow(z, j) / s[k] * dz;
    }
    const num::Poly dp = num::polyder(qd.poly);
    cx za = c - h * std::cos(th.front()), zb = c - h * std::cos(th.back());
    out.germ_a = s.front() / std::sqrt(num::polyval(dp, a) * (za - a));
    out.germ_b = s.back() / std::sqrt(num::polyval(dp, b) * (zb - b));
    return out;
}

// fixed so that Im(conj(A) B) > 0 for dz/sqrt(p) periods A, B of a pair
// with <a, b> = +1 (Riemann bilinear relation)
constexpr int kPairingSign = -1;

bool upper(cx Z) {
    const double t = 1e-12 * std::abs(Z);
    return Z.imag() > t || (std::abs(Z.imag()) <= t && Z.real() > 0.0);
}

}  // namespace

std::vector<cx> turning_points(const num::Poly& p0, double tol) {
    num::Poly p = num::polytrim(p0);
    if (p.size() < 2) raise(ErrorCode::InvalidInput, "quadratic differential must have degree >= 1");
    auto r = num::poly_roots(p);
    std::sort(r.begin(), r.end(), [](cx a, cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    double scale = 0.0;
    for (cx z : r) scale = std::max(scale, std::abs(z));
    const num::Poly dp = num::polyder(p);
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = i + 1; j < r.size(); ++j)
            if (std::abs(r[i] - r[j]) < std::sqrt(tol) * (1.0 + scale))
                raise(ErrorCode::NonSimpleRoot, "turning points coincide");
        if (std::abs(num::polyval(dp, r[i])) < tol * std::abs(p.back()) * std::pow(1.0 + scale, double(p.size()) - 2.0))
            raise(ErrorCode::NonSimpleRoot, "turning point is not simple");
    }
    return r;
}

QuadraticDifferential make_qd(const num::Poly& p, double tol) {
    QuadraticDifferential qd;
    qd.poly = num::polytrim(p);
    qd.turning_points = turning_points(qd.poly, tol);
    return qd;
}

CyclePeriods cycle_periods(const QuadraticDifferential& qd, const BasisCycle& c, const QuadConfig& cfg) {
    const auto& e = qd.turning_points;
    if (c.a < 0 || c.b < 0 || c.a >= int(e.size()) || c.b >= int(e.size()) || c.a == c.b)
        raise(ErrorCode::InvalidInput, "cycle endpoints must be two distinct turning points");
    const cx a = e[std::size_t(c.a)], b = e[std::size_t(c.b)];
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (int(k) == c.a || int(k) == c.b) continue;
        if (segment_distance(a, b, e[k]) < 1e-8 * std::abs(b - a))
            raise(ErrorCode::ContourThroughRoot, "cycle contour passes through a turning point");
    }
    const int ncomp = int(e.size()) - 2;
    SegmentEval hi = segment_eval(qd, a, b, cfg.order, std::max(0, ncomp));
    SegmentEval lo = segment_eval(qd, a, b, cfg.order / 2, std::max(0, ncomp));
    // the two runs fix their sheets independently; align before comparing
    if (std::abs(lo.Z + hi.Z) < std::abs(lo.Z - hi.Z)) {
        lo.Z = -lo.Z;
    }
    double sgn = upper(hi.Z) ? 1.0 : -1.0;
    CyclePeriods out;
    out.Z = sgn * hi.Z;
    for (cx v : hi.comp) out.companions.push_back(sgn * v);
    out.error = std::abs(hi.Z - lo.Z);
    out.germ_a = sgn * hi.germ_a;
    out.germ_b = sgn * hi.germ_b;
    return out;
}

cx central_charge(const QuadraticDifferential& qd, const BasisCycle& c, const QuadConfig& cfg) {
    return cycle_periods(qd, c, cfg).Z;
}

ChargeLattice charge_lattice(const QuadraticDifferential& qd, const QuadConfig& cfg) {
    ChargeLattice L;
    const auto& e = qd.turning_points;
    L.rank = int(e.size()) - 1;
    for (int i = 0; i < L.rank; ++i) L.cycles.push_back({i, i + 1});
    L.pairing.assign(std::size_t(L.rank), std::vector<int>(std::size_t(L.rank), 0));
    if (L.rank < 2) return L;
    std::vector<CyclePeriods> P;
    for (const auto& c : L.cycles) P.push_back(cycle_periods(qd, c, cfg));
    const num::Poly dp = num::polyder(qd.poly);
    for (int i = 0; i + 1 < L.rank; ++i) {
        // cycles i and i+1 meet at e_{i+1}; compare their local square-root
        // germs after continuing the first one counterclockwise to the second
        const cx ev = e[std::size_t(i + 1)];
        const cx ui = (e[std::size_t(i)] - ev) / std::abs(e[std::size_t(i)] - ev);
        const cx uj = (e[std::size_t(i + 2)] - ev) / std::abs(e[std::size_t(i + 2)] - ev);
        double phi = std::arg(uj / ui);
        if (phi <= 0.0) phi += 2.0 * kPi;
        const cx pe = num::polyval(dp, ev);
        cx kappa = (P[std::size_t(i + 1)].germ_a * std::sqrt(pe * uj)) /
                   (P[std::size_t(i)].germ_b * std::sqrt(pe * ui) * std::polar(1.0, 0.5 * phi));
        int s = kappa.real() > 0.0 ? kPairingSign : -kPairingSign;
        L.pairing[std::size_t(i)][std::size_t(i + 1)] = s;
        L.pairing[std::size_t(i + 1)][std::size_t(i)] = -s;
    }
    return L;
}

cx CentralChargeMap::operator()(const std::vector<int>& gamma) const {
    cx z = 0.0;
    for (std::size_t i = 0; i < gamma.size() && i < Z.size(); ++i) z += double(gamma[i]) * Z[i];
    return z;
}

CentralChargeMap central_charge_map(const QuadraticDifferential& qd, const QuadConfig& cfg) {
    CentralChargeMap m;
    for (int i = 0; i + 1 < int(qd.turning_points.size()); ++i) {
        auto p = cycle_periods(qd, {i, i + 1}, cfg);
        m.Z.push_back(p.Z);
        m.error.push_back(p.error);
    }
    return m;
}

const char* traj_end_name(TrajEnd e) {
    switch (e) {
        case TrajEnd::HitTurningPoint: return "HitTurningPoint";
        case TrajEnd::Escaped: return "Escaped";
        case TrajEnd::MaxLength: return "MaxLength";
    }
    return "?";
}

TrajectoryPath trace_trajectory(const QuadraticDifferential& qd, cx z0, cx sqrt0, const Phase& zeta,
                                const TrajConfig& cfg, int skip, int n_companions) {
    constexpr std::size_t NS = 8;
    if (n_companions < 0 || n_companions > int(NS) - 2) raise(ErrorCode::InvalidInput, "too many companion integrals");
    const auto& e = qd.turning_points;
    double rmax = 0.0;
    for (cx v : e) rmax = std::max(rmax, std::abs(v));
    const double R_esc = cfg.escape_radius > 0 ? cfg.escape_radius : 8.0 * (1.0 + rmax);
    const double R_col = cfg.collision_radius > 0 ? cfg.collision_radius : 0.25 * min_root_gap(e);
    const cx zv = zeta.value();
    const std::size_t active = std::size_t(2 + n_companions);

    cx sref = pick_sheet(std::sqrt(num::polyval(qd.poly, z0)), sqrt0);
    bool ambiguous = false;
    auto rhs = [&](const num::CVec<NS>& y) {
        num::CVec<NS> f{};
        cx pz = num::polyval(qd.poly, y[0]);
        cx s = pick_sheet(std::sqrt(pz), sref);
        if (std::abs(s - sref) > 0.5 * std::abs(sref)) ambiguous = true;
        f[0] = zv / s;
        f[1] = zv;
        for (int k = 0; k < n_companions; ++k) f[std::size_t(2 + k)] = ipow(y[0], k) * zv / pz;
        return f;
    };

    TrajectoryPath tr;
    num::CVec<NS> y{};
    y[0] = z0;
    auto sheet_of = [&](cx z, cx s) { return (s / std::sqrt(num::polyval(qd.poly, z))).real() > 0 ? 1 : -1; };
    tr.z.push_back(z0);
    tr.sheet.push_back(sheet_of(z0, sref));
    bool skipping = skip >= 0;
    double h = cfg.h0, t = 0.0;
    static const num::GaussRule g4 = num::gauss_legendre(4);
    cx chord = 0.0;
    int steps = 0;
    while (true) {
        if (steps >= cfg.max_steps || t >= cfg.max_t) {
            tr.end = TrajEnd::MaxLength;
            break;
        }
        ambiguous = false;
        num::CVec<NS> y5;
        double err = num::dp45_step(rhs, y, h, y5, cfg.rtol, cfg.atol, active);
        if (ambiguous || !(err <= 1.0) || !std::isfinite(y5[0].real())) {
            h *= (ambiguous || !std::isfinite(err)) ? 0.25 : std::max(0.2, num::dp45_factor(err));
            if (h < cfg.hmin)
                raise(ambiguous ? ErrorCode::BranchAmbiguity : ErrorCode::StepFailure,
                      ambiguous ? "square-root sheet is ambiguous at the minimum step" : "trajectory step size underflow");
            continue;
        }
        ++steps;
        t += h;
        const cx za = y[0], zb = y5[0];
        cx snew = pick_sheet(std::sqrt(num::polyval(qd.poly, zb)), sref);
        // independent chord integral of sqrt(p) dz, sheet interpolated along the chord
        for (std::size_t k = 0; k < g4.x.size(); ++k) {
            double u = 0.5 * (g4.x[k] + 1.0);
            cx z = za + u * (zb - za);
            cx s = pick_sheet(std::sqrt(num::polyval(qd.poly, z)), (1.0 - u) * sref + u * snew);
            chord += 0.5 * g4.w[k] * s * (zb - za);
        }
        tr.im_drift = std::max(tr.im_drift, std::abs((chord * std::conj(zv)).imag()));
        tr.length += std::abs(zb - za);
        y = y5;
        sref = snew;
        h *= num::dp45_factor(err);
        tr.z.push_back(zb);
        tr.sheet.push_back(sheet_of(zb, sref));

        if (skipping && std::abs(zb - e[std::size_t(skip)]) > 1.5 * R_col) skipping = false;
        int hit = -1;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (skipping && int(j) == skip) continue;
            if (std::abs(zb - e[j]) < R_col) { hit = int(j); break; }
        }
        if (hit >= 0) {
            tr.end = TrajEnd::HitTurningPoint;
            tr.hit = hit;
            break;
        }
        if (std::abs(zb) > R_esc) {
            tr.end = TrajEnd::Escaped;
            break;
        }
    }
    tr.sqrt_end = sref;
    tr.action = y[1];
    for (int k = 0; k < n_companions; ++k) tr.companions.push_back(y[std::size_t(2 + k)]);
    return tr;
}

std::vector<CriticalStart> critical_starts(const QuadraticDifferential& qd, int i, const Phase& zeta,
                                           double radius, int n_companions) {
    const cx e = qd.turning_points.at(std::size_t(i));
    const cx pe = num::polyval(num::polyder(qd.poly), e);
    const cx zv = zeta.value();
    const double base = std::arg(zv * zv / pe) / 3.0;
    std::vector<CriticalStart> out;
    for (int k = 0; k < 3; ++k) {
        auto eval = [&](double phi, CriticalStart& cs) {
            cs.z0 = e + std::polar(radius, phi);
            cx s = std::sqrt(num::polyval(qd.poly, cs.z0));
            if ((std::conj(zv) * (cs.z0 - e) * s).real() < 0.0) s = -s;
            cs.sqrt0 = s;
            endpoint_integrals(qd, e, cs.z0, s, n_companions, cs.action0, cs.companions0);
            return (cs.action0 * std::conj(zv)).imag();
        };
        double phi = base + 2.0 * kPi * k / 3.0;
        CriticalStart cs;
        double f = eval(phi, cs);
        // Newton on the start angle so the start point lies on the trajectory
        for (int it = 0; it < 8 && std::abs(f) > 1e-15 * (1.0 + std::abs(cs.action0)); ++it) {
            const double dphi = 1e-7;
            CriticalStart tmp;
            double f2 = eval(phi + dphi, tmp);
            double der = (f2 - f) / dphi;
            if (der == 0.0) break;
            phi -= f / der;
            f = eval(phi, cs);
        }
        out.push_back(cs);
    }
    return out;
}

namespace {

struct Detection {
    bool hit = false;
    int to = -1;
    double g = 0.0;
    std::vector<cx> witness_ints;  // action, companions: from e_a to e_b
    std::vector<cx> path;
};

Detection probe(const QuadraticDifferential& qd, int a, int k, double theta, double r0,
                const TrajConfig& tc, int ncomp, bool keep_path) {
    Phase z = Phase::from_angle(theta);
    auto starts = critical_starts(qd, a, z, r0, ncomp);
    const auto& cs = starts[std::size_t(k)];
    Detection d;
    TrajectoryPath tr = trace_trajectory(qd, cs.z0, cs.sqrt0, z, tc, a, ncomp);
    if (tr.end != TrajEnd::HitTurningPoint || tr.hit == a) return d;
    d.hit = true;
    d.to = tr.hit;
    cx eb = qd.turning_points[std::size_t(tr.hit)];
    cx act;
    std::vector<cx> comp;
    endpoint_integrals(qd, eb, tr.z.back(), tr.sqrt_end, ncomp, act, comp);
    d.witness_ints.push_back(cs.action0 + tr.action - act);
    for (int j = 0; j < ncomp; ++j)
        d.witness_ints.push_back(cs.companions0[std::size_t(j)] + tr.companions[std::size_t(j)] - comp[std::size_t(j)]);
    d.g = (d.witness_ints[0] * std::polar(1.0, -theta)).imag();
    if (keep_path) {
        d.path.push_back(qd.turning_points[std::size_t(a)]);
        d.path.insert(d.path.end(), tr.z.begin(), tr.z.end());
        d.path.push_back(eb);
    }
    return d;
}

std::vector<int> canonical(std::vector<int> g) {
    for (int v : g) {
        if (v == 0) continue;
        if (v < 0)
            for (int& x : g) x = -x;
        break;
    }
    return g;
}

}  // namespace

BpsSpectrum find_saddle_connections(const QuadraticDifferential& qd, const ScanConfig& cfg) {
    BpsSpectrum spec;
    spec.lattice = charge_lattice(qd, cfg.quad);
    spec.phase_grid = cfg.phase_grid;
    spec.bisection_depth = cfg.bisection_depth;
    const int r = spec.lattice.rank;
    const int ncomp = r - 1;
    const int T = int(qd.turning_points.size());
    std::vector<CyclePeriods> P;
    for (const auto& c : spec.lattice.cycles) {
        P.push_back(cycle_periods(qd, c, cfg.quad));
        spec.Z.push_back(P.back().Z);
    }

    TrajConfig tc = cfg.traj;
    if (tc.collision_radius <= 0) tc.collision_radius = 0.25 * min_root_gap(qd.turning_points);
    const double r0 = 0.2 * tc.collision_radius;
    const int G = std::max(2, cfg.phase_grid);
    auto theta_at = [&](int j) { return cfg.theta0 + kPi * double(j) / double(G); };

    // grid pass: det[j][a*3+k]
    std::vector<std::vector<Detection>> det(std::size_t(G + 1));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int j = next++; j <= G; j = next++) {
            auto& row = det[std::size_t(j)];
            row.resize(std::size_t(3 * T));
            for (int a = 0; a < T; ++a)
                for (int k = 0; k < 3; ++k) row[std::size_t(3 * a + k)] = probe(qd, a, k, theta_at(j), r0, tc, ncomp, false);
        }
    };
    const int nt = std::max(1, cfg.threads);
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // least-squares charge identification against all basis periods
    Eigen::MatrixXd A(2 * r, r);
    for (int i = 0; i < r; ++i)
        for (int m = 0; m < r; ++m) {
            cx v = m == 0 ? P[std::size_t(i)].Z : P[std::size_t(i)].companions[std::size_t(m - 1)];
            A(2 * m, i) = v.real();
            A(2 * m + 1, i) = v.imag();
        }
    auto identify = [&](const std::vector<cx>& w) {
        Eigen::VectorXd rhs(2 * r);
        for (int m = 0; m < r; ++m) {
            rhs(2 * m) = 2.0 * w[std::size_t(m)].real();
            rhs(2 * m + 1) = 2.0 * w[std::size_t(m)].imag();
        }
        Eigen::VectorXd n = A.colPivHouseholderQr().solve(rhs);
        std::vector<int> g(static_cast<std::size_t>(r));
        bool zero = true;
        for (int i = 0; i < r; ++i) {
            double v = std::nearbyint(n(i));
            if (std::abs(n(i) - v) > cfg.charge_tol)
                raise(ErrorCode::ChargeIdentificationFail, "witness periods are not an integral combination of the basis");
            g[std::size_t(i)] = int(v);
            if (g[std::size_t(i)] != 0) zero = false;
        }
        if (zero) raise(ErrorCode::ChargeIdentificationFail, "witness has zero charge");
        return g;
    };

    struct Found {
        std::vector<int> gamma;
        double theta;
        int a, b;
        std::vector<cx> path;
    };
    std::map<std::vector<int>, Found> found;
    for (int a = 0; a < T; ++a)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < G; ++j) {
                const auto& d0 = det[std::size_t(j)][std::size_t(3 * a + k)];
                const auto& d1 = det[std::size_t(j + 1)][std::size_t(3 * a + k)];
                if (!d0.hit || !d1.hit || d0.to != d1.to) continue;
                if (d0.g * d1.g > 0.0) continue;
                double lo = theta_at(j), hi = theta_at(j + 1), glo = d0.g;
                Detection last = d0;
                for (int it = 0; it < cfg.bisection_depth && hi - lo > 1e-3 * cfg.tol_phase; ++it) {
                    double mid = 0.5 * (lo + hi);
                    Detection dm = probe(qd, a, k, mid, r0, tc, ncomp, false);
                    if (!dm.hit || dm.to != d0.to)
                        raise(ErrorCode::UnresolvedConnection, "saddle connection lost during bisection");
                    if ((dm.g <= 0.0) == (glo <= 0.0)) {
                        lo = mid;
                        glo = dm.g;
                    } else {
                        hi = mid;
                    }
                    last = std::move(dm);
                }
                if (hi - lo > cfg.tol_phase)
                    raise(ErrorCode::UnresolvedConnection, "bisection did not localize the connection phase");
                const double th = 0.5 * (lo + hi);
                Detection fin = probe(qd, a, k, th, r0, tc, ncomp, cfg.keep_witness);
                if (!fin.hit) fin = std::move(last);
                auto gamma = identify(fin.witness_ints);
                auto key = canonical(gamma);
                if (found.count(key)) continue;
                found[key] = {gamma, th, a, fin.to, std::move(fin.path)};
            }

    CentralChargeMap Zm{spec.Z, {}};
    for (auto& [key, f] : found) {
        for (int s : {1, -1}) {
            BpsEntry e;
            for (int v : f.gamma) e.gamma.push_back(s * v);
            e.omega = 1;
            cx Z = Zm(e.gamma);
            if (std::abs(Z) == 0.0) raise(ErrorCode::ChargeIdentificationFail, "identified charge has zero central charge");
            e.phase = Phase(Z);
            e.connection_phase = std::remainder(f.theta + (s < 0 ? kPi : 0.0), 2.0 * kPi);
            e.from_tp = s > 0 ? f.a : f.b;
            e.to_tp = s > 0 ? f.b : f.a;
            if (s > 0) e.witness = f.path;
            else e.witness.assign(f.path.rbegin(), f.path.rend());
            spec.max_alignment = std::max(spec.max_alignment,
                                          std::abs(std::remainder(e.phase.arg() - e.connection_phase, 2.0 * kPi)));
            spec.entries.push_back(std::move(e));
        }
    }
    std::sort(spec.entries.begin(), spec.entries.end(), [](const BpsEntry& x, const BpsEntry& y) {
        if (x.phase.arg() != y.phase.arg()) return x.phase.arg() < y.phase.arg();
        return x.gamma < y.gamma;
    });
    return spec;
}

int count_states(const BpsSpectrum& s) { return int(s.entries.size()) / 2; }

SupportReport support_check(const BpsSpectrum& s, const CentralChargeMap& Z, std::optional<double> A_external,
                            double tol_val) {
    SupportReport rep;
    std::vector<std::pair<std::vector<int>, double>> ratios;
    for (const auto& e : s.entries) {
        double nrm = 0.0;
        bool zero = true;
        for (int v : e.gamma) {
            nrm += double(v) * v;
            if (v != 0) zero = false;
        }
        if (zero) continue;
        double z = std::abs(Z(e.gamma));
        if (z < tol_val) raise(ErrorCode::ZeroCentralCharge, "active charge has vanishing central charge");
        ratios.push_back({e.gamma, std::sqrt(nrm) / z});
        rep.A = std::max(rep.A, std::sqrt(nrm) / z);
    }
    const double bound = A_external.value_or(rep.A);
    if (A_external) rep.A = *A_external;
    for (const auto& [g, q] : ratios) {
        bool ok = q <= bound * (1.0 + 1e-12);
        rep.per_charge.push_back({g, ok});
        rep.pass = rep.pass && ok;
    }
    return rep;
}

}  // namespace holomorse::sw
