#include "holomorse/lg_core.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "holomorse/error.hpp"
#include "holomorse/numerics.hpp"
#include "preimage.hpp"

namespace holomorse::lg {

namespace {

using num::kPi;

double value_scale(const HoloPotential& W, double r) {
    double s = 0.0;
    for (const auto& [e, c] : W.terms()) s += std::abs(c) * std::pow(1.0 + r, e[0] + e[1]);
    return s;
}

void check_distinct_values(const std::vector<CriticalPoint>& pts, double tol_val) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i].value - pts[j].value) < tol_val)
                raise(ErrorCode::CoincidentValues,
                      "critical values of points " + std::to_string(pts[i].id) + " and " +
                          std::to_string(pts[j].id) + " coincide");
}

void assign_ids(std::vector<CriticalPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        for (int k = 0; k < 2; ++k) {
            if (a.position[k].real() != b.position[k].real())
                return a.position[k].real() < b.position[k].real();
            if (a.position[k].imag() != b.position[k].imag())
                return a.position[k].imag() < b.position[k].imag();
        }
        return false;
    });
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i].id = int(i);
}

CritResult crit_univariate(const HoloPotential& W, const CritConfig& cfg) {
    CritResult res;
    res.expected = W.degree() - 1;
    auto roots = num::poly_roots(W.d1());
    double rmax = 0.0;
    for (cx z : roots) rmax = std::max(rmax, std::abs(z));
    // Coalescing roots mean a degenerate critical point even if the Hessian
    // test below is borderline.
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-6 * (1.0 + rmax))
                raise(ErrorCode::DegenerateCritical, "W' has a repeated root");
    for (cx z : roots) {
        CriticalPoint cp;
        cp.position = {z, cx(0.0)};
        cp.value = W.value(cp.position);
        cp.hessian_det = W.hessian_det(cp.position);
        double sc = value_scale(W, std::abs(z));
        if (std::abs(W.gradient(cp.position)[0]) > cfg.tol.tol_crit * sc)
            raise(ErrorCode::NotConverged, "critical point residual above tol_crit");
        if (std::abs(cp.hessian_det) < 1e-8 * sc)
            raise(ErrorCode::DegenerateCritical, "vanishing Hessian at a critical point");
        res.points.push_back(cp);
    }
    assign_ids(res.points);
    return res;
}

// Damped Newton on grad W = 0 for n = 2.
bool newton2(const HoloPotential& W, Point& u, double tol) {
    auto gnorm = [&](const Point& v) { return std::sqrt(norm2(W.gradient(v))); };
    double g = gnorm(u);
    for (int it = 0; it < 200; ++it) {
        if (g < tol) {
            // a few undamped steps down to the rounding floor
            for (int k = 0; k < 4; ++k) {
                auto Hp = W.hessian(u);
                Point gp = W.gradient(u);
                cx dp = Hp[0][0] * Hp[1][1] - Hp[0][1] * Hp[1][0];
                if (std::abs(dp) == 0.0) break;
                Point c = u - Point{(Hp[1][1] * gp[0] - Hp[0][1] * gp[1]) / dp,
                                    (-Hp[1][0] * gp[0] + Hp[0][0] * gp[1]) / dp};
                double gc = gnorm(c);
                if (!(gc < g)) break;
                u = c;
                g = gc;
            }
            return true;
        }
        auto H = W.hessian(u);
        Point gr = W.gradient(u);
        cx det = H[0][0] * H[1][1] - H[0][1] * H[1][0];
        if (std::abs(det) == 0.0) return false;
        Point step{(H[1][1] * gr[0] - H[0][1] * gr[1]) / det,
                   (-H[1][0] * gr[0] + H[0][0] * gr[1]) / det};
        double lam = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            Point cand = u - cx(lam) * step;
            double gc = gnorm(cand);
            if (gc < g) {
                u = cand;
                g = gc;
                moved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!moved) return g < tol;
    }
    return g < tol;
}

CritResult crit_bivariate(const HoloPotential& W, const CritConfig& cfg) {
    CritResult res;
    const int d = W.degree();
    res.expected = (d - 1) * (d - 1);
    double lead = std::numeric_limits<double>::infinity();
    for (const auto& [e, c] : W.terms())
        if (e[0] + e[1] == d) lead = std::min(lead, std::abs(c));
    double R = cfg.search_radius;
    if (R <= 0.0) R = 2.0 * std::max(1.0, std::pow(W.scale() / lead, 1.0 / std::max(1, d - 2)));

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<Point> found;
    int restarts = 0;
    for (; restarts < cfg.max_restarts && int(found.size()) < res.expected; ++restarts) {
        Point u{cx(R * U(rng), R * U(rng)), cx(R * U(rng), R * U(rng))};
        double sc = value_scale(W, R);
        if (!newton2(W, u, cfg.tol.tol_crit * sc)) continue;
        bool dup = false;
        for (const auto& v : found)
            if (dist(u, v) < 1e-7 * (1.0 + std::sqrt(norm2(v)))) dup = true;
        if (!dup) found.push_back(u);
    }
    res.restarts_used = restarts;
    res.complete = int(found.size()) == res.expected;
    if (!res.complete && cfg.require_complete)
        raise(ErrorCode::NotConverged,
              "found " + std::to_string(found.size()) + " of " + std::to_string(res.expected) +
                  " critical points");
    for (const auto& u : found) {
        CriticalPoint cp;
        cp.position = u;
        cp.value = W.value(u);
        cp.hessian_det = W.hessian_det(u);
        double sc = value_scale(W, std::sqrt(norm2(u)));
        if (std::abs(cp.hessian_det) < 1e-8 * sc * sc)
            raise(ErrorCode::DegenerateCritical, "vanishing Hessian at a critical point");
        res.points.push_back(cp);
    }
    assign_ids(res.points);
    return res;
}

// Real 4x4 Hessian of Re(f), f = W / zeta, in coordinates (Re u0, Re u1, Im u0, Im u1).
// Returns the real unit vectors (as points) spanning the negative eigenspace.
std::vector<Point> unstable_directions(const HoloPotential& W, const Point& p, const Phase& zeta) {
    auto H = W.hessian(p);
    cx zi = std::conj(zeta.value());
    const int n = W.num_vars();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            cx h = zi * H[a][b];
            M(a, b) = h.real();
            M(n + a, n + b) = -h.real();
            M(a, n + b) = -h.imag();
            M(n + a, b) = -h.imag();
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    std::vector<Point> dirs;
    for (int k = 0; k < 2 * n; ++k) {
        if (es.eigenvalues()(k) >= 0.0) continue;
        auto v = es.eigenvectors().col(k);
        Point d{cx(0.0), cx(0.0)};
        for (int a = 0; a < n; ++a) d[a] = cx(v(a), v(n + a));
        dirs.push_back(d);
    }
    return dirs;
}

cx principal_dir(cx zeta, cx w2) { return std::sqrt(-zeta / w2); }

}  // namespace

const CriticalPoint& by_id(const std::vector<CriticalPoint>& crit, int id) {
    for (const auto& c : crit)
        if (c.id == id) return c;
    raise(ErrorCode::InvalidInput, "unknown critical point id " + std::to_string(id));
}

CritResult find_critical_points(const HoloPotential& W, const CritConfig& cfg) {
    CritResult r = W.num_vars() == 1 ? crit_univariate(W, cfg) : crit_bivariate(W, cfg);
    check_distinct_values(r.points, cfg.tol.tol_val);
    return r;
}

Phase soliton_phase(const CriticalPoint& p, const CriticalPoint& q, double tol_val) {
    cx d = p.value - q.value;
    if (std::abs(d) < tol_val) raise(ErrorCode::CoincidentValues, "soliton phase of coincident values");
    return Phase(d);
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::CapturedAt: return "CapturedAt";
        case Termination::Escaped: return "Escaped";
        case Termination::MaxLength: return "MaxLength";
    }
    return "?";
}

Trajectory flow_gradient(const HoloPotential& W, const Phase& zeta, const Point& u0,
                         const std::vector<CriticalPoint>& crit, const FlowConfig& cfg,
                         double tol_cons) {
    const cx zi = std::conj(zeta.value());
    auto rhs = [&](const num::CVec<2>& u) {
        Point g = W.gradient(u);
        return num::CVec<2>{-std::conj(zi * g[0]), -std::conj(zi * g[1])};
    };
    Trajectory tr;
    num::CVec<2> u = u0;
    cx w0 = W.value(u0);
    double im0 = (zi * w0).imag();
    double re_prev = (zi * w0).real();
    tr.samples.push_back(u0);
    tr.values.push_back(w0);

    double h = cfg.h0;
    int steps = 0;
    while (true) {
        if (steps >= cfg.max_steps || tr.length >= cfg.max_length) {
            tr.reason = Termination::MaxLength;
            break;
        }
        num::CVec<2> y5;
        double err = num::dp45_step(rhs, u, h, y5, cfg.rtol, cfg.atol);
        if (!(err <= 1.0) || !std::isfinite(y5[0].real()) || !std::isfinite(y5[1].real())) {
            h *= std::isfinite(err) ? std::max(0.2, num::dp45_factor(err)) : 0.2;
            if (h < cfg.hmin) raise(ErrorCode::StepFailure, "flow step size underflow");
            continue;
        }
        ++steps;
        tr.length += dist(y5, u);
        u = y5;
        h *= num::dp45_factor(err);
        cx w = W.value(u);
        cx f = zi * w;
        tr.im_drift = std::max(tr.im_drift, std::abs(f.imag() - im0));
        if (f.real() > re_prev + tol_cons) tr.monotone = false;
        re_prev = std::min(re_prev, f.real());

        bool done = false;
        for (const auto& c : crit) {
            if (dist(u, c.position) < cfg.capture_radius && (zi * c.value).real() < f.real()) {
                tr.reason = Termination::CapturedAt;
                tr.captured_id = c.id;
                done = true;
                break;
            }
        }
        if (!done && (std::sqrt(norm2(u)) > cfg.escape_radius || std::abs(w - w0) > cfg.escape_value)) {
            tr.reason = Termination::Escaped;
            done = true;
        }
        if (done || steps % std::max(1, cfg.sample_stride) == 0) {
            tr.samples.push_back(u);
            tr.values.push_back(w);
        }
        if (done) break;
    }
    return tr;
}

namespace {

double crit_gap(const std::vector<CriticalPoint>& crit, const CriticalPoint& p) {
    double r = std::numeric_limits<double>::infinity();
    for (const auto& c : crit)
        if (c.id != p.id) r = std::min(r, dist(c.position, p.position));
    return std::isfinite(r) ? r : 1.0;
}

// A closed segment [a, b] passes within tol of w.
double segment_distance(cx a, cx b, cx w) {
    cx d = b - a;
    double t = std::clamp(((w - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
    return std::abs(a + t * d - w);
}

SolitonCount count_univariate(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                              const CriticalPoint& P, const CriticalPoint& Q,
                              const SolitonConfig& cfg) {
    SolitonCount out;
    Phase zeta = soliton_phase(P, Q, cfg.tol.tol_val);
    const cx wp = P.value, wq = Q.value, D = wp - wq;
    for (const auto& c : crit) {
        if (c.id == P.id || c.id == Q.id) continue;
        if (segment_distance(wq, wp, c.value) < cfg.tol.tol_val * (1.0 + std::abs(D)))
            raise(ErrorCode::NonGenericConfig,
                  "critical value " + std::to_string(c.id) + " lies on the soliton segment");
    }
    std::vector<cx> cz;
    for (const auto& c : crit) cz.push_back(c.position[0]);

    // w(tau) = w_p - sin^2(pi tau / 2) D: analytic at both ends, so both
    // square-root branchings are resolved by the start points below.
    detail::TargetCurve curve{
        [=](double t) { double s = std::sin(0.5 * kPi * t); return wp - s * s * D; },
        [=](double t) { return -0.5 * kPi * std::sin(kPi * t) * D; }};

    const cx p = P.position[0], q = Q.position[0];
    const cx cp = std::sqrt(-2.0 * D / num::polyval(W.d2(), p));
    const cx cq = std::sqrt(2.0 * D / num::polyval(W.d2(), q));
    const double r0p = 1e-3 * crit_gap(crit, P), r0q = 1e-3 * crit_gap(crit, Q);
    const double t0p = 2.0 / kPi * std::asin(std::min(1.0, r0p / std::abs(cp)));
    const double t0q = 2.0 / kPi * std::asin(std::min(1.0, r0q / std::abs(cq)));
    const int M = std::max(4, cfg.samples_per_half);

    std::vector<double> fstops, bstops;
    for (int k = 1; k <= M; ++k) {
        fstops.push_back(k == M ? 0.5 : t0p + (0.5 - t0p) * k / M);
        bstops.push_back(k == M ? 0.5 : (1.0 - t0q) - (0.5 - t0q) * k / M);
    }

    struct Branch {
        cx start;
        std::vector<cx> pts;
    };
    auto launch = [&](cx base, cx c, double t0, double sgn, const std::vector<double>& stops,
                      double tstart) {
        Branch b;
        b.start = base + sgn * std::sin(0.5 * kPi * t0) * c;
        if (!detail::newton_solve(W, curve.w(tstart), b.start))
            raise(ErrorCode::NotConverged, "soliton branch start did not converge");
        b.pts = detail::track_preimage(W, cz, curve, tstart, b.start, stops);
        return b;
    };
    Branch fw[2] = {launch(p, cp, t0p, 1.0, fstops, t0p), launch(p, cp, t0p, -1.0, fstops, t0p)};
    Branch bw[2] = {launch(q, cq, t0q, 1.0, bstops, 1.0 - t0q),
                    launch(q, cq, t0q, -1.0, bstops, 1.0 - t0q)};

    const cx dp = principal_dir(zeta.value(), num::polyval(W.d2(), p));
    const cx dq = std::sqrt(zeta.value() / num::polyval(W.d2(), q));
    for (const auto& f : fw) {
        for (const auto& b : bw) {
            cx fm = f.pts.back(), bm = b.pts.back();
            if (std::abs(fm - bm) > 1e-7 * (1.0 + std::abs(fm))) continue;
            SolitonRecord rec;
            rec.source = P.id;
            rec.target = Q.id;
            rec.phase = zeta;
            rec.energy = std::abs(D);
            rec.samples.push_back(P.position);
            rec.samples.push_back({f.start, 0.0});
            for (cx z : f.pts) rec.samples.push_back({z, 0.0});
            for (int k = int(b.pts.size()) - 2; k >= 0; --k) rec.samples.push_back({b.pts[std::size_t(k)], 0.0});
            rec.samples.push_back({b.start, 0.0});
            rec.samples.push_back(Q.position);
            int op = (std::conj(dp) * (f.start - p)).real() > 0 ? 1 : -1;
            int oq = (std::conj(dq) * (b.start - q)).real() > 0 ? 1 : -1;
            rec.sign = op * oq * (P.id > Q.id ? -1 : 1);
            out.count += rec.sign;
            out.solitons.push_back(std::move(rec));
        }
    }
    return out;
}

struct ShotResult {
    double min_dist;
    bool captured;
    Trajectory tr;
};

ShotResult shoot(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                 const CriticalPoint& P, const CriticalPoint& Q, const Phase& zeta, const Point& dir,
                 const SolitonConfig& cfg) {
    (void)crit;
    FlowConfig fc;
    fc.capture_radius = cfg.shoot_capture;
    fc.escape_value = 1e3 * (1.0 + std::abs(P.value - Q.value));
    fc.escape_radius = 1e3 * (1.0 + std::sqrt(norm2(P.position)) + std::sqrt(norm2(Q.position)));
    Point u0 = P.position + cx(cfg.shoot_delta / std::sqrt(norm2(dir))) * dir;
    // Only p and q matter here; other critical points would stop the flow early.
    std::vector<CriticalPoint> targets{Q};
    Trajectory tr = flow_gradient(W, zeta, u0, targets, fc, cfg.tol.tol_cons);
    double md = std::numeric_limits<double>::infinity();
    for (const auto& s : tr.samples) md = std::min(md, dist(s, Q.position));
    bool cap = tr.reason == Termination::CapturedAt && tr.captured_id == Q.id;
    return {md, cap, std::move(tr)};
}

}  // namespace

int shooting_count(const HoloPotential& W, const std::vector<CriticalPoint>& crit, int pid,
                   int qid, const SolitonConfig& cfg) {
    const auto& P = by_id(crit, pid);
    const auto& Q = by_id(crit, qid);
    Phase zeta = soliton_phase(P, Q, cfg.tol.tol_val);
    auto dirs = unstable_directions(W, P.position, zeta);
    int count = 0;
    if (W.num_vars() == 1) {
        for (double s : {1.0, -1.0})
            if (shoot(W, crit, P, Q, zeta, s * dirs.at(0), cfg).captured) ++count;
        return count;
    }
    // n = 2: scan the circle of unstable directions, then refine every local
    // minimum of the closest-approach distance.
    const int F = std::max(16, cfg.shoot_fan);
    auto dir_at = [&](double th) { return std::cos(th) * dirs.at(0) + std::sin(th) * dirs.at(1); };
    std::vector<double> md(static_cast<std::size_t>(F));
    for (int k = 0; k < F; ++k) md[std::size_t(k)] = shoot(W, crit, P, Q, zeta, dir_at(2 * kPi * k / F), cfg).min_dist;
    for (int k = 0; k < F; ++k) {
        double a = md[std::size_t((k + F - 1) % F)], b = md[std::size_t(k)], c = md[std::size_t((k + 1) % F)];
        if (!(b <= a && b < c)) continue;
        double lo = 2 * kPi * (k - 1) / F, hi = 2 * kPi * (k + 1) / F;
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        auto eval = [&](double th) { return shoot(W, crit, P, Q, zeta, dir_at(th), cfg); };
        ShotResult r1 = eval(x1), r2 = eval(x2);
        bool hit = r1.captured || r2.captured;
        for (int it = 0; it < 60 && !hit; ++it) {
            if (r1.min_dist < r2.min_dist) {
                hi = x2; x2 = x1; r2 = std::move(r1);
                x1 = hi - g * (hi - lo); r1 = eval(x1);
            } else {
                lo = x1; x1 = x2; r1 = std::move(r2);
                x2 = lo + g * (hi - lo); r2 = eval(x2);
            }
            hit = r1.captured || r2.captured;
        }
        if (hit) ++count;
    }
    return count;
}

SolitonCount count_solitons(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                            int pid, int qid, const SolitonConfig& cfg) {
    const auto& P = by_id(crit, pid);
    const auto& Q = by_id(crit, qid);
    if (pid == qid) raise(ErrorCode::InvalidInput, "soliton endpoints must differ");
    if (W.num_vars() == 1) return count_univariate(W, crit, P, Q, cfg);
    SolitonCount out;
    out.heuristic = true;
    out.count = shooting_count(W, crit, pid, qid, cfg);
    return out;
}

BpsMatrix bps_matrix(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                     const SolitonConfig& cfg) {
    BpsMatrix B;
    B.dim = int(crit.size());
    B.mu.assign(crit.size(), std::vector<int>(crit.size(), 0));
    B.phase_table.assign(crit.size(), std::vector<cx>(crit.size(), cx(0.0)));
    for (std::size_t i = 0; i < crit.size(); ++i)
        for (std::size_t j = i + 1; j < crit.size(); ++j) {
            Phase z = soliton_phase(crit[i], crit[j], cfg.tol.tol_val);
            B.phase_table[i][j] = z.value();
            B.phase_table[j][i] = -z.value();
            auto sc = count_solitons(W, crit, crit[i].id, crit[j].id, cfg);
            B.mu[i][j] = sc.count;
            B.mu[j][i] = -sc.count;
            B.heuristic = B.heuristic || sc.heuristic;
        }
    return B;
}

Thimble trace_thimble(const HoloPotential& W, const std::vector<CriticalPoint>& crit, int pid,
                      const Phase& zeta, const ThimbleConfig& cfg) {
    const auto& P = by_id(crit, pid);
    for (const auto& c : crit) {
        if (c.id == pid) continue;
        if (phase_distance(zeta, soliton_phase(P, c, cfg.tol.tol_val)) < cfg.stokes_tol)
            raise(ErrorCode::OnStokesRay, "phase lies on the Stokes ray towards " + std::to_string(c.id));
    }
    Thimble t;
    t.source = pid;
    t.phase = zeta;
    auto dirs = unstable_directions(W, P.position, zeta);
    std::vector<Point> starts;
    if (W.num_vars() == 1) {
        starts = {dirs.at(0), -1.0 * dirs.at(0)};
    } else {
        const int F = std::max(4, cfg.rays_n2);
        for (int k = 0; k < F; ++k) {
            double th = 2 * kPi * k / F;
            starts.push_back(std::cos(th) * dirs.at(0) + std::sin(th) * dirs.at(1));
        }
    }
    for (const auto& d : starts) {
        Point u0 = P.position + cx(cfg.start_delta / std::sqrt(norm2(d))) * d;
        t.rays.push_back(flow_gradient(W, zeta, u0, crit, cfg.flow, cfg.tol.tol_cons));
    }
    return t;
}

double thimble_image_distance(const Thimble& t, cx wp) {
    double worst = 0.0;
    const cx zi = std::conj(t.phase.value());
    for (const auto& r : t.rays)
        for (cx w : r.values) {
            cx e = (wp - w) * zi;
            double d = e.real() >= 0.0 ? std::abs(e.imag()) : std::abs(e);
            worst = std::max(worst, d);
        }
    return worst;
}

}  // namespace holomorse::lg
