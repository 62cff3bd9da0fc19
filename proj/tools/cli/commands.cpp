#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include "cli.hpp"
#include "holomorse/dt_wallcross.hpp"
#include "holomorse/error.hpp"
#include "holomorse/fs_polygon.hpp"
#include "holomorse/lg_core.hpp"
#include "holomorse/sw_network.hpp"
#include "holomorse/thimble_periods.hpp"
#include "reader.hpp"

namespace holomorse::cli {

namespace {

struct Context {
    const RunConfig& cfg;
    const RunOptions& opt;
    json payload = json::object();
    Figure fig;
    std::vector<std::string> warnings;
    std::map<std::string, double> tol;

    double tolerance(const std::string& key, double dflt) {
        auto it = tol.find(key);
        if (it == tol.end()) return dflt;
        double v = it->second;
        tol.erase(it);
        return v;
    }
};

template <class T>
std::vector<T> decimate(const std::vector<T>& v, std::size_t max_points = 256) {
    if (v.size() <= max_points) return v;
    std::vector<T> out;
    const double step = double(v.size() - 1) / double(max_points - 1);
    for (std::size_t i = 0; i < max_points; ++i) out.push_back(v[std::size_t(std::lround(i * step))]);
    return out;
}

json point_json(const Point& p, int n) {
    json a = json::array();
    for (int i = 0; i < n; ++i) a.push_back(from_complex(p[std::size_t(i)]));
    return a;
}

// potential terms are {"exp": [...], "re": a, "im": b}; "im" may be omitted.
// An opt-in "perturb": eps adds a seeded random linear term of size eps and
// reports it, since degenerate inputs are never perturbed silently.
HoloPotential read_potential(Context& c, Reader& top) {
    Reader r = top.child("potential");
    int n = r.integer_or("num_vars", 1);
    if (n != 1 && n != 2) fail(r.at("num_vars"), "must be 1 or 2");
    const json& terms = r.need("terms");
    if (!terms.is_array() || terms.empty()) fail(r.at("terms"), "expected a non-empty array");
    std::map<Exponent, cx> m;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        Reader t(terms[i], r.at("terms") + "[" + std::to_string(i) + "]");
        auto e = to_int_list(t.need("exp"), t.at("exp"));
        if (int(e.size()) != n) fail(t.at("exp"), "needs one entry per variable");
        for (int v : e)
            if (v < 0) fail(t.at("exp"), "exponents must be non-negative");
        cx coeff(t.number("re"), t.number_or("im", 0.0));
        t.finish();
        Exponent ex{e[0], n == 2 ? e[1] : 0};
        m[ex] += coeff;
    }
    r.finish();
    if (top.has("perturb")) {
        double eps = top.positive_or("perturb", 1.0);
        std::mt19937_64 rng(c.cfg.seed);
        std::normal_distribution<double> g;
        std::string desc;
        for (int v = 0; v < n; ++v) {
            cx a = eps * cx(g(rng), g(rng));
            Exponent ex{v == 0 ? 1 : 0, v == 1 ? 1 : 0};
            m[ex] += a;
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s(%.17g%+.17gi)*%s", desc.empty() ? "" : " + ", a.real(), a.imag(),
                          v == 0 ? "z" : "w");
            desc += buf;
        }
        c.warnings.push_back("perturbed potential by " + desc);
    }
    return HoloPotential(n, m);
}

lg::Tolerances lg_tolerances(Context& c) {
    lg::Tolerances t;
    t.tol_crit = c.tolerance("tol_crit", t.tol_crit);
    t.tol_val = c.tolerance("tol_val", t.tol_val);
    t.tol_cons = c.tolerance("tol_cons", t.tol_cons);
    t.tol_asym = c.tolerance("tol_asym", t.tol_asym);
    return t;
}

json crit_json(const std::vector<lg::CriticalPoint>& pts, int n) {
    json a = json::array();
    for (const auto& p : pts)
        a.push_back({{"id", p.id},
                     {"position", point_json(p.position, n)},
                     {"value", from_complex(p.value)},
                     {"hessian_det", from_complex(p.hessian_det)}});
    return a;
}

std::vector<lg::CriticalPoint> crit_points(Context& c, const HoloPotential& W, Reader& r) {
    lg::CritConfig cc;
    cc.tol = lg_tolerances(c);
    cc.seed = c.cfg.seed;
    cc.max_restarts = r.integer_or("max_restarts", cc.max_restarts);
    auto res = lg::find_critical_points(W, cc);
    if (!res.complete)
        c.warnings.push_back("found " + std::to_string(res.points.size()) + " of " + std::to_string(res.expected) +
                             " critical points");
    return res.points;
}

void add_crit_markers(Figure& fig, const std::vector<lg::CriticalPoint>& crit, bool w_plane) {
    for (const auto& p : crit) fig.markers.push_back({w_plane ? p.value : p.position[0], std::to_string(p.id)});
}

void cmd_lg_crit(Context& c, Reader& r) {
    HoloPotential W = read_potential(c, r);
    lg::CritConfig cc;
    cc.tol = lg_tolerances(c);
    cc.seed = c.cfg.seed;
    cc.max_restarts = r.integer_or("max_restarts", cc.max_restarts);
    cc.require_complete = r.boolean_or("require_complete", false);
    r.finish();
    auto res = lg::find_critical_points(W, cc);
    c.payload["critical_points"] = crit_json(res.points, W.num_vars());
    c.payload["expected"] = res.expected;
    c.payload["complete"] = res.complete;
    c.payload["restarts_used"] = res.restarts_used;
    add_crit_markers(c.fig, res.points, W.num_vars() == 2);
    for (const auto& p : res.points) c.fig.paths.push_back({{p.value, p.value}, false, "value"});
}

void cmd_lg_solitons(Context& c, Reader& r) {
    HoloPotential W = read_potential(c, r);
    auto crit = crit_points(c, W, r);
    lg::SolitonConfig sc;
    sc.tol = lg_tolerances(c);
    sc.samples_per_half = r.integer_or("samples_per_half", sc.samples_per_half);
    const bool with_samples = r.boolean_or("include_samples", false);
    r.finish();
    auto B = lg::bps_matrix(W, crit, sc);
    c.payload["critical_points"] = crit_json(crit, W.num_vars());
    c.payload["mu_matrix"] = B.mu;
    c.payload["heuristic"] = B.heuristic;
    json ph = json::array();
    for (const auto& row : B.phase_table) {
        json jr = json::array();
        for (cx z : row) jr.push_back(from_complex(z));
        ph.push_back(jr);
    }
    c.payload["phase_table"] = ph;
    json sol = json::array();
    if (W.num_vars() == 1) {
        for (std::size_t p = 0; p < crit.size(); ++p)
            for (std::size_t q = p + 1; q < crit.size(); ++q) {
                auto cnt = lg::count_solitons(W, crit, crit[p].id, crit[q].id, sc);
                for (const auto& s : cnt.solitons) {
                    json pts = json::array();
                    Polyline pl;
                    for (const auto& u : decimate(s.samples)) {
                        pts.push_back(from_complex(u[0]));
                        pl.points.push_back(u[0]);
                    }
                    pl.cls = "soliton";
                    c.fig.paths.push_back(pl);
                    json rec = {{"source", s.source},
                                {"target", s.target},
                                {"sign", s.sign},
                                {"phase", from_complex(s.phase.value())},
                                {"energy", s.energy}};
                    if (with_samples) rec["samples"] = pts;
                    sol.push_back(rec);
                }
            }
    }
    c.payload["solitons"] = sol;
    add_crit_markers(c.fig, crit, false);
}

void cmd_lg_thimble(Context& c, Reader& r) {
    HoloPotential W = read_potential(c, r);
    auto crit = crit_points(c, W, r);
    Phase zeta = to_phase(r.need("zeta"), r.at("zeta"));
    std::vector<int> sources;
    if (const json* s = r.maybe("source")) {
        if (!s->is_number_integer()) fail(r.at("source"), "expected a critical point id");
        sources.push_back(s->get<int>());
    } else {
        for (const auto& p : crit) sources.push_back(p.id);
    }
    lg::ThimbleConfig tc;
    tc.tol = lg_tolerances(c);
    tc.flow.rtol = c.tolerance("flow_rtol", tc.flow.rtol);
    tc.flow.max_length = r.positive_or("max_length", tc.flow.max_length);
    r.finish();
    const int n = W.num_vars();
    json th = json::array();
    for (int id : sources) {
        auto t = lg::trace_thimble(W, crit, id, zeta, tc);
        double d = lg::thimble_image_distance(t, lg::by_id(crit, id).value);
        json rays = json::array();
        for (const auto& ray : t.rays) {
            json pts = json::array(), vals = json::array();
            Polyline pl;
            pl.cls = "thimble";
            for (const auto& u : decimate(ray.samples)) {
                pts.push_back(point_json(u, n));
                pl.points.push_back(n == 1 ? u[0] : W.value(u));
            }
            for (cx w : decimate(ray.values)) vals.push_back(from_complex(w));
            c.fig.paths.push_back(pl);
            rays.push_back({{"termination", lg::termination_name(ray.reason)},
                            {"captured_id", ray.captured_id},
                            {"im_drift", ray.im_drift},
                            {"monotone", ray.monotone},
                            {"length", ray.length},
                            {"samples", pts},
                            {"values", vals}});
        }
        th.push_back({{"source", id}, {"image_distance", d}, {"rays", rays}});
    }
    c.payload["critical_points"] = crit_json(crit, n);
    c.payload["zeta"] = from_complex(zeta.value());
    c.payload["thimbles"] = th;
    add_crit_markers(c.fig, crit, n == 2);
}

json int_matrix_json(const periods::IntMatrix& m) {
    json a = json::array();
    for (const auto& row : m) a.push_back(row);
    return a;
}

void cmd_periods_stokes(Context& c, Reader& r) {
    HoloPotential W = read_potential(c, r);
    if (W.num_vars() != 1) fail("potential.num_vars", "periods-stokes needs a single variable");
    auto crit = crit_points(c, W, r);
    Phase zeta = to_phase(r.need("zeta"), r.at("zeta"));
    periods::StokesConfig sc;
    sc.radius = r.positive_or("radius", sc.radius);
    sc.eps = r.positive_or("eps", sc.eps);
    sc.max_residual = c.tolerance("max_residual", sc.max_residual);
    sc.period.rel_tol = c.tolerance("rel_tol", sc.period.rel_tol);
    r.finish();
    json per = json::array();
    for (const auto& p : crit) {
        auto v = periods::exponential_period(W, crit, p.id, zeta, sc.radius * zeta.value(), sc.period);
        per.push_back({{"thimble", p.id}, {"u", from_complex(v.u)}, {"value", from_complex(v.value)},
                       {"est_error", v.est_error}});
    }
    json fac = json::array();
    std::vector<std::vector<int>> mu(crit.size(), std::vector<int>(crit.size(), 0));
    for (const auto& p : crit)
        for (const auto& q : crit) {
            if (p.id == q.id) continue;
            auto f = periods::stokes_factor(W, crit, p.id, q.id, sc);
            fac.push_back({{"source", f.source},
                           {"target", f.target},
                           {"ray", from_complex(f.ray_phase.value())},
                           {"entry", f.entry},
                           {"raw", from_complex(f.raw)},
                           {"residual", f.residual}});
            mu[std::size_t(p.id)][std::size_t(q.id)] = f.entry;
        }
    auto B = lg::bps_matrix(W, crit, {});
    std::vector<cx> values;
    for (const auto& p : crit) values.push_back(p.value);
    auto S = periods::stokes_matrix(values, B.mu, zeta);
    c.payload["critical_points"] = crit_json(crit, 1);
    c.payload["periods"] = per;
    c.payload["stokes_factors"] = fac;
    c.payload["mu_matrix"] = B.mu;
    c.payload["stokes_matrix"] = {{"zeta", from_complex(S.zeta.value())}, {"order", S.order}, {"S", int_matrix_json(S.S)}};
    for (const auto& p : crit) {
        Polyline pl{{p.value, p.value - 2.0 * sc.radius * zeta.value()}, false, "ray"};
        c.fig.paths.push_back(pl);
    }
    add_crit_markers(c.fig, crit, true);
}

struct FsInput {
    std::vector<cx> values;
    fs::MuTable mu;
    Phase zeta;
};

FsInput read_fs(Reader& r) {
    FsInput in;
    in.values = to_complex_list(r.need("values"), r.at("values"));
    if (in.values.size() < 2) fail(r.at("values"), "need at least two critical values");
    in.mu = to_int_matrix(r.need("mu_matrix"), r.at("mu_matrix"));
    if (in.mu.size() != in.values.size()) fail(r.at("mu_matrix"), "size must match values");
    in.zeta = to_phase(r.need("zeta"), r.at("zeta"));
    return in;
}

void cmd_fs_homs(Context& c, Reader& r) {
    FsInput in = read_fs(r);
    long long denom = r.integer_or("denominator", int(1 << 24));
    if (denom <= 0) fail(r.at("denominator"), "must be positive");
    r.finish();
    auto cfg = fs::make_config(in.values, in.zeta, denom);
    double R = 1.0;
    for (cx v : in.values) R = std::max(R, 2.0 * (std::abs(v) + 1.0));
    const cx winf = R * in.zeta.value();
    json homs = json::array();
    for (int p = 0; p < cfg.size(); ++p)
        for (int q = 0; q < cfg.size(); ++q) {
            if (p == q) continue;
            auto H = fs::build_hom(cfg, in.mu, p, q);
            json polys = json::array();
            for (const auto& s : H.summands) {
                polys.push_back({{"vertices", s.polygon.vertex_ids}, {"rank", s.rank}, {"degree", s.degree}});
                Polyline pl;
                pl.closed = true;
                pl.cls = "polygon";
                pl.points.push_back(winf);
                for (int v : s.polygon.vertex_ids) pl.points.push_back(cfg.at(v).value);
                c.fig.paths.push_back(pl);
            }
            homs.push_back({{"source", p}, {"target", q}, {"rank", H.rank}, {"polygons", polys}});
        }
    auto A = fs::associativity_check(cfg, in.mu);
    c.payload["homs"] = homs;
    c.payload["associativity"] = {{"triples", A.triples}, {"nonzero", A.nonzero}, {"failures", A.failures}};
    c.payload["max_rounding"] = cfg.max_rounding;
    c.payload["denominator"] = cfg.denom;
    for (const auto& v : cfg.values) c.fig.markers.push_back({v.value, std::to_string(v.id)});
}

void cmd_fs_mutate(Context& c, Reader& r) {
    FsInput in = read_fs(r);
    const int n = int(in.values.size());
    const int full = n * (n - 1);
    int steps = r.integer_or("steps", full);
    if (steps < 0) fail(r.at("steps"), "must be non-negative");
    r.finish();
    auto cat = fs::make_category(in.values, in.mu, in.zeta);
    json js = json::array();
    bool invariant = fs::product_invariant(cat);
    for (int k = 0; k < steps; ++k) {
        auto [p, q] = fs::next_crossing(cat);
        cat = fs::mutate_collection(cat, p, q);
        bool ok = fs::product_invariant(cat);
        invariant = invariant && ok;
        js.push_back({{"crossed", {p, q}},
                      {"zeta", from_complex(cat.zeta.value())},
                      {"ordering", cat.ordering},
                      {"S", int_matrix_json(cat.S)},
                      {"invariant", ok}});
    }
    auto start = fs::make_category(in.values, in.mu, in.zeta);
    c.payload["initial"] = {{"ordering", start.ordering}, {"S", int_matrix_json(start.S)}};
    c.payload["steps"] = js;
    c.payload["invariant"] = invariant;
    c.payload["full_rotation"] = steps > 0 && steps % full == 0;
    c.payload["returned"] = cat.S == start.S0;
    for (std::size_t i = 0; i < in.values.size(); ++i) c.fig.markers.push_back({in.values[i], std::to_string(i)});
    for (std::size_t i = 0; i < in.values.size(); ++i)
        for (std::size_t j = i + 1; j < in.values.size(); ++j)
            if (in.mu[i][j] != 0) c.fig.paths.push_back({{in.values[i], in.values[j]}, false, "ray"});
}

sw::QuadraticDifferential read_curve(Reader& r) {
    auto coeffs = to_complex_list(r.need("poly"), r.at("poly"));
    if (coeffs.size() < 2) fail(r.at("poly"), "need degree >= 1");
    return sw::make_qd(coeffs);
}

sw::ScanConfig read_scan(Context& c, Reader& r) {
    sw::ScanConfig sc;
    if (r.has("scan")) {
        Reader s = r.child("scan");
        sc.phase_grid = s.integer_or("phase_grid", sc.phase_grid);
        if (sc.phase_grid < 2) fail(s.at("phase_grid"), "must be >= 2");
        sc.bisection_depth = s.integer_or("bisection_depth", sc.bisection_depth);
        sc.theta0 = s.number_or("theta0", sc.theta0);
        s.finish();
    }
    sc.tol_phase = c.tolerance("tol_phase", sc.tol_phase);
    sc.charge_tol = c.tolerance("charge_tol", sc.charge_tol);
    sc.traj.rtol = c.tolerance("traj_rtol", sc.traj.rtol);
    sc.threads = c.opt.threads;
    sc.keep_witness = true;
    return sc;
}

json bps_json(const sw::BpsSpectrum& s) {
    json e = json::array();
    for (const auto& x : s.entries)
        e.push_back({{"gamma", x.gamma},
                     {"omega", x.omega},
                     {"arg_Z", x.phase.arg()},
                     {"connection_phase", x.connection_phase},
                     {"from", x.from_tp},
                     {"to", x.to_tp}});
    return e;
}

void cmd_sw_trace(Context& c, Reader& r) {
    auto qd = read_curve(r);
    Phase zeta = to_phase(r.need("zeta"), r.at("zeta"));
    sw::TrajConfig tc;
    tc.rtol = c.tolerance("traj_rtol", tc.rtol);
    tc.escape_radius = r.number_or("escape_radius", 0.0);
    r.finish();
    double gap = 1.0;
    for (std::size_t i = 0; i < qd.turning_points.size(); ++i)
        for (std::size_t j = i + 1; j < qd.turning_points.size(); ++j)
            gap = std::min(gap, std::abs(qd.turning_points[i] - qd.turning_points[j]));
    const double r0 = 0.2 * 0.25 * gap;
    json trs = json::array();
    for (int a = 0; a < int(qd.turning_points.size()); ++a) {
        auto starts = sw::critical_starts(qd, a, zeta, r0, 0);
        for (int k = 0; k < 3; ++k) {
            const auto& cs = starts[std::size_t(k)];
            auto tr = sw::trace_trajectory(qd, cs.z0, cs.sqrt0, zeta, tc, a, 0);
            Polyline pl;
            pl.cls = "trajectory";
            pl.points.push_back(qd.turning_points[std::size_t(a)]);
            json pts = json::array();
            for (cx z : decimate(tr.z)) {
                pts.push_back(from_complex(z));
                pl.points.push_back(z);
            }
            c.fig.paths.push_back(pl);
            trs.push_back({{"from", a},
                           {"prong", k},
                           {"end", sw::traj_end_name(tr.end)},
                           {"hit", tr.hit},
                           {"length", tr.length},
                           {"im_drift", tr.im_drift},
                           {"points", pts}});
        }
    }
    json tp = json::array();
    for (cx e : qd.turning_points) {
        tp.push_back(from_complex(e));
        c.fig.markers.push_back({e, ""});
    }
    c.payload["turning_points"] = tp;
    c.payload["zeta"] = from_complex(zeta.value());
    c.payload["trajectories"] = trs;
}

void cmd_sw_spectrum(Context& c, Reader& r) {
    auto qd = read_curve(r);
    auto sc = read_scan(c, r);
    r.finish();
    auto s = sw::find_saddle_connections(qd, sc);
    sw::CentralChargeMap Z{s.Z, {}};
    auto sup = sw::support_check(s, Z);
    json tp = json::array(), zs = json::array();
    for (cx e : qd.turning_points) {
        tp.push_back(from_complex(e));
        c.fig.markers.push_back({e, ""});
    }
    for (cx z : s.Z) zs.push_back(from_complex(z));
    c.payload["turning_points"] = tp;
    c.payload["lattice"] = {{"rank", s.lattice.rank}, {"pairing", s.lattice.pairing}};
    c.payload["Z"] = zs;
    c.payload["entries"] = bps_json(s);
    c.payload["states"] = sw::count_states(s);
    c.payload["max_alignment"] = s.max_alignment;
    c.payload["phase_grid"] = s.phase_grid;
    c.payload["support"] = {{"A", sup.A}, {"pass", sup.pass}};
    for (const auto& e : s.entries) {
        if (e.witness.empty() || e.from_tp > e.to_tp) continue;
        c.fig.paths.push_back({decimate(e.witness), false, "connection"});
    }
}

std::string rat_string(const exact::Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

std::vector<dt::SpectrumEntry> read_spectrum(Context& c, Reader& top, const std::string& key,
                                             std::optional<dt::Pairing>& pairing) {
    Reader r = top.child(key);
    std::vector<dt::SpectrumEntry> out;
    if (r.has("states")) {
        const json& st = r.need("states");
        if (!st.is_array()) fail(r.at("states"), "expected an array");
        for (std::size_t i = 0; i < st.size(); ++i) {
            Reader e(st[i], r.at("states") + "[" + std::to_string(i) + "]");
            dt::SpectrumEntry x;
            x.gamma = to_int_list(e.need("gamma"), e.at("gamma"));
            x.omega = e.integer_or("omega", 1);
            x.Z = to_complex(e.need("Z"), e.at("Z"));
            e.finish();
            out.push_back(x);
        }
        // add antiparticles that were left out
        auto base = out;
        for (const auto& x : base) {
            dt::Charge neg;
            for (int v : x.gamma) neg.push_back(-v);
            bool present = std::any_of(base.begin(), base.end(), [&](const auto& y) { return y.gamma == neg; });
            if (!present) out.push_back({neg, x.omega, -x.Z});
        }
    } else {
        auto qd = read_curve(r);
        auto sc = read_scan(c, r);
        auto s = sw::find_saddle_connections(qd, sc);
        if (!pairing) pairing = s.lattice.pairing;
        out = dt::from_bps(s);
    }
    r.finish();
    return out;
}

void cmd_dt_wcf(Context& c, Reader& r) {
    std::optional<dt::Pairing> pairing;
    if (const json* p = r.maybe("pairing")) pairing = to_int_matrix(*p, r.at("pairing"));
    dt::WcfOptions o;
    o.N = r.integer_or("N", o.N);
    if (o.N < 1) fail(r.at("N"), "must be >= 1");
    o.sigma = r.integer_or("sigma", -1);
    if (const json* b = r.maybe("basis")) o.basis = to_int_matrix(*b, r.at("basis"));
    if (r.has("sector_start")) o.sector_a = o.sector_b = r.number("sector_start");
    auto A = read_spectrum(c, r, "spectrum_a", pairing);
    auto B = read_spectrum(c, r, "spectrum_b", pairing);
    r.finish();
    if (!pairing) fail("pairing", "required when both spectra are given as states");
    auto res = dt::wcf_check(A, B, *pairing, o);
    // central charge rays of both chambers
    for (const auto& e : A) c.fig.paths.push_back({{0.0, e.Z}, false, "ray_a"});
    for (const auto& e : B) c.fig.paths.push_back({{0.0, e.Z}, false, "ray_b"});
    c.payload["equal"] = res.equal;
    c.payload["N"] = o.N;
    c.payload["basis"] = res.basis;
    c.payload["order_a"] = res.order_a;
    c.payload["order_b"] = res.order_b;
    c.payload["sector_a"] = res.sector_a;
    c.payload["sector_b"] = res.sector_b;
    if (res.first)
        c.payload["first_divergence"] = {{"generator", res.first->generator},
                                         {"exponent", res.first->exponent},
                                         {"height", res.first->height},
                                         {"a", rat_string(res.first->a)},
                                         {"b", rat_string(res.first->b)}};
    else
        c.payload["first_divergence"] = nullptr;
}

using Handler = std::function<void(Context&, Reader&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h{
        {"lg-crit", cmd_lg_crit},       {"lg-solitons", cmd_lg_solitons}, {"lg-thimble", cmd_lg_thimble},
        {"periods-stokes", cmd_periods_stokes}, {"fs-homs", cmd_fs_homs}, {"fs-mutate", cmd_fs_mutate},
        {"sw-trace", cmd_sw_trace},     {"sw-spectrum", cmd_sw_spectrum}, {"dt-wcf", cmd_dt_wcf}};
    return h;
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    auto it = handlers().find(cfg.command);
    if (it == handlers().end()) throw UsageError("unknown command '" + cfg.command + "'");
    Context c{cfg, opt, json::object(), {}, {}, {}};
    c.tol = cfg.tolerances;
    Reader r(cfg.doc, "");
    for (const char* k : {"seed", "record_timing", "plots", "tolerances"}) r.maybe(k);

    RunResult res;
    json env;
    env["tool"] = "holomorse";
    env["version"] = kToolVersion;
    env["command"] = cfg.command;
    env["config"] = cfg.doc;
    env["seed"] = cfg.seed;
    try {
        it->second(c, r);
        if (!c.tol.empty()) fail("tolerances." + c.tol.begin()->first, "not used by " + cfg.command);
        env["payload"] = c.payload;
        env["error"] = nullptr;
        if (opt.plots || cfg.plots) {
            render_svg(c.fig);  // validates the geometry up front
            res.figure = c.fig;
        }
    } catch (const Error& e) {
        env["payload"] = c.payload.empty() ? json(nullptr) : c.payload;
        env["error"] = {{"name", e.name()}, {"message", e.what()}};
        res.exit_code = 2;
    }
    env["warnings"] = c.warnings;
    if (cfg.record_timing)
        env["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.envelope = std::move(env);
    return res;
}

}  // namespace holomorse::cli
