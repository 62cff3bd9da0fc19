#include "holomorse/fs_polygon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "holomorse/error.hpp"
#include "holomorse/numerics.hpp"

namespace holomorse::fs {

using exact::cross;
using exact::dot;
using exact::Rational;

const CriticalValue& CriticalValueConfig::at(int id) const {
    if (id < 0 || id >= int(values.size())) raise(ErrorCode::InvalidInput, "unknown critical value id " + std::to_string(id));
    return values[std::size_t(id)];
}

namespace {

void certify(CriticalValueConfig& cfg) {
    const auto n = cfg.values.size();
    double gap_v = std::numeric_limits<double>::infinity();
    double gap_p = num::kPi;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            QPoint d = cfg.values[b].q - cfg.values[a].q;
            if (d.re == 0 && d.im == 0)
                raise(ErrorCode::NonGeneric, "critical values " + std::to_string(a) + " and " +
                                                 std::to_string(b) + " coincide on the grid");
            if (cross(cfg.zq, d) == 0)
                raise(ErrorCode::NonGeneric, "zeta is parallel to the difference of values " +
                                                 std::to_string(a) + " and " + std::to_string(b));
            cx dv = cfg.values[b].value - cfg.values[a].value;
            gap_v = std::min(gap_v, std::abs(dv));
            double ang = std::abs(std::arg(dv * std::conj(cfg.zeta.value())));
            gap_p = std::min({gap_p, ang, num::kPi - ang});
        }
    cfg.min_value_gap = std::isfinite(gap_v) ? gap_v : 0.0;
    cfg.min_phase_gap = gap_p;
}

}  // namespace

CriticalValueConfig make_config(const std::vector<cx>& values, const Phase& zeta, long long denom,
                                double tol_val) {
    CriticalValueConfig cfg;
    cfg.zeta = zeta;
    cfg.denom = denom;
    cfg.zq = exact::rationalize(zeta.value(), denom);
    for (std::size_t i = 0; i < values.size(); ++i) {
        CriticalValue v{int(i), values[i], exact::rationalize(values[i], denom)};
        cfg.max_rounding = std::max(cfg.max_rounding, std::abs(values[i] - exact::to_cx(v.q)));
        cfg.values.push_back(v);
    }
    for (std::size_t a = 0; a < values.size(); ++a)
        for (std::size_t b = a + 1; b < values.size(); ++b)
            if (std::abs(values[a] - values[b]) < tol_val)
                raise(ErrorCode::NonGeneric, "critical values coincide within tol_val");
    certify(cfg);
    return cfg;
}

CriticalValueConfig make_config_exact(const std::vector<QPoint>& values, const QPoint& zeta_dir) {
    if (zeta_dir.re == 0 && zeta_dir.im == 0) raise(ErrorCode::InvalidInput, "zero phase direction");
    CriticalValueConfig cfg;
    cfg.zeta = Phase(exact::to_cx(zeta_dir));
    cfg.zq = zeta_dir;
    cfg.denom = 0;
    for (std::size_t i = 0; i < values.size(); ++i) cfg.values.push_back({int(i), exact::to_cx(values[i]), values[i]});
    certify(cfg);
    return cfg;
}

bool edge_admissible(const QPoint& zeta, const QPoint& e) { return cross(zeta, e) > 0; }

bool convex_turn(const QPoint& e1, const QPoint& e2) {
    Rational c = cross(e1, e2);
    if (c < 0) return true;
    return c == 0 && dot(e1, e2) > 0;
}

bool chain_is_convex(const CriticalValueConfig& cfg, const std::vector<int>& ids) {
    if (ids.size() < 2) return false;
    std::set<int> seen(ids.begin(), ids.end());
    if (seen.size() != ids.size()) return false;
    QPoint prev;
    for (std::size_t j = 0; j + 1 < ids.size(); ++j) {
        QPoint e = cfg.at(ids[j + 1]).q - cfg.at(ids[j]).q;
        if (!edge_admissible(cfg.zq, e)) return false;
        if (j > 0 && !convex_turn(prev, e)) return false;
        prev = e;
    }
    return true;
}

std::vector<ConvexPolygonQ> enumerate_polygons(const CriticalValueConfig& cfg, int p, int q,
                                               int max_interior) {
    cfg.at(p);
    cfg.at(q);
    std::vector<ConvexPolygonQ> out;
    if (p == q) return out;
    const int n = cfg.size();
    std::vector<int> path{p};
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    used[std::size_t(p)] = 1;
    std::function<void(const QPoint*)> dfs = [&](const QPoint* prev) {
        const int v = path.back();
        for (int u = 0; u < n; ++u) {
            if (used[std::size_t(u)]) continue;
            QPoint e = cfg.at(u).q - cfg.at(v).q;
            if (!edge_admissible(cfg.zq, e)) continue;
            if (prev && !convex_turn(*prev, e)) continue;
            path.push_back(u);
            if (u == q) {
                out.push_back({path});
            } else if (max_interior < 0 || int(path.size()) - 1 <= max_interior) {
                used[std::size_t(u)] = 1;
                dfs(&e);
                used[std::size_t(u)] = 0;
            }
            path.pop_back();
        }
    };
    dfs(nullptr);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

void check_mu(const CriticalValueConfig& cfg, const MuTable& mu) {
    if (int(mu.size()) != cfg.size()) raise(ErrorCode::InvalidInput, "mu table size does not match the values");
    for (const auto& r : mu)
        if (int(r.size()) != cfg.size()) raise(ErrorCode::InvalidInput, "mu table is not square");
}

long long polygon_rank(const MuTable& mu, const std::vector<int>& v) {
    long long r = 1;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) r *= std::abs(mu[std::size_t(v[j])][std::size_t(v[j + 1])]);
    return r;
}

}  // namespace

HomComplex build_hom(const CriticalValueConfig& cfg, const MuTable& mu, int p, int q) {
    check_mu(cfg, mu);
    HomComplex h;
    h.source = p;
    h.target = q;
    for (auto& poly : enumerate_polygons(cfg, p, q)) {
        long long r = polygon_rank(mu, poly.vertex_ids);
        if (r == 0) continue;
        h.rank += r;
        h.summands.push_back({std::move(poly), r, 0});
    }
    return h;
}

std::vector<HomWord> hom_basis(const CriticalValueConfig& cfg, const MuTable& mu, int p, int q) {
    std::vector<HomWord> out;
    for (const auto& s : build_hom(cfg, mu, p, q).summands) {
        const auto& v = s.polygon.vertex_ids;
        std::vector<int> radix;
        for (std::size_t j = 0; j + 1 < v.size(); ++j) radix.push_back(std::abs(mu[std::size_t(v[j])][std::size_t(v[j + 1])]));
        std::vector<int> g(radix.size(), 0);
        while (true) {
            out.push_back({v, g});
            std::size_t k = 0;
            while (k < g.size() && ++g[k] == radix[k]) g[k++] = 0;
            if (k == g.size()) break;
        }
    }
    return out;
}

HomElement element(const HomWord& w, long long coeff) {
    HomElement e;
    e.source = w.vertices.front();
    e.target = w.vertices.back();
    if (coeff != 0) e.terms[w] = coeff;
    return e;
}

HomElement compose(const HomElement& a, const HomElement& b, const CriticalValueConfig& cfg) {
    HomElement out;
    out.source = a.source;
    out.target = b.target;
    if (a.is_zero() || b.is_zero()) return out;
    if (a.target != b.source) raise(ErrorCode::InvalidInput, "composed morphisms do not share an object");
    for (const auto& [wa, ca] : a.terms)
        for (const auto& [wb, cb] : b.terms) {
            HomWord w;
            w.vertices = wa.vertices;
            w.vertices.insert(w.vertices.end(), wb.vertices.begin() + 1, wb.vertices.end());
            // local test at the glued vertex; each factor is already convex
            const std::size_t j = wa.vertices.size() - 1;
            QPoint e1 = cfg.at(w.vertices[j]).q - cfg.at(w.vertices[j - 1]).q;
            QPoint e2 = cfg.at(w.vertices[j + 1]).q - cfg.at(w.vertices[j]).q;
            if (!convex_turn(e1, e2)) continue;
            w.gens = wa.gens;
            w.gens.insert(w.gens.end(), wb.gens.begin(), wb.gens.end());
            long long& c = out.terms[w];
            c += ca * cb;
            if (c == 0) out.terms.erase(w);
        }
    return out;
}

AssociativityReport associativity_check(const CriticalValueConfig& cfg, const MuTable& mu,
                                        long long max_triples) {
    check_mu(cfg, mu);
    const int n = cfg.size();
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::vector<std::vector<HomWord>>> B(un, std::vector<std::vector<HomWord>>(un));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (p != q) B[std::size_t(p)][std::size_t(q)] = hom_basis(cfg, mu, p, q);
    AssociativityReport rep;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) {
                    if (p == q || q == r || r == s) continue;
                    for (const auto& wa : B[std::size_t(p)][std::size_t(q)])
                        for (const auto& wb : B[std::size_t(q)][std::size_t(r)])
                            for (const auto& wc : B[std::size_t(r)][std::size_t(s)]) {
                                if (max_triples >= 0 && rep.triples >= max_triples) return rep;
                                HomElement a = element(wa), b = element(wb), c = element(wc);
                                HomElement l = compose(compose(a, b, cfg), c, cfg);
                                HomElement rr = compose(a, compose(b, c, cfg), cfg);
                                ++rep.triples;
                                if (!l.is_zero()) ++rep.nonzero;
                                if (!(l.terms == rr.terms)) ++rep.failures;
                            }
                }
    return rep;
}

DirectedCategory make_category(const std::vector<cx>& values, const MuTable& mu, const Phase& zeta) {
    if (mu.size() != values.size()) raise(ErrorCode::InvalidInput, "mu table size does not match the values");
    for (std::size_t a = 0; a < mu.size(); ++a) {
        if (mu[a].size() != values.size()) raise(ErrorCode::InvalidInput, "mu table is not square");
        for (std::size_t b = 0; b < mu.size(); ++b)
            if (mu[a][b] != -mu[b][a]) raise(ErrorCode::InvalidInput, "mu must be antisymmetric");
    }
    auto sd = periods::stokes_matrix(values, mu, zeta);
    DirectedCategory c;
    c.zeta = zeta;
    c.values = values;
    c.mu = mu;
    c.ordering = sd.order;
    c.S = sd.S;
    c.S0 = sd.S;
    c.basis = periods::identity(int(values.size()));
    return c;
}

std::pair<int, int> next_crossing(const DirectedCategory& cat) {
    for (const auto& r : periods::rays_clockwise(cat.values, cat.zeta))
        if (r.rel_angle < 0.0 && r.rel_angle > -num::kPi) return {r.a, r.b};
    raise(ErrorCode::InvalidInput, "no ray to cross");
}

DirectedCategory mutate_collection(const DirectedCategory& cat, int p, int q) {
    const int n = int(cat.values.size());
    auto pos = [&](int label) {
        for (int i = 0; i < n; ++i)
            if (cat.ordering[std::size_t(i)] == label) return i;
        raise(ErrorCode::InvalidInput, "unknown object " + std::to_string(label));
    };
    const int ip = pos(p), iq = pos(q);
    if (std::abs(ip - iq) != 1) raise(ErrorCode::NotAdjacent, "objects are not adjacent in the ordering");
    auto [a, b] = next_crossing(cat);
    if (!((a == p && b == q) || (a == q && b == p)))
        raise(ErrorCode::InvalidInput, "the next ray clockwise belongs to another pair");

    const int i = std::min(ip, iq);
    auto B = periods::mutation_matrix(cat.S, i);
    DirectedCategory out = cat;
    out.S = periods::matmul(periods::matmul(B, cat.S), periods::transpose(B));
    out.basis = periods::matmul(B, cat.basis);
    std::swap(out.ordering[std::size_t(i)], out.ordering[std::size_t(i + 1)]);

    // new phase: halfway to the next ray clockwise beyond the crossed one
    const double theta = std::arg(cat.values[std::size_t(a)] - cat.values[std::size_t(b)]);
    double best = 2.0 * num::kPi;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (x == y || (x == a && y == b)) continue;
            double d = std::remainder(theta - std::arg(cat.values[std::size_t(x)] - cat.values[std::size_t(y)]), 2.0 * num::kPi);
            if (d <= 0.0) d += 2.0 * num::kPi;
            if (d < 1e-12) raise(ErrorCode::NonGeneric, "two rays share a phase");
            best = std::min(best, d);
        }
    out.zeta = Phase::from_angle(theta - 0.5 * best);
    return out;
}

std::vector<std::vector<long long>> positional_mu(const DirectedCategory& cat) {
    const std::size_t n = cat.S.size();
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            m[i][j] = cat.S[i][j];
            m[j][i] = -cat.S[i][j];
        }
    return m;
}

bool product_invariant(const DirectedCategory& cat) {
    auto Bi = periods::unimodular_inverse(cat.basis);
    return periods::matmul(periods::matmul(Bi, cat.S), periods::transpose(Bi)) == cat.S0;
}

cx lattice_value(const LatticeVacuumModel& model, const LatticeVertex& v) {
    cx w = model.base_values.at(std::size_t(v.vacuum));
    for (int i = 0; i < model.rank; ++i) w += double(v.gamma.at(std::size_t(i))) * model.Z.at(std::size_t(i));
    return w;
}

TruncatedHom truncate_lattice(const LatticeVacuumModel& model, const std::vector<LatticeStep>& steps,
                              const LatticeVertex& source, const std::optional<LatticeVertex>& target,
                              double N, long long denom) {
    if (int(model.Z.size()) != model.rank) raise(ErrorCode::InvalidInput, "central charge must be given on every basis vector");
    auto check_vertex = [&](const LatticeVertex& v) {
        if (v.vacuum < 0 || v.vacuum >= int(model.base_values.size()) || int(v.gamma.size()) != model.rank)
            raise(ErrorCode::InvalidInput, "lattice vertex outside the model");
    };
    check_vertex(source);
    if (target) check_vertex(*target);

    struct Edge {
        const LatticeStep* step;
        QPoint q;
        double len;
    };
    const QPoint zq = exact::rationalize(model.zeta.value(), denom);
    std::vector<Edge> edges;
    TruncatedHom out;
    for (const auto& s : steps) {
        if (int(s.delta.size()) != model.rank || s.from < 0 || s.to < 0 ||
            s.from >= int(model.base_values.size()) || s.to >= int(model.base_values.size()))
            raise(ErrorCode::InvalidInput, "lattice step outside the model");
        if (s.mu == 0) continue;
        cx e = model.base_values[std::size_t(s.to)] - model.base_values[std::size_t(s.from)];
        double norm = 0.0;
        for (int i = 0; i < model.rank; ++i) {
            e += double(s.delta[std::size_t(i)]) * model.Z[std::size_t(i)];
            norm += double(s.delta[std::size_t(i)]) * s.delta[std::size_t(i)];
        }
        QPoint q = exact::rationalize(e, denom);
        if (std::abs(e) < 1e-12 || (q.re == 0 && q.im == 0))
            raise(ErrorCode::SupportViolation, "a support step has vanishing central charge");
        out.support_constant = std::max(out.support_constant, std::sqrt(norm) / std::abs(e));
        edges.push_back({&s, q, std::abs(e)});
    }

    std::vector<LatticeVertex> path{source};
    std::function<void(const QPoint*, double, long long)> dfs = [&](const QPoint* prev, double len, long long w) {
        const LatticeVertex v = path.back();
        for (const auto& e : edges) {
            if (e.step->from != v.vacuum) continue;
            if (!edge_admissible(zq, e.q)) continue;
            if (prev && !convex_turn(*prev, e.q)) continue;
            const double nl = len + e.len;
            const bool bigon = path.size() == 1;
            if (!bigon && !(nl < N)) continue;
            LatticeVertex u{e.step->to, v.gamma};
            for (int i = 0; i < model.rank; ++i) u.gamma[std::size_t(i)] += e.step->delta[std::size_t(i)];
            const long long nw = w * std::abs(e.step->mu);
            path.push_back(u);
            if (!target || u == *target) {
                out.basis.push_back({path, nw, nl});
                out.rank += nw;
            }
            if (nl < N) dfs(&e.q, nl, nw);
            path.pop_back();
        }
    };
    dfs(nullptr, 0.0, 1);
    std::sort(out.basis.begin(), out.basis.end());
    return out;
}

}  // namespace holomorse::fs
