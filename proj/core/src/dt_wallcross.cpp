#include "holomorse/dt_wallcross.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "holomorse/error.hpp"
#include "holomorse/sw_network.hpp"

namespace holomorse::dt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Exact inverse of an integer matrix; empty unless it is unimodular.
std::optional<std::vector<Charge>> integer_inverse(const std::vector<Charge>& M) {
    const std::size_t n = M.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        if (M[i].size() != n) return std::nullopt;
        for (std::size_t j = 0; j < n; ++j) a[i][j] = M[i][j];
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[c], a[piv]);
        Rational d = a[c][c];
        for (auto& x : a[c]) x /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational f = a[r][c];
            for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<Charge> inv(n, Charge(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& x = a[i][n + j];
            if (denominator(x) != 1) return std::nullopt;
            inv[i][j] = static_cast<int>(numerator(x));
        }
    return inv;
}

bool is_zero(const Charge& g) {
    return std::all_of(g.begin(), g.end(), [](int v) { return v == 0; });
}

bool proportional(const Charge& a, const Charge& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (static_cast<long long>(a[i]) * b[j] != static_cast<long long>(a[j]) * b[i]) return false;
    return true;
}

Rational binomial(long long e, int k) {
    Rational c = 1;
    for (int i = 0; i < k; ++i) c = c * Rational(e - i) / Rational(i + 1);
    return c;
}

double wrap(double x) {
    double r = std::fmod(x, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
}

}  // namespace

std::optional<Charge> TorusAlgebra::to_cone(const Charge& gamma) const {
    // gamma = sum_i c_i basis_i  =>  c = gamma * basis^{-1}
    Charge c(static_cast<std::size_t>(rank), 0);
    for (int j = 0; j < rank; ++j) {
        long long s = 0;
        for (int i = 0; i < rank; ++i) s += static_cast<long long>(gamma[std::size_t(i)]) * basis_inverse[std::size_t(i)][std::size_t(j)];
        if (s < 0) return std::nullopt;
        c[std::size_t(j)] = static_cast<int>(s);
    }
    return c;
}

Charge TorusAlgebra::to_lattice(const Charge& cone) const {
    Charge g(static_cast<std::size_t>(rank), 0);
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j) g[std::size_t(j)] += cone[std::size_t(i)] * basis[std::size_t(i)][std::size_t(j)];
    return g;
}

int TorusAlgebra::pair(const Charge& a, const Charge& b) const {
    long long s = 0;
    for (int i = 0; i < rank; ++i)
        for (int j = 0; j < rank; ++j)
            s += static_cast<long long>(a[std::size_t(i)]) * pairing[std::size_t(i)][std::size_t(j)] * b[std::size_t(j)];
    return static_cast<int>(s);
}

TorusAlgebra make_algebra(const Pairing& pairing, int N, std::optional<std::vector<Charge>> basis, Rational sigma) {
    TorusAlgebra alg;
    alg.rank = static_cast<int>(pairing.size());
    if (alg.rank < 1) raise(ErrorCode::InvalidInput, "torus algebra needs rank >= 1");
    if (N < 1) raise(ErrorCode::InvalidInput, "truncation order must be >= 1");
    for (std::size_t i = 0; i < pairing.size(); ++i) {
        if (pairing[i].size() != pairing.size()) raise(ErrorCode::InvalidInput, "pairing must be square");
        for (std::size_t j = 0; j < pairing.size(); ++j)
            if (pairing[i][j] != -pairing[j][i]) raise(ErrorCode::InvalidInput, "pairing must be antisymmetric");
    }
    alg.pairing = pairing;
    alg.N = N;
    alg.sigma = sigma;
    if (basis) {
        alg.basis = *basis;
    } else {
        alg.basis.assign(pairing.size(), Charge(pairing.size(), 0));
        for (std::size_t i = 0; i < pairing.size(); ++i) alg.basis[i][i] = 1;
    }
    auto inv = integer_inverse(alg.basis);
    if (!inv) raise(ErrorCode::InvalidInput, "positive basis must be unimodular");
    alg.basis_inverse = *inv;
    return alg;
}

int height(const Charge& cone) {
    int h = 0;
    for (int v : cone) h += v;
    return h;
}

TorusSeries series_one(const TorusAlgebra& alg) {
    return monomial(alg, Charge(static_cast<std::size_t>(alg.rank), 0));
}

TorusSeries monomial(const TorusAlgebra& alg, const Charge& cone, Rational c) {
    TorusSeries s;
    if (height(cone) <= alg.N && c != 0) s.terms[cone] = c;
    return s;
}

TorusSeries add(const TorusSeries& a, const TorusSeries& b) {
    TorusSeries r = a;
    for (const auto& [k, v] : b.terms) {
        Rational& x = r.terms[k];
        x += v;
        if (x == 0) r.terms.erase(k);
    }
    return r;
}

TorusSeries multiply(const TorusAlgebra& alg, const TorusSeries& a, const TorusSeries& b) {
    TorusSeries r;
    Charge k(static_cast<std::size_t>(alg.rank));
    for (const auto& [ka, va] : a.terms) {
        const int ha = height(ka);
        for (const auto& [kb, vb] : b.terms) {
            if (ha + height(kb) > alg.N) continue;
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            r.terms[k] += va * vb;
        }
    }
    std::erase_if(r.terms, [](const auto& kv) { return kv.second == 0; });
    return r;
}

TorusSeries power(const TorusAlgebra& alg, const TorusSeries& a, int n) {
    if (n < 0) raise(ErrorCode::InvalidInput, "negative power of a series");
    TorusSeries r = series_one(alg), base = a;
    while (n > 0) {
        if (n & 1) r = multiply(alg, r, base);
        n >>= 1;
        if (n) base = multiply(alg, base, base);
    }
    return r;
}

Automorphism identity_automorphism(const TorusAlgebra& alg) {
    return Automorphism{std::vector<TorusSeries>(static_cast<std::size_t>(alg.rank), series_one(alg))};
}

Automorphism ks_automorphism(const TorusAlgebra& alg, const KSTransform& T) {
    if (static_cast<int>(T.gamma.size()) != alg.rank) raise(ErrorCode::InvalidInput, "charge has wrong rank");
    if (is_zero(T.gamma)) raise(ErrorCode::ZeroCharge, "KS transform with zero charge");
    auto c = alg.to_cone(T.gamma);
    if (!c) raise(ErrorCode::InvalidInput, "charge lies outside the positive cone");
    const int h = height(*c);
    Automorphism A;
    for (int j = 0; j < alg.rank; ++j) {
        // x_j -> x_j (1 - sigma x_gamma)^{<gamma, b_j> Omega}
        const long long e = static_cast<long long>(alg.pair(T.gamma, alg.basis[std::size_t(j)])) * T.omega;
        TorusSeries f;
        Charge kc(c->size());
        Rational ms = -alg.sigma, mp = 1;
        for (int k = 0; k * h <= alg.N; ++k) {
            Rational coef = binomial(e, k) * mp;
            if (coef != 0) {
                for (std::size_t i = 0; i < kc.size(); ++i) kc[i] = k * (*c)[i];
                f.terms[kc] = coef;
            }
            mp *= ms;
            if (e >= 0 && k >= e) break;
        }
        A.factor.push_back(std::move(f));
    }
    return A;
}

TorusSeries apply(const TorusAlgebra& alg, const Automorphism& A, const TorusSeries& s) {
    // cache powers of each factor
    std::vector<std::vector<TorusSeries>> pw(static_cast<std::size_t>(alg.rank));
    auto get = [&](int j, int n) -> const TorusSeries& {
        auto& v = pw[std::size_t(j)];
        if (v.empty()) v.push_back(series_one(alg));
        while (static_cast<int>(v.size()) <= n) v.push_back(multiply(alg, v.back(), A.factor[std::size_t(j)]));
        return v[std::size_t(n)];
    };
    TorusSeries out;
    for (const auto& [k, c] : s.terms) {
        TorusSeries term = monomial(alg, k, c);
        for (int j = 0; j < alg.rank; ++j)
            if (k[std::size_t(j)] > 0) term = multiply(alg, term, get(j, k[std::size_t(j)]));
        out = add(out, term);
    }
    return out;
}

TorusSeries apply_ks(const TorusAlgebra& alg, const KSTransform& T, const TorusSeries& s) {
    return apply(alg, ks_automorphism(alg, T), s);
}

Automorphism compose(const TorusAlgebra& alg, const Automorphism& A, const Automorphism& B) {
    // (A o B)(x_j) = A(x_j F^B_j) = x_j F^A_j A(F^B_j)
    Automorphism C;
    for (int j = 0; j < alg.rank; ++j)
        C.factor.push_back(multiply(alg, A.factor[std::size_t(j)], apply(alg, A, B.factor[std::size_t(j)])));
    return C;
}

std::vector<SpectrumEntry> from_bps(const sw::BpsSpectrum& s) {
    std::vector<SpectrumEntry> out;
    for (const auto& e : s.entries) {
        cx Z = 0.0;
        for (std::size_t i = 0; i < e.gamma.size(); ++i) Z += double(e.gamma[i]) * s.Z[i];
        out.push_back({e.gamma, e.omega, Z});
    }
    return out;
}

OrderedProduct phase_ordered_product(const TorusAlgebra& alg, const std::vector<SpectrumEntry>& spectrum,
                                     const Sector& sector, double phase_tol) {
    const double width = sector.end - sector.begin;
    if (!(width > 0.0) || width > kTwoPi) raise(ErrorCode::InvalidInput, "sector must have width in (0, 2 pi]");
    struct Item {
        double rel;
        const SpectrumEntry* e;
    };
    std::vector<Item> items;
    for (const auto& e : spectrum) {
        if (is_zero(e.gamma)) raise(ErrorCode::ZeroCharge, "spectrum contains the zero charge");
        if (e.omega == 0) continue;
        if (std::abs(e.Z) == 0.0) raise(ErrorCode::InvalidInput, "active charge has zero central charge");
        const double rel = wrap(std::arg(e.Z) - sector.begin);
        if (rel < phase_tol || std::abs(rel - width) < phase_tol || kTwoPi - rel < phase_tol)
            raise(ErrorCode::BoundaryRay, "active ray on the sector boundary");
        if (rel < width) items.push_back({rel, &e});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.rel != b.rel) return a.rel > b.rel;
        return a.e->gamma < b.e->gamma;
    });
    for (std::size_t i = 0; i + 1 < items.size(); ++i)
        if (items[i].rel - items[i + 1].rel < phase_tol && !proportional(items[i].e->gamma, items[i + 1].e->gamma))
            raise(ErrorCode::TieBreak, "two non-proportional charges share a phase");
    OrderedProduct P;
    P.aut = identity_automorphism(alg);
    for (const auto& it : items) {
        P.aut = compose(alg, P.aut, ks_automorphism(alg, {it.e->gamma, it.e->omega}));
        P.order.push_back(it.e->gamma);
    }
    return P;
}

std::optional<Divergence> first_divergence(const TorusAlgebra& alg, const Automorphism& a, const Automorphism& b) {
    std::optional<Divergence> best;
    for (int j = 0; j < alg.rank; ++j) {
        const auto& fa = a.factor[std::size_t(j)].terms;
        const auto& fb = b.factor[std::size_t(j)].terms;
        auto consider = [&](const Charge& k) {
            auto ia = fa.find(k);
            auto ib = fb.find(k);
            Rational va = ia == fa.end() ? Rational(0) : ia->second;
            Rational vb = ib == fb.end() ? Rational(0) : ib->second;
            if (va == vb) return;
            const int h = height(k);
            if (best && best->height <= h) return;
            best = Divergence{j, alg.to_lattice(k), h, va, vb};
        };
        for (const auto& kv : fa) consider(kv.first);
        for (const auto& kv : fb) consider(kv.first);
    }
    return best;
}

WcfResult wcf_check(const std::vector<SpectrumEntry>& A, const std::vector<SpectrumEntry>& B, const Pairing& pairing,
                    const WcfOptions& opt) {
    const int rank = static_cast<int>(pairing.size());
    for (const auto* S : {&A, &B})
        for (const auto& e : *S)
            if (static_cast<int>(e.gamma.size()) != rank) raise(ErrorCode::InvalidInput, "charge rank differs from pairing");

    // Candidate sector starts: midpoints of the gaps between the merged rays
    // of both spectra, so both products run over the same half-plane.
    auto candidates = [&]() {
        std::vector<double> ph;
        for (const auto* S : {&A, &B})
            for (const auto& e : *S)
                if (e.omega != 0) ph.push_back(wrap(std::arg(e.Z)));
        std::sort(ph.begin(), ph.end());
        std::vector<double> c;
        if (ph.empty()) return std::vector<double>{0.0};
        for (std::size_t i = 0; i < ph.size(); ++i) {
            double a = ph[i], b = i + 1 < ph.size() ? ph[i + 1] : ph[0] + kTwoPi;
            if (b - a > 2.0 * opt.phase_tol) c.push_back(wrap(0.5 * (a + b)));
        }
        return c;
    };
    auto selected = [&](const std::vector<SpectrumEntry>& S, double alpha, std::vector<Charge>& out) {
        for (const auto& e : S)
            if (e.omega != 0 && wrap(std::arg(e.Z) - alpha) < std::numbers::pi) out.push_back(e.gamma);
    };

    std::vector<std::pair<double, double>> starts;
    if (opt.sector_a || opt.sector_b) {
        double a = opt.sector_a.value_or(*opt.sector_b);
        starts.push_back({a, opt.sector_b.value_or(a)});
    } else {
        for (double c : candidates()) starts.push_back({c, c});
    }
    std::optional<TorusAlgebra> alg;
    double alpha_a = 0.0, alpha_b = 0.0;
    for (const auto& [xa, xb] : starts) {
        std::vector<Charge> S;
        selected(A, xa, S);
        selected(B, xb, S);
        std::sort(S.begin(), S.end());
        S.erase(std::unique(S.begin(), S.end()), S.end());
        auto fits = [&](const TorusAlgebra& t) {
            return std::all_of(S.begin(), S.end(), [&](const Charge& g) { return t.to_cone(g).has_value(); });
        };
        if (opt.basis) {
            TorusAlgebra t = make_algebra(pairing, opt.N, opt.basis, opt.sigma);
            if (fits(t)) alg = t;
        } else if (S.empty()) {
            alg = make_algebra(pairing, opt.N, std::nullopt, opt.sigma);
        } else {
            // search r-subsets of the selected charges for a positive basis
            std::vector<int> idx(static_cast<std::size_t>(rank));
            std::function<bool(int, int)> rec = [&](int pos, int from) -> bool {
                if (pos == rank) {
                    std::vector<Charge> basis;
                    for (int i : idx) basis.push_back(S[std::size_t(i)]);
                    if (!integer_inverse(basis)) return false;
                    TorusAlgebra t = make_algebra(pairing, opt.N, basis, opt.sigma);
                    if (!fits(t)) return false;
                    alg = t;
                    return true;
                }
                for (int i = from; i < static_cast<int>(S.size()); ++i) {
                    idx[std::size_t(pos)] = i;
                    if (rec(pos + 1, i + 1)) return true;
                }
                return false;
            };
            rec(0, 0);
        }
        if (alg) {
            alpha_a = xa;
            alpha_b = xb;
            break;
        }
    }
    if (!alg) raise(ErrorCode::InvalidInput, "spectra do not share a strictly convex positive cone");

    auto pa = phase_ordered_product(*alg, A, {alpha_a, alpha_a + std::numbers::pi}, opt.phase_tol);
    auto pb = phase_ordered_product(*alg, B, {alpha_b, alpha_b + std::numbers::pi}, opt.phase_tol);
    WcfResult res;
    res.first = first_divergence(*alg, pa.aut, pb.aut);
    res.equal = !res.first.has_value();
    res.basis = alg->basis;
    res.order_a = pa.order;
    res.order_b = pb.order;
    res.sector_a = alpha_a;
    res.sector_b = alpha_b;
    return res;
}

}  // namespace holomorse::dt
