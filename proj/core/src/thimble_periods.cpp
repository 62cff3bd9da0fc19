#include "holomorse/thimble_periods.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "holomorse/error.hpp"
#include "holomorse/numerics.hpp"
#include "preimage.hpp"

namespace holomorse::periods {

namespace {

using num::kPi;

struct PanelSum {
    cx value{};
    double err = 0.0;
    double peak = 0.0;
};

// One ray of the thimble: the branch z(s) of W(z) = w_p - s^2 zeta that
// leaves p along sgn * c. Accumulates the integral of
// exp(-s^2 zeta / u) dz/ds (the exp(w_p / u) factor is applied by the caller).
class RayIntegrator {
public:
    RayIntegrator(const HoloPotential& W, const std::vector<cx>& crit, cx p, cx c, double sgn,
                  cx wp, cx zeta, cx u, const PeriodConfig& cfg, double gap)
        : W_(W), crit_(crit), zeta_(zeta), u_(u), cfg_(cfg), rule_(num::gauss_legendre(cfg.order)) {
        curve_.w = [=](double s) { return wp - s * s * zeta; };
        curve_.dw = [=](double s) { return -2.0 * s * zeta; };
        s_ = std::min(1e-3 * gap / std::abs(c), 1e-3);
        z_ = p + sgn * s_ * c;
        // local series z = p + s d + a2 s^2; solving W(z) = w_p - s^2 zeta
        // there is ill-conditioned since W' ~ s
        p_ = p;
        d_ = sgn * c;
        const cx w2 = num::polyval(W.d2(), p), w3 = num::polyval(num::polyder(W.d2()), p);
        a2_ = -w3 * d_ * d_ / (6.0 * w2);
        s_series_ = 1e-5 * gap / std::abs(c);
        if (!detail::newton_solve(W_, curve_.w(s_), z_))
            raise(ErrorCode::QuadratureFail, "thimble start point did not converge");
    }

    // Integrand at the branch point for parameter s; advances the cursor.
    cx integrand(double s) {
        if (s < s_series_) return std::exp(-s * s * zeta_ / u_) * (d_ + 2.0 * a2_ * s);
        z_ = detail::track_preimage(W_, crit_, curve_, s_, z_, {s}).back();
        s_ = s;
        cx dzds = -2.0 * s * zeta_ / num::polyval(W_.d1(), z_);
        return std::exp(-s * s * zeta_ / u_) * dzds;
    }

    cx gauss(double a, double b) {
        cx sum = 0.0;
        const double m = 0.5 * (a + b), r = 0.5 * (b - a);
        for (std::size_t k = 0; k < rule_.x.size(); ++k) {
            cx f = integrand(m + r * rule_.x[k]);
            peak_ = std::max(peak_, std::abs(f));
            sum += rule_.w[k] * f;
        }
        return r * sum;
    }

    // Adaptive panel: accept the two-half estimate once it agrees with the
    // whole-panel estimate.
    void panel(double a, double b, double span, int depth, PanelSum& acc) {
        cx whole = gauss(a, b);
        double m = 0.5 * (a + b);
        cx left = gauss(a, m);
        cx right = gauss(m, b);
        cx halves = left + right;
        double diff = std::abs(halves - whole);
        // absolute tolerance against the whole ray: the integrand carries
        // rounding noise near p that no local refinement removes
        double scale = std::max(peak_ * span, std::abs(acc.value) + std::abs(halves));
        if (diff <= cfg_.rel_tol * scale || depth >= cfg_.max_depth) {
            if (depth >= cfg_.max_depth && diff > 1e-8 * scale)
                raise(ErrorCode::QuadratureFail, "adaptive thimble quadrature did not converge");
            acc.value += halves;
            acc.err += diff;
            return;
        }
        panel(a, m, span, depth + 1, acc);
        panel(m, b, span, depth + 1, acc);
    }

    double peak() const { return peak_; }

private:
    const HoloPotential& W_;
    const std::vector<cx>& crit_;
    cx zeta_, u_;
    const PeriodConfig& cfg_;
    num::GaussRule rule_;
    detail::TargetCurve curve_;
    double s_ = 0.0;
    cx z_{};
    cx p_{}, d_{}, a2_{};
    double s_series_ = 0.0;
    double peak_ = 0.0;
};

void check_off_ray(const std::vector<lg::CriticalPoint>& crit, const lg::CriticalPoint& P,
                   const Phase& zeta, double tol) {
    for (const auto& c : crit) {
        if (c.id == P.id) continue;
        if (phase_distance(zeta, lg::soliton_phase(P, c)) < tol)
            raise(ErrorCode::OnStokesRay, "thimble phase lies on a Stokes ray");
    }
}

}  // namespace

PeriodValue exponential_period(const HoloPotential& W, const std::vector<lg::CriticalPoint>& crit,
                               int pid, const Phase& zeta, cx u, const PeriodConfig& cfg) {
    if (W.num_vars() != 1) raise(ErrorCode::InvalidInput, "exponential periods are implemented for n = 1");
    if (u == cx(0.0)) raise(ErrorCode::InvalidInput, "u must be nonzero");
    const auto& P = lg::by_id(crit, pid);
    check_off_ray(crit, P, zeta, 1e-8);
    const cx z = zeta.value();
    const double a = (z / u).real();
    if (!(a > 1e-12 * std::abs(z / u)))
        raise(ErrorCode::NonDecaying, "Re(zeta/u) must be positive for the integrand to decay");

    std::vector<cx> cz;
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& c : crit) {
        cz.push_back(c.position[0]);
        if (c.id != pid) gap = std::min(gap, std::abs(c.position[0] - P.position[0]));
    }
    if (!std::isfinite(gap)) gap = 1.0;
    const cx p = P.position[0];
    const cx c = std::sqrt(-2.0 * z / num::polyval(W.d2(), p));
    // exp(-a s^2) < trunc at s_max; the Jacobian does not grow for deg >= 2.
    const double s_max = std::sqrt(-std::log(cfg.trunc) / a) * 1.05;

    cx total = 0.0;
    double err = 0.0;
    for (double sgn : {1.0, -1.0}) {
        RayIntegrator ray(W, cz, p, c, sgn, P.value, z, u, cfg, gap);
        PanelSum acc;
        const int Pn = std::max(1, cfg.min_panels);
        for (int k = 0; k < Pn; ++k) ray.panel(s_max * k / Pn, s_max * (k + 1) / Pn, s_max, 0, acc);
        // the tail must already be negligible
        cx tail = ray.integrand(s_max);
        if (std::abs(tail) > 1e-12 * ray.peak())
            raise(ErrorCode::QuadratureFail, "thimble integrand has not decayed at the cutoff");
        total += sgn * acc.value;
        err += acc.err;
    }
    const cx pref = std::exp(P.value / u);
    PeriodValue out;
    out.thimble_id = pid;
    out.phase = zeta;
    out.u = u;
    out.value = pref * total;
    out.est_error = std::abs(pref) * err;
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        raise(ErrorCode::QuadratureFail, "period is not finite");
    if (out.est_error > cfg.accept * std::abs(out.value))
        raise(ErrorCode::QuadratureFail, "period error estimate above acceptance threshold");
    return out;
}

StokesFactor stokes_factor(const HoloPotential& W, const std::vector<lg::CriticalPoint>& crit,
                           int pid, int qid, const StokesConfig& cfg) {
    const auto& P = lg::by_id(crit, pid);
    const auto& Q = lg::by_id(crit, qid);
    const Phase ray = lg::soliton_phase(P, Q);
    if (!((std::conj(ray.value()) * P.value).real() > (std::conj(ray.value()) * Q.value).real()))
        raise(ErrorCode::NonDecaying, "target is not dominated along the ray");
    // keep the probes clear of any neighbouring ray of p
    double eps = cfg.eps;
    for (const auto& c : crit) {
        if (c.id == pid || c.id == qid) continue;
        double d = phase_distance(ray, lg::soliton_phase(P, c));
        while (eps >= 0.5 * d && eps > 1e-6) eps *= 0.5;
    }
    const cx u = ray.value() * cfg.radius;
    const cx base = exponential_period(W, crit, qid, ray, u, cfg.period).value;
    auto jump = [&](double e) {
        cx plus = exponential_period(W, crit, pid, ray.rotated(e), u, cfg.period).value;
        cx minus = exponential_period(W, crit, pid, ray.rotated(-e), u, cfg.period).value;
        return (plus - minus) / base;
    };
    cx r = jump(eps);
    if (cfg.richardson) r = 2.0 * jump(0.5 * eps) - r;

    StokesFactor f;
    f.ray_phase = ray;
    f.source = pid;
    f.target = qid;
    f.raw = r;
    f.entry = int(std::lround(r.real()));
    f.residual = std::abs(r - cx(double(f.entry)));
    if (f.residual >= cfg.max_residual)
        raise(ErrorCode::AmbiguousRounding,
              "Stokes jump ratio " + std::to_string(r.real()) + "+" + std::to_string(r.imag()) +
                  "i is not near an integer");
    return f;
}

std::vector<Ray> rays_clockwise(const std::vector<cx>& values, const Phase& zeta) {
    std::vector<Ray> rays;
    const cx zi = std::conj(zeta.value());
    for (int a = 0; a < int(values.size()); ++a)
        for (int b = 0; b < int(values.size()); ++b) {
            if (a == b) continue;
            cx d = values[std::size_t(a)] - values[std::size_t(b)];
            rays.push_back({std::arg(d * zi), a, b});
        }
    std::sort(rays.begin(), rays.end(), [](const Ray& x, const Ray& y) {
        if (x.rel_angle != y.rel_angle) return x.rel_angle > y.rel_angle;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    return rays;
}

StokesData stokes_matrix(const std::vector<cx>& values, const std::vector<std::vector<int>>& mu,
                         const Phase& zeta) {
    const int n = int(values.size());
    StokesData sd;
    sd.zeta = zeta;
    const cx zi = std::conj(zeta.value());
    sd.order.resize(std::size_t(n));
    for (int i = 0; i < n; ++i) sd.order[std::size_t(i)] = i;
    std::sort(sd.order.begin(), sd.order.end(), [&](int a, int b) {
        return (zi * values[std::size_t(a)]).imag() < (zi * values[std::size_t(b)]).imag();
    });
    for (int i = 0; i + 1 < n; ++i) {
        double d = (zi * (values[std::size_t(sd.order[std::size_t(i + 1)])] -
                          values[std::size_t(sd.order[std::size_t(i)])])).imag();
        if (!(d > 1e-12)) raise(ErrorCode::NonGeneric, "phase lies on a ray between two critical values");
    }
    std::vector<int> pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pos[std::size_t(sd.order[std::size_t(i)])] = i;

    sd.S = identity(n);
    for (const auto& r : rays_clockwise(values, zeta)) {
        if (!(r.rel_angle < 0.0 && r.rel_angle > -kPi)) continue;
        IntMatrix K = identity(n);
        K[std::size_t(pos[std::size_t(r.a)])][std::size_t(pos[std::size_t(r.b)])] =
            mu[std::size_t(r.a)][std::size_t(r.b)];
        sd.S = matmul(sd.S, K);
    }
    return sd;
}

IntMatrix mutation_matrix(const IntMatrix& S, int i) {
    const int n = int(S.size());
    if (i < 0 || i + 1 >= n) raise(ErrorCode::NotAdjacent, "mutation position out of range");
    IntMatrix B = identity(n);
    const auto ui = std::size_t(i), uj = std::size_t(i + 1);
    B[ui][ui] = 0;
    B[ui][uj] = 1;
    B[uj][ui] = 1;
    B[uj][uj] = -S[ui][uj];
    return B;
}

IntMatrix matmul(const IntMatrix& A, const IntMatrix& B) {
    const std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    IntMatrix C(n, std::vector<long long>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (A[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
        }
    return C;
}

IntMatrix transpose(const IntMatrix& A) {
    if (A.empty()) return {};
    IntMatrix T(A[0].size(), std::vector<long long>(A.size()));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
    return T;
}

IntMatrix identity(int n) {
    IntMatrix I(std::size_t(n), std::vector<long long>(std::size_t(n), 0));
    for (int i = 0; i < n; ++i) I[std::size_t(i)][std::size_t(i)] = 1;
    return I;
}

IntMatrix unimodular_inverse(const IntMatrix& A) {
    using boost::multiprecision::cpp_rational;
    const std::size_t n = A.size();
    std::vector<std::vector<cpp_rational>> M(n, std::vector<cpp_rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
        M[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && M[piv][c] == 0) ++piv;
        if (piv == n) raise(ErrorCode::InvalidInput, "matrix is singular");
        std::swap(M[piv], M[c]);
        cpp_rational inv = 1 / M[c][c];
        for (auto& x : M[c]) x *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || M[r][c] == 0) continue;
            cpp_rational f = M[r][c];
            for (std::size_t j = 0; j < 2 * n; ++j) M[r][j] -= f * M[c][j];
        }
    }
    IntMatrix R(n, std::vector<long long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& x = M[i][n + j];
            if (denominator(x) != 1) raise(ErrorCode::InvalidInput, "matrix is not unimodular");
            R[i][j] = static_cast<long long>(numerator(x));
        }
    return R;
}

}  // namespace holomorse::periods
