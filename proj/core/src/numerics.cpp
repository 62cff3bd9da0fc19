#include "holomorse/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "holomorse/error.hpp"

namespace holomorse {

Phase::Phase(cx v) {
    double r = std::abs(v);
    if (!(r > 0.0) || !std::isfinite(r)) raise(ErrorCode::InvalidInput, "phase must be a nonzero finite number");
    v_ = v / r;
}

double phase_distance(const Phase& a, const Phase& b) {
    return std::abs(std::arg(a.value() * std::conj(b.value())));
}

namespace num {

cx polyval(const Poly& c, cx z) {
    cx r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}

Poly polyder(const Poly& c) {
    if (c.size() <= 1) return {cx(0.0)};
    Poly d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return d;
}

Poly polytrim(Poly c, double tol) {
    while (c.size() > 1 && std::abs(c.back()) <= tol) c.pop_back();
    return c;
}

std::vector<cx> poly_roots(const Poly& c0) {
    Poly c = polytrim(c0);
    const std::size_t d = c.size() - 1;
    if (d == 0) return {};
    if (d == 1) return {-c[0] / c[1]};

    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(Eigen::Index(d), Eigen::Index(d));
    for (std::size_t i = 1; i < d; ++i) M(Eigen::Index(i), Eigen::Index(i - 1)) = 1.0;
    for (std::size_t i = 0; i < d; ++i) M(Eigen::Index(i), Eigen::Index(d - 1)) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    if (es.info() != Eigen::Success) raise(ErrorCode::NotConverged, "companion eigenvalue solve failed");

    Poly dc = polyder(c);
    std::vector<cx> roots;
    roots.reserve(d);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        cx z = es.eigenvalues()(i);
        // Newton polish; stop as soon as the update stops shrinking (multiple roots).
        double last = 1e300;
        for (int it = 0; it < 8; ++it) {
            cx f = polyval(c, z), g = polyval(dc, z);
            if (g == cx(0.0)) break;
            cx step = f / g;
            if (!(std::abs(step) < last)) break;
            last = std::abs(step);
            z -= step;
            if (last <= 1e-17 * (1.0 + std::abs(z))) break;
        }
        roots.push_back(z);
    }
    return roots;
}

GaussRule gauss_legendre(int n) {
    GaussRule g;
    g.x.resize(std::size_t(n));
    g.w.resize(std::size_t(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.x[std::size_t(i)] = -x;
        g.x[std::size_t(n - 1 - i)] = x;
        g.w[std::size_t(i)] = w;
        g.w[std::size_t(n - 1 - i)] = w;
    }
    if (n % 2 == 1) g.x[std::size_t(n / 2)] = 0.0;
    return g;
}

}  // namespace num
}  // namespace holomorse
