#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "holomorse/types.hpp"

namespace holomorse::num {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Polynomials are coefficient vectors, lowest degree first.
using Poly = std::vector<cx>;

cx polyval(const Poly& c, cx z);
Poly polyder(const Poly& c);
Poly polytrim(Poly c, double tol = 0.0);

// All roots via the companion matrix, then a few Newton polishing steps.
std::vector<cx> poly_roots(const Poly& c);

// Gauss-Legendre nodes on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
GaussRule gauss_legendre(int n);

// Fixed-size complex state for the embedded Runge-Kutta stepper.
template <std::size_t N>
using CVec = std::array<cx, N>;

template <std::size_t N>
CVec<N> axpy(const CVec<N>& y, double h, const CVec<N>& k) {
    CVec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * k[i];
    return r;
}

// One Dormand-Prince 5(4) step. Returns the 5th-order solution in y5 and the
// scaled error norm (<= 1 means accept). Only the first `active` components
// enter the error norm.
template <std::size_t N, class F>
double dp45_step(F&& f, const CVec<N>& y, double h, CVec<N>& y5, double rtol,
                 double atol, std::size_t active = N) {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    CVec<N> k1 = f(y), t;
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    CVec<N> k2 = f(t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    CVec<N> k3 = f(t);
    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    CVec<N> k4 = f(t);
    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    CVec<N> k5 = f(t);
    for (std::size_t i = 0; i < N; ++i)
        t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                           a65 * k5[i]);
    CVec<N> k6 = f(t);
    for (std::size_t i = 0; i < N; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    CVec<N> k7 = f(y5);

    double err = 0.0;
    for (std::size_t i = 0; i < active; ++i) {
        cx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                    e7 * k7[i]);
        double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / sc);
    }
    return err;
}

// Step-size update factor for a 5(4) pair.
inline double dp45_factor(double err) {
    if (err == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
}

}  // namespace holomorse::num
