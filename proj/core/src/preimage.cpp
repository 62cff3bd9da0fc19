#include "preimage.hpp"

#include <cmath>
#include <limits>

#include "holomorse/error.hpp"

namespace holomorse::detail {

bool newton_solve(const HoloPotential& W, cx target, cx& z, int max_iter) {
    const auto& c = W.coeffs();
    const auto& d = W.d1();
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        cx g = num::polyval(d, z);
        if (g == cx(0.0)) return false;
        cx step = (num::polyval(c, z) - target) / g;
        double a = std::abs(step);
        if (!std::isfinite(a)) return false;
        z -= step;
        const double sc = 1.0 + std::abs(z);
        if (a <= 1e-14 * sc) return true;
        // rounding floor: the update stopped contracting at a tiny size
        if (a < 1e-9 * sc && a > 0.25 * last) return true;
        last = a;
    }
    return false;
}

namespace {

double crit_distance(const std::vector<cx>& crit, cx z) {
    double r = std::numeric_limits<double>::infinity();
    for (cx c : crit) r = std::min(r, std::abs(z - c));
    return r;
}

}  // namespace

std::vector<cx> track_preimage(const HoloPotential& W, const std::vector<cx>& crit,
                               const TargetCurve& curve, double s0, cx z0,
                               const std::vector<double>& stops) {
    const auto& d = W.d1();
    std::vector<cx> out;
    out.reserve(stops.size());
    double s = s0;
    cx z = z0;
    double h = 0.0;
    for (double target : stops) {
        while (s != target) {
            double rem = target - s;
            if (h == 0.0 || std::abs(h) > std::abs(rem) || (h > 0) != (rem > 0)) h = rem;
            double rho = crit_distance(crit, z);
            bool ok = false;
            cx zn;
            for (int tries = 0; tries < 200; ++tries) {
                cx k1 = curve.dw(s) / num::polyval(d, z);
                cx ze = z + h * k1;
                cx k2 = curve.dw(s + h) / num::polyval(d, ze);
                cx zp = z + 0.5 * h * (k1 + k2);
                zn = zp;
                bool conv = newton_solve(W, curve.w(s + h), zn, 8);
                if (conv && std::isfinite(zn.real()) && std::abs(zn - z) <= 0.25 * rho &&
                    std::abs(zn - zp) <= 0.05 * rho) {
                    ok = true;
                    break;
                }
                h *= 0.5;
                if (std::abs(h) < 1e-15 * (1.0 + std::abs(s)))
                    raise(ErrorCode::StepFailure, "preimage continuation step underflow");
            }
            if (!ok) raise(ErrorCode::StepFailure, "preimage continuation did not converge");
            s = (std::abs(target - (s + h)) < 1e-15) ? target : s + h;
            z = zn;
            h *= 1.6;
        }
        out.push_back(z);
    }
    return out;
}

}  // namespace holomorse::detail
