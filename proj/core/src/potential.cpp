#include "holomorse/potential.hpp"

#include <string>

#include "holomorse/error.hpp"

namespace holomorse {

namespace {

cx ipow(cx z, int k) {
    cx r = 1.0;
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

}  // namespace

HoloPotential::HoloPotential(int num_vars, const std::map<Exponent, cx>& terms) : n_(num_vars) {
    if (n_ != 1 && n_ != 2) raise(ErrorCode::InvalidInput, "num_vars must be 1 or 2");
    for (const auto& [e, c] : terms) {
        if (e[0] < 0 || e[1] < 0) raise(ErrorCode::InvalidInput, "negative exponent");
        if (n_ == 1 && e[1] != 0) raise(ErrorCode::InvalidInput, "second exponent must be 0 for num_vars = 1");
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) raise(ErrorCode::InvalidInput, "non-finite coefficient");
        if (c == cx(0.0)) continue;
        terms_[e] += c;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->second == cx(0.0)) it = terms_.erase(it);
        else ++it;
    }
    for (const auto& [e, c] : terms_) {
        degree_ = std::max(degree_, e[0] + e[1]);
        scale_ = std::max(scale_, std::abs(c));
        flat_.push_back({e[0], e[1], c});
    }
    if (degree_ < 2) raise(ErrorCode::InvalidInput, "potential must have degree >= 2");
    if (n_ == 1) {
        c0_.assign(std::size_t(degree_ + 1), cx(0.0));
        for (const auto& [e, c] : terms_) c0_[std::size_t(e[0])] = c;
        c1_ = num::polyder(c0_);
        c2_ = num::polyder(c1_);
    }
}

HoloPotential HoloPotential::univariate(const num::Poly& coeffs) {
    std::map<Exponent, cx> t;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        if (coeffs[k] != cx(0.0)) t[{int(k), 0}] = coeffs[k];
    return HoloPotential(1, t);
}

cx HoloPotential::value(const Point& u) const {
    if (n_ == 1) return num::polyval(c0_, u[0]);
    cx r = 0.0;
    for (const auto& t : flat_) r += t.c * ipow(u[0], t.e0) * ipow(u[1], t.e1);
    return r;
}

Point HoloPotential::gradient(const Point& u) const {
    if (n_ == 1) return {num::polyval(c1_, u[0]), cx(0.0)};
    Point g{cx(0.0), cx(0.0)};
    for (const auto& t : flat_) {
        if (t.e0 > 0) g[0] += t.c * double(t.e0) * ipow(u[0], t.e0 - 1) * ipow(u[1], t.e1);
        if (t.e1 > 0) g[1] += t.c * double(t.e1) * ipow(u[0], t.e0) * ipow(u[1], t.e1 - 1);
    }
    return g;
}

std::array<std::array<cx, 2>, 2> HoloPotential::hessian(const Point& u) const {
    std::array<std::array<cx, 2>, 2> h{};
    if (n_ == 1) {
        h[0][0] = num::polyval(c2_, u[0]);
        return h;
    }
    for (const auto& t : flat_) {
        if (t.e0 > 1) h[0][0] += t.c * double(t.e0 * (t.e0 - 1)) * ipow(u[0], t.e0 - 2) * ipow(u[1], t.e1);
        if (t.e1 > 1) h[1][1] += t.c * double(t.e1 * (t.e1 - 1)) * ipow(u[0], t.e0) * ipow(u[1], t.e1 - 2);
        if (t.e0 > 0 && t.e1 > 0)
            h[0][1] += t.c * double(t.e0 * t.e1) * ipow(u[0], t.e0 - 1) * ipow(u[1], t.e1 - 1);
    }
    h[1][0] = h[0][1];
    return h;
}

cx HoloPotential::hessian_det(const Point& u) const {
    auto h = hessian(u);
    if (n_ == 1) return h[0][0];
    return h[0][0] * h[1][1] - h[0][1] * h[1][0];
}

HoloPotential HoloPotential::plus_linear(const Point& a) const {
    auto t = terms_;
    t[{1, 0}] += a[0];
    if (n_ == 2) t[{0, 1}] += a[1];
    return HoloPotential(n_, t);
}

}  // namespace holomorse
