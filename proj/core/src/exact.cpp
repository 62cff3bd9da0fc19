#include "holomorse/exact.hpp"

#include <cmath>

#include "holomorse/error.hpp"

namespace holomorse::exact {

QPoint rationalize(cx v, long long denom) {
    if (denom <= 0) raise(ErrorCode::InvalidInput, "grid denominator must be positive");
    auto snap = [&](double x) {
        double s = std::nearbyint(x * double(denom));
        if (!std::isfinite(s) || std::abs(s) > 9.0e18) raise(ErrorCode::InvalidInput, "value too large for the rational grid");
        return Rational(BigInt(static_cast<long long>(s)), BigInt(denom));
    };
    return {snap(v.real()), snap(v.imag())};
}

}  // namespace holomorse::exact
