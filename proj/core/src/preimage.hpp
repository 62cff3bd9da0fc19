#pragma once

#include <functional>
#include <vector>

#include "holomorse/potential.hpp"

namespace holomorse::detail {

// Target curve w(s) in the W-plane with its derivative.
struct TargetCurve {
    std::function<cx(double)> w;
    std::function<cx(double)> dw;
};

// Follows one branch of W^{-1}(w(s)) (n = 1) starting from z0 at s0 and returns
// the branch at every parameter in `stops` (monotone, same side of s0).
// Steps are limited to a fraction of the distance to the nearest critical
// point, which is where distinct branches can meet.
std::vector<cx> track_preimage(const HoloPotential& W, const std::vector<cx>& crit,
                               const TargetCurve& curve, double s0, cx z0,
                               const std::vector<double>& stops);

// Newton refinement of W(z) = target near z.
bool newton_solve(const HoloPotential& W, cx target, cx& z, int max_iter = 30);

}  // namespace holomorse::detail
