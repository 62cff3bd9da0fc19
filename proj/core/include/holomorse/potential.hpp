#pragma once

#include <array>
#include <map>
#include <vector>

#include "holomorse/numerics.hpp"
#include "holomorse/types.hpp"

namespace holomorse {

using Exponent = std::array<int, 2>;

// Polynomial W on C^n, n in {1, 2}. Terms with zero coefficient are dropped
// on construction, so the representation is canonical.
class HoloPotential {
public:
    HoloPotential(int num_vars, const std::map<Exponent, cx>& terms);

    static HoloPotential univariate(const num::Poly& coeffs);

    int num_vars() const { return n_; }
    int degree() const { return degree_; }
    const std::map<Exponent, cx>& terms() const { return terms_; }

    cx value(const Point& u) const;
    Point gradient(const Point& u) const;
    // Complex Hessian d^2W/du^a du^b.
    std::array<std::array<cx, 2>, 2> hessian(const Point& u) const;
    cx hessian_det(const Point& u) const;

    // n = 1 only: dense coefficient vectors for W, W', W''.
    const num::Poly& coeffs() const { return c0_; }
    const num::Poly& d1() const { return c1_; }
    const num::Poly& d2() const { return c2_; }

    // Largest |coefficient|, used to scale tolerances.
    double scale() const { return scale_; }

    // W + <a, u>, used for generic perturbations.
    HoloPotential plus_linear(const Point& a) const;

private:
    struct Term {
        int e0, e1;
        cx c;
    };
    int n_;
    int degree_ = 0;
    double scale_ = 0.0;
    std::map<Exponent, cx> terms_;
    std::vector<Term> flat_;
    num::Poly c0_, c1_, c2_;
};

}  // namespace holomorse
