#pragma once

#include <map>
#include <optional>
#include <vector>

#include "holomorse/exact.hpp"
#include "holomorse/types.hpp"

namespace holomorse::sw {
struct BpsSpectrum;
}

namespace holomorse::dt {

using exact::Rational;
using Charge = std::vector<int>;
using Pairing = std::vector<std::vector<int>>;

// Quantum torus at the classical level. Series live in the positive cone
// spanned by `basis` (rows, lattice coordinates); exponents are stored in
// cone coordinates and truncated at total height N.
struct TorusAlgebra {
    int rank = 0;
    Pairing pairing;
    std::vector<Charge> basis;
    std::vector<Charge> basis_inverse;
    int N = 1;
    Rational sigma = -1;

    // lattice charge -> cone coordinates; empty if outside the cone
    std::optional<Charge> to_cone(const Charge& gamma) const;
    Charge to_lattice(const Charge& cone) const;
    int pair(const Charge& a, const Charge& b) const;
};

TorusAlgebra make_algebra(const Pairing& pairing, int N, std::optional<std::vector<Charge>> basis = std::nullopt,
                          Rational sigma = -1);

int height(const Charge& cone);

struct TorusSeries {
    std::map<Charge, Rational> terms;  // cone coordinates
    bool operator==(const TorusSeries&) const = default;
};

TorusSeries series_one(const TorusAlgebra& alg);
TorusSeries monomial(const TorusAlgebra& alg, const Charge& cone, Rational c = 1);
TorusSeries add(const TorusSeries& a, const TorusSeries& b);
TorusSeries multiply(const TorusAlgebra& alg, const TorusSeries& a, const TorusSeries& b);
TorusSeries power(const TorusAlgebra& alg, const TorusSeries& a, int n);

struct KSTransform {
    Charge gamma;  // lattice coordinates
    int omega = 1;
};

// Automorphism fixed by generator images x_j -> x_j * factor[j].
struct Automorphism {
    std::vector<TorusSeries> factor;
    bool operator==(const Automorphism&) const = default;
};

Automorphism identity_automorphism(const TorusAlgebra& alg);
Automorphism ks_automorphism(const TorusAlgebra& alg, const KSTransform& T);
TorusSeries apply(const TorusAlgebra& alg, const Automorphism& A, const TorusSeries& s);
TorusSeries apply_ks(const TorusAlgebra& alg, const KSTransform& T, const TorusSeries& s);
// compose(A, B) = A o B
Automorphism compose(const TorusAlgebra& alg, const Automorphism& A, const Automorphism& B);

struct SpectrumEntry {
    Charge gamma;
    int omega = 1;
    cx Z;
};

std::vector<SpectrumEntry> from_bps(const sw::BpsSpectrum& s);

// half-open interval of phases [begin, end), end - begin <= 2 pi
struct Sector {
    double begin = 0.0;
    double end = 0.0;
};

struct OrderedProduct {
    Automorphism aut;
    std::vector<Charge> order;  // leftmost factor first
};

// Factors are composed by decreasing arg Z, leftmost = largest phase.
OrderedProduct phase_ordered_product(const TorusAlgebra& alg, const std::vector<SpectrumEntry>& spectrum,
                                     const Sector& sector, double phase_tol = 1e-10);

struct Divergence {
    int generator = 0;
    Charge exponent;  // lattice coordinates
    int height = 0;
    Rational a, b;
};

struct WcfOptions {
    int N = 12;
    std::optional<std::vector<Charge>> basis;
    std::optional<double> sector_a;  // start angle of the half-circle sector
    std::optional<double> sector_b;
    Rational sigma = -1;
    double phase_tol = 1e-10;
};

struct WcfResult {
    bool equal = false;
    std::optional<Divergence> first;
    std::vector<Charge> basis;
    std::vector<Charge> order_a, order_b;
    double sector_a = 0.0, sector_b = 0.0;
};

WcfResult wcf_check(const std::vector<SpectrumEntry>& A, const std::vector<SpectrumEntry>& B, const Pairing& pairing,
                    const WcfOptions& opt = {});

std::optional<Divergence> first_divergence(const TorusAlgebra& alg, const Automorphism& a, const Automorphism& b);

}  // namespace holomorse::dt
