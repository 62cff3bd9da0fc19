#pragma once

#include <vector>

#include "holomorse/lg_core.hpp"

namespace holomorse::periods {

using IntMatrix = std::vector<std::vector<long long>>;

struct PeriodConfig {
    int order = 16;         // Gauss-Legendre points per panel
    int min_panels = 16;    // initial uniform panels on each ray
    int max_depth = 24;     // adaptive bisection depth
    double rel_tol = 1e-13; // per-panel acceptance, relative to the running magnitude
    double trunc = 1e-16;   // tail cut relative to the integrand maximum
    double accept = 1e-6;   // est_error / |value| limit for an accepted result
};

struct PeriodValue {
    int thimble_id = 0;
    Phase phase;
    cx u{};
    cx value{};
    double est_error = 0.0;
};

// Integral of exp(W/u) dz along the thimble of p at phase zeta (n = 1),
// oriented along +sqrt(-zeta/W''(p)) at p.
PeriodValue exponential_period(const HoloPotential& W, const std::vector<lg::CriticalPoint>& crit,
                               int p, const Phase& zeta, cx u, const PeriodConfig& cfg = {});

struct StokesConfig {
    double eps = 1e-2;
    double radius = 1.0;  // |u|; u is aligned with the ray
    bool richardson = true;
    double max_residual = 0.1;
    PeriodConfig period;
};

struct StokesFactor {
    Phase ray_phase;
    int source = 0;
    int target = 0;
    int entry = 0;
    cx raw{};          // extrapolated jump ratio before rounding
    double residual = 0.0;
};

StokesFactor stokes_factor(const HoloPotential& W, const std::vector<lg::CriticalPoint>& crit,
                           int p, int q, const StokesConfig& cfg = {});

// Phase-ordered Stokes data for labelled critical values and a labelled,
// antisymmetric mu. Positions sort labels by Im(w / zeta) ascending; S is the
// product of I + mu[a][b] E(pos a, pos b) over the rays in the half-plane
// clockwise of zeta, taken in clockwise order. S is upper unitriangular.
struct StokesData {
    Phase zeta;
    std::vector<int> order;  // order[pos] = label
    IntMatrix S;
};

struct Ray {
    double rel_angle = 0.0;  // arg(zeta_ab / zeta) in (-pi, pi]
    int a = 0;
    int b = 0;
};

// All rays zeta_ab = (w_a - w_b)/|w_a - w_b| relative to zeta, sorted by
// relative angle descending (clockwise from zeta).
std::vector<Ray> rays_clockwise(const std::vector<cx>& values, const Phase& zeta);

StokesData stokes_matrix(const std::vector<cx>& values, const std::vector<std::vector<int>>& mu,
                         const Phase& zeta);

// Basis change for a clockwise crossing that swaps positions i and i+1.
// The mutated Stokes matrix is B S B^T.
IntMatrix mutation_matrix(const IntMatrix& S, int i);

IntMatrix matmul(const IntMatrix& A, const IntMatrix& B);
IntMatrix transpose(const IntMatrix& A);
IntMatrix identity(int n);
// Exact inverse of a unimodular integer matrix (fraction-free elimination).
IntMatrix unimodular_inverse(const IntMatrix& A);

}  // namespace holomorse::periods
