#pragma once

#include <optional>
#include <vector>

#include "holomorse/numerics.hpp"
#include "holomorse/types.hpp"

namespace holomorse::sw {

// lambda^2 = p(z) dz^2 with simple roots.
struct QuadraticDifferential {
    num::Poly poly;
    std::vector<cx> turning_points;  // sorted by (Re, Im)
};

std::vector<cx> turning_points(const num::Poly& p, double tol = 1e-10);
QuadraticDifferential make_qd(const num::Poly& p, double tol = 1e-10);

// Segment cycle between turning points a and b, lifted to the double cover.
struct BasisCycle {
    int a = 0;
    int b = 0;
};

struct ChargeLattice {
    int rank = 0;
    std::vector<std::vector<int>> pairing;
    std::vector<BasisCycle> cycles;
};

// Periods of one basis cycle on one fixed sheet: Z = 2 int sqrt(p) dz and
// the companions 2 int z^k dz / sqrt(p), k = 0 .. rank-2. The sheet is fixed
// so that Z lies in the upper half plane (or on the positive real axis).
struct CyclePeriods {
    cx Z{};
    std::vector<cx> companions;
    double error = 0.0;
    cx germ_a{};   // sqrt(p) / sqrt(p'(e)(z - e)) at the end a (limit sign)
    cx germ_b{};
};

struct QuadConfig {
    int order = 64;
};

CyclePeriods cycle_periods(const QuadraticDifferential& qd, const BasisCycle& c, const QuadConfig& cfg = {});
cx central_charge(const QuadraticDifferential& qd, const BasisCycle& c, const QuadConfig& cfg = {});

ChargeLattice charge_lattice(const QuadraticDifferential& qd, const QuadConfig& cfg = {});

struct CentralChargeMap {
    std::vector<cx> Z;
    std::vector<double> error;
    cx operator()(const std::vector<int>& gamma) const;
};

CentralChargeMap central_charge_map(const QuadraticDifferential& qd, const QuadConfig& cfg = {});

struct TrajConfig {
    double rtol = 1e-11;
    double atol = 1e-13;
    double h0 = 1e-3;
    double hmin = 1e-14;
    double escape_radius = 0.0;     // 0: 8 (1 + max |e|)
    double collision_radius = 0.0;  // 0: 0.25 * min distance between turning points
    double max_t = 1e4;
    int max_steps = 200000;
};

enum class TrajEnd { HitTurningPoint, Escaped, MaxLength };
const char* traj_end_name(TrajEnd e);

struct TrajectoryPath {
    std::vector<cx> z;
    std::vector<int> sheet;   // +1 / -1 relative to the principal square root
    TrajEnd end = TrajEnd::MaxLength;
    int hit = -1;
    cx sqrt_end{};
    cx action{};              // int sqrt(p) dz along the path (ODE)
    std::vector<cx> companions;
    double im_drift = 0.0;    // independent chord quadrature check
    double length = 0.0;
};

// dz/dt = zeta / sqrt(p(z)) starting at z0 on the sheet sqrt0. Turning point
// `skip` is ignored until the path has left its collision disk.
TrajectoryPath trace_trajectory(const QuadraticDifferential& qd, cx z0, cx sqrt0, const Phase& zeta,
                                const TrajConfig& cfg = {}, int skip = -1, int n_companions = 0);

// Start data of the three critical trajectories at turning point i.
struct CriticalStart {
    cx z0{};
    cx sqrt0{};
    cx action0{};
    std::vector<cx> companions0;
};
std::vector<CriticalStart> critical_starts(const QuadraticDifferential& qd, int i, const Phase& zeta,
                                           double radius, int n_companions = 0);

struct BpsEntry {
    std::vector<int> gamma;
    int omega = 1;
    Phase phase;                  // Z(gamma) / |Z(gamma)|
    double connection_phase = 0;  // bisected phase of the trajectory
    int from_tp = 0;
    int to_tp = 0;
    std::vector<cx> witness;
};

struct ScanConfig {
    int phase_grid = 2000;
    int bisection_depth = 40;
    double tol_phase = 1e-6;
    double theta0 = 0.0123;
    double charge_tol = 0.05;
    int threads = 1;
    bool keep_witness = true;
    TrajConfig traj;
    QuadConfig quad;
};

struct BpsSpectrum {
    ChargeLattice lattice;
    std::vector<cx> Z;              // on the basis
    std::vector<BpsEntry> entries;  // both gamma and -gamma, sorted by phase
    int phase_grid = 0;
    int bisection_depth = 0;
    double max_alignment = 0.0;     // max |arg Z - connection phase|
};

BpsSpectrum find_saddle_connections(const QuadraticDifferential& qd, const ScanConfig& cfg = {});

// Number of states up to sign.
int count_states(const BpsSpectrum& s);

struct SupportReport {
    double A = 0.0;
    bool pass = true;
    std::vector<std::pair<std::vector<int>, bool>> per_charge;
};

// A = max ||gamma|| / |Z(gamma)| (Euclidean norm in the basis). With an
// external A, each charge is checked against it instead.
SupportReport support_check(const BpsSpectrum& s, const CentralChargeMap& Z,
                            std::optional<double> A_external = std::nullopt, double tol_val = 1e-8);

}  // namespace holomorse::sw
