#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holomorse/potential.hpp"
#include "holomorse/types.hpp"

namespace holomorse::lg {

struct Tolerances {
    double tol_crit = 1e-10;
    double tol_val = 1e-8;
    double tol_cons = 1e-8;
    double tol_asym = 1e-6;
};

struct CriticalPoint {
    Point position{};
    cx value{};
    cx hessian_det{};
    int id = 0;
};

struct CritConfig {
    Tolerances tol;
    // n = 2 multi-start search
    int max_restarts = 2000;
    std::uint64_t seed = 12345;
    double search_radius = 0.0;  // 0: derived from the coefficients
    bool require_complete = false;
};

struct CritResult {
    std::vector<CriticalPoint> points;
    int expected = 0;      // deg(W) - 1 for n = 1, Bezout bound (d-1)^2 for n = 2
    bool complete = true;  // always true for n = 1
    int restarts_used = 0;
};

CritResult find_critical_points(const HoloPotential& W, const CritConfig& cfg = {});

Phase soliton_phase(const CriticalPoint& p, const CriticalPoint& q, double tol_val = 1e-8);

enum class Termination { CapturedAt, Escaped, MaxLength };
const char* termination_name(Termination t);

struct FlowConfig {
    double rtol = 1e-12;
    double atol = 1e-14;
    double h0 = 1e-3;
    double hmin = 1e-13;
    double capture_radius = 1e-6;
    double escape_radius = 1e3;
    double escape_value = 1e4;  // stop once |W(u) - W(u0)| exceeds this
    double max_length = 1e3;    // arclength
    int max_steps = 200000;
    int sample_stride = 1;      // keep every k-th accepted step
};

struct Trajectory {
    std::vector<Point> samples;
    std::vector<cx> values;  // W at samples
    Termination reason = Termination::MaxLength;
    int captured_id = -1;
    double im_drift = 0.0;  // max |Im(f) - Im(f(u0))|, f = W / zeta
    bool monotone = true;   // Re f non-increasing within tol_cons slack
    double length = 0.0;
};

// Integrates du^a/dx = -conj(zeta^{-1} dW/du^a) from u0.
Trajectory flow_gradient(const HoloPotential& W, const Phase& zeta, const Point& u0,
                         const std::vector<CriticalPoint>& crit, const FlowConfig& cfg = {},
                         double tol_cons = 1e-8);

struct SolitonRecord {
    int source = 0;
    int target = 0;
    Phase phase;
    std::vector<Point> samples;
    int sign = 1;
    double energy = 0.0;
};

struct SolitonConfig {
    Tolerances tol;
    int samples_per_half = 64;
    // shooting (oracle / n = 2)
    double shoot_delta = 1e-7;
    double shoot_capture = 1e-4;
    int shoot_fan = 256;
};

struct SolitonCount {
    int count = 0;
    std::vector<SolitonRecord> solitons;
    bool heuristic = false;  // shooting result (n = 2), unsigned
};

SolitonCount count_solitons(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                            int p, int q, const SolitonConfig& cfg = {});

// Independent count by integrating the flow out of p along its unstable
// directions and counting captures at q. Unsigned.
int shooting_count(const HoloPotential& W, const std::vector<CriticalPoint>& crit, int p,
                   int q, const SolitonConfig& cfg = {});

struct BpsMatrix {
    int dim = 0;
    std::vector<std::vector<int>> mu;
    std::vector<std::vector<cx>> phase_table;  // 0 on the diagonal
    bool heuristic = false;
};

BpsMatrix bps_matrix(const HoloPotential& W, const std::vector<CriticalPoint>& crit,
                     const SolitonConfig& cfg = {});

struct ThimbleConfig {
    FlowConfig flow;
    Tolerances tol;
    double start_delta = 1e-6;
    double stokes_tol = 1e-8;
    int rays_n2 = 16;
};

struct Thimble {
    int source = 0;
    Phase phase;
    std::vector<Trajectory> rays;
};

Thimble trace_thimble(const HoloPotential& W, const std::vector<CriticalPoint>& crit, int p,
                      const Phase& zeta, const ThimbleConfig& cfg = {});

// Max distance of W(samples) to the half-line W(p) - R_{>=0} zeta.
double thimble_image_distance(const Thimble& t, cx wp);

// Index of the critical point with the given id.
const CriticalPoint& by_id(const std::vector<CriticalPoint>& crit, int id);

}  // namespace holomorse::lg
