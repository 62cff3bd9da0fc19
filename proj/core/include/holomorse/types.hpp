#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace holomorse {

using cx = std::complex<double>;

// Point in C^n, n <= 2. The unused component of a one-variable point is 0.
using Point = std::array<cx, 2>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(cx s, const Point& a) { return {s * a[0], s * a[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }
inline double norm2(const Point& a) { return std::norm(a[0]) + std::norm(a[1]); }
inline double dist(const Point& a, const Point& b) { return std::sqrt(norm2(a - b)); }

// Unit complex number. Construction normalizes and rejects 0.
class Phase {
public:
    Phase() = default;
    explicit Phase(cx v);
    static Phase from_angle(double theta) { return Phase(std::polar(1.0, theta)); }

    cx value() const { return v_; }
    double arg() const { return std::arg(v_); }
    Phase operator-() const { Phase p; p.v_ = -v_; return p; }
    Phase rotated(double dtheta) const { return Phase(v_ * std::polar(1.0, dtheta)); }

private:
    cx v_{1.0, 0.0};
};

// Unsigned angle between two phases, in [0, pi].
double phase_distance(const Phase& a, const Phase& b);

}  // namespace holomorse
