#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "holomorse/types.hpp"

namespace holomorse::exact {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct QPoint {
    Rational re;
    Rational im;
    bool operator==(const QPoint&) const = default;
};

inline QPoint operator+(const QPoint& a, const QPoint& b) { return {a.re + b.re, a.im + b.im}; }
inline QPoint operator-(const QPoint& a, const QPoint& b) { return {a.re - b.re, a.im - b.im}; }

// Im(conj(a) b): positive when b is counterclockwise of a.
inline Rational cross(const QPoint& a, const QPoint& b) { return a.re * b.im - a.im * b.re; }
inline Rational dot(const QPoint& a, const QPoint& b) { return a.re * b.re + a.im * b.im; }

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// Nearest point of the grid (1/denom) Z[i].
QPoint rationalize(cx v, long long denom);

inline cx to_cx(const QPoint& q) {
    return {static_cast<double>(q.re), static_cast<double>(q.im)};
}

}  // namespace holomorse::exact
