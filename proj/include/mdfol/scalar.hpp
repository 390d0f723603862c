#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace mdfol {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline double sq(double x) { return x * x; }

inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

/// sin(pi*x) with exact zeros at integer x. Argument reduction happens in
/// units of pi, so half-turns land on exact doubles (Sterbenz: 1-r and
/// 0.5-r are computed without rounding in the ranges used here).
inline double sinpi(double x) {
    const double r = std::remainder(x, 2.0);  // [-1, 1]
    const double ar = std::fabs(r);
    const double s = (ar <= 0.5) ? std::sin(kPi * ar) : std::sin(kPi * (1.0 - ar));
    return r < 0.0 ? -s : s;
}

/// cos(pi*x) with cospi(0.5) == 0 and cospi(1) == -1 exactly.
inline double cospi(double x) {
    const double r = std::fabs(std::remainder(x, 2.0));  // [0, 1]
    if (r <= 0.25) return std::cos(kPi * r);
    if (r < 0.75) return std::sin(kPi * (0.5 - r));
    return -std::cos(kPi * (1.0 - r));
}

/// exp(2*pi*i*w) on the unit circle, exact at integer and half-integer w.
inline cplx unit_phase(double w) { return {cospi(2.0 * w), sinpi(2.0 * w)}; }

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view text, bool& ok) {
    double v = std::numeric_limits<double>::quiet_NaN();
    auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    ok = res.ec == std::errc{} && res.ptr == text.data() + text.size();
    return v;
}

}  // namespace mdfol
