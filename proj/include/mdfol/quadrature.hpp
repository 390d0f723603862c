#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdfol/scalar.hpp"
#include "mdfol/tolerances.hpp"

namespace mdfol {

/// Integration interval; endpoints may be +-infinity.
struct Interval {
    double a;
    double b;
};

inline Interval positive_half_line() { return {0.0, std::numeric_limits<double>::infinity()}; }
inline Interval negative_half_line() { return {-std::numeric_limits<double>::infinity(), 0.0}; }

class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved error estimate " + format_double(achieved) + ")"),
          achieved_error(achieved) {}
    double achieved_error;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
// Column layout: abscissa, Gauss weight (0 for Kronrod-only nodes), Kronrod weight.
inline constexpr double kG7K15[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978554},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

template <class F>
std::pair<cplx, double> g7k15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    cplx f0 = f(mid);
    cplx g7 = kG7K15[0][1] * f0;
    cplx k15 = kG7K15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kG7K15[i][0];
        const cplx fi = f(mid + dx) + f(mid - dx);
        g7 += kG7K15[i][1] * fi;
        k15 += kG7K15[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    return {k15, std::abs(k15 - g7)};
}

struct Segment {
    double a, b, err;
    cplx val;
    bool operator<(const Segment& o) const { return err < o.err; }
};

// Adaptive bisection on a bounded interval, worst segment first.
template <class F>
cplx adaptive(F& f, double a, double b, double abs_tol) {
    std::priority_queue<Segment> heap;
    double total_err = 0.0;
    auto push = [&](double lo, double hi) {
        auto [val, err] = g7k15(f, lo, hi);
        heap.push({lo, hi, err, val});
        total_err += err;
    };
    push(a, b);

    constexpr int kMaxSegments = 4000;
    int segments = 1;
    while (total_err > abs_tol && segments < kMaxSegments) {
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // not bisectable further
        heap.pop();
        total_err -= worst.err;
        push(worst.a, mid);
        push(mid, worst.b);
        ++segments;
    }

    cplx sum = 0.0;
    double err_sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().val;
        err_sum += heap.top().err;
        heap.pop();
    }
    if (err_sum > abs_tol)
        throw QuadratureError("quadrature failed to converge within budget", err_sum);
    return sum;
}

}  // namespace detail

/// Integral of a scalar (complex-valued) function over an interval, to
/// absolute tolerance abs_tol. Half-lines are compactified by
/// z = c + tan(theta) before adaptive Gauss-Kronrod; integrands here decay
/// like (1+z^2)^{-3/2}, which the substitution renders smooth and bounded.
template <class F>
cplx line_integral(F&& f, Interval interval, double abs_tol = Tolerances{}.quad_abs_tol) {
    const bool lo_inf = std::isinf(interval.a);
    const bool hi_inf = std::isinf(interval.b);
    if (!(interval.a < interval.b)) {
        if (interval.a == interval.b) return 0.0;
        throw std::invalid_argument("line_integral requires a < b");
    }

    if (lo_inf && hi_inf) {
        return line_integral(f, Interval{interval.a, 0.0}, 0.5 * abs_tol) +
               line_integral(f, Interval{0.0, interval.b}, 0.5 * abs_tol);
    }
    if (hi_inf) {
        const double base = interval.a;
        auto g = [&f, base](double theta) {
            const double c = std::cos(theta);
            return f(base + std::tan(theta)) / (c * c);
        };
        return detail::adaptive(g, 0.0, 0.5 * kPi, abs_tol);
    }
    if (lo_inf) {
        const double base = interval.b;
        auto g = [&f, base](double theta) {
            const double c = std::cos(theta);
            return f(base + std::tan(theta)) / (c * c);
        };
        return detail::adaptive(g, -0.5 * kPi, 0.0, abs_tol);
    }
    return detail::adaptive(f, interval.a, interval.b, abs_tol);
}

}  // namespace mdfol
