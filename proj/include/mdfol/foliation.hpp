#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdfol/md5.hpp"
#include "mdfol/scalar.hpp"

namespace mdfol {

/// Point of V, the dual-space region y^2 + z^2 + t^2 + s^2 > 0 in
/// coordinates (x, y, z, t, s).
struct FoliationPoint {
    double x = 0.0, y = 0.0, z = 0.0, t = 0.0, s = 0.0;
};

inline bool in_V(const FoliationPoint& p) {
    // some coordinate past x is nonzero; squaring would underflow for
    // values below 1e-154
    return p.y != 0.0 || p.z != 0.0 || p.t != 0.0 || p.s != 0.0;
}

/// The leaves of the foliation carried by V are the orbits of one fixed
/// parameter choice: rotation rate 1 on the middle pair (phi = pi/2) and
/// unit dilation on the tail.
inline MD5Family foliation_family() { return MD5Family::f12(1.0, kPi / 2.0); }

inline Covector to_covector(const FoliationPoint& p) { return {p.x, p.y, p.z, p.t, p.s}; }
inline FoliationPoint to_point(const Covector& f) { return {f.alpha, f.beta, f.gamma, f.delta, f.sigma}; }

/// Acting element (r, a) of the plane group.
struct ActionParam {
    double r = 0.0, a = 0.0;
};

enum class Stratum { V1, V2, W2 };

inline const char* stratum_name(Stratum s) {
    switch (s) {
        case Stratum::V1: return "V1";
        case Stratum::V2: return "V2";
        case Stratum::W2: return "W2";
    }
    return "?";
}

namespace detail {
inline void require_in_V(const FoliationPoint& p) {
    if (!in_V(p)) throw std::domain_error("not in V");
}
}  // namespace detail

/// (r, a) . (x, y+iz, t, s) = (x + r, (y+iz) e^{-ia}, t e^a, s e^a).
inline FoliationPoint apply_action(const ActionParam& g, const FoliationPoint& p) {
    detail::require_in_V(p);
    const double c = std::cos(g.a), s = std::sin(g.a);
    const double grow = std::exp(g.a);
    return {p.x + g.r, p.y * c + p.z * s, -p.y * s + p.z * c, p.t * grow, p.s * grow};
}

/// Stratum membership is definitional, so the comparisons are exact:
/// V1 when s != 0, V2 when s = 0 and t != 0, W2 when s = t = 0 (and then
/// y^2 + z^2 > 0 because the point lies in V).
inline Stratum classify_stratum(const FoliationPoint& p) {
    detail::require_in_V(p);
    if (p.s != 0.0) return Stratum::V1;
    if (p.t != 0.0) return Stratum::V2;
    return Stratum::W2;
}

/// Complete invariant of the leaf through a point, directly comparable
/// between points. The continuous parts are constant along orbits because
/// the rotation of y+iz by -a is cancelled by the phase e^{i ln|s|}
/// (resp. e^{i ln|t|}), whose argument shifts by +a under s -> s e^a.
struct LeafInvariant {
    Stratum stratum = Stratum::W2;
    std::vector<double> continuous;
    std::vector<int> discrete;
};

inline LeafInvariant leaf_invariant(const FoliationPoint& p) {
    const Stratum tag = classify_stratum(p);
    LeafInvariant inv;
    inv.stratum = tag;
    const cplx w(p.y, p.z);
    switch (tag) {
        case Stratum::V1: {
            const cplx anchored = w * std::polar(1.0, std::log(std::fabs(p.s)));
            inv.continuous = {p.t / p.s, anchored.real(), anchored.imag()};
            inv.discrete = {p.s > 0.0 ? 1 : -1};
            break;
        }
        case Stratum::V2: {
            const cplx anchored = w * std::polar(1.0, std::log(std::fabs(p.t)));
            inv.continuous = {anchored.real(), anchored.imag()};
            inv.discrete = {p.t > 0.0 ? 1 : -1};
            break;
        }
        case Stratum::W2:
            inv.continuous = {std::abs(w)};
            break;
    }
    return inv;
}

/// True when the two invariants agree: stratum and signs exactly, the
/// continuous parts within tol.
inline bool invariants_match(const LeafInvariant& a, const LeafInvariant& b, double tol = 1e-9) {
    if (a.stratum != b.stratum || a.discrete != b.discrete) return false;
    if (a.continuous.size() != b.continuous.size()) return false;
    for (std::size_t i = 0; i < a.continuous.size(); ++i)
        if (std::fabs(a.continuous[i] - b.continuous[i]) > tol) return false;
    return true;
}

/// Infinitesimal generators of the action: d/dr and d/da at the point.
/// Their span is the leaf tangent space; the second vector vanishes
/// nowhere on V.
struct TangentFrame {
    std::array<double, 5> d_r{};
    std::array<double, 5> d_a{};
};

inline TangentFrame leaf_tangent_frame(const FoliationPoint& p) {
    detail::require_in_V(p);
    TangentFrame f;
    f.d_r = {1.0, 0.0, 0.0, 0.0, 0.0};
    f.d_a = {0.0, p.z, -p.y, p.t, p.s};
    return f;
}

}  // namespace mdfol
