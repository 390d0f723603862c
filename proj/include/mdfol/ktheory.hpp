#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "mdfol/mat.hpp"
#include "mdfol/quadrature.hpp"
#include "mdfol/rng.hpp"
#include "mdfol/scalar.hpp"
#include "mdfol/tolerances.hpp"

namespace mdfol {

/// Profile t(z) = z / sqrt(1 + z^2) used to lift projectors over a
/// half-line; increases from -1 to 1, with t(0) = 0.
inline double lift_profile(double z) { return z / std::sqrt(1.0 + z * z); }

inline double lift_profile_derivative(double z) {
    const double w = 1.0 + z * z;
    return 1.0 / (w * std::sqrt(w));
}

/// Unit scalar loop u(z) = e^{2 pi i t(z)}; both limits are 1.
inline cplx u_loop(double z) { return unit_phase(lift_profile(z)); }

/// Constant rank-one projector diag(1, 0).
inline Mat epsilon1() {
    Mat e = Mat::zero(2, 2);
    e(0, 0) = 1.0;
    return e;
}

/// Rank-one projector field on the plane,
///   p(x, y) = 1/2 [[1 - cos(pi r),  ((x+iy)/r) sin(pi r)],
///                  [((x-iy)/r) sin(pi r),  1 + cos(pi r)]],  r = |(x, y)|,
/// extended by its continuous limit diag(0, 1) at the origin. On the unit
/// circle it collapses to diag(1, 0) exactly, which is what lets the field
/// descend from the disk to the sphere.
inline Mat bott_projector(double x, double y) {
    const double r = std::hypot(x, y);
    Mat p = Mat::zero(2, 2);
    if (r == 0.0) {
        p(1, 1) = 1.0;
        return p;
    }
    const double c = cospi(r);
    const double s = sinpi(r);
    const cplx phase = cplx(x, y) / r;
    p(0, 0) = 0.5 * (1.0 - c);
    p(1, 1) = 0.5 * (1.0 + c);
    p(0, 1) = 0.5 * s * phase;
    p(1, 0) = 0.5 * s * std::conj(phase);
    return p;
}

/// Lift of the projector field over the z-line: t(z) p(x, y). Vanishes at
/// z = 0 and tends to +-p(x, y) at z -> +-infinity.
inline Mat lift_projector(double x, double y, double z) {
    return lift_profile(z) * bott_projector(x, y);
}

/// Invertible-matrix loop over a half-line with both endpoint limits equal
/// (to the identity). `derivative` may be left empty; winding_number then
/// falls back to central differences.
struct MatrixLoop {
    int dim = 2;
    Interval domain;
    std::function<Mat(double)> value;
    std::function<Mat(double)> derivative;
};

enum class HalfLine { positive, negative };

inline Interval half_line_interval(HalfLine h) {
    return h == HalfLine::positive ? positive_half_line() : negative_half_line();
}

/// The exponential loop z -> e^{2 pi i t(z) p} of the lifted projector.
/// Since p is idempotent the exponential collapses to
/// I + (e^{2 pi i t} - 1) p, with derivative 2 pi i t'(z) e^{2 pi i t} p.
inline MatrixLoop exp_loop(double x, double y, HalfLine half) {
    const Mat p = bott_projector(x, y);
    MatrixLoop loop;
    loop.dim = 2;
    loop.domain = half_line_interval(half);
    loop.value = [p](double z) {
        return Mat::identity(2) + (unit_phase(lift_profile(z)) - cplx(1.0)) * p;
    };
    loop.derivative = [p](double z) {
        const cplx factor = cplx(0.0, 2.0 * kPi) * lift_profile_derivative(z) *
                            unit_phase(lift_profile(z));
        return factor * p;
    };
    return loop;
}

class WindingError : public std::runtime_error {
  public:
    explicit WindingError(const std::string& what) : std::runtime_error(what) {}
};

struct Winding {
    long value = 0;
    double raw = 0.0;  // pre-rounding quadrature result
};

/// (1 / 2 pi i) * integral of Tr(f'(z) f(z)^{-1}) dz over the loop's
/// half-line, rounded to the nearest integer. The rounding gap is
/// certified: a pre-rounding distance of 1e-6 or more from an integer is
/// an error, not a value.
inline Winding winding_number(const MatrixLoop& loop, const Tolerances& tol = {}) {
    auto derivative_at = [&loop](double z) {
        if (loop.derivative) return loop.derivative(z);
        const double h = std::max(1e-6, 1e-6 * std::fabs(z));
        return (loop.value(z + h) - loop.value(z - h)) * (1.0 / (2.0 * h));
    };
    auto integrand = [&loop, &derivative_at](double z) {
        return (derivative_at(z) * inverse(loop.value(z))).trace();
    };
    const cplx total = line_integral(integrand, loop.domain, tol.quad_abs_tol);
    const cplx w = total / cplx(0.0, 2.0 * kPi);
    const double rounded = std::round(w.real());
    if (std::abs(w - cplx(rounded)) >= 1e-6)
        throw WindingError("winding number is not an integer: " + format_double(w.real()) +
                           " + " + format_double(w.imag()) + "i");
    Winding out;
    out.value = static_cast<long>(rounded);
    out.raw = w.real();
    return out;
}

// Frozen generator labels. Half-lines are always traversed in the
// direction of increasing z, which makes both u loop restrictions wind
// once; every integer below is relative to this orientation.
inline const std::array<std::string, 2>& loop_class_basis() {
    static const std::array<std::string, 2> basis{"[b]x[u+]", "[b]x[u-]"};
    return basis;
}

/// Image of a single projector-class generator under the connecting map,
/// as coefficients on loop_class_basis().
struct IndexColumn {
    std::string generator;
    std::array<long, 2> coeffs{};
    std::array<double, 2> raw{};
};

/// Classes with a lift that is a single projector over the whole cylinder
/// (the identity and the constant epsilon1) have exponential loops that
/// are homotopic to constants in the quotient, hence image zero; this is
/// recorded directly rather than re-derived.
inline IndexColumn delta0_of_constant_lift(const std::string& generator) {
    return IndexColumn{generator, {0, 0}, {0.0, 0.0}};
}

namespace detail {

/// Winding pair of the exponential loop at one base point of the plane.
inline std::array<Winding, 2> winding_pair(double x, double y, const Tolerances& tol) {
    return {winding_number(exp_loop(x, y, HalfLine::positive), tol),
            winding_number(exp_loop(x, y, HalfLine::negative), tol)};
}

/// Evaluates the connecting map on a projector-difference generator by
/// winding the exponential loop at a canonical base point, then verifies
/// the integers at `samples` random base points with radii in (0, r_max];
/// the class cannot depend on the base point, so disagreement is an error.
inline IndexColumn delta0_of_projector_class(const std::string& generator, double r_max,
                                             int samples, std::uint64_t seed,
                                             const Tolerances& tol) {
    const auto canonical = winding_pair(0.5, 0.0, tol);
    IndexColumn col;
    col.generator = generator;
    col.coeffs = {canonical[0].value, canonical[1].value};
    col.raw = {canonical[0].raw, canonical[1].raw};

    Rng rng(seed, "ktheory/base-points");
    for (int n = 0; n < samples; ++n) {
        const double r = rng.next_uniform(1e-3, r_max);
        const double theta = rng.next_uniform(0.0, 2.0 * kPi);
        const auto w = winding_pair(r * std::cos(theta), r * std::sin(theta), tol);
        if (w[0].value != col.coeffs[0] || w[1].value != col.coeffs[1])
            throw WindingError("winding disagrees across base points for " + generator);
    }
    return col;
}

}  // namespace detail

/// Connecting map K0 -> K1 of the first extension, as the integer matrix
/// whose columns are the images of the generators [1bar] and
/// [pbar]-[eps1]. The first column is zero (constant lift); the second
/// carries the windings of the exponential loop over each half-line.
inline std::array<IndexColumn, 2> delta0_on_A1(int samples, std::uint64_t seed,
                                               const Tolerances& tol = {}) {
    return {delta0_of_constant_lift("[1bar]"),
            detail::delta0_of_projector_class("[pbar]-[eps1]", 1.0, samples, seed, tol)};
}

/// Connecting map of the second extension, evaluated on the single
/// generator [p]-[eps1]; the same lift-exponentiate-wind pipeline over the
/// punctured plane.
inline IndexColumn delta_on_A2(int samples, std::uint64_t seed, const Tolerances& tol = {}) {
    return detail::delta0_of_projector_class("[p]-[eps1]", 4.0, samples, seed, tol);
}

/// The full invariant system: gamma1 as a 2x2 integer matrix in bases
/// ([1bar], [pbar]-[eps1]) -> ([b]x[u+], [b]x[u-]), gamma2 as the pair of
/// coefficients of the image of [p]-[eps1].
struct IndexSystem {
    std::array<IndexColumn, 2> gamma1_columns;
    IndexColumn gamma2_column;

    std::array<std::array<long, 2>, 2> gamma1() const {
        // rows index the loop basis, columns the projector generators
        return {{{gamma1_columns[0].coeffs[0], gamma1_columns[1].coeffs[0]},
                 {gamma1_columns[0].coeffs[1], gamma1_columns[1].coeffs[1]}}};
    }
    std::array<long, 2> gamma2() const { return gamma2_column.coeffs; }
};

inline IndexSystem assemble_index(int samples, std::uint64_t seed, const Tolerances& tol = {}) {
    IndexSystem sys;
    sys.gamma1_columns = delta0_on_A1(samples, seed, tol);
    sys.gamma2_column = delta_on_A2(samples, seed + 1, tol);
    return sys;
}

}  // namespace mdfol
