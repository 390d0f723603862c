#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mdfol/mat.hpp"
#include "mdfol/md5.hpp"
#include "mdfol/tolerances.hpp"

namespace mdfol {

/// Skew pairing b_ij = <F, [X_i, X_j]>. Only row and column 1 can be
/// nonzero because the derived ideal is commutative.
struct KirillovForm {
    Mat matrix;
};

inline KirillovForm kirillov_form(const MD5Family& fam, const Covector& f) {
    Mat b = Mat::zero(5, 5);
    for (int j = 2; j <= 5; ++j) {
        const double v = pairing(f, bracket(fam, LieElement::basis(1), LieElement::basis(j)));
        b(0, j - 1) = v;
        b(j - 1, 0) = -v;
    }
    return {b};
}

/// Rank of the Kirillov form: 0 when the last four coordinates of F all
/// vanish, else 2. Never 1 or anything higher.
inline int orbit_dimension(const MD5Family& fam, const Covector& f, const Tolerances& tol = {}) {
    return numeric_rank(kirillov_form(fam, f).matrix, tol);
}

/// Closed-form chart of the two-parameter orbit through `base`: the first
/// coordinate is swept freely by x, the rest follow one flow parameter a.
/// The middle pair rotates by -a sin(phi) while scaling by e^{a cos(phi)};
/// the tail pair scales by e^{a lambda} (with the extra secular term
/// delta * a * e^{a lambda} in the fifth coordinate for F13).
class OrbitChart {
  public:
    OrbitChart(const MD5Family& fam, const Covector& base) : family_(fam), base_(base) {}

    const MD5Family& family() const { return family_; }
    const Covector& base() const { return base_; }

    Covector at(double x, double a) const {
        const double c = std::cos(family_.phi());
        const double s = std::sin(family_.phi());
        const cplx w = cplx(base_.beta, base_.gamma) * std::exp(cplx(a * c, -a * s));

        double dlt = 0.0, sig = 0.0;
        switch (family_.variant()) {
            case MD5Variant::F11:
                dlt = base_.delta * std::exp(a * family_.lambda1());
                sig = base_.sigma * std::exp(a * family_.lambda2());
                break;
            case MD5Variant::F12: {
                const double g = std::exp(a * family_.lambda());
                dlt = base_.delta * g;
                sig = base_.sigma * g;
                break;
            }
            case MD5Variant::F13: {
                const double g = std::exp(a * family_.lambda());
                dlt = base_.delta * g;
                sig = (base_.delta * a + base_.sigma) * g;
                break;
            }
        }
        return {x, w.real(), w.imag(), dlt, sig};
    }

  private:
    MD5Family family_;
    Covector base_;
};

inline Covector orbit_point(const MD5Family& fam, const Covector& f, double x, double a) {
    return OrbitChart(fam, f).at(x, a);
}

/// 5x5 matrix of ad_u on coordinates; column j holds [u, X_{j+1}].
inline Mat ad_operator(const MD5Family& fam, const LieElement& u) {
    Mat m = Mat::zero(5, 5);
    for (int j = 1; j <= 5; ++j) {
        const LieElement col = bracket(fam, u, LieElement::basis(j));
        for (int i = 0; i < 5; ++i) m(i, j - 1) = col.c[i];
    }
    return m;
}

/// Transpose action of exp(t ad_u) on coordinates. With u = X1 this
/// reproduces OrbitChart::at(alpha, t) exactly, which fixes the sign
/// convention; elements of the derived ideal only shift the first
/// coordinate (their ad is square-zero).
inline Covector coadjoint_flow(const MD5Family& fam, const Covector& f, const LieElement& u,
                               double t) {
    const Mat e = mat_exp(t * ad_operator(fam, u));
    const auto fa = f.as_array();
    std::array<double, 5> out{};
    for (int j = 0; j < 5; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 5; ++k) acc += e(k, j).real() * fa[k];
        out[j] = acc;
    }
    return Covector::from_array(out);
}

struct OrbitMatch {
    double x = 0.0;
    double a = 0.0;
    double residual = 0.0;
};

/// Inverts the chart: finds (x, a) with orbit_point(base, x, a) close to
/// `target`, or reports absence. The flow parameter is solved in closed
/// form from whichever coordinate pins it: an exponential ratio of the
/// tail, the modulus of the middle pair when cos(phi) is usable, and the
/// rotation angle (periodic, so every representative within |a| <= 50 is
/// tried). Candidates are accepted by residual, so a wrong branch can
/// never produce a false match.
inline std::optional<OrbitMatch> match_orbit(const MD5Family& fam, const Covector& base,
                                             const Covector& target, const Tolerances& tol = {}) {
    if (base.beta == 0.0 && base.gamma == 0.0 && base.delta == 0.0 && base.sigma == 0.0)
        throw std::invalid_argument("match_orbit needs a base with a 2-dimensional orbit");

    constexpr double kWindow = 50.0;
    std::vector<double> candidates;
    auto from_ratio = [&candidates](double num, double den, double rate) {
        if (den == 0.0) return;
        const double r = num / den;
        if (r > 0.0) candidates.push_back(std::log(r) / rate);
    };

    from_ratio(target.delta, base.delta, fam.lambda1());
    if (fam.variant() == MD5Variant::F13) {
        // sigma is a pure exponential only when the secular term is absent
        if (base.delta == 0.0) from_ratio(target.sigma, base.sigma, fam.lambda());
    } else {
        from_ratio(target.sigma, base.sigma, fam.lambda2());
    }

    const cplx wb(base.beta, base.gamma);
    const cplx wt(target.beta, target.gamma);
    if (std::abs(wb) > 0.0 && std::abs(wt) > 0.0) {
        const double c = std::cos(fam.phi());
        const double s = std::sin(fam.phi());
        if (std::fabs(c) > 1e-8) candidates.push_back(std::log(std::abs(wt) / std::abs(wb)) / c);
        const double a0 = -std::arg(wt / wb) / s;
        const double step = 2.0 * kPi / s;
        const long k_lo = static_cast<long>(std::ceil((-kWindow - a0) / step));
        const long k_hi = static_cast<long>(std::floor((kWindow - a0) / step));
        for (long k = k_lo; k <= k_hi; ++k) candidates.push_back(a0 + static_cast<double>(k) * step);
    }

    const double x = target.alpha;
    std::optional<OrbitMatch> best;
    for (double a : candidates) {
        if (!std::isfinite(a)) continue;
        const double r = max_abs_diff(orbit_point(fam, base, x, a), target);
        if (!best || r < best->residual) best = OrbitMatch{x, a, r};
    }
    if (best && best->residual < tol.match_tol) return best;
    return std::nullopt;
}

}  // namespace mdfol
