#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdfol/mat.hpp"
#include "mdfol/rng.hpp"
#include "mdfol/scalar.hpp"
#include "mdfol/tolerances.hpp"

namespace mdfol {

class FamilyError : public std::invalid_argument {
  public:
    explicit FamilyError(const std::string& what) : std::invalid_argument(what) {}
};

enum class MD5Variant { F11, F12, F13 };

inline const char* variant_name(MD5Variant v) {
    switch (v) {
        case MD5Variant::F11: return "F11";
        case MD5Variant::F12: return "F12";
        case MD5Variant::F13: return "F13";
    }
    return "?";
}

/// One of the three five-dimensional solvable algebra families with a
/// four-dimensional commutative derived ideal span(X2..X5). The single
/// nontrivial generator acts on the ideal through a rotation-dilation block
/// on (X2, X3) plus a diagonal (F11, F12) or Jordan (F13) block on (X4, X5).
/// Parameters are validated eagerly; an invalid family is unusable anywhere.
class MD5Family {
  public:
    static MD5Family f11(double lambda1, double lambda2, double phi) {
        if (lambda1 == 0.0) throw FamilyError("lambda1 must be nonzero");
        if (lambda2 == 0.0) throw FamilyError("lambda2 must be nonzero");
        if (lambda1 == lambda2) throw FamilyError("lambda1 and lambda2 must be distinct");
        check_phi(phi);
        return MD5Family(MD5Variant::F11, lambda1, lambda2, phi);
    }
    static MD5Family f12(double lambda, double phi) {
        if (lambda == 0.0) throw FamilyError("lambda must be nonzero");
        check_phi(phi);
        return MD5Family(MD5Variant::F12, lambda, lambda, phi);
    }
    static MD5Family f13(double lambda, double phi) {
        if (lambda == 0.0) throw FamilyError("lambda must be nonzero");
        check_phi(phi);
        return MD5Family(MD5Variant::F13, lambda, lambda, phi);
    }

    MD5Variant variant() const { return variant_; }
    double lambda1() const { return lambda1_; }
    double lambda2() const { return lambda2_; }
    double lambda() const { return lambda1_; }  // F12/F13 single dilation rate
    double phi() const { return phi_; }

  private:
    MD5Family(MD5Variant v, double l1, double l2, double phi)
        : variant_(v), lambda1_(l1), lambda2_(l2), phi_(phi) {}

    static void check_phi(double phi) {
        if (!(phi > 0.0 && phi < kPi)) throw FamilyError("phi must lie in the open interval (0, pi)");
    }

    MD5Variant variant_;
    double lambda1_;
    double lambda2_;
    double phi_;
};

/// Element sum(c[i] * X_{i+1}) of the algebra in the fixed basis X1..X5.
struct LieElement {
    std::array<double, 5> c{};

    static LieElement basis(int index_1_to_5) {
        LieElement e;
        e.c[index_1_to_5 - 1] = 1.0;
        return e;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : c) m = std::max(m, std::fabs(v));
        return m;
    }
};

inline LieElement operator+(LieElement a, const LieElement& b) {
    for (int i = 0; i < 5; ++i) a.c[i] += b.c[i];
    return a;
}
inline LieElement operator-(LieElement a, const LieElement& b) {
    for (int i = 0; i < 5; ++i) a.c[i] -= b.c[i];
    return a;
}
inline LieElement operator*(double s, LieElement a) {
    for (double& v : a.c) v *= s;
    return a;
}

/// Point (alpha, beta, gamma, delta, sigma) of the dual space in the basis
/// dual to X1..X5; (beta, gamma) are the real and imaginary parts of the
/// complex second coordinate.
struct Covector {
    double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0, sigma = 0.0;

    std::array<double, 5> as_array() const { return {alpha, beta, gamma, delta, sigma}; }
    static Covector from_array(const std::array<double, 5>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
    bool is_finite() const {
        for (double v : as_array())
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline double max_abs_diff(const Covector& a, const Covector& b) {
    double m = 0.0;
    const auto x = a.as_array(), y = b.as_array();
    for (int i = 0; i < 5; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

inline double pairing(const Covector& f, const LieElement& u) {
    const auto a = f.as_array();
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += a[i] * u.c[i];
    return s;
}

namespace detail {

// 4x4 action of the X1-bracket on coordinates (c2..c5), exactly as the
// block matrices print: rows index the output coordinate.
inline std::array<std::array<double, 4>, 4> ad_coeffs(const MD5Family& fam) {
    const double c = std::cos(fam.phi());
    const double s = std::sin(fam.phi());
    std::array<std::array<double, 4>, 4> m{};
    m[0][0] = c;
    m[0][1] = -s;
    m[1][0] = s;
    m[1][1] = c;
    switch (fam.variant()) {
        case MD5Variant::F11:
            m[2][2] = fam.lambda1();
            m[3][3] = fam.lambda2();
            break;
        case MD5Variant::F12:
            m[2][2] = fam.lambda();
            m[3][3] = fam.lambda();
            break;
        case MD5Variant::F13:
            m[2][2] = fam.lambda();
            m[2][3] = 1.0;
            m[3][3] = fam.lambda();
            break;
    }
    return m;
}

inline std::array<double, 4> ad_apply(const MD5Family& fam, const std::array<double, 4>& v) {
    const auto m = ad_coeffs(fam);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += m[i][j] * v[j];
    return out;
}

}  // namespace detail

/// Matrix of the X1-bracket restricted to the derived ideal, acting on
/// coordinate columns (c2..c5)^T.
inline Mat ad_matrix(const MD5Family& fam) {
    const auto m = detail::ad_coeffs(fam);
    Mat out(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m[i][j];
    return out;
}

/// Lie bracket. The derived ideal is commutative, so
/// [a X1 + u, b X1 + v] = a ad(v) - b ad(u); the X1 coefficient of any
/// bracket is exactly zero.
inline LieElement bracket(const MD5Family& fam, const LieElement& x, const LieElement& y) {
    const std::array<double, 4> u{x.c[1], x.c[2], x.c[3], x.c[4]};
    const std::array<double, 4> v{y.c[1], y.c[2], y.c[3], y.c[4]};
    const auto av = detail::ad_apply(fam, v);
    const auto au = detail::ad_apply(fam, u);
    LieElement out;
    for (int i = 0; i < 4; ++i) out.c[i + 1] = x.c[0] * av[i] - y.c[0] * au[i];
    return out;
}

struct JacobiReport {
    double max_residual = 0.0;
    int triples_checked = 0;
    bool pass = false;
};

/// Jacobi identity residual, exhaustively over the ten basis triples and
/// over `samples` random coefficient triples.
inline JacobiReport jacobi_check(const MD5Family& fam, int samples, std::uint64_t seed,
                                 const Tolerances& tol = {}) {
    JacobiReport report;
    auto residual = [&](const LieElement& x, const LieElement& y, const LieElement& z) {
        const LieElement r = bracket(fam, x, bracket(fam, y, z)) +
                             bracket(fam, y, bracket(fam, z, x)) +
                             bracket(fam, z, bracket(fam, x, y));
        return r.max_abs();
    };

    for (int i = 1; i <= 5; ++i)
        for (int j = i + 1; j <= 5; ++j)
            for (int k = j + 1; k <= 5; ++k) {
                report.max_residual = std::max(
                    report.max_residual,
                    residual(LieElement::basis(i), LieElement::basis(j), LieElement::basis(k)));
                ++report.triples_checked;
            }

    Rng rng(seed, "md5/jacobi-triples");
    for (int n = 0; n < samples; ++n) {
        LieElement x, y, z;
        for (int i = 0; i < 5; ++i) {
            x.c[i] = rng.next_uniform(-1.0, 1.0);
            y.c[i] = rng.next_uniform(-1.0, 1.0);
            z.c[i] = rng.next_uniform(-1.0, 1.0);
        }
        report.max_residual = std::max(report.max_residual, residual(x, y, z));
        ++report.triples_checked;
    }

    report.pass = report.max_residual < tol.algebra_tol;
    return report;
}

/// Parses descriptors of the form F12(lambda=1,phi=1.5707963267948966),
/// F11(lambda1=1,lambda2=-1,phi=0.5), F13(lambda=2,phi=1).
inline MD5Family parse_family(std::string_view text) {
    auto fail = [&](const std::string& why) -> MD5Family {
        throw FamilyError("bad family descriptor '" + std::string(text) + "': " + why);
    };

    auto strip = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };

    std::string_view s = strip(text);
    const auto open = s.find('(');
    if (open == std::string_view::npos || s.back() != ')') return fail("expected NAME(key=value,...)");
    const std::string_view name = strip(s.substr(0, open));
    std::string_view body = s.substr(open + 1, s.size() - open - 2);

    double lambda = 0, lambda1 = 0, lambda2 = 0, phi = 0;
    bool has_lambda = false, has_lambda1 = false, has_lambda2 = false, has_phi = false;
    while (!body.empty()) {
        const auto comma = body.find(',');
        std::string_view item = strip(body.substr(0, comma));
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) return fail("expected key=value");
        const std::string_view key = strip(item.substr(0, eq));
        bool ok = false;
        const double value = parse_double(strip(item.substr(eq + 1)), ok);
        if (!ok) return fail("unparseable number in '" + std::string(item) + "'");
        if (key == "lambda") lambda = value, has_lambda = true;
        else if (key == "lambda1") lambda1 = value, has_lambda1 = true;
        else if (key == "lambda2") lambda2 = value, has_lambda2 = true;
        else if (key == "phi") phi = value, has_phi = true;
        else return fail("unknown key '" + std::string(key) + "'");
    }
    if (!has_phi) return fail("missing phi");

    if (name == "F11") {
        if (!has_lambda1 || !has_lambda2) return fail("F11 needs lambda1 and lambda2");
        return MD5Family::f11(lambda1, lambda2, phi);
    }
    if (name == "F12") {
        if (!has_lambda) return fail("F12 needs lambda");
        return MD5Family::f12(lambda, phi);
    }
    if (name == "F13") {
        if (!has_lambda) return fail("F13 needs lambda");
        return MD5Family::f13(lambda, phi);
    }
    return fail("unknown family name '" + std::string(name) + "'");
}

inline std::string format_family(const MD5Family& fam) {
    std::string out = variant_name(fam.variant());
    out += '(';
    if (fam.variant() == MD5Variant::F11) {
        out += "lambda1=" + format_double(fam.lambda1());
        out += ",lambda2=" + format_double(fam.lambda2());
    } else {
        out += "lambda=" + format_double(fam.lambda());
    }
    out += ",phi=" + format_double(fam.phi());
    out += ')';
    return out;
}

/// Covectors print and parse as comma-separated 5-tuples.
inline Covector parse_covector(std::string_view text) {
    std::array<double, 5> vals{};
    int count = 0;
    std::string_view body = text;
    while (!body.empty() && count < 5) {
        const auto comma = body.find(',');
        std::string_view item = body.substr(0, comma);
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        bool ok = false;
        vals[count] = parse_double(item, ok);
        if (!ok) throw std::invalid_argument("bad covector component '" + std::string(item) + "'");
        ++count;
        if (comma == std::string_view::npos) break;
    }
    if (count != 5 || !body.empty())
        throw std::invalid_argument("covector must have exactly 5 components");
    return Covector::from_array(vals);
}

inline std::string format_covector(const Covector& f) {
    const auto a = f.as_array();
    std::string out = format_double(a[0]);
    for (int i = 1; i < 5; ++i) out += "," + format_double(a[i]);
    return out;
}

}  // namespace mdfol
