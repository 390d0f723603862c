#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "mdfol/scalar.hpp"
#include "mdfol/tolerances.hpp"

namespace mdfol {

class SingularMatrixError : public std::runtime_error {
  public:
    explicit SingularMatrixError(const char* what) : std::runtime_error(what) {}
};

/// Dense complex matrix with inline storage, at most 8x8. Value semantics,
/// row-major. Everything in this library is tiny, so no heap and no BLAS.
class Mat {
  public:
    static constexpr int kMaxDim = 8;

    Mat(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim)
            throw std::invalid_argument("Mat dimensions must lie in 1..8");
    }

    Mat(std::initializer_list<std::initializer_list<cplx>> init)
        : Mat(static_cast<int>(init.size()),
              init.size() ? static_cast<int>(init.begin()->size()) : 0) {
        int i = 0;
        for (const auto& row : init) {
            if (static_cast<int>(row.size()) != cols_)
                throw std::invalid_argument("ragged initializer for Mat");
            int j = 0;
            for (const cplx& v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(int i, int j) { return a_[i * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[i * cols_ + j]; }

    Mat& operator+=(const Mat& o) {
        check_same_shape(o);
        for (int k = 0; k < rows_ * cols_; ++k) a_[k] += o.a_[k];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        check_same_shape(o);
        for (int k = 0; k < rows_ * cols_; ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Mat& operator*=(cplx s) {
        for (int k = 0; k < rows_ * cols_; ++k) a_[k] *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, cplx s) { return a *= s; }
    friend Mat operator*(cplx s, Mat a) { return a *= s; }
    friend Mat operator*(Mat a, double s) { return a *= cplx(s); }
    friend Mat operator*(double s, Mat a) { return a *= cplx(s); }
    friend Mat operator-(Mat a) { return a *= cplx(-1.0); }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Mat product shape mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    Mat adjoint() const {
        Mat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    Mat transpose() const {
        Mat m(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int k = 0; k < rows_ * cols_; ++k) s += std::norm(a_[k]);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (int k = 0; k < rows_ * cols_; ++k) m = std::max(m, std::abs(a_[k]));
        return m;
    }

    bool is_finite() const {
        for (int k = 0; k < rows_ * cols_; ++k)
            if (!std::isfinite(a_[k].real()) || !std::isfinite(a_[k].imag())) return false;
        return true;
    }

  private:
    void check_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Mat shape mismatch");
    }

    int rows_;
    int cols_;
    std::array<cplx, kMaxDim * kMaxDim> a_{};
};

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).max_abs(); }

inline bool approx_equal(const Mat& a, const Mat& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

/// e^m by Taylor series after scaling so the scaled Frobenius norm is
/// below 1/2, then repeated squaring. Exact (to roundoff) on nilpotent
/// input because the series terminates.
inline Mat mat_exp(const Mat& m) {
    if (!m.is_square()) throw std::invalid_argument("mat_exp requires a square matrix");
    if (!m.is_finite()) throw std::invalid_argument("mat_exp requires finite entries");
    const int n = m.rows();

    int squarings = 0;
    double norm = m.frobenius_norm();
    while (norm > 0.5 && squarings < 64) {
        norm *= 0.5;
        ++squarings;
    }
    Mat t = m * (1.0 / std::pow(2.0, squarings));

    Mat sum = Mat::identity(n);
    Mat term = Mat::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * t;
        term *= cplx(1.0 / k);
        sum += term;
        if (term.max_abs() <= 1e-18 * std::max(1.0, sum.max_abs())) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

/// Gauss-Jordan inverse with partial pivoting. Throws on singular input.
inline Mat inverse(const Mat& m) {
    if (!m.is_square()) throw std::invalid_argument("inverse requires a square matrix");
    const int n = m.rows();
    Mat a = m;
    Mat inv = Mat::identity(n);
    const double scale = std::max(m.max_abs(), 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int i = col + 1; i < n; ++i)
            if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
        if (std::abs(a(piv, col)) <= 1e-14 * scale)
            throw SingularMatrixError("singular matrix in inverse()");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        const cplx d = 1.0 / a(col, col);
        for (int j = 0; j < n; ++j) {
            a(col, j) *= d;
            inv(col, j) *= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const cplx f = a(i, col);
            if (f == cplx(0.0)) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Singular values in descending order, by one-sided Jacobi on columns.
/// One-sided Jacobi avoids forming the Gram matrix, so tiny singular
/// values keep absolute accuracy near machine epsilon.
inline std::vector<double> singular_values(const Mat& m) {
    if (!m.is_finite()) throw std::invalid_argument("singular_values requires finite entries");
    Mat a = m.rows() >= m.cols() ? m : m.adjoint();
    const int rows = a.rows(), cols = a.cols();

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < cols - 1; ++p)
            for (int q = p + 1; q < cols; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    app += std::norm(a(i, p));
                    aqq += std::norm(a(i, q));
                    apq += std::conj(a(i, p)) * a(i, q);
                }
                const double off = std::abs(apq);
                if (off <= 1e-15 * std::sqrt(app * aqq)) continue;
                rotated = true;

                const cplx phase = apq / off;
                const double tau = (aqq - app) / (2.0 * off);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int i = 0; i < rows; ++i) {
                    const cplx u = a(i, p), v = a(i, q);
                    a(i, p) = c * u - s * std::conj(phase) * v;
                    a(i, q) = s * u + c * std::conj(phase) * v;
                }
            }
        if (!rotated) break;
    }

    std::vector<double> sv(cols);
    for (int j = 0; j < cols; ++j) {
        double nrm = 0.0;
        for (int i = 0; i < rows; ++i) nrm += std::norm(a(i, j));
        sv[j] = std::sqrt(nrm);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

/// Count singular values above rank_threshold times the largest one.
inline int numeric_rank(const Mat& m, const Tolerances& tol = {}) {
    const double top = m.max_abs();
    if (top == 0.0) return 0;
    // exact power-of-two prescaling keeps the Gram accumulations inside
    // the normal range even for subnormal or huge inputs
    Mat scaled = m;
    scaled *= std::ldexp(1.0, -std::ilogb(top));
    const auto sv = singular_values(scaled);
    if (sv.empty() || sv.front() == 0.0) return 0;
    const double cut = tol.rank_threshold * sv.front();
    int r = 0;
    for (double s : sv)
        if (s > cut) ++r;
    return r;
}

}  // namespace mdfol
