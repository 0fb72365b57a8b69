#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qrw {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline cplx unit_phase(double angle) { return std::polar(1.0, angle); }

/// Row 2-vector of complex amplitudes (spin-up, spin-down components).
struct Vec2 {
    cplx a{0.0}, b{0.0};

    Vec2() = default;
    Vec2(cplx a_, cplx b_) : a(a_), b(b_) {}

    Vec2 operator+(const Vec2& o) const { return {a + o.a, b + o.b}; }
    Vec2 operator-(const Vec2& o) const { return {a - o.a, b - o.b}; }
    Vec2 operator*(cplx s) const { return {a * s, b * s}; }
    Vec2& operator+=(const Vec2& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    double norm() const { return std::sqrt(std::norm(a) + std::norm(b)); }
};

inline Vec2 operator*(cplx s, const Vec2& v) { return {s * v.a, s * v.b}; }

/// 2x2 complex matrix, row-major. Small enough that everything is by value.
struct Mat2 {
    std::array<cplx, 4> m{};

    Mat2() = default;
    Mat2(cplx m00, cplx m01, cplx m10, cplx m11) : m{m00, m01, m10, m11} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }

    cplx& operator()(int r, int c) { return m[2 * r + c]; }
    const cplx& operator()(int r, int c) const { return m[2 * r + c]; }

    Mat2 operator+(const Mat2& o) const {
        return {m[0] + o.m[0], m[1] + o.m[1], m[2] + o.m[2], m[3] + o.m[3]};
    }
    Mat2 operator-(const Mat2& o) const {
        return {m[0] - o.m[0], m[1] - o.m[1], m[2] - o.m[2], m[3] - o.m[3]};
    }
    Mat2 operator*(const Mat2& o) const {
        return {m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
                m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]};
    }
    Mat2 operator*(cplx s) const { return {m[0] * s, m[1] * s, m[2] * s, m[3] * s}; }
    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 4; ++i) m[i] += o.m[i];
        return *this;
    }

    Mat2 adjoint() const {
        return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
    }
    Mat2 transpose() const { return {m[0], m[2], m[1], m[3]}; }
    Mat2 conj() const {
        return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
    }
    cplx trace() const { return m[0] + m[3]; }
    cplx det() const { return m[0] * m[3] - m[1] * m[2]; }

    Mat2 inverse() const {
        cplx d = det();
        if (std::abs(d) < 1e-300) throw std::domain_error("Mat2::inverse: singular matrix");
        cplx id = 1.0 / d;
        return {m[3] * id, -m[1] * id, -m[2] * id, m[0] * id};
    }

    /// Frobenius norm.
    double norm() const {
        double s = 0.0;
        for (const auto& e : m) s += std::norm(e);
        return std::sqrt(s);
    }

    /// Operator (spectral) norm via the singular values of a 2x2 matrix.
    double opnorm() const {
        // singular values: sqrt of eigenvalues of A^dag A (2x2 Hermitian)
        Mat2 h = adjoint() * (*this);
        double t = h.trace().real();
        double d = std::abs(h.det());
        double disc = std::max(0.0, t * t / 4.0 - d);
        return std::sqrt(std::max(0.0, t / 2.0 + std::sqrt(disc)));
    }
};

inline Mat2 operator*(cplx s, const Mat2& a) { return a * s; }

inline Vec2 operator*(const Vec2& v, const Mat2& a) {
    return {v.a * a(0, 0) + v.b * a(1, 0), v.a * a(0, 1) + v.b * a(1, 1)};
}

/// Principal square root of a Hermitian positive semidefinite 2x2 matrix.
/// Uses (H + sqrt(det) I) / sqrt(tr + 2 sqrt(det)), the closed form of the
/// spectral square root at this size.
inline Mat2 hermitian_sqrt(const Mat2& h) {
    double t = h.trace().real();
    double d = h.det().real();
    if (t < -1e-12 || d < -1e-10)
        throw std::domain_error("hermitian_sqrt: matrix is not positive semidefinite");
    double s = std::sqrt(std::max(0.0, d));
    double tau = std::sqrt(std::max(0.0, t + 2.0 * s));
    if (tau < 1e-150) return Mat2::zero();
    return (h + Mat2::diag(s, s)) * (1.0 / tau);
}

/// Scalar-or-matrix traits used by the generic CMV machinery.
template <class T>
struct cell_traits;

template <>
struct cell_traits<cplx> {
    static cplx one() { return 1.0; }
    static cplx zero() { return 0.0; }
    static cplx adjoint(cplx v) { return std::conj(v); }
    static double norm(cplx v) { return std::abs(v); }
};

template <>
struct cell_traits<Mat2> {
    static Mat2 one() { return Mat2::identity(); }
    static Mat2 zero() { return Mat2::zero(); }
    static Mat2 adjoint(const Mat2& v) { return v.adjoint(); }
    static double norm(const Mat2& v) { return v.norm(); }
};

template <>
struct cell_traits<Vec2> {
    static Vec2 zero() { return {}; }
    static double norm(const Vec2& v) { return v.norm(); }
};

}  // namespace qrw
