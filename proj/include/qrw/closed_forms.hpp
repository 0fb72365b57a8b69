#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chebyshev.hpp"
#include "laurent.hpp"
#include "types.hpp"

namespace qrw {

// ---------------------------------------------------------------------------
// Moment coefficient sequences
//   c_n:    coefficients of 1/sqrt(1+z)
//   chat_n: coefficients of sqrt(1+z)
//   d_n:    partial sums chat_0 + ... + chat_n  (coefficients of sqrt(1+z)/(1-z))
// ---------------------------------------------------------------------------

inline double coeff_c(int n) {
    if (n < 0) throw std::invalid_argument("coeff_c: n must be >= 0");
    double p = 1.0;
    for (int k = 1; k <= n; ++k) p *= 1.0 - 1.0 / (2.0 * k);
    return (n % 2 == 0) ? p : -p;
}

inline double coeff_chat(int n) {
    if (n < 0) throw std::invalid_argument("coeff_chat: n must be >= 0");
    if (n == 0) return 1.0;
    if (n == 1) return 0.5;
    double p = 0.5;
    for (int k = 2; k <= n; ++k) p *= 1.0 - 3.0 / (2.0 * k);
    return (n % 2 == 1) ? p : -p;
}

inline double coeff_d(int n) {
    if (n < 0) throw std::invalid_argument("coeff_d: n must be >= 0");
    double s = 0.0;
    for (int k = 0; k <= n; ++k) s += coeff_chat(k);
    return s;
}

enum class CoeffKind { C, D, CHat };

/// Memoized view over one of the coefficient sequences.
class MomentCoeffs {
  public:
    explicit MomentCoeffs(CoeffKind kind) : kind_(kind) {}

    double at(int n) {
        while (static_cast<int>(values_.size()) <= n) {
            int m = static_cast<int>(values_.size());
            switch (kind_) {
                case CoeffKind::C: values_.push_back(coeff_c(m)); break;
                case CoeffKind::D: values_.push_back(coeff_d(m)); break;
                case CoeffKind::CHat: values_.push_back(coeff_chat(m)); break;
            }
        }
        return values_[n];
    }

  private:
    CoeffKind kind_;
    std::vector<double> values_;
};

inline double moment_coeff(CoeffKind kind, int m) {
    switch (kind) {
        case CoeffKind::C: return coeff_c(m);
        case CoeffKind::D: return coeff_d(m);
        case CoeffKind::CHat: return coeff_chat(m);
    }
    throw std::logic_error("moment_coeff: bad kind");
}

// ---------------------------------------------------------------------------
// Closed forms for Verblunsky parameters a, 0, a, 0, ... (half line) and the
// constant-coin matrix data on the line.
// ---------------------------------------------------------------------------

/// Square root branch of sqrt((z - 1/z)^2 + 4|a|^2) fixed by |lambda_+| >
/// |lambda_-| for the transfer-matrix eigenvalues lambda_± = (z + 1/z ± s)/(2 rho);
/// equivalently the sign making |z + 1/z + s| the larger.
inline cplx sqrt_branch(cplx a, cplx z) {
    if (std::abs(z) == 0.0) throw std::domain_error("sqrt_branch: z = 0");
    cplx zi = 1.0 / z;
    cplx w = z + zi;
    cplx s0 = std::sqrt((z - zi) * (z - zi) + 4.0 * std::norm(a));
    return (std::abs(w + s0) >= std::abs(w - s0)) ? s0 : -s0;
}

/// Caratheodory function of the measure with parameters a, 0, a, 0, ...
/// (no rotation), F(0) = 1.
inline cplx appendix_caratheodory_hat(cplx a, cplx z) {
    if (std::abs(a) >= 1.0) throw std::domain_error("appendix_caratheodory: |a| must be < 1");
    if (std::abs(z) >= 1.0) throw std::domain_error("appendix_caratheodory: |z| must be < 1");
    if (std::abs(z) == 0.0) return 1.0;
    cplx s = sqrt_branch(a, z);
    cplx dz = z - 1.0 / z;
    return -(s + 2.0 * a.real()) / (dz + cplx(0.0, 2.0 * a.imag()));
}

/// Rotated version F(z) = Fhat(e^{-i vartheta} z).
inline cplx appendix_caratheodory(cplx a, cplx z, double rotation = 0.0) {
    return appendix_caratheodory_hat(a, unit_phase(-rotation) * z);
}

/// Orthogonality measure for parameters a, 0, a, 0, ... rotated by an angle:
/// weight sqrt(sin^2 t - sin^2 eta)/|sin t - sin beta| on two arcs of width
/// pi - 2 eta centred at ±i, plus a mass M at e^{i beta} outside the arcs
/// (absent exactly when a is imaginary).  Physical angles carry the rotation.
struct ClosedFormMeasure {
    cplx a{0.0};
    double rotation = 0.0;
    double eta = 0.0;   // sin(eta) = |a|
    double beta = 0.0;  // sin(beta) = -Im a, sign(cos beta) = sign(Re a)
    double mass = 0.0;

    ClosedFormMeasure() = default;
    ClosedFormMeasure(cplx a_, double rotation_) : a(a_), rotation(rotation_) {
        if (std::abs(a) >= 1.0) throw std::domain_error("ClosedFormMeasure: |a| must be < 1");
        eta = std::asin(std::min(1.0, std::abs(a)));
        double sb = std::min(1.0, std::max(-1.0, -a.imag()));
        beta = std::asin(sb);
        if (a.real() < 0.0) beta = (beta >= 0.0 ? pi - beta : -pi - beta);
        mass = std::abs(a.real()) / std::sqrt(1.0 - a.imag() * a.imag());
    }

    bool has_mass() const { return mass > 1e-15; }
    /// Location of the mass point on the physical (rotated) circle.
    cplx mass_point() const { return unit_phase(beta + rotation); }

    /// Arcs of the weight support in physical angles, each as (lo, hi).
    std::vector<std::pair<double, double>> arcs() const {
        return {{eta + rotation, pi - eta + rotation}, {eta - pi + rotation, -eta + rotation}};
    }

    /// Weight w at a physical angle theta; zero off the arcs.  Evaluated via
    /// sin^2 t - sin^2 eta = sin(t - eta) sin(t + eta) and
    /// sin t - sin beta = 2 cos((t + beta)/2) sin((t - beta)/2), which stay
    /// accurate next to the arc endpoints.
    double weight(double theta) const {
        double t = std::remainder(theta - rotation, 2.0 * pi);
        double sa = std::abs(a);
        if (sa == 0.0) return 1.0;
        double prod = std::sin(t - eta) * std::sin(t + eta);
        if (prod <= 0.0) return 0.0;
        return weight_from_parts(prod, t);
    }

    /// Weight at a node given its exact distances to the enclosing arc's
    /// endpoints: on both arcs sin^2 t - sin^2 eta = sin(d_lo) sin(d_hi).
    double weight_local(double theta, double delta_lo, double delta_hi) const {
        if (std::abs(a) == 0.0) return 1.0;
        double prod = std::sin(delta_lo) * std::sin(delta_hi);
        if (prod <= 0.0) return 0.0;
        double t = std::remainder(theta - rotation, 2.0 * pi);
        return weight_from_parts(prod, t);
    }

    cplx caratheodory(cplx z) const { return appendix_caratheodory(a, z, rotation); }

  private:
    double weight_from_parts(double prod, double t) const {
        double den = 2.0 * std::abs(std::cos(0.5 * (t + beta)) * std::sin(0.5 * (t - beta)));
        return den == 0.0 ? std::numeric_limits<double>::infinity() : std::sqrt(prod) / den;
    }
};

inline ClosedFormMeasure appendix_measure(cplx a, double rotation = 0.0) {
    return ClosedFormMeasure(a, rotation);
}

/// Orthonormal Laurent polynomials for parameters a, 0, a, 0, ... as exact
/// coefficient tables:
///   x_{2n-1}(z) = U_n(y) - (z + a)/rho * U_{n-1}(y),
///   x_{2n}(z)   = U_n(y) - (1/z + conj(a))/rho * U_{n-1}(y),
///   y = (z + 1/z)/(2 rho).
inline ScalarLaurent appendix_laurent(cplx a, int index) {
    if (std::abs(a) >= 1.0) throw std::domain_error("appendix_laurent: |a| must be < 1");
    if (index < 0) throw std::invalid_argument("appendix_laurent: index must be >= 0");
    if (index == 0) return ScalarLaurent::one();
    double rho = std::sqrt(1.0 - std::norm(a));
    ScalarLaurent y;
    y.set(1, 1.0 / (2.0 * rho));
    y.set(-1, 1.0 / (2.0 * rho));
    int n = (index + 1) / 2;
    ScalarLaurent un = chebyshev_u(n, y);
    ScalarLaurent un1 = chebyshev_u(n - 1, y);
    ScalarLaurent factor;
    if (index % 2 == 1) {
        factor.set(1, 1.0 / rho);
        factor.set(0, a / rho);
    } else {
        factor.set(-1, 1.0 / rho);
        factor.set(0, std::conj(a) / rho);
    }
    return un - factor * un1;
}

/// Matrix orthogonality measure of a constant-coin walk on the integers:
/// W(t) = (sin^2 t - sin^2 eta)^{-1/2} (|sin t|, -+ i conj(a); ± i a, |sin t|)
/// on the upper/lower arc, no mass point.  Physical angles carry the rotation.
struct ClosedFormMatrixMeasure {
    cplx a{0.0};
    double rotation = 0.0;
    double eta = 0.0;

    ClosedFormMatrixMeasure() = default;
    ClosedFormMatrixMeasure(cplx a_, double rotation_) : a(a_), rotation(rotation_) {
        if (std::abs(a) >= 1.0)
            throw std::domain_error("ClosedFormMatrixMeasure: |a| must be < 1");
        eta = std::asin(std::min(1.0, std::abs(a)));
    }

    std::vector<std::pair<double, double>> arcs() const {
        return {{eta + rotation, pi - eta + rotation}, {eta - pi + rotation, -eta + rotation}};
    }

    /// Matrix weight at a physical angle; zero matrix off the arcs.
    Mat2 weight(double theta) const {
        double t = std::remainder(theta - rotation, 2.0 * pi);
        if (std::abs(a) == 0.0) return Mat2::identity();
        double prod = std::sin(t - eta) * std::sin(t + eta);
        if (prod <= 0.0) return Mat2::zero();
        return weight_from_parts(prod, t);
    }

    Mat2 weight_local(double theta, double delta_lo, double delta_hi) const {
        if (std::abs(a) == 0.0) return Mat2::identity();
        double prod = std::sin(delta_lo) * std::sin(delta_hi);
        if (prod <= 0.0) return Mat2::zero();
        double t = std::remainder(theta - rotation, 2.0 * pi);
        return weight_from_parts(prod, t);
    }

    /// Matrix Caratheodory function, F(0) = identity.
    Mat2 caratheodory(cplx z) const {
        cplx zh = unit_phase(-rotation) * z;
        if (std::abs(zh) == 0.0) return Mat2::identity();
        cplx s = sqrt_branch(a, zh);
        cplx dz = zh - 1.0 / zh;
        return Mat2(dz, 2.0 * std::conj(a), -2.0 * a, dz) * (-1.0 / s);
    }

    /// Numerator matrix of F at a point (rank 1 on the four singular points).
    Mat2 numerator(cplx z) const {
        cplx zh = unit_phase(-rotation) * z;
        cplx dz = zh - 1.0 / zh;
        return Mat2(dz, 2.0 * std::conj(a), -2.0 * a, dz);
    }

  private:
    Mat2 weight_from_parts(double prod, double t) const {
        double st = std::sin(t);
        double sign = (st > 0.0) ? 1.0 : -1.0;  // upper arc: sin t > 0
        cplx off_tr = cplx(0.0, -sign) * std::conj(a);
        cplx off_bl = cplx(0.0, sign) * a;
        return Mat2(std::abs(st), off_tr, off_bl, std::abs(st)) * (1.0 / std::sqrt(prod));
    }
};

/// Left orthonormal matrix Laurent polynomial X_j of a constant-coin line
/// walk, exact coefficient table.  Built from
///   Xhat_{2j-1}(z) = U_j(y) - (1/rho) (z, -conj(a); a, z) U_{j-1}(y),
///   Xhat_{2j}(z)   = Xhat_{2j-1}(1/conj(z))^dag,
/// wrapped with the reduced gauge phases and rotated:
///   X_j(z) = LambdaHat_j Xhat_j(e^{-i vartheta} z).
struct ConstantCoinLineData {
    cplx a{0.0};
    double rotation = 0.0;     // vartheta
    double phase_delta = 0.0;  // (sigma_1 - sigma_2)/2

    MatLaurent laurent(int index) const {
        if (index < 0) throw std::invalid_argument("line laurent: index must be >= 0");
        MatLaurent xhat = hat_poly(index);
        MatLaurent rotated;
        for (const auto& [p, c] : xhat.coeffs())
            rotated.set(p, c * LaurentPoly<cplx>::zpow(unit_phase(-rotation), p));
        int j = (index + 1) / 2;
        double d = (index % 2 == 1) ? phase_delta : -phase_delta;
        Mat2 lam = Mat2::diag(unit_phase(j * d), unit_phase(-j * d));
        return lmul(lam, rotated);
    }

  private:
    MatLaurent hat_poly(int index) const {
        if (index == 0) return MatLaurent::one();
        double rho = std::sqrt(1.0 - std::norm(a));
        ScalarLaurent y;
        y.set(1, 1.0 / (2.0 * rho));
        y.set(-1, 1.0 / (2.0 * rho));
        int n = (index + 1) / 2;
        ScalarLaurent un = chebyshev_u(n, y);
        ScalarLaurent un1 = chebyshev_u(n - 1, y);
        MatLaurent odd;
        for (const auto& [p, c] : un.coeffs()) odd.add(p, Mat2::diag(c, c));
        Mat2 a_part(0.0, -std::conj(a) / rho, a / rho, 0.0);
        for (const auto& [p, c] : un1.coeffs()) {
            odd.add(p + 1, Mat2::diag(-c / rho, -c / rho));  // -(z/rho) U_{n-1}
            odd.add(p, a_part * (-c));                       // -(1/rho)(0,-conj a;a,0) U_{n-1}
        }
        if (index % 2 == 1) return odd;
        return reversed_adjoint(odd);
    }
};

}  // namespace qrw
