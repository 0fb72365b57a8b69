#pragma once

#include <vector>

#include "cmv.hpp"
#include "laurent.hpp"
#include "verblunsky.hpp"

namespace qrw {

namespace detail {

template <class T>
LaurentPoly<T> cmul(const T& m, const LaurentPoly<T>& p) {
    LaurentPoly<T> r;
    for (const auto& [pw, c] : p.coeffs()) r.set(pw, m * c);
    return r;
}

template <class T>
T left_inverse(const T& v) {
    if constexpr (std::is_same_v<T, cplx>)
        return 1.0 / v;
    else
        return v.inverse();
}

}  // namespace detail

/// Orthonormal Laurent polynomials x_0..x_{count-1} as exact coefficient
/// tables, generated from the factored eigen-recurrence C x(z) = z x(z).
/// With u = M x the factor blocks give, per Theta pair,
///   L:  u_{2j+1} = rhoL^{-1} (z x_{2j} - alpha^dag u_{2j}),
///       x_{2j+1} = z^{-1} (rhoR u_{2j} - alpha u_{2j+1}),
///   M:  x_{2j+2} = rhoL^{-1} (u_{2j+1} - alpha^dag x_{2j+1}),
///       u_{2j+2} = rhoR x_{2j+1} - alpha x_{2j+2},
/// seeded by x_0 = u_0 = 1.  Works identically for scalar and block cells.
template <class T>
std::vector<LaurentPoly<T>> laurent_polynomials(const CmvOperator<T>& op, int count) {
    if (count < 1) throw std::invalid_argument("laurent_polynomials: count must be >= 1");
    if (op.lattice() != Lattice::SemiInfinite)
        throw std::invalid_argument("laurent_polynomials: semi-infinite operator expected");
    using P = LaurentPoly<T>;
    std::vector<P> xs;
    xs.reserve(count);
    P x = P::one();
    P u = P::one();
    xs.push_back(x);
    for (int j = 0; static_cast<int>(xs.size()) < count; ++j) {
        ThetaBlock<T> even = op.theta(2 * j);
        T adjA = cell_traits<T>::adjoint(even.alpha);
        P u_next = detail::cmul(detail::left_inverse(even.rho_l),
                                x.shifted(1) - detail::cmul(adjA, u));
        P x_next = (detail::cmul(even.rho_r, u) - detail::cmul(even.alpha, u_next)).shifted(-1);
        xs.push_back(x_next);
        if (static_cast<int>(xs.size()) == count) break;
        ThetaBlock<T> odd = op.theta(2 * j + 1);
        T adjO = cell_traits<T>::adjoint(odd.alpha);
        P x2 = detail::cmul(detail::left_inverse(odd.rho_l), u_next - detail::cmul(adjO, x_next));
        P u2 = detail::cmul(odd.rho_r, x_next) - detail::cmul(odd.alpha, x2);
        xs.push_back(x2);
        x = x2;
        u = u2;
    }
    return xs;
}

/// Scalar convenience: x_j for a one-sided Verblunsky sequence.
inline std::vector<ScalarLaurent> laurent_polynomials(const VerblunskySequence& alphas,
                                                      int count) {
    if (alphas.two_sided())
        throw std::invalid_argument("laurent_polynomials: one-sided sequence expected");
    return laurent_polynomials(ScalarCmv::from_sequence(Lattice::SemiInfinite, alphas), count);
}

/// Max residual over the first `count` rows of || (C x(z))_j - z x_j(z) ||
/// at a unit-circle point z, scaled by the largest participating polynomial
/// value (the x_j grow like prod 1/rho_j, so the raw residual is not a
/// meaningful accuracy measure on its own).
template <class T>
double recurrence_residual(const CmvOperator<T>& op, cplx z, int count) {
    auto xs = laurent_polynomials(op, count + 2);
    std::vector<T> vals(xs.size());
    double scale = 1.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        vals[i] = xs[i](z);
        double l1 = 0.0;
        for (const auto& [p, c] : xs[i].coeffs()) l1 += cell_traits<T>::norm(c);
        scale = std::max(scale, l1);
    }
    double worst = 0.0;
    for (int j = 0; j < count; ++j) {
        T acc = cell_traits<T>::zero();
        for (int k = std::max(0, j - 2); k <= j + 2; ++k) {
            T e = op.entry(j, k);
            if (cell_traits<T>::norm(e) == 0.0) continue;
            acc += e * vals[k];
        }
        acc += vals[j] * cplx(-1.0) * z;
        worst = std::max(worst, cell_traits<T>::norm(acc));
    }
    return worst / scale;
}

inline double recurrence_residual(const VerblunskySequence& alphas, cplx z, int count) {
    return recurrence_residual(ScalarCmv::from_sequence(Lattice::SemiInfinite, alphas), z, count);
}

}  // namespace qrw
