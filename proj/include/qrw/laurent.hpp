#pragma once

#include <map>
#include <stdexcept>
#include <utility>

#include "types.hpp"

namespace qrw {

/// Finite-support Laurent polynomial with coefficients of type T over integer
/// powers of z.  T is cplx, Vec2 or Mat2.  Coefficients below the pruning
/// threshold are dropped so exact-zero structure coming from gauge phases
/// survives arithmetic.
template <class T>
class LaurentPoly {
  public:
    static constexpr double prune_eps = 1e-15;

    LaurentPoly() = default;

    static LaurentPoly constant(const T& c) {
        LaurentPoly p;
        p.set(0, c);
        return p;
    }
    static LaurentPoly one() { return constant(cell_traits<T>::one()); }

    /// z^power with coefficient c.
    static LaurentPoly monomial(int power, const T& c) {
        LaurentPoly p;
        p.set(power, c);
        return p;
    }

    bool empty() const { return coeffs_.empty(); }
    int min_power() const {
        if (empty()) return 0;
        return coeffs_.begin()->first;
    }
    int max_power() const {
        if (empty()) return 0;
        return coeffs_.rbegin()->first;
    }

    const std::map<int, T>& coeffs() const { return coeffs_; }

    T coeff(int power) const {
        auto it = coeffs_.find(power);
        return it == coeffs_.end() ? cell_traits<T>::zero() : it->second;
    }

    void set(int power, const T& c) {
        if (cell_traits<T>::norm(c) <= prune_eps)
            coeffs_.erase(power);
        else
            coeffs_[power] = c;
    }

    void add(int power, const T& c) {
        auto it = coeffs_.find(power);
        if (it == coeffs_.end()) {
            set(power, c);
        } else {
            it->second += c;
            if (cell_traits<T>::norm(it->second) <= prune_eps) coeffs_.erase(it);
        }
    }

    LaurentPoly operator+(const LaurentPoly& o) const {
        LaurentPoly r = *this;
        for (const auto& [p, c] : o.coeffs_) r.add(p, c);
        return r;
    }
    LaurentPoly operator-(const LaurentPoly& o) const {
        LaurentPoly r = *this;
        for (const auto& [p, c] : o.coeffs_) r.add(p, c * cplx(-1.0));
        return r;
    }

    /// Multiply every coefficient by a scalar on the right.
    LaurentPoly scaled(cplx s) const {
        LaurentPoly r;
        for (const auto& [p, c] : coeffs_) r.set(p, c * s);
        return r;
    }

    /// Shift powers: multiply by z^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly r;
        for (const auto& [p, c] : coeffs_) r.coeffs_[p + k] = c;
        return r;
    }

    template <class U = T>
    LaurentPoly& operator+=(const LaurentPoly<U>& o) {
        for (const auto& [p, c] : o.coeffs()) add(p, c);
        return *this;
    }

    /// Evaluate at z != 0 by direct power summation over the stored support.
    T operator()(cplx z) const {
        T acc = cell_traits<T>::zero();
        for (const auto& [p, c] : coeffs_) acc += c * zpow(z, p);
        return acc;
    }

    /// Substitute z -> s*z: coefficient of z^p picks up s^p.
    LaurentPoly dilated(cplx s) const {
        LaurentPoly r;
        for (const auto& [p, c] : coeffs_) r.set(p, c * zpow(s, p));
        return r;
    }

    static cplx zpow(cplx z, int p) {
        if (p == 0) return 1.0;
        if (p < 0) return std::pow(1.0 / z, -p);
        return std::pow(z, p);
    }

  private:
    std::map<int, T> coeffs_;
};

using ScalarLaurent = LaurentPoly<cplx>;
using VecLaurent = LaurentPoly<Vec2>;
using MatLaurent = LaurentPoly<Mat2>;

/// Product of scalar Laurent polynomials (used in small closed-form work).
inline ScalarLaurent operator*(const ScalarLaurent& a, const ScalarLaurent& b) {
    ScalarLaurent r;
    for (const auto& [pa, ca] : a.coeffs())
        for (const auto& [pb, cb] : b.coeffs()) r.add(pa + pb, ca * cb);
    return r;
}

/// Left-multiply a matrix-valued Laurent polynomial by a constant matrix.
inline MatLaurent lmul(const Mat2& m, const MatLaurent& p) {
    MatLaurent r;
    for (const auto& [pw, c] : p.coeffs()) r.set(pw, m * c);
    return r;
}

/// Row-vector times matrix-valued Laurent polynomial.
inline VecLaurent vmul(const Vec2& v, const MatLaurent& p) {
    VecLaurent r;
    for (const auto& [pw, c] : p.coeffs()) r.set(pw, v * c);
    return r;
}

/// x(z) -> x(1/conj(z))^dag as a bona fide Laurent polynomial: coefficient
/// A_k of z^k becomes A_k^dag at power -k.
template <class T>
LaurentPoly<T> reversed_adjoint(const LaurentPoly<T>& p) {
    LaurentPoly<T> r;
    for (const auto& [pw, c] : p.coeffs()) r.set(-pw, cell_traits<T>::adjoint(c));
    return r;
}

}  // namespace qrw
