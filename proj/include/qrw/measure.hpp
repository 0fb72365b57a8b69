#pragma once

#include <variant>
#include <vector>

#include "closed_forms.hpp"
#include "quadrature.hpp"
#include "spectral.hpp"
#include "types.hpp"

namespace qrw {

/// Numerically recovered scalar measure: weight sampled on a uniform angle
/// grid (trapezoid quadrature) plus detected mass points.
struct NumericMeasure {
    std::vector<double> weight;  // value at theta_i = -pi + 2 pi i / N
    std::vector<MassPoint> masses;

    int grid() const { return static_cast<int>(weight.size()); }
    double theta(int i) const { return -pi + 2.0 * pi * i / grid(); }

    template <class F>
    auto integrate(F&& f) const -> decltype(f(cplx{})) {
        using V = decltype(f(cplx{}));
        V acc = cell_traits<V>::zero();
        int n = grid();
        for (int i = 0; i < n; ++i) {
            if (weight[i] == 0.0) continue;
            acc += f(unit_phase(theta(i))) * cplx(weight[i] / n);
        }
        for (const auto& mp : masses) acc += f(mp.location) * cplx(mp.mass);
        return acc;
    }

    double total_mass() const {
        double acc = 0.0;
        for (double w : weight) acc += w / grid();
        for (const auto& mp : masses) acc += mp.mass;
        return acc;
    }
};

/// Recover a numeric measure from a Caratheodory evaluator: weight by radial
/// limits on the grid (skipping neighbourhoods of detected atoms, where the
/// Poisson kernel of the atom floods Re F).
inline NumericMeasure build_numeric_measure(const CaratheodoryEvaluator& F, int grid = 4096) {
    NumericMeasure m;
    m.masses = find_mass_points(F);
    m.weight.resize(grid, 0.0);
    double guard = 16.0 * pi / grid;
    for (int i = 0; i < grid; ++i) {
        double th = -pi + 2.0 * pi * i / grid;
        bool near_atom = false;
        for (const auto& mp : m.masses)
            if (std::abs(std::remainder(th - mp.angle, 2.0 * pi)) < guard) near_atom = true;
        if (near_atom) continue;
        m.weight[i] = recover_weight(F, th).value;
    }
    return m;
}

/// Orthogonality measure of a walk in one of the three concrete forms.
using MeasureModel = std::variant<ClosedFormMeasure, ClosedFormMatrixMeasure, NumericMeasure>;

// ---------------------------------------------------------------------------
// Integration against the measures.  Scalar integrands f(z); the matrix
// measure also supports sandwich integrands via integrate_arcs below.
// ---------------------------------------------------------------------------

/// Sum of weighted arc integrals (1/2pi) \int f(e^{i theta}) w(theta) d theta.
/// Each arc is integrated in its Chebyshev variable theta = mid - half cos(phi),
/// which turns the (sin^2 t - sin^2 eta)^{+-1/2} endpoint behaviour of the
/// arc weights into a bounded analytic integrand.  The weight callback gets
/// the exact distances to the arc endpoints, where its singular factors
/// live; exact-endpoint evaluations (0/0) are guarded to zero, where the
/// sin(phi) Jacobian vanishes anyway.
template <class V, class W, class F>
V integrate_weighted_arcs(const std::vector<std::pair<double, double>>& arcs, W&& weight_local,
                          F&& f, const QuadratureSpec& spec) {
    V acc = cell_traits<V>::zero();
    for (const auto& [lo, hi] : arcs) {
        double half = 0.5 * (hi - lo);
        double mid = 0.5 * (hi + lo);
        auto sub = [&](double phi) -> V {
            double s = std::sin(phi);
            if (s <= 0.0) return cell_traits<V>::zero();
            double sh = std::sin(0.5 * phi), ch = std::cos(0.5 * phi);
            double dlo = 2.0 * half * sh * sh;
            double dhi = 2.0 * half * ch * ch;
            double theta = mid - half * std::cos(phi);
            V v = weight_local(theta, dlo, dhi) * f(unit_phase(theta)) * cplx(half * s);
            if (!std::isfinite(cell_traits<V>::norm(v))) return cell_traits<V>::zero();
            return v;
        };
        acc += integrate_gauss<V>(sub, 0.0, pi, spec) * cplx(1.0 / (2.0 * pi));
    }
    return acc;
}

template <class F>
cplx integrate(const ClosedFormMeasure& mu, F&& f, const QuadratureSpec& spec) {
    auto wl = [&](double th, double dlo, double dhi) -> cplx {
        return mu.weight_local(th, dlo, dhi);
    };
    cplx acc = integrate_weighted_arcs<cplx>(mu.arcs(), wl, f, spec);
    if (mu.has_mass()) acc += f(mu.mass_point()) * mu.mass;
    return acc;
}

template <class F>
Mat2 integrate(const ClosedFormMatrixMeasure& mu, F&& f, const QuadratureSpec& spec) {
    auto wl = [&](double th, double dlo, double dhi) { return mu.weight_local(th, dlo, dhi); };
    return integrate_weighted_arcs<Mat2>(mu.arcs(), wl, f, spec);
}

template <class F>
cplx integrate(const NumericMeasure& mu, F&& f, const QuadratureSpec&) {
    return mu.integrate(f);
}

}  // namespace qrw
