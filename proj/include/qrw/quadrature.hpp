#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "types.hpp"

namespace qrw {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    int max_refinement = 6;            // node-count doublings from the base rule
    bool endpoint_substitution = true; // Chebyshev substitution absorbing arc-edge sqrt factors

    static QuadratureSpec defaults() {
        QuadratureSpec s;
        if (const char* env = std::getenv("QRW_QUAD_TOL")) {
            double v = std::atof(env);
            if (v > 0.0) s.abs_tol = v;
        }
        return s;
    }
};

struct QuadratureError : std::runtime_error {
    double best_estimate_norm;
    double error_bound;
    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate_norm(best), error_bound(err) {}
};

namespace detail {

struct GaussRule {
    std::vector<double> x;  // nodes on (-1, 1)
    std::vector<double> w;
};

/// Gauss-Legendre nodes by Newton iteration on the three-term recurrence.
inline const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one polishing step
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / pp;
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.x[i] = -x;
        rule.w[i] = w;
        rule.x[n - 1 - i] = x;
        rule.w[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

template <class V>
struct value_ops {
    static V zero() { return cell_traits<V>::zero(); }
    static double norm(const V& v) { return cell_traits<V>::norm(v); }
};

}  // namespace detail

/// Adaptive Gauss-Legendre integration of f over (lo, hi): node count doubles
/// until two successive rules agree within abs_tol.
template <class V, class F>
V integrate_gauss(F&& f, double lo, double hi, const QuadratureSpec& spec,
                  double* achieved_error = nullptr) {
    double half = 0.5 * (hi - lo);
    double mid = 0.5 * (hi + lo);
    V prev = detail::value_ops<V>::zero();
    double err = std::numeric_limits<double>::infinity();
    constexpr int max_points = 12288;
    int n = 48;
    for (int level = 0; level <= spec.max_refinement && n <= max_points; ++level, n *= 2) {
        const auto& rule = detail::gauss_legendre(n);
        V acc = detail::value_ops<V>::zero();
        for (int i = 0; i < n; ++i) acc += f(mid + half * rule.x[i]) * cplx(half * rule.w[i]);
        if (level >= 1) {
            err = detail::value_ops<V>::norm(acc - prev);
            if (err <= spec.abs_tol) {
                if (achieved_error) *achieved_error = err;
                return acc;
            }
        }
        prev = acc;
    }
    if (achieved_error) {
        *achieved_error = err;
        return prev;
    }
    throw QuadratureError("gauss quadrature did not reach the requested tolerance",
                          detail::value_ops<V>::norm(prev), err);
}

}  // namespace qrw
