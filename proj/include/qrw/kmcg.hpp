#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "coin.hpp"
#include "measure.hpp"
#include "olp.hpp"
#include "quadrature.hpp"

namespace qrw {

/// Orthogonality measure handle of a walk: closed forms for constant coins,
/// numeric recovery on the half line otherwise.  General line walks have no
/// recoverable block measure; amplitude work there goes through the direct
/// oracle.
inline MeasureModel walk_measure(const WalkModel& walk) {
    if (walk.lattice == WalkLattice::HalfLine) {
        if (walk.constant_coin()) return walk.halfline_measure();
        return build_numeric_measure(CaratheodoryEvaluator::ratio_limit(walk.alphas));
    }
    if (walk.constant_coin()) return walk.line_measure();
    throw std::invalid_argument(
        "walk_measure: no block measure recovery for non-constant coins on the line; "
        "use the direct oracle");
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

inline std::vector<cplx> moments_quadrature(const ClosedFormMeasure& mu, int n_max,
                                            const QuadratureSpec& spec) {
    std::vector<cplx> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back(integrate(mu, [n](cplx z) { return ScalarLaurent::zpow(z, n); }, spec));
    return out;
}

inline std::vector<Mat2> moments_quadrature(const ClosedFormMatrixMeasure& mu, int n_max,
                                            const QuadratureSpec& spec) {
    std::vector<Mat2> out;
    out.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        out.push_back(integrate(mu, [n](cplx z) { return ScalarLaurent::zpow(z, n); }, spec));
    return out;
}

/// Moments from the Maclaurin series of the Caratheodory function,
/// F(z) = 1 + 2 sum conj(mu_j) z^j (adjoint in the matrix case).  Uniform
/// trapezoid sampling on |z| = r; the radius shrinks the amplification
/// r^{-n} of sampling noise to about 1e2, with N = max(256, 8 n) samples.
template <class V, class F>
std::vector<V> moments_series(F&& caratheodory, int n_max) {
    std::vector<V> out(n_max + 1, cell_traits<V>::zero());
    out[0] = cell_traits<V>::one();
    if (n_max == 0) return out;
    double r = std::max(0.5, std::pow(10.0, -2.0 / n_max));
    int N = std::max(256, 8 * n_max);
    std::vector<V> samples;
    samples.reserve(N);
    for (int m = 0; m < N; ++m) samples.push_back(caratheodory(r * unit_phase(2.0 * pi * m / N)));
    for (int j = 1; j <= n_max; ++j) {
        V acc = cell_traits<V>::zero();
        for (int m = 0; m < N; ++m)
            acc += samples[m] * (unit_phase(-2.0 * pi * j * m / N) / static_cast<double>(N));
        // c_j = acc / r^j;  mu_j = adjoint(c_j) / 2
        out[j] = cell_traits<V>::adjoint(acc) * cplx(0.5 / std::pow(r, j));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fixed tanh-sinh node rules over measure arcs, cached per walk so amplitude
// tables reduce to dot products over precomputed polynomial values.
// ---------------------------------------------------------------------------

namespace detail {

struct ArcNodes {
    std::vector<double> theta;
    std::vector<double> wt;        // includes the 1/2pi of the angular measure
    std::vector<double> delta_lo;  // exact distances to the enclosing arc's endpoints
    std::vector<double> delta_hi;
};

/// Fixed Gauss-Legendre nodes in the Chebyshev variable of each arc (see
/// integrate_arcs); the sin(phi) Jacobian is folded into the weights.
inline ArcNodes fixed_level_nodes(const std::vector<std::pair<double, double>>& arcs, int points) {
    ArcNodes out;
    const GaussRule& rule = gauss_legendre(points);
    for (const auto& [lo, hi] : arcs) {
        double half = 0.5 * (hi - lo);
        double mid = 0.5 * (hi + lo);
        for (int i = 0; i < points; ++i) {
            double phi = 0.5 * pi * (1.0 + rule.x[i]);
            double s = std::sin(phi);
            if (s <= 0.0) continue;
            double sh = std::sin(0.5 * phi), ch = std::cos(0.5 * phi);
            out.theta.push_back(mid - half * std::cos(phi));
            out.wt.push_back(rule.w[i] * (0.5 * pi) * half * s / (2.0 * pi));
            out.delta_lo.push_back(2.0 * half * sh * sh);
            out.delta_hi.push_back(2.0 * half * ch * ch);
        }
    }
    return out;
}

}  // namespace detail

/// KMcG amplitudes for a half-line walk.  Constant coins use the closed-form
/// measure in the reduced (unrotated) gauge,
///   (U^n)_{j,k} = e^{i n vartheta} (lhat_j / lhat_k)
///                 \int z^n xhat_j(z) conj(xhat_k(z)) d muhat(z),
/// general coins use the numerically recovered measure with X_j = lambda_j x_j.
class KmcgHalfline {
  public:
    KmcgHalfline(const WalkModel& walk, int max_index, QuadratureSpec spec = QuadratureSpec::defaults(),
                 int points = 768)
        : constant_(walk.constant_coin()) {
        if (walk.lattice != WalkLattice::HalfLine)
            throw std::invalid_argument("KmcgHalfline: half-line walk required");
        int count = max_index + 1;
        if (constant_) {
            const auto& p = *walk.constant;
            rotation_ = p.rotation;
            half_delta_ = 0.5 * (p.sigma2 - p.sigma1);
            ClosedFormMeasure hat(p.a, 0.0);
            auto nodes = detail::fixed_level_nodes(hat.arcs(), points);
            std::vector<ScalarLaurent> xs(count);
            for (int j = 0; j < count; ++j) xs[j] = appendix_laurent(p.a, j);
            fill_nodes(nodes, hat, xs);
            if (hat.has_mass()) add_mass(unit_phase(hat.beta), hat.mass, xs);
        } else {
            // Numeric route: Re F(r e^{i t}) has Fourier coefficients
            // mu_m r^{|m|} exactly, so one ring of evaluations of the
            // ratio-limit Caratheodory function recovers every needed moment
            // (atoms included); amplitudes are then linear combinations
            // through the Laurent coefficients of X_j conj(X_k).
            CaratheodoryEvaluator F = CaratheodoryEvaluator::ratio_limit(walk.alphas);
            xs_ = laurent_polynomials(walk.alphas, count);
            for (int j = 0; j < count; ++j) xs_[j] = xs_[j].scaled(walk.gauge.lambda(j));
            const double r = 0.99;
            const int N = 4096;
            std::vector<double> ref(N);
            for (int i = 0; i < N; ++i)
                ref[i] = F(std::polar(r, 2.0 * pi * i / N)).real();
            ref_ = std::move(ref);
            radius_ = r;
            moments_.push_back(1.0);
        }
        (void)spec;
    }

    /// (U^n)_{j,k}; negative n gives the unitary inverse.
    cplx amplitude(int j, int k, int n) const {
        if (!constant_) return amplitude_numeric(j, k, n);
        const auto& zp = pow_row(n);
        cplx acc = 0.0;
        const auto& xj = xv_.at(j);
        const auto& xk = xv_.at(k);
        for (size_t i = 0; i < z_.size(); ++i) acc += zp[i] * xj[i] * std::conj(xk[i]) * w_[i];
        for (size_t m = 0; m < masses_.size(); ++m)
            acc += ScalarLaurent::zpow(masses_[m].first, n) * xm_[j][m] * std::conj(xm_[k][m]) *
                   masses_[m].second;
        cplx lam_ratio = unit_phase(half_delta_ * (((j + 1) / 2) - ((k + 1) / 2)));
        return unit_phase(n * rotation_) * lam_ratio * acc;
    }

    int max_index() const { return static_cast<int>(xv_.size()) - 1; }
    double node_mass() const {
        double s = 0.0;
        for (double w : w_) s += w;
        for (const auto& m : masses_) s += m.second;
        return s;
    }

  private:
    void fill_nodes(const detail::ArcNodes& nodes, const ClosedFormMeasure& mu,
                    const std::vector<ScalarLaurent>& xs) {
        z_.reserve(nodes.theta.size());
        w_.reserve(nodes.theta.size());
        for (size_t i = 0; i < nodes.theta.size(); ++i) {
            double wmeas = mu.weight_local(nodes.theta[i], nodes.delta_lo[i], nodes.delta_hi[i]);
            if (wmeas == 0.0 || !std::isfinite(wmeas)) continue;
            z_.push_back(unit_phase(nodes.theta[i]));
            w_.push_back(nodes.wt[i] * wmeas);
        }
        xv_.assign(xs.size(), {});
        for (size_t j = 0; j < xs.size(); ++j) {
            xv_[j].reserve(z_.size());
            for (cplx z : z_) xv_[j].push_back(xs[j](z));
        }
    }

    void add_mass(cplx location, double mass, const std::vector<ScalarLaurent>& xs) {
        masses_.emplace_back(location, mass);
        if (xm_.empty()) xm_.assign(xs.size(), {});
        for (size_t j = 0; j < xs.size(); ++j) xm_[j].push_back(xs[j](location));
    }

    // memo caches below are guarded so amplitude cells can be evaluated in
    // parallel; results do not depend on evaluation order
    const std::vector<cplx>& pow_row(int n) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        return pow_row_locked(n);
    }

    const std::vector<cplx>& pow_row_locked(int n) const {
        auto it = pows_.find(n);
        if (it != pows_.end()) return it->second;
        std::vector<cplx> row(z_.size());
        if (n == 0) {
            std::fill(row.begin(), row.end(), cplx(1.0));
        } else {
            int step = n > 0 ? 1 : -1;
            const auto& prev = pow_row_locked(n - step);
            for (size_t i = 0; i < z_.size(); ++i)
                row[i] = (step > 0) ? prev[i] * z_[i] : prev[i] / z_[i];
        }
        return pows_.emplace(n, std::move(row)).first->second;
    }

    cplx moment(int m) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        return moment_locked(m);
    }

    cplx moment_locked(int m) const {
        if (m < 0) return std::conj(moment_locked(-m));
        while (static_cast<int>(moments_.size()) <= m) {
            int next = static_cast<int>(moments_.size());
            cplx acc = 0.0;
            int N = static_cast<int>(ref_.size());
            for (int i = 0; i < N; ++i) acc += ref_[i] * unit_phase(2.0 * pi * next * i / N);
            moments_.push_back(acc / double(N) / std::pow(radius_, next));
        }
        return moments_[m];
    }

    cplx amplitude_numeric(int j, int k, int n) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto key = std::make_pair(j, k);
        auto it = prods_.find(key);
        if (it == prods_.end())
            it = prods_.emplace(key, xs_.at(j) * reversed_adjoint(xs_.at(k))).first;
        cplx acc = 0.0;
        for (const auto& [p, c] : it->second.coeffs()) acc += c * moment_locked(p + n);
        return acc;
    }

    bool constant_;
    double rotation_ = 0.0;
    double half_delta_ = 0.0;  // (sigma2 - sigma1)/2
    std::vector<cplx> z_;
    std::vector<double> w_;
    std::vector<std::pair<cplx, double>> masses_;
    std::vector<std::vector<cplx>> xv_;  // xv_[j][node]
    std::vector<std::vector<cplx>> xm_;  // values at mass points
    mutable std::mutex cache_mutex_;
    mutable std::map<int, std::vector<cplx>> pows_;
    // numeric (non-constant-coin) route
    std::vector<ScalarLaurent> xs_;
    std::vector<double> ref_;  // Re F(r e^{i t}) samples
    double radius_ = 0.99;
    mutable std::vector<cplx> moments_;
    mutable std::map<std::pair<int, int>, ScalarLaurent> prods_;
};

/// KMcG block amplitudes for a constant-coin line walk,
///   (U^n)_{J,K} = \int z^n X_J(z) d mu(z) X_K(z)^dag,
/// over the physical (rotated) matrix measure; scalar amplitudes come out of
/// the block layout via amplitude_index.
class KmcgLine {
  public:
    KmcgLine(const WalkModel& walk, int max_block, QuadratureSpec spec = QuadratureSpec::defaults(),
             int points = 768) {
        if (walk.lattice != WalkLattice::Line || !walk.constant_coin())
            throw std::invalid_argument(
                "KmcgLine: KMcG on the line is available for constant coins only; use the "
                "direct oracle otherwise");
        (void)spec;
        ClosedFormMatrixMeasure mu = walk.line_measure();
        ConstantCoinLineData data = walk.line_polynomials();
        auto nodes = detail::fixed_level_nodes(mu.arcs(), points);
        int count = max_block + 1;
        std::vector<MatLaurent> xs(count), xadj(count);
        for (int j = 0; j < count; ++j) {
            xs[j] = data.laurent(j);
            xadj[j] = reversed_adjoint(xs[j]);
        }
        z_.reserve(nodes.theta.size());
        for (size_t i = 0; i < nodes.theta.size(); ++i) {
            Mat2 wm = mu.weight_local(nodes.theta[i], nodes.delta_lo[i], nodes.delta_hi[i]);
            if (wm.norm() == 0.0 || !std::isfinite(wm.norm())) continue;
            cplx z = unit_phase(nodes.theta[i]);
            z_.push_back(z);
            Mat2 w = wm * nodes.wt[i];
            wxadj_.emplace_back();
            auto& row = wxadj_.back();
            row.reserve(count);
            for (int k = 0; k < count; ++k) row.push_back(w * xadj[k](z));
        }
        xv_.assign(count, {});
        for (int j = 0; j < count; ++j) {
            xv_[j].reserve(z_.size());
            for (cplx z : z_) xv_[j].push_back(xs[j](z));
        }
    }

    Mat2 block(int j_block, int k_block, int n) const {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto key = std::make_pair(j_block, k_block);
        auto it = cells_.find(key);
        if (it == cells_.end()) {
            std::vector<Mat2> cell(z_.size());
            for (size_t i = 0; i < z_.size(); ++i)
                cell[i] = xv_.at(j_block)[i] * wxadj_[i].at(k_block);
            it = cells_.emplace(key, std::move(cell)).first;
        }
        const auto& zp = pow_row_locked(n);
        Mat2 acc = Mat2::zero();
        const auto& cell = it->second;
        for (size_t i = 0; i < z_.size(); ++i) acc += cell[i] * zp[i];
        return acc;
    }

    /// Scalar n-step amplitude between folded pure-state indices.
    cplx amplitude(int from_index, int to_index, int n) const {
        Mat2 b = block(from_index / 2, to_index / 2, n);
        return b(from_index % 2, to_index % 2);
    }

  private:
    const std::vector<cplx>& pow_row_locked(int n) const {
        auto it = pows_.find(n);
        if (it != pows_.end()) return it->second;
        std::vector<cplx> row(z_.size());
        if (n == 0) {
            std::fill(row.begin(), row.end(), cplx(1.0));
        } else {
            int step = n > 0 ? 1 : -1;
            const auto& prev = pow_row_locked(n - step);
            for (size_t i = 0; i < z_.size(); ++i)
                row[i] = (step > 0) ? prev[i] * z_[i] : prev[i] / z_[i];
        }
        return pows_.emplace(n, std::move(row)).first->second;
    }

    mutable std::mutex cache_mutex_;
    std::vector<cplx> z_;
    std::vector<std::vector<Mat2>> wxadj_;  // [node][k] = W_i * X_k(z_i)^dag
    std::vector<std::vector<Mat2>> xv_;     // [j][node]
    mutable std::map<std::pair<int, int>, std::vector<Mat2>> cells_;
    mutable std::map<int, std::vector<cplx>> pows_;
};

// ---------------------------------------------------------------------------
// Amplitude tables and the direct oracle
// ---------------------------------------------------------------------------

enum class AmplitudeMethod { Direct, Kmcg };

struct AmplitudeTable {
    AmplitudeMethod method = AmplitudeMethod::Direct;
    std::map<std::tuple<int, int, int>, cplx> entries;  // (j, k, n) -> amplitude

    cplx at(int j, int k, int n) const {
        auto it = entries.find({j, k, n});
        return it == entries.end() ? cplx(0.0) : it->second;
    }
};

/// Wave function from a pure-state index of the walk's numbering.
inline WaveFunction basis_wave(const WalkModel& w, int index) {
    auto [site, spin] = state_of_index(w.lattice, index);
    return WaveFunction{{PureState{site, spin}, cplx(1.0)}};
}

/// n exact applications of the walk dynamics from each basis state j <= j_max:
/// entry (j, k, m) holds (U^m)_{j,k}.
inline AmplitudeTable direct_amplitudes(const WalkModel& w, int j_max, int n_max) {
    AmplitudeTable table;
    table.method = AmplitudeMethod::Direct;
    for (int j = 0; j <= j_max; ++j) {
        WaveFunction psi = basis_wave(w, j);
        for (int n = 1; n <= n_max; ++n) {
            psi = walk_step(w, psi);
            for (const auto& [st, v] : psi) {
                if (w.lattice == WalkLattice::HalfLine && st.site < 0) continue;
                int k = amplitude_index(w.lattice, st.site, st.spin);
                table.entries[{j, k, n}] = v;
            }
        }
    }
    return table;
}

/// Trajectory of one initial state under the direct dynamics.
inline std::vector<WaveFunction> direct_trajectory(const WalkModel& w, WaveFunction psi,
                                                   int n_max) {
    std::vector<WaveFunction> out;
    out.reserve(n_max + 1);
    out.push_back(psi);
    for (int n = 1; n <= n_max; ++n) {
        psi = walk_step(w, psi);
        out.push_back(psi);
    }
    return out;
}

/// KMcG amplitudes over the same (j, k, n) range as direct_amplitudes.
inline AmplitudeTable kmcg_amplitudes(const WalkModel& w, int j_max, int n_max,
                                      QuadratureSpec spec = QuadratureSpec::defaults()) {
    AmplitudeTable table;
    table.method = AmplitudeMethod::Kmcg;
    if (w.lattice == WalkLattice::HalfLine) {
        KmcgHalfline ctx(w, j_max + 2 * n_max + 2, spec);
        for (int j = 0; j <= j_max; ++j)
            for (int n = 1; n <= n_max; ++n)
                for (int k = std::max(0, j - 2 * n); k <= j + 2 * n; ++k) {
                    cplx v = ctx.amplitude(j, k, n);
                    if (std::abs(v) > 1e-14) table.entries[{j, k, n}] = v;
                }
    } else {
        KmcgLine ctx(w, (j_max + 4 * n_max + 4) / 2 + 1, spec);
        for (int j = 0; j <= j_max; ++j)
            for (int n = 1; n <= n_max; ++n)
                for (int k = 0; k <= j + 4 * n + 4; ++k) {
                    cplx v = ctx.amplitude(j, k, n);
                    if (std::abs(v) > 1e-14) table.entries[{j, k, n}] = v;
                }
    }
    return table;
}

/// Largest |KMcG - direct| discrepancy over j,k <= j_max, n <= n_max.
inline double oracle_discrepancy(const WalkModel& w, int j_max, int n_max,
                                 QuadratureSpec spec = QuadratureSpec::defaults()) {
    AmplitudeTable direct = direct_amplitudes(w, j_max, n_max);
    double worst = 0.0;
    if (w.lattice == WalkLattice::HalfLine) {
        KmcgHalfline ctx(w, j_max, spec);
        for (int j = 0; j <= j_max; ++j)
            for (int k = 0; k <= j_max; ++k)
                for (int n = 1; n <= n_max; ++n)
                    worst = std::max(worst, std::abs(ctx.amplitude(j, k, n) - direct.at(j, k, n)));
    } else {
        KmcgLine ctx(w, j_max / 2 + 1, spec);
        for (int j = 0; j <= j_max; ++j)
            for (int k = 0; k <= j_max; ++k)
                for (int n = 1; n <= n_max; ++n)
                    worst = std::max(worst, std::abs(ctx.amplitude(j, k, n) - direct.at(j, k, n)));
    }
    return worst;
}

}  // namespace qrw
