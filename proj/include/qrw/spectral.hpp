#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "closed_forms.hpp"
#include "types.hpp"
#include "verblunsky.hpp"

namespace qrw {

struct RatioLimitError : std::runtime_error {
    cplx last_ratio;
    double last_gap;
    RatioLimitError(const std::string& what, cplx ratio, double gap)
        : std::runtime_error(what), last_ratio(ratio), last_gap(gap) {}
};

namespace detail {

struct RatioResult {
    cplx value;
    bool converged;
    double gap;
};

/// F(z) = lim_j phi~*_j(z)/phi*_j(z), running the Szego recurrence jointly
/// for alpha and -alpha with per-step renormalization by |phi*| (phi* grows
/// geometrically inside the disk).
inline RatioResult caratheodory_ratio_impl(const VerblunskySequence& alphas, cplx z, double tol,
                                           int max_iter) {
    if (alphas.hard_horizon()) max_iter = std::min(max_iter, *alphas.hard_horizon());
    cplx phi = 1.0, phis = 1.0;     // phi_j, phi*_j
    cplx phit = 1.0, phits = 1.0;   // tilde pair (parameters -alpha)
    cplx ratio = 1.0;
    // Vanishing parameters leave phi* untouched for a step, so a single
    // zero successive gap is not convergence; require a 3-step window.
    double gap0 = std::numeric_limits<double>::infinity();
    double gap1 = gap0, gap2 = gap0;
    for (int j = 0; j < max_iter; ++j) {
        cplx a = alphas.at(j);
        double rho = std::sqrt(1.0 - std::norm(a));
        cplx nphi = (z * phi - std::conj(a) * phis) / rho;
        cplx nphis = (phis - a * z * phi) / rho;
        cplx nphit = (z * phit + std::conj(a) * phits) / rho;
        cplx nphits = (phits + a * z * phit) / rho;
        double scale = std::abs(nphis);
        if (scale > 0.0) {
            nphi /= scale;
            nphis /= scale;
            nphit /= scale;
            nphits /= scale;
        }
        phi = nphi;
        phis = nphis;
        phit = nphit;
        phits = nphits;
        cplx next = phits / phis;
        gap2 = gap1;
        gap1 = gap0;
        gap0 = std::abs(next - ratio);
        ratio = next;
        if (j > 3 && std::max({gap0, gap1, gap2}) < tol) return {ratio, true, gap0};
    }
    return {ratio, false, std::max({gap0, gap1, gap2})};
}

}  // namespace detail

inline cplx caratheodory_ratio(const VerblunskySequence& alphas, cplx z, double tol = 1e-13,
                               int max_iter = 10000) {
    if (std::abs(z) > 0.999)
        throw std::domain_error("caratheodory_ratio: |z| <= 0.999 required");
    if (std::abs(z) == 0.0) return 1.0;
    auto r = detail::caratheodory_ratio_impl(alphas, z, tol, max_iter);
    if (!r.converged)
        throw RatioLimitError("caratheodory_ratio: no convergence (gap " +
                                  std::to_string(r.gap) + ")",
                              r.value, r.gap);
    return r.value;
}

/// Caratheodory function evaluator: either the closed form of a
/// constant-coin measure or the ratio limit of a Verblunsky sequence.
class CaratheodoryEvaluator {
  public:
    static CaratheodoryEvaluator closed_form(cplx a, double rotation) {
        CaratheodoryEvaluator e;
        e.fn_ = [a, rotation](cplx z) { return appendix_caratheodory(a, z, rotation); };
        e.max_radius_ = 1.0 - 1e-12;
        e.closed_ = true;
        return e;
    }

    static CaratheodoryEvaluator ratio_limit(const VerblunskySequence& alphas) {
        CaratheodoryEvaluator e;
        e.fn_ = [alphas](cplx z) {
            auto r = detail::caratheodory_ratio_impl(alphas, z, 1e-13, 10000);
            return r.value;  // best estimate even when the gap has not closed
        };
        e.max_radius_ = 0.999;
        e.closed_ = false;
        return e;
    }

    cplx operator()(cplx z) const {
        if (std::abs(z) == 0.0) return 1.0;
        return fn_(z);
    }

    /// Largest radius at which evaluations are trustworthy.
    double max_radius() const { return max_radius_; }
    bool closed_form_source() const { return closed_; }

  private:
    std::function<cplx(cplx)> fn_;
    double max_radius_ = 0.999;
    bool closed_ = false;
};

struct WeightSample {
    double value = 0.0;
    bool divergent = false;  // radial values kept growing: candidate singular support
};

namespace detail {

/// Polynomial extrapolation of (h_i, y_i) samples to h = 0.
inline double richardson_to_zero(const std::vector<double>& hs, const std::vector<double>& ys) {
    double acc = 0.0;
    for (size_t i = 0; i < hs.size(); ++i) {
        double li = 1.0;
        for (size_t j = 0; j < hs.size(); ++j) {
            if (j == i) continue;
            li *= (0.0 - hs[j]) / (hs[i] - hs[j]);
        }
        acc += ys[i] * li;
    }
    return acc;
}

}  // namespace detail

/// Weight of the a.c. part: w(theta) = lim_{r->1} Re F(r e^{i theta}),
/// realized on the radial schedule r = 1 - 10^{-k} with Richardson
/// extrapolation in 1 - r.  The schedule is capped to the evaluator's
/// trustworthy radius (ratio-limit sources converge too slowly near |z|=1).
inline WeightSample recover_weight(const CaratheodoryEvaluator& F, double theta) {
    std::vector<double> ks;
    if (F.closed_form_source())
        ks = {4.0, 5.0, 6.0};
    else
        ks = {2.0, 2.5, 3.0};
    std::vector<double> hs, ys, mags;
    for (double k : ks) {
        double h = std::pow(10.0, -k);
        cplx v = F((1.0 - h) * unit_phase(theta));
        hs.push_back(h);
        ys.push_back(v.real());
        mags.push_back(std::abs(v));
    }
    WeightSample out;
    // |F| growing by ~the radial ratio at every step flags a singular point.
    out.divergent = mags.back() > 50.0 && mags.back() > 3.0 * mags.front();
    out.value = std::max(0.0, detail::richardson_to_zero(hs, ys));
    return out;
}

struct MassPoint {
    cplx location{1.0};
    double mass = 0.0;
    double angle = 0.0;
};

/// Scan for mass points: z0 is an atom of mass lim (1-r)/2 F(r z0).
/// 4096-angle scan at the coarse radius, one candidate per connected run of
/// elevated scores, golden-section refinement of |F|, then the radial mass
/// limit.  A growth-exponent gate separates genuine poles (|F| ~ 1/h, radial
/// mass estimates stable) from inverse-sqrt arc endpoints (estimates decay
/// like sqrt(h)) before the Richardson value is accepted.
inline std::vector<MassPoint> find_mass_points(const CaratheodoryEvaluator& F,
                                               int scan_points = 4096) {
    const double r_scan = std::min(1.0 - 1e-4, F.max_radius());
    const double h_scan = 1.0 - r_scan;
    std::vector<double> score(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        double th = -pi + 2.0 * pi * i / scan_points;
        score[i] = 0.5 * h_scan * std::abs(F(r_scan * unit_phase(th)));
    }
    // Connected runs of elevated scores, circularly; one candidate per run.
    std::vector<int> candidates;
    std::vector<bool> mask(scan_points);
    for (int i = 0; i < scan_points; ++i) mask[i] = score[i] > 1e-3;
    int start = 0;
    while (start < scan_points && mask[start]) ++start;
    if (start == scan_points) {
        // everything elevated: fall back to the single global maximum
        candidates.push_back(static_cast<int>(
            std::max_element(score.begin(), score.end()) - score.begin()));
    } else {
        for (int off = 0; off < scan_points;) {
            int i = (start + off) % scan_points;
            if (!mask[i]) {
                ++off;
                continue;
            }
            int best = i;
            while (off < scan_points && mask[(start + off) % scan_points]) {
                int j = (start + off) % scan_points;
                if (score[j] > score[best]) best = j;
                ++off;
            }
            candidates.push_back(best);
        }
    }
    std::vector<MassPoint> out;
    for (int i : candidates) {
        // Golden-section maximization of |F| on the bracketing angles.
        double lo = -pi + 2.0 * pi * (i - 1) / scan_points;
        double hi = -pi + 2.0 * pi * (i + 1) / scan_points;
        auto neg_mag = [&](double th) { return -std::abs(F(r_scan * unit_phase(th))); };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = neg_mag(x1), f2 = neg_mag(x2);
        for (int it = 0; it < 60 && (hi - lo) > 1e-13; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = neg_mag(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = neg_mag(x2);
            }
        }
        double th0 = 0.5 * (lo + hi);
        // Radial limit of (1-r)/2 * F along r = 1 - 10^{-k}.
        std::vector<double> ks;
        if (F.closed_form_source())
            ks = {4.0, 5.0, 6.0, 7.0};
        else
            ks = {2.0, 2.5, 3.0};
        std::vector<double> hs, ys;
        for (double k : ks) {
            double h = std::pow(10.0, -k);
            if (1.0 - h > F.max_radius()) h = 1.0 - F.max_radius();
            cplx v = 0.5 * h * F((1.0 - h) * unit_phase(th0));
            hs.push_back(h);
            ys.push_back(std::abs(v));  // masses are real positive; |.| for the gate
        }
        // pole gate: the radial estimates stay put for an atom, decay like
        // sqrt(h) (or h) for arc-edge singularities
        if (ys.back() < 0.5 * ys.front()) continue;
        double mass = detail::richardson_to_zero(hs, ys);
        if (mass > 1e-6) out.push_back(MassPoint{unit_phase(th0), mass, th0});
    }
    // Merge refinements that landed on the same atom.
    std::sort(out.begin(), out.end(),
              [](const MassPoint& a, const MassPoint& b) { return a.angle < b.angle; });
    std::vector<MassPoint> dedup;
    for (const auto& mp : out) {
        if (!dedup.empty() && std::abs(mp.angle - dedup.back().angle) < 1e-6) {
            if (mp.mass > dedup.back().mass) dedup.back() = mp;
        } else {
            dedup.push_back(mp);
        }
    }
    return dedup;
}

}  // namespace qrw
