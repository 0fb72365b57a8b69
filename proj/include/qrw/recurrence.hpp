#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "coin.hpp"
#include "kmcg.hpp"
#include "olp.hpp"

namespace qrw {

/// A finitely supported superposition over the walk's pure states, indexed
/// by the walk's state numbering (amplitude_index).
struct QuantumState {
    std::map<int, cplx> coefficients;
    bool normalized = false;

    static QuantumState from_indices(std::initializer_list<std::pair<int, cplx>> cs) {
        QuantumState s;
        for (auto& [k, v] : cs) s.coefficients[k] = v;
        return s;
    }

    double norm() const {
        double acc = 0.0;
        for (const auto& [k, v] : coefficients) acc += std::norm(v);
        return std::sqrt(acc);
    }

    QuantumState normalize() const {
        QuantumState s = *this;
        double n = norm();
        if (n == 0.0) throw std::domain_error("QuantumState: zero state");
        for (auto& [k, v] : s.coefficients) v /= n;
        s.normalized = true;
        return s;
    }

    int max_index() const {
        int m = 0;
        for (const auto& [k, v] : coefficients) m = std::max(m, k);
        return m;
    }
};

enum class SingularityTag { Removable, Pole, InverseSqrt };

struct Singularity {
    cplx location{1.0};
    SingularityTag tag = SingularityTag::Removable;
    Vec2 direction;  // line case: nonzero column of the numerator matrix there
};

/// Non-removable boundary singularities of the closed-form Caratheodory
/// function of a constant coin.  Half line: the two candidates
/// e^{i(vartheta + beta)} and -e^{i(vartheta - beta)}; a candidate at a
/// branch point of the square root is an inverse-sqrt singularity, otherwise
/// the radial numerator limit decides pole vs removable.  Line: the four
/// roots of (zh - 1/zh)^2 + 4|a|^2 on the circle, all inverse-sqrt.
struct SingularitySet {
    std::vector<Singularity> points;  // only the non-removable ones
    std::vector<Singularity> removed; // classified-away candidates, kept for reports
};

inline SingularitySet halfline_singularities(const ConstantCoinParams& p) {
    SingularitySet out;
    cplx a = p.a;
    if (std::abs(a) < 1e-14) return out;  // Lebesgue: F = 1, no singularities
    ClosedFormMeasure mu(a, p.rotation);
    double candidates[2] = {mu.beta, pi - mu.beta};
    for (double th : candidates) {
        double th_red = std::remainder(th, 2.0 * pi);
        cplx z = unit_phase(th_red + p.rotation);
        Singularity s;
        s.location = z;
        // s^2 at the candidate; 4 Re(a)^2 in exact arithmetic, evaluated with
        // ~1e-16 noise, so distinguishing |Re a| below ~2e-7 from a symmetric
        // coin is out of reach at this precision.
        cplx zh = unit_phase(th_red);
        cplx s2 = (zh - 1.0 / zh) * (zh - 1.0 / zh) + 4.0 * std::norm(a);
        if (std::abs(s2) < 1e-13) {
            s.tag = SingularityTag::InverseSqrt;
            out.points.push_back(s);
            continue;
        }
        // Boundary limit of the square root inside the gap arc:
        // sign(cos th) * 2 sqrt(sin^2 eta - sin^2 th).
        double gap = std::norm(a) - std::sin(th_red) * std::sin(th_red);
        double slim = (std::cos(th_red) >= 0.0 ? 2.0 : -2.0) * std::sqrt(std::max(0.0, gap));
        double numerator = slim + 2.0 * a.real();
        if (std::abs(numerator) < 1e-10) {
            s.tag = SingularityTag::Removable;
            out.removed.push_back(s);
        } else {
            s.tag = SingularityTag::Pole;
            out.points.push_back(s);
        }
    }
    return out;
}

inline SingularitySet line_singularities(const ConstantCoinParams& p) {
    SingularitySet out;
    cplx a = p.a;
    if (std::abs(a) < 1e-14) return out;
    double eta = std::asin(std::min(1.0, std::abs(a)));
    double angles[4] = {eta, pi - eta, -eta, eta - pi};
    for (double th : angles) {
        cplx zh = unit_phase(th);
        Singularity s;
        s.location = unit_phase(p.rotation) * zh;
        s.tag = SingularityTag::InverseSqrt;
        cplx dz = zh - 1.0 / zh;
        s.direction = Vec2(dz, -2.0 * a);  // first column of the numerator matrix
        out.points.push_back(s);
    }
    return out;
}

/// Orthonormal Laurent polynomial X_k of the walk as an exact coefficient
/// table (gauge phases included).
inline ScalarLaurent walk_laurent_halfline(const WalkModel& w, int k) {
    if (w.lattice != WalkLattice::HalfLine)
        throw std::invalid_argument("walk_laurent_halfline: half-line walk required");
    if (w.constant_coin()) {
        const auto& p = *w.constant;
        ScalarLaurent xhat = appendix_laurent(p.a, k);
        cplx lhat = unit_phase(0.5 * (p.sigma2 - p.sigma1) * ((k + 1) / 2));
        ScalarLaurent out;
        for (const auto& [pw, c] : xhat.coeffs())
            out.set(pw, lhat * c * ScalarLaurent::zpow(unit_phase(-p.rotation), pw));
        return out;
    }
    auto xs = laurent_polynomials(w.alphas, k + 1);
    return xs[k].scaled(w.gauge.lambda(k));
}

/// Associated function of a state: f = sum psi_k X_k (half line, scalar) or
/// f = sum (psi_{2k}, psi_{2k+1}) X_k (line, row-vector valued).
inline ScalarLaurent associated_function_halfline(const WalkModel& w, const QuantumState& s) {
    ScalarLaurent f;
    for (const auto& [k, v] : s.coefficients) f += walk_laurent_halfline(w, k).scaled(v);
    return f;
}

inline VecLaurent associated_function_line(const WalkModel& w, const QuantumState& s) {
    if (!w.constant_coin())
        throw std::invalid_argument(
            "associated_function_line: closed-form polynomials need a constant coin");
    ConstantCoinLineData data = w.line_polynomials();
    VecLaurent f;
    int max_block = s.max_index() / 2;
    for (int k = 0; k <= max_block; ++k) {
        auto it0 = s.coefficients.find(2 * k);
        auto it1 = s.coefficients.find(2 * k + 1);
        Vec2 psi((it0 != s.coefficients.end()) ? it0->second : cplx(0.0),
                 (it1 != s.coefficients.end()) ? it1->second : cplx(0.0));
        if (psi.norm() == 0.0) continue;
        f += vmul(psi, data.laurent(k));
    }
    return f;
}

enum class Classification { Recurrent, Transient };

struct CertificateEntry {
    Singularity singularity;
    cplx value;  // f(z_s) or f(z_s) . u_s; transient needs all of these ~ 0
};

struct RecurrenceVerdict {
    Classification classification = Classification::Recurrent;
    std::vector<CertificateEntry> certificate;
};

inline constexpr double transient_tol = 1e-9;

/// Transience test for a local state of a constant-coin walk: the associated
/// Laurent polynomial must cancel every non-removable singularity of the
/// Caratheodory function (one scalar condition per singularity; in the line
/// case the numerator matrix has rank 1 there).
inline RecurrenceVerdict classify_state(const WalkModel& w, const QuantumState& state) {
    if (!w.constant_coin())
        throw std::invalid_argument(
            "classify_state: no closed-form singularity analysis for non-constant coins");
    QuantumState s = state.normalized ? state : state.normalize();
    RecurrenceVerdict verdict;
    bool transient = true;
    if (w.lattice == WalkLattice::HalfLine) {
        SingularitySet sing = halfline_singularities(*w.constant);
        ScalarLaurent f = associated_function_halfline(w, s);
        for (const auto& sg : sing.points) {
            cplx v = f(sg.location);
            verdict.certificate.push_back({sg, v});
            if (std::abs(v) >= transient_tol) transient = false;
        }
    } else {
        SingularitySet sing = line_singularities(*w.constant);
        VecLaurent f = associated_function_line(w, s);
        for (const auto& sg : sing.points) {
            Vec2 fv = f(sg.location);
            cplx v = fv.a * sg.direction.a + fv.b * sg.direction.b;
            verdict.certificate.push_back({sg, v});
            if (std::abs(v) >= transient_tol) transient = false;
        }
    }
    verdict.classification = transient ? Classification::Transient : Classification::Recurrent;
    return verdict;
}

/// Basis of the transient subspace within the first K state indices: the
/// nullspace of the singularity constraints, by SVD with cutoff 1e-10.
inline std::vector<QuantumState> transient_subspace(const WalkModel& w, int K) {
    if (K < 1) throw std::invalid_argument("transient_subspace: K >= 1 required");
    if (!w.constant_coin())
        throw std::invalid_argument("transient_subspace: constant coin required");
    std::vector<std::vector<cplx>> rows;
    if (w.lattice == WalkLattice::HalfLine) {
        SingularitySet sing = halfline_singularities(*w.constant);
        for (const auto& sg : sing.points) {
            std::vector<cplx> row(K);
            for (int k = 0; k < K; ++k) row[k] = walk_laurent_halfline(w, k)(sg.location);
            rows.push_back(std::move(row));
        }
    } else {
        SingularitySet sing = line_singularities(*w.constant);
        ConstantCoinLineData data = w.line_polynomials();
        for (const auto& sg : sing.points) {
            std::vector<cplx> row(K);
            for (int k = 0; 2 * k < K; ++k) {
                Mat2 xv = data.laurent(k)(sg.location);
                Vec2 col(xv(0, 0) * sg.direction.a + xv(0, 1) * sg.direction.b,
                         xv(1, 0) * sg.direction.a + xv(1, 1) * sg.direction.b);
                row[2 * k] = col.a;
                if (2 * k + 1 < K) row[2 * k + 1] = col.b;
            }
            rows.push_back(std::move(row));
        }
    }
    Eigen::MatrixXcd A(std::max<size_t>(rows.size(), 1), K);
    A.setZero();
    for (size_t r = 0; r < rows.size(); ++r)
        for (int c = 0; c < K; ++c) A(static_cast<int>(r), c) = rows[r][c];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10) ++rank;
    std::vector<QuantumState> basis;
    for (int c = rank; c < K; ++c) {
        QuantumState q;
        for (int k = 0; k < K; ++k) {
            cplx v = svd.matrixV()(k, c);
            if (std::abs(v) > 1e-12) q.coefficients[k] = v;
        }
        q.normalized = true;
        basis.push_back(std::move(q));
    }
    return basis;
}

/// Partial sums of the return probability p_n = |psi U^n psi^dag|^2 from the
/// direct dynamics; evidence only, never the verdict.
inline double return_probability_partial_sum(const WalkModel& w, const QuantumState& state,
                                             int N) {
    if (N < 1) throw std::invalid_argument("return_probability_partial_sum: N >= 1");
    QuantumState s = state.normalized ? state : state.normalize();
    WaveFunction psi0;
    for (const auto& [k, v] : s.coefficients) {
        auto [site, spin] = state_of_index(w.lattice, k);
        psi0[PureState{site, spin}] = v;
    }
    WaveFunction psi = psi0;
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) {
        psi = walk_step(w, psi);
        cplx overlap = 0.0;
        for (const auto& [st, v] : psi0) {
            auto it = psi.find(st);
            if (it != psi.end()) overlap += it->second * std::conj(v);
        }
        acc += std::norm(overlap);
    }
    return acc;
}

}  // namespace qrw
