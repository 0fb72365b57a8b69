#pragma once

#include <cmath>
#include <stdexcept>

#include "laurent.hpp"
#include "types.hpp"
#include "verblunsky.hpp"

namespace qrw {

/// One step of the Szego recurrence: the pair (phi_j, phi_j*) evaluated at a
/// fixed point z.
struct SzegoPair {
    int degree = 0;
    cplx point{1.0};
    cplx phi{1.0};
    cplx phi_star{1.0};

    static SzegoPair seed(cplx z) { return {0, z, 1.0, 1.0}; }
};

/// rho_j phi_{j+1} = z phi_j - conj(alpha_j) phi_j*,
/// rho_j phi*_{j+1} = phi_j* - alpha_j z phi_j.
inline SzegoPair szego_next(const SzegoPair& pair, cplx alpha) {
    if (std::abs(alpha) >= 1.0) throw std::domain_error("szego_next: |alpha| must be < 1");
    double rho = std::sqrt(1.0 - std::norm(alpha));
    SzegoPair next;
    next.degree = pair.degree + 1;
    next.point = pair.point;
    next.phi = (pair.point * pair.phi - std::conj(alpha) * pair.phi_star) / rho;
    next.phi_star = (pair.phi_star - alpha * pair.point * pair.phi) / rho;
    return next;
}

inline constexpr int tail_window = 512;

/// Rotation of the measure by an angle theta: alpha_j -> e^{-i(j+1)theta} alpha_j.
inline VerblunskySequence rotate_verblunsky(const VerblunskySequence& alphas, double theta) {
    // The parity tail cannot carry the j-dependent phase, so the rotated
    // sequence stores explicit values over the window where the original had
    // them plus the tail pattern rotated at the tail indices is not constant;
    // callers that need a rotated tail use rotated evaluation on demand.
    VerblunskySequence out(alphas.kind());
    auto rot = [theta](int j, cplx a) { return unit_phase(-(j + 1) * theta) * a; };
    for (const auto& [j, v] : alphas.explicit_values()) out.set(j, rot(j, v));
    // Materialize the tail far enough for desk-scale work; beyond this the
    // sequence would need the phase-modulated tail which has no fixed value.
    int lo = alphas.two_sided() ? -tail_window : 0;
    for (int j = lo; j < tail_window; ++j) {
        if (!alphas.explicit_values().count(j)) out.set(j, rot(j, alphas.at(j)));
    }
    return out;
}

/// Rotation of the orthonormal Laurent polynomial of the given index:
/// x_{2j-1}(z) -> e^{-ij theta} x_{2j-1}(e^{-i theta} z),
/// x_{2j}(z)   -> e^{+ij theta} x_{2j}(e^{-i theta} z).
inline ScalarLaurent rotate_laurent(const ScalarLaurent& x, int index, double theta) {
    if (index < 0) throw std::domain_error("rotate_laurent: index must be >= 0");
    int j = (index + 1) / 2;  // 2j-1 -> j, 2j -> j
    double front = (index % 2 == 1) ? -j * theta : j * theta;
    return x.dilated(unit_phase(-theta)).scaled(unit_phase(front));
}

}  // namespace qrw
