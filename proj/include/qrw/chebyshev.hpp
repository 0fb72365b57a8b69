#pragma once

#include <stdexcept>

#include "laurent.hpp"
#include "types.hpp"

namespace qrw {

/// Chebyshev polynomial of the second kind, forward recurrence in value
/// space: U_{-1} = 0, U_0 = 1, U_{n+1} = 2x U_n - U_{n-1}.  Valid for
/// complex arguments (no trigonometric shortcut).
inline cplx chebyshev_u(int n, cplx x) {
    if (n < -1) throw std::invalid_argument("chebyshev_u: n must be >= -1");
    if (n == -1) return 0.0;
    cplx prev = 0.0, cur = 1.0;
    for (int k = 0; k < n; ++k) {
        cplx next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// U_n evaluated at a Laurent-polynomial argument, carried out exactly in
/// coefficient space.
inline ScalarLaurent chebyshev_u(int n, const ScalarLaurent& x) {
    if (n < -1) throw std::invalid_argument("chebyshev_u: n must be >= -1");
    if (n == -1) return ScalarLaurent();
    ScalarLaurent prev;  // U_{-1} = 0
    ScalarLaurent cur = ScalarLaurent::one();
    for (int k = 0; k < n; ++k) {
        ScalarLaurent next = (x * cur).scaled(2.0) - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace qrw
