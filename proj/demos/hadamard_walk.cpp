// Hadamard walk on the integers: spectral amplitudes against direct
// evolution, plus the first few matrix moments of the orthogonality measure.

#include <cstdio>

#include "qrw/qrw.hpp"

using namespace qrw;

int main() {
    WalkModel walk = line_walk(hadamard_coin());

    std::printf("matrix moments mu_n of the Hadamard line measure:\n");
    ClosedFormMatrixMeasure mu = walk.line_measure();
    auto moms = moments_series<Mat2>([&](cplx z) { return mu.caratheodory(z); }, 6);
    for (int n = 0; n <= 6; ++n) {
        const Mat2& m = moms[n];
        std::printf("  n=%d  [%7.4f%+7.4fi  %7.4f%+7.4fi; %7.4f%+7.4fi  %7.4f%+7.4fi]\n", n,
                    m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(),
                    m(1, 0).real(), m(1, 0).imag(), m(1, 1).real(), m(1, 1).imag());
    }

    std::printf("\nreturn amplitude u^n_{0up,0up}, KMcG vs direct:\n");
    KmcgLine ctx(walk, 4);
    auto direct = direct_amplitudes(walk, 0, 12);
    for (int n = 1; n <= 12; ++n) {
        cplx via_kmcg = ctx.amplitude(0, 0, n);
        cplx via_direct = direct.at(0, 0, n);
        std::printf("  n=%2d  kmcg % .10f  direct % .10f  diff %.1e\n", n, via_kmcg.real(),
                    via_direct.real(), std::abs(via_kmcg - via_direct));
    }

    std::printf("\nsite distribution after 40 steps from |0 up>:\n");
    WaveFunction psi{{PureState{0, Spin::Up}, cplx(1.0)}};
    psi = walk_evolve(walk, psi, 40);
    for (const auto& [st, v] : psi) {
        double p = std::norm(v);
        if (p < 2e-2 || st.spin == Spin::Down) continue;
        int bars = static_cast<int>(200 * p);
        std::printf("  %+3d up  %.4f %s\n", st.site, p, std::string(bars, '#').c_str());
    }
    return 0;
}
