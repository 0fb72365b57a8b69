// Recurrence behaviour of the two equiprobable coins on the non-negative
// integers: verdicts, transient subspaces and return-probability evidence.

#include <cstdio>

#include "qrw/qrw.hpp"

using namespace qrw;

namespace {

void show(const WalkModel& walk, const char* name, const QuantumState& state) {
    RecurrenceVerdict v = classify_state(walk, state);
    std::printf("  %-28s %s\n", name,
                v.classification == Classification::Transient ? "transient" : "recurrent");
    double p50 = return_probability_partial_sum(walk, state, 50);
    double p400 = return_probability_partial_sum(walk, state, 400);
    std::printf("      return-probability sums: N=50 %.5f, N=400 %.5f\n", p50, p400);
}

}  // namespace

int main() {
    double s2 = std::sqrt(2.0);

    std::printf("Hadamard coin on the half line:\n");
    WalkModel wh = halfline_walk(hadamard_coin());
    QuantumState up0;
    up0.coefficients[0] = 1.0;
    show(wh, "|0 up>", up0);
    QuantumState mix;
    mix.coefficients[1] = 1.0 / s2;
    mix.coefficients[2] = -1.0 / s2;
    show(wh, "(|0 down> - |1 up>)/sqrt2", mix);

    std::printf("\n  transient basis over states 0..3:\n");
    for (const auto& b : transient_subspace(wh, 4)) {
        std::printf("   ");
        for (const auto& [k, v] : b.coefficients) {
            auto [site, spin] = state_of_index(WalkLattice::HalfLine, k);
            std::printf("  (%.3f%+.3fi)|%d %s>", v.real(), v.imag(), site,
                        spin == Spin::Up ? "up" : "down");
        }
        std::printf("\n");
    }

    std::printf("\nother equiprobable coin on the half line:\n");
    WalkModel wm = halfline_walk(hmod_coin());
    show(wm, "|0 up>", up0);
    QuantumState combo;
    combo.coefficients[0] = 1.0;
    combo.coefficients[1] = cplx(0.0, 1.0 + s2);
    show(wm, "|0 up> + i(1+sqrt2)|0 down>", combo.normalize());

    AsymptoticResult res = weak_limit(wm);
    std::printf("\n  weak limit: %s, mass %.6f at angle %.6f\n",
                res.kind == AsymptoticKind::Projector ? "projector" : "zero",
                res.mass, std::arg(*res.z0));
    return 0;
}
