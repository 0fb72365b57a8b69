#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "closed_forms.hpp"
#include "cmv.hpp"
#include "types.hpp"
#include "verblunsky.hpp"

namespace qrw {

enum class Spin { Up, Down };
enum class WalkLattice { HalfLine, Line };

/// 2x2 unitary coin at a site.  The walk moves
///   |i up>   -> c11 |i+1 up> + c21 |i-1 down>
///   |i down> -> c12 |i+1 up> + c22 |i-1 down>
/// (on the half line the i = 0 moves to the left reflect into |0 up>).
struct Coin {
    Mat2 entries;
    int site = 0;

    cplx c11() const { return entries(0, 0); }
    cplx c12() const { return entries(0, 1); }
    cplx c21() const { return entries(1, 0); }
    cplx c22() const { return entries(1, 1); }

    bool diagonal() const { return std::abs(c21()) <= 1e-12; }
    double sigma1() const { return std::arg(c11()); }
    double sigma2() const { return std::arg(c22()); }
};

struct CoinValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TrivialCoinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Checks unitarity and non-triviality (|c11| > 0; trivial coins split the
/// walk into two-state pieces and are rejected).
inline Coin validate_coin(const Mat2& m, int site = 0) {
    Mat2 g = m.adjoint() * m - Mat2::identity();
    if (g.norm() > 1e-12)
        throw CoinValidationError("coin is not unitary (||C^dag C - 1|| = " +
                                  std::to_string(g.norm()) + ")");
    if (std::abs(m(0, 0)) <= 1e-12)
        throw TrivialCoinError("trivial coin (c11 = c22 = 0): walk splits into disjoint pairs");
    return Coin{m, site};
}

inline Coin hadamard_coin(int site = 0) {
    double s = 1.0 / std::sqrt(2.0);
    return validate_coin(Mat2(s, s, s, -s), site);
}

/// The other equiprobable coin studied alongside the Hadamard one.
inline Coin hmod_coin(int site = 0) {
    double s = 1.0 / std::sqrt(2.0);
    return validate_coin(Mat2(s, cplx(0.0, -s), cplx(0.0, s), -s), site);
}

inline Coin identity_coin(int site = 0) { return validate_coin(Mat2::identity(), site); }

/// Per-site coins with a constant-tail default.
class CoinSequence {
  public:
    explicit CoinSequence(Coin default_coin) : default_(default_coin) {}

    void set(int site, const Coin& c) { coins_[site] = c; }

    const Coin& at(int site) const {
        auto it = coins_.find(site);
        return it == coins_.end() ? default_ : it->second;
    }

    bool constant() const { return coins_.empty(); }
    const Coin& default_coin() const { return default_; }
    const std::map<int, Coin>& explicit_coins() const { return coins_; }

  private:
    Coin default_;
    std::map<int, Coin> coins_;
};

/// Diagonal gauge phases lambda_j with lambda_{-1} = lambda_0 = 1,
///   lambda_{2j+2} = e^{-i sigma^j_1} lambda_{2j},
///   lambda_{2j+1} = e^{+i sigma^j_2} lambda_{2j-1},
/// where e^{i sigma^j_k} is the phase of c^j_kk.  These bring the transition
/// matrix to exact CMV form: C = Lambda^dag U Lambda.
class GaugeTransform {
  public:
    GaugeTransform() = default;
    GaugeTransform(const CoinSequence& coins, bool two_sided, int horizon = 4096)
        : two_sided_(two_sided), horizon_(horizon) {
        fwd_.resize(horizon_ + 2, 1.0);
        // fwd_[k] stores lambda_{k-1} so that lambda_{-1} sits at slot 0.
        for (int m = 1; m <= horizon_; ++m) {
            int idx = m;  // lambda index being filled: idx
            if (idx % 2 == 0) {
                int j = idx / 2 - 1;  // lambda_{2j+2} from lambda_{2j}
                fwd_[idx + 1] = unit_phase(-coins.at(j).sigma1()) * fwd_[idx - 1];
            } else {
                int j = (idx - 1) / 2;  // lambda_{2j+1} from lambda_{2j-1}
                fwd_[idx + 1] = unit_phase(coins.at(j).sigma2()) * fwd_[idx - 1];
            }
        }
        if (two_sided_) {
            bwd_.resize(horizon_ + 2, 1.0);
            // bwd_[k] stores lambda_{-k-1}; lambda_{-1} = 1 at slot 0.
            for (int m = 1; m <= horizon_; ++m) {
                int idx = -m - 1;  // lambda index being filled
                if ((-idx) % 2 == 0) {
                    int j = idx / 2;  // lambda_{2j} = e^{+i sigma^j_1} lambda_{2j+2}
                    bwd_[m] = unit_phase(coins.at(j).sigma1()) * lambda(idx + 2);
                } else {
                    int j = (idx + 1) / 2;  // lambda_{2j-1} = e^{-i sigma^j_2} lambda_{2j+1}
                    bwd_[m] = unit_phase(-coins.at(j).sigma2()) * lambda(idx + 2);
                }
            }
        }
    }

    cplx lambda(int idx) const {
        if (idx >= -1) {
            if (idx + 1 >= static_cast<int>(fwd_.size()))
                throw std::out_of_range("GaugeTransform: index beyond horizon");
            return fwd_[idx + 1];
        }
        if (!two_sided_) throw std::out_of_range("GaugeTransform: negative index on half line");
        int m = -idx - 1;
        if (m >= static_cast<int>(bwd_.size()))
            throw std::out_of_range("GaugeTransform: index beyond horizon");
        return bwd_[m];
    }

    int horizon() const { return horizon_; }

  private:
    bool two_sided_ = false;
    int horizon_ = 0;
    std::vector<cplx> fwd_;
    std::vector<cplx> bwd_;
};

/// Spectral parameters of a constant coin: the diagonal phases sigma_k of
/// c_kk, the rotation angle vartheta = (sigma1 + sigma2)/2, and
/// a = conj(c21) e^{i vartheta} driving every closed form.
struct ConstantCoinParams {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rotation = 0.0;  // vartheta = (sigma1 + sigma2)/2
    cplx a{0.0};            // conj(c21) e^{i vartheta}
    double rho = 1.0;

    static ConstantCoinParams from(const Coin& c) {
        ConstantCoinParams p;
        p.sigma1 = c.sigma1();
        p.sigma2 = c.sigma2();
        p.rotation = 0.5 * (p.sigma1 + p.sigma2);
        p.a = std::conj(c.c21()) * unit_phase(p.rotation);
        p.rho = std::sqrt(std::max(0.0, 1.0 - std::norm(p.a)));
        return p;
    }

    double phase_delta() const { return 0.5 * (sigma1 - sigma2); }
};

/// A quantum walk: lattice, per-site coins, gauge phases and the derived
/// Verblunsky data.  Immutable after construction.
struct WalkModel {
    WalkLattice lattice = WalkLattice::HalfLine;
    CoinSequence coins{identity_coin()};
    GaugeTransform gauge;
    VerblunskySequence alphas;  // scalar data (one- or two-sided)
    std::optional<ConstantCoinParams> constant;

    bool constant_coin() const { return constant.has_value(); }

    /// Scalar Verblunsky parameter alpha_{2j} = conj(c^j_21) lambda_{2j}/lambda_{2j-1}.
    cplx alpha_even(int j) const { return alphas.at(2 * j); }

    /// Closed-form measure handles (constant coins only).
    ClosedFormMeasure halfline_measure() const {
        if (lattice != WalkLattice::HalfLine || !constant)
            throw std::logic_error("halfline_measure: constant-coin half-line walk required");
        return ClosedFormMeasure(constant->a, constant->rotation);
    }
    ClosedFormMatrixMeasure line_measure() const {
        if (lattice != WalkLattice::Line || !constant)
            throw std::logic_error("line_measure: constant-coin line walk required");
        return ClosedFormMatrixMeasure(constant->a, constant->rotation);
    }
    ConstantCoinLineData line_polynomials() const {
        if (lattice != WalkLattice::Line || !constant)
            throw std::logic_error("line_polynomials: constant-coin line walk required");
        return ConstantCoinLineData{constant->a, constant->rotation, constant->phase_delta()};
    }
};

namespace detail {

inline VerblunskySequence walk_verblunsky(const CoinSequence& coins, const GaugeTransform& gauge,
                                          bool two_sided, int horizon) {
    VerblunskySequence seq(two_sided ? SequenceKind::TwoSided : SequenceKind::OneSided);
    int jlo = two_sided ? -horizon / 2 : 0;
    int jhi = horizon / 2 - 1;
    for (int j = jlo; j <= jhi; ++j) {
        cplx ratio = gauge.lambda(2 * j) / gauge.lambda(2 * j - 1);
        seq.set(2 * j, std::conj(coins.at(j).c21()) * ratio);
        seq.set(2 * j + 1, 0.0);
    }
    seq.set_hard_horizon(2 * jhi + 1);
    return seq;
}

}  // namespace detail

/// Build a half-line walk from per-site coins.
inline WalkModel halfline_walk(const CoinSequence& coins, int horizon = 2048) {
    WalkModel w;
    w.lattice = WalkLattice::HalfLine;
    w.coins = coins;
    w.gauge = GaugeTransform(coins, /*two_sided=*/false, 2 * horizon);
    w.alphas = detail::walk_verblunsky(coins, w.gauge, false, 2 * horizon);
    if (coins.constant()) w.constant = ConstantCoinParams::from(coins.default_coin());
    return w;
}

inline WalkModel halfline_walk(const Coin& constant_coin, int horizon = 2048) {
    return halfline_walk(CoinSequence(constant_coin), horizon);
}

/// Build a line walk: two-sided scalar Verblunsky data plus (via
/// folded_block_alpha) the 2x2 block sequence of the folded operator.
inline WalkModel line_walk(const CoinSequence& coins, int horizon = 2048) {
    WalkModel w;
    w.lattice = WalkLattice::Line;
    w.coins = coins;
    w.gauge = GaugeTransform(coins, /*two_sided=*/true, 2 * horizon);
    w.alphas = detail::walk_verblunsky(coins, w.gauge, true, 2 * horizon);
    if (coins.constant()) w.constant = ConstantCoinParams::from(coins.default_coin());
    return w;
}

inline WalkModel line_walk(const Coin& constant_coin, int horizon = 2048) {
    return line_walk(CoinSequence(constant_coin), horizon);
}

/// Closed-form matrix measure of a constant-coin line walk; diagonal coins
/// degenerate to Lebesgue times the identity.
inline ClosedFormMatrixMeasure line_matrix_measure(const Coin& coin) {
    ConstantCoinParams p = ConstantCoinParams::from(coin);
    return ClosedFormMatrixMeasure(p.a, p.rotation);
}

/// Left orthonormal matrix Laurent polynomial of a constant-coin line walk.
inline MatLaurent line_matrix_laurent(const Coin& coin, int index) {
    if (coin.diagonal())
        throw std::domain_error("line_matrix_laurent: diagonal coin is the free-walk degeneracy");
    ConstantCoinParams p = ConstantCoinParams::from(coin);
    return ConstantCoinLineData{p.a, p.rotation, p.phase_delta()}.laurent(index);
}

/// Matrix Verblunsky parameters of the folded (block CMV) line operator:
///   alpha_{2j} = (0, -conj(alpha_{-2j-2}); alpha_{2j}, 0),  odd ones zero.
inline Mat2 folded_block_alpha(const WalkModel& w, int block_index) {
    if (w.lattice != WalkLattice::Line)
        throw std::logic_error("folded_block_alpha: line walk required");
    if (block_index % 2 == 1) return Mat2::zero();
    int j2 = block_index;  // = 2j
    cplx lo = w.alphas.at(-j2 - 2);
    cplx hi = w.alphas.at(j2);
    return Mat2(0.0, -std::conj(lo), hi, 0.0);
}

inline BlockCmv folded_block_operator(const WalkModel& w) {
    return BlockCmv(Lattice::SemiInfinite, [w](int j) { return folded_block_alpha(w, j); });
}

/// Diagonalization of the constant-coin block parameters: P^dag A P =
/// diag(i|a|, -i|a|) with A = (0, -conj(a); a, 0).
struct CoinSplit {
    VerblunskySequence plus;   // i|a|, 0, i|a|, 0, ...
    VerblunskySequence minus;  // -i|a|, 0, ...
    double rotation = 0.0;
    Mat2 diagonalizer;  // P
};

inline CoinSplit constant_coin_split(const Coin& coin) {
    ConstantCoinParams p = ConstantCoinParams::from(coin);
    if (std::abs(p.a) <= 1e-14)
        throw std::domain_error(
            "constant_coin_split: diagonal coin has no diagonalizer; use the free-walk path");
    double mag = std::abs(p.a);
    cplx phase = p.a / mag;
    double s = 1.0 / std::sqrt(2.0);
    Mat2 P(s, cplx(0.0, -s) * std::conj(phase), cplx(0.0, -s) * phase, s);
    CoinSplit out{VerblunskySequence::alternating(cplx(0.0, mag)),
                  VerblunskySequence::alternating(cplx(0.0, -mag)), p.rotation, P};
    return out;
}

/// Pure-state numbering.  Half line: |j up> -> 2j, |j down> -> 2j+1.
/// Line (folded): |k up> -> 4k, |-k-1 down> -> 4k+1, |-k-1 up> -> 4k+2,
/// |k down> -> 4k+3 for k >= 0.
inline int amplitude_index(WalkLattice lattice, int site, Spin spin) {
    if (lattice == WalkLattice::HalfLine) {
        if (site < 0) throw std::domain_error("amplitude_index: negative site on half line");
        return 2 * site + (spin == Spin::Down ? 1 : 0);
    }
    if (spin == Spin::Up) return site >= 0 ? 4 * site : -4 * site - 2;
    return site >= 0 ? 4 * site + 3 : -4 * site - 3;
}

/// Inverse of amplitude_index.
inline std::pair<int, Spin> state_of_index(WalkLattice lattice, int index) {
    if (index < 0) throw std::domain_error("state_of_index: index must be >= 0");
    if (lattice == WalkLattice::HalfLine)
        return {index / 2, index % 2 == 0 ? Spin::Up : Spin::Down};
    int k = index / 4;
    switch (index % 4) {
        case 0: return {k, Spin::Up};
        case 1: return {-k - 1, Spin::Down};
        case 2: return {-k - 1, Spin::Up};
        default: return {k, Spin::Down};
    }
}

/// Folded index -> index on the two-sided lattice ordered
/// ..., |i up> -> 2i, |i down> -> 2i+1, ...
inline int folded_to_doubly(int folded) {
    auto [site, spin] = state_of_index(WalkLattice::Line, folded);
    return 2 * site + (spin == Spin::Down ? 1 : 0);
}

inline WalkModel free_walk(WalkLattice lattice) {
    return lattice == WalkLattice::HalfLine ? halfline_walk(identity_coin())
                                            : line_walk(identity_coin());
}

// ---------------------------------------------------------------------------
// Direct dynamics: one exact step of the coin walk on a finitely supported
// wave function over pure states (site, spin).  This is the oracle every
// KMcG amplitude is checked against; it never touches the CMV machinery.
// ---------------------------------------------------------------------------

struct PureState {
    int site = 0;
    Spin spin = Spin::Up;
    bool operator<(const PureState& o) const {
        return site != o.site ? site < o.site : spin < o.spin;
    }
    bool operator==(const PureState& o) const { return site == o.site && spin == o.spin; }
};

using WaveFunction = std::map<PureState, cplx>;

inline WaveFunction walk_step(const WalkModel& w, const WaveFunction& psi) {
    WaveFunction out;
    auto add = [&out](int site, Spin sp, cplx v) {
        if (v == cplx(0.0)) return;
        out[PureState{site, sp}] += v;
    };
    for (const auto& [st, v] : psi) {
        const Coin& c = w.coins.at(st.site);
        cplx up_amp = (st.spin == Spin::Up) ? c.c11() : c.c12();
        cplx down_amp = (st.spin == Spin::Up) ? c.c21() : c.c22();
        add(st.site + 1, Spin::Up, v * up_amp);
        if (w.lattice == WalkLattice::HalfLine && st.site == 0)
            add(0, Spin::Up, v * down_amp);  // reflected boundary move
        else
            add(st.site - 1, Spin::Down, v * down_amp);
    }
    for (auto it = out.begin(); it != out.end();)
        it = (std::abs(it->second) < 1e-300) ? out.erase(it) : std::next(it);
    return out;
}

inline WaveFunction walk_evolve(const WalkModel& w, WaveFunction psi, int steps) {
    for (int n = 0; n < steps; ++n) psi = walk_step(w, psi);
    return psi;
}

/// Entry U_{j,k} of the walk realized on finite supports through the gauge
/// identity U = Lambda C Lambda^dag (used by the gauge-equivalence checks).
inline cplx walk_entry_via_cmv(const WalkModel& w, const ScalarCmv& op, int j, int k) {
    return w.gauge.lambda(j) * op.entry(j, k) * std::conj(w.gauge.lambda(k));
}

}  // namespace qrw
