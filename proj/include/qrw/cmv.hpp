#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "types.hpp"
#include "verblunsky.hpp"

namespace qrw {

enum class Lattice { SemiInfinite, DoublyInfinite };

/// One 2x2 unitary factor cell
///   Theta_j = ( alpha_j^dag  rho_j^L )
///             ( rho_j^R     -alpha_j )
/// with rho^L = (1 - a^dag a)^{1/2}, rho^R = (1 - a a^dag)^{1/2}.
/// In the scalar case both rho's collapse to sqrt(1 - |alpha|^2).
template <class T>
struct ThetaBlock {
    T alpha;
    T rho_l;
    T rho_r;

    explicit ThetaBlock(const T& a) : alpha(a) {
        if constexpr (std::is_same_v<T, cplx>) {
            if (std::abs(a) >= 1.0) throw std::domain_error("ThetaBlock: |alpha| must be < 1");
            rho_l = rho_r = std::sqrt(1.0 - std::norm(a));
        } else {
            if (a.opnorm() >= 1.0) throw std::domain_error("ThetaBlock: ||alpha|| must be < 1");
            Mat2 id = Mat2::identity();
            rho_l = hermitian_sqrt(id - a.adjoint() * a);
            rho_r = hermitian_sqrt(id - a * a.adjoint());
        }
    }
};

/// State with finite support on the lattice; amplitudes indexed by integers
/// (negative indices only on the doubly infinite lattice).
struct StateVector {
    Lattice lattice = Lattice::SemiInfinite;
    std::map<int, cplx> amplitudes;

    static StateVector basis(Lattice lat, int index) {
        if (lat == Lattice::SemiInfinite && index < 0)
            throw std::out_of_range("StateVector: negative index on semi-infinite lattice");
        StateVector s;
        s.lattice = lat;
        s.amplitudes[index] = 1.0;
        return s;
    }

    cplx at(int j) const {
        auto it = amplitudes.find(j);
        return it == amplitudes.end() ? cplx(0.0) : it->second;
    }

    void add(int j, cplx v) {
        if (std::abs(v) == 0.0) return;
        amplitudes[j] += v;
    }

    double norm() const {
        double s = 0.0;
        for (const auto& [j, v] : amplitudes) s += std::norm(v);
        return std::sqrt(s);
    }

    void normalize() {
        double n = norm();
        if (n == 0.0) throw std::domain_error("StateVector: cannot normalize the zero state");
        for (auto& [j, v] : amplitudes) v /= n;
    }

    void prune(double eps = 1e-300) {
        for (auto it = amplitudes.begin(); it != amplitudes.end();)
            it = (std::abs(it->second) <= eps) ? amplitudes.erase(it) : std::next(it);
    }
};

/// CMV operator C = L M built from Theta blocks, applied lazily to finitely
/// supported vectors; no truncation is ever introduced.  Theta_j couples
/// indices (j, j+1); L carries the even blocks, M the odd ones (the
/// semi-infinite M starts with a 1x1 identity cell at index 0).
template <class T>
class CmvOperator {
  public:
    using AlphaFn = std::function<T(int)>;

    CmvOperator(Lattice lat, AlphaFn alpha) : lattice_(lat), alpha_(std::move(alpha)) {}

    static CmvOperator from_sequence(Lattice lat, const VerblunskySequence& seq) {
        static_assert(std::is_same_v<T, cplx>);
        if (lat == Lattice::DoublyInfinite && !seq.two_sided())
            throw std::invalid_argument("CmvOperator: doubly infinite lattice needs a two-sided sequence");
        return CmvOperator(lat, [seq](int j) { return seq.at(j); });
    }

    Lattice lattice() const { return lattice_; }

    // Rebuilt on demand; a block is a handful of flops and the operator
    // carries no mutable state.
    ThetaBlock<T> theta(int j) const {
        if (lattice_ == Lattice::SemiInfinite && j < 0)
            throw std::out_of_range("CmvOperator: negative Theta index");
        return ThetaBlock<T>(alpha_(j));
    }

    /// Entry C_{j,k} of the full operator, assembled from the overlapping
    /// factor cells of L and M.
    T entry(int j, int k) const {
        T acc = cell_traits<T>::zero();
        // L_{j,m} nonzero for m in the Theta block containing j (even blocks);
        // M_{m,k} nonzero likewise for the odd blocks plus the identity cell.
        int jb = block_base(j, /*even_factor=*/true);
        for (int m = jb; m <= jb + 1; ++m) {
            T l = factor_entry(j, m, /*even_factor=*/true);
            if (cell_traits<T>::norm(l) == 0.0) continue;
            T mm = factor_entry(m, k, /*even_factor=*/false);
            if (cell_traits<T>::norm(mm) == 0.0) continue;
            acc += l * mm;
        }
        return acc;
    }

    /// Row application psi' = psi * C on a finitely supported row vector of
    /// scalar cells (T = cplx) or row 2-vector cells (block case handled by
    /// the scalar folding in walk code).  Computed as (psi L) M, each factor
    /// acting exactly blockwise.
    StateVector apply_row(const StateVector& psi) const {
        static_assert(std::is_same_v<T, cplx>);
        if (psi.lattice != lattice_)
            throw std::invalid_argument("CmvOperator::apply_row: lattice mismatch");
        StateVector mid = apply_factor_row(psi, /*even_factor=*/true);
        StateVector out = apply_factor_row(mid, /*even_factor=*/false);
        out.prune();
        return out;
    }

    /// Row application of a block CMV operator to a state given in folded
    /// scalar indices: block cell J holds the pair (psi_{2J}, psi_{2J+1}).
    StateVector apply_row_folded(const StateVector& psi) const {
        static_assert(std::is_same_v<T, Mat2>);
        if (psi.lattice != Lattice::SemiInfinite || lattice_ != Lattice::SemiInfinite)
            throw std::invalid_argument("apply_row_folded: semi-infinite block operator expected");
        std::map<int, Vec2> cells = to_cells(psi);
        cells = apply_factor_cells(cells, /*even_factor=*/true);
        cells = apply_factor_cells(cells, /*even_factor=*/false);
        StateVector out;
        out.lattice = Lattice::SemiInfinite;
        for (const auto& [J, v] : cells) {
            out.add(2 * J, v.a);
            out.add(2 * J + 1, v.b);
        }
        out.prune();
        return out;
    }

    /// Row application through one unitary factor (L: even blocks, M: odd).
    StateVector apply_factor_row(const StateVector& psi, bool even_factor) const {
        static_assert(std::is_same_v<T, cplx>);
        StateVector out;
        out.lattice = psi.lattice;
        for (const auto& [j, v] : psi.amplitudes) {
            if (lattice_ == Lattice::SemiInfinite && !even_factor && j == 0) {
                out.add(0, v);  // identity cell of M
                continue;
            }
            int base = block_base(j, even_factor);
            if (lattice_ == Lattice::SemiInfinite && base < 0) {
                out.add(j, v);  // below the first block: untouched
                continue;
            }
            ThetaBlock<T> th = theta(base);
            if (j == base) {
                out.add(base, v * std::conj(th.alpha));
                out.add(base + 1, v * th.rho_l);
            } else {
                out.add(base, v * th.rho_r);
                out.add(base + 1, v * (-th.alpha));
            }
        }
        return out;
    }

  private:
    // First index of the Theta block containing index j within the given
    // factor: L blocks start at even indices, M blocks at odd ones.
    static int block_base(int j, bool even_factor) {
        int parity = even_factor ? 0 : 1;
        int r = j - parity;
        int base = (r % 2 == 0) ? r : r - 1;  // floor to even, negatives included
        return base + parity;
    }

    static std::map<int, Vec2> to_cells(const StateVector& psi) {
        std::map<int, Vec2> cells;
        for (const auto& [j, v] : psi.amplitudes) {
            Vec2& c = cells[j / 2];
            (j % 2 == 0 ? c.a : c.b) = v;
        }
        return cells;
    }

    std::map<int, Vec2> apply_factor_cells(const std::map<int, Vec2>& cells,
                                           bool even_factor) const {
        std::map<int, Vec2> out;
        auto acc = [&out](int J, const Vec2& v) {
            if (std::norm(v.a) + std::norm(v.b) == 0.0) return;
            out[J] += v;
        };
        for (const auto& [J, v] : cells) {
            if (!even_factor && J == 0) {
                acc(0, v);  // identity cell of M
                continue;
            }
            int base = block_base(J, even_factor);
            ThetaBlock<T> th = theta(base);
            if (J == base) {
                acc(base, v * th.alpha.adjoint());
                acc(base + 1, v * th.rho_l);
            } else {
                acc(base, v * th.rho_r);
                acc(base + 1, v * (th.alpha * cplx(-1.0)));
            }
        }
        return out;
    }

    // Entry of L (even_factor) or M within the block structure.
    T factor_entry(int r, int c, bool even_factor) const {
        if (lattice_ == Lattice::SemiInfinite && !even_factor && (r == 0 || c == 0))
            return (r == 0 && c == 0) ? cell_traits<T>::one() : cell_traits<T>::zero();
        int base = block_base(r, even_factor);
        if (lattice_ == Lattice::SemiInfinite && base < 0)
            return (r == c) ? cell_traits<T>::one() : cell_traits<T>::zero();
        if (c < base || c > base + 1) return cell_traits<T>::zero();
        ThetaBlock<T> th = theta(base);
        if (r == base) return (c == base) ? cell_traits<T>::adjoint(th.alpha) : th.rho_l;
        return (c == base) ? th.rho_r : th.alpha * cplx(-1.0);
    }

    Lattice lattice_;
    AlphaFn alpha_;
};

using ScalarCmv = CmvOperator<cplx>;
using BlockCmv = CmvOperator<Mat2>;

/// build_cmv: scalar operators straight from a Verblunsky sequence.
inline ScalarCmv build_cmv(const VerblunskySequence& alphas) {
    Lattice lat = alphas.two_sided() ? Lattice::DoublyInfinite : Lattice::SemiInfinite;
    return ScalarCmv::from_sequence(lat, alphas);
}

}  // namespace qrw
