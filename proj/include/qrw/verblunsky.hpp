#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "types.hpp"

namespace qrw {

enum class SequenceKind { OneSided, TwoSided };

/// Verblunsky parameters alpha_j, |alpha_j| < 1, driving all recurrences.
/// Values beyond the explicitly stored ones follow a parity tail
/// (even_tail, odd_tail), which covers the period-2 sequences
/// a, 0, a, 0, ... used throughout as well as plain constant tails.
class VerblunskySequence {
  public:
    explicit VerblunskySequence(SequenceKind kind = SequenceKind::OneSided, cplx even_tail = 0.0,
                                cplx odd_tail = 0.0)
        : kind_(kind), even_tail_(even_tail), odd_tail_(odd_tail) {
        check(even_tail_);
        check(odd_tail_);
    }

    /// Constant-coin style sequence a, 0, a, 0, ...
    static VerblunskySequence alternating(cplx a, SequenceKind kind = SequenceKind::OneSided) {
        return VerblunskySequence(kind, a, 0.0);
    }

    SequenceKind kind() const { return kind_; }
    bool two_sided() const { return kind_ == SequenceKind::TwoSided; }

    void set(int j, cplx value) {
        require_index(j);
        check(value);
        values_[j] = value;
    }

    cplx at(int j) const {
        require_index(j);
        auto it = values_.find(j);
        if (it != values_.end()) return it->second;
        if (hard_horizon_ && std::abs(j) > *hard_horizon_)
            throw std::out_of_range(
                "VerblunskySequence: index beyond the stored horizon (the tail of this "
                "sequence is not a fixed pattern)");
        return (j % 2 == 0) ? even_tail_ : odd_tail_;
    }

    /// Declare that indices beyond +-horizon have no valid tail (walk-derived
    /// sequences carry a rotating phase that no fixed pattern represents).
    void set_hard_horizon(int horizon) { hard_horizon_ = horizon; }
    std::optional<int> hard_horizon() const { return hard_horizon_; }

    double rho(int j) const {
        cplx a = at(j);
        return std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
    }

    const std::map<int, cplx>& explicit_values() const { return values_; }
    cplx even_tail() const { return even_tail_; }
    cplx odd_tail() const { return odd_tail_; }

    /// Sequence with every parameter negated (drives the second Szego family
    /// entering the Caratheodory ratio).
    VerblunskySequence negated() const {
        VerblunskySequence r(kind_, -even_tail_, -odd_tail_);
        for (const auto& [j, v] : values_) r.values_[j] = -v;
        r.hard_horizon_ = hard_horizon_;
        return r;
    }

  private:
    static void check(cplx a) {
        if (std::abs(a) >= 1.0)
            throw std::domain_error("VerblunskySequence: |alpha| must be < 1");
    }
    void require_index(int j) const {
        if (kind_ == SequenceKind::OneSided && j < 0)
            throw std::out_of_range("VerblunskySequence: negative index on one-sided sequence");
    }

    SequenceKind kind_;
    cplx even_tail_;
    cplx odd_tail_;
    std::optional<int> hard_horizon_;
    std::map<int, cplx> values_;
};

}  // namespace qrw
