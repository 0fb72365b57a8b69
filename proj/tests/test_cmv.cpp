#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qrw/cmv.hpp"
#include "qrw/olp.hpp"

using namespace qrw;

namespace {

cplx random_disk(std::mt19937& g, double rmax = 0.9) {
    std::uniform_real_distribution<double> ur(0.0, rmax), ua(-pi, pi);
    return std::polar(ur(g), ua(g));
}

Mat2 random_contraction(std::mt19937& g, double rmax = 0.8) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat2 m(cplx(u(g), u(g)), cplx(u(g), u(g)), cplx(u(g), u(g)), cplx(u(g), u(g)));
    double n = m.opnorm();
    return m * (rmax / std::max(n, 1e-9) * std::uniform_real_distribution<double>(0.1, 1.0)(g));
}

StateVector random_state(std::mt19937& g, Lattice lat, int lo, int hi) {
    StateVector s;
    s.lattice = lat;
    for (int j = lo; j <= hi; ++j) s.amplitudes[j] = cplx(random_disk(g));
    s.normalize();
    return s;
}

}  // namespace

TEST_CASE("theta blocks are unitary") {
    auto g = std::mt19937(7);
    for (int rep = 0; rep < 30; ++rep) {
        ThetaBlock<cplx> th(random_disk(g, 0.95));
        cplx a = th.alpha;
        double r = th.rho_l.real();
        CHECK(std::abs(std::norm(a) + r * r - 1.0) < 1e-14);

        ThetaBlock<Mat2> bt(random_contraction(g, 0.9));
        Mat2 id = Mat2::identity();
        Mat2 c1 = bt.alpha.adjoint() * bt.alpha + bt.rho_l * bt.rho_l - id;
        Mat2 c2 = bt.alpha * bt.alpha.adjoint() + bt.rho_r * bt.rho_r - id;
        Mat2 c3 = bt.alpha * bt.rho_l - bt.rho_r * bt.alpha;  // intertwining
        CHECK(c1.norm() < 1e-13);
        CHECK(c2.norm() < 1e-13);
        CHECK(c3.norm() < 1e-12);
    }
    CHECK_THROWS_AS(ThetaBlock<cplx>(cplx(1.0)), std::domain_error);
}

TEST_CASE("semi-infinite CMV entries match the five-diagonal display") {
    auto g = std::mt19937(13);
    for (int rep = 0; rep < 20; ++rep) {
        VerblunskySequence seq;
        std::vector<cplx> al(12);
        std::vector<double> rho(12);
        for (int j = 0; j < 12; ++j) {
            al[j] = random_disk(g);
            rho[j] = std::sqrt(1.0 - std::norm(al[j]));
            seq.set(j, al[j]);
        }
        ScalarCmv op = build_cmv(seq);
        auto E = [&](int j, int k) { return op.entry(j, k); };
        CHECK(std::abs(E(0, 0) - std::conj(al[0])) < 1e-15);
        CHECK(std::abs(E(0, 1) - rho[0] * std::conj(al[1])) < 1e-15);
        CHECK(std::abs(E(0, 2) - rho[0] * rho[1]) < 1e-15);
        CHECK(std::abs(E(1, 0) - rho[0]) < 1e-15);
        CHECK(std::abs(E(1, 1) + al[0] * std::conj(al[1])) < 1e-15);
        CHECK(std::abs(E(1, 2) + al[0] * rho[1]) < 1e-15);
        for (int j = 1; 2 * j + 2 < 10; ++j) {
            CHECK(std::abs(E(2 * j, 2 * j - 1) - rho[2 * j - 1] * std::conj(al[2 * j])) < 1e-15);
            CHECK(std::abs(E(2 * j, 2 * j) + al[2 * j - 1] * std::conj(al[2 * j])) < 1e-15);
            CHECK(std::abs(E(2 * j, 2 * j + 1) - rho[2 * j] * std::conj(al[2 * j + 1])) < 1e-15);
            CHECK(std::abs(E(2 * j, 2 * j + 2) - rho[2 * j] * rho[2 * j + 1]) < 1e-15);
            CHECK(std::abs(E(2 * j + 1, 2 * j - 1) - rho[2 * j - 1] * rho[2 * j]) < 1e-15);
            CHECK(std::abs(E(2 * j + 1, 2 * j) + al[2 * j - 1] * rho[2 * j]) < 1e-15);
            CHECK(std::abs(E(2 * j + 1, 2 * j + 1) + al[2 * j] * std::conj(al[2 * j + 1])) <
                  1e-15);
            CHECK(std::abs(E(2 * j + 1, 2 * j + 2) + al[2 * j] * rho[2 * j + 1]) < 1e-15);
            CHECK(std::abs(E(2 * j, 2 * j - 2)) < 1e-15);
            CHECK(std::abs(E(2 * j, 2 * j + 3)) < 1e-15);
        }
    }
}

TEST_CASE("explicit corner for alpha_0 = 1/2") {
    VerblunskySequence seq;
    seq.set(0, 0.5);
    ScalarCmv op = build_cmv(seq);
    double r32 = std::sqrt(3.0) / 2.0;
    CHECK(std::abs(op.entry(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(op.entry(0, 1) - 0.0) < 1e-15);
    CHECK(std::abs(op.entry(1, 0) - r32) < 1e-15);
    CHECK(std::abs(op.entry(1, 1) - 0.0) < 1e-15);
}

TEST_CASE("doubly infinite CMV entries follow the interior pattern") {
    auto g = std::mt19937(17);
    VerblunskySequence seq(SequenceKind::TwoSided);
    std::map<int, cplx> al;
    for (int j = -12; j < 12; ++j) {
        al[j] = random_disk(g);
        seq.set(j, al[j]);
    }
    auto rho = [&](int j) { return std::sqrt(1.0 - std::norm(al[j])); };
    ScalarCmv op = build_cmv(seq);
    for (int j = -4; j <= 3; ++j) {
        CHECK(std::abs(op.entry(2 * j, 2 * j - 1) - rho(2 * j - 1) * std::conj(al[2 * j])) <
              1e-15);
        CHECK(std::abs(op.entry(2 * j, 2 * j) + al[2 * j - 1] * std::conj(al[2 * j])) < 1e-15);
        CHECK(std::abs(op.entry(2 * j, 2 * j + 1) - rho(2 * j) * std::conj(al[2 * j + 1])) <
              1e-15);
        CHECK(std::abs(op.entry(2 * j, 2 * j + 2) - rho(2 * j) * rho(2 * j + 1)) < 1e-15);
        CHECK(std::abs(op.entry(2 * j + 1, 2 * j - 1) - rho(2 * j - 1) * rho(2 * j)) < 1e-15);
        CHECK(std::abs(op.entry(2 * j + 1, 2 * j) + al[2 * j - 1] * rho(2 * j)) < 1e-15);
        CHECK(std::abs(op.entry(2 * j + 1, 2 * j + 1) + al[2 * j] * std::conj(al[2 * j + 1])) <
              1e-15);
        CHECK(std::abs(op.entry(2 * j + 1, 2 * j + 2) + al[2 * j] * rho(2 * j + 1)) < 1e-15);
    }
}

TEST_CASE("block CMV entries match the block display") {
    auto g = std::mt19937(19);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Mat2> al(10);
        std::vector<ThetaBlock<Mat2>> th;
        for (int j = 0; j < 10; ++j) {
            al[j] = random_contraction(g);
            th.emplace_back(al[j]);
        }
        BlockCmv op(Lattice::SemiInfinite, [al](int j) { return al.at(j); });
        auto close = [](const Mat2& x, const Mat2& y) { return (x - y).norm() < 1e-13; };
        CHECK(close(op.entry(0, 0), al[0].adjoint()));
        CHECK(close(op.entry(0, 1), th[0].rho_l * al[1].adjoint()));
        CHECK(close(op.entry(0, 2), th[0].rho_l * th[1].rho_l));
        CHECK(close(op.entry(1, 0), th[0].rho_r));
        CHECK(close(op.entry(1, 1), al[0] * al[1].adjoint() * cplx(-1.0)));
        CHECK(close(op.entry(1, 2), al[0] * th[1].rho_l * cplx(-1.0)));
        for (int j = 1; j <= 3; ++j) {
            int r = 2 * j;
            CHECK(close(op.entry(r, r - 1), al[r].adjoint() * th[r - 1].rho_r));
            CHECK(close(op.entry(r, r), al[r].adjoint() * al[r - 1] * cplx(-1.0)));
            CHECK(close(op.entry(r, r + 1), th[r].rho_l * al[r + 1].adjoint()));
            CHECK(close(op.entry(r, r + 2), th[r].rho_l * th[r + 1].rho_l));
            CHECK(close(op.entry(r + 1, r - 1), th[r].rho_r * th[r - 1].rho_r));
            CHECK(close(op.entry(r + 1, r), th[r].rho_r * al[r - 1] * cplx(-1.0)));
            CHECK(close(op.entry(r + 1, r + 1), al[r] * al[r + 1].adjoint() * cplx(-1.0)));
            CHECK(close(op.entry(r + 1, r + 2), al[r] * th[r + 1].rho_l * cplx(-1.0)));
        }
    }
}

TEST_CASE("free walk operator moves the boundary spin") {
    ScalarCmv op = build_cmv(VerblunskySequence());
    StateVector down0 = StateVector::basis(Lattice::SemiInfinite, 1);
    StateVector out = op.apply_row(down0);
    CHECK(std::abs(out.at(0) - 1.0) < 1e-15);
    CHECK(out.amplitudes.size() == 1);

    StateVector up0 = StateVector::basis(Lattice::SemiInfinite, 0);
    out = op.apply_row(up0);
    CHECK(std::abs(out.at(2) - 1.0) < 1e-15);
}

TEST_CASE("norm is preserved over 1000 applications") {
    auto g = std::mt19937(23);
    VerblunskySequence seq(SequenceKind::OneSided, cplx(0.21, -0.35), cplx(0.1, 0.05));
    for (int j = 0; j < 8; ++j) seq.set(j, random_disk(g, 0.7));
    ScalarCmv op = build_cmv(seq);
    StateVector psi = random_state(g, Lattice::SemiInfinite, 0, 6);
    for (int n = 0; n < 1000; ++n) psi = op.apply_row(psi);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);

    VerblunskySequence two(SequenceKind::TwoSided, cplx(0.3, 0.1), 0.0);
    ScalarCmv dop = build_cmv(two);
    StateVector phi = random_state(g, Lattice::DoublyInfinite, -3, 3);
    for (int n = 0; n < 1000; ++n) phi = dop.apply_row(phi);
    CHECK(std::abs(phi.norm() - 1.0) < 1e-12);
}

TEST_CASE("support growth is banded") {
    VerblunskySequence seq(SequenceKind::TwoSided, cplx(0.4, 0.2), 0.0);
    ScalarCmv op = build_cmv(seq);
    int j0 = 5;
    StateVector psi = StateVector::basis(Lattice::DoublyInfinite, j0);
    for (int n = 1; n <= 12; ++n) {
        psi = op.apply_row(psi);
        CHECK(psi.amplitudes.begin()->first >= j0 - 2 * n);
        CHECK(psi.amplitudes.rbegin()->first <= j0 + 2 * n);
    }
}

TEST_CASE("lattice mismatch is rejected") {
    ScalarCmv op = build_cmv(VerblunskySequence());
    StateVector psi = StateVector::basis(Lattice::DoublyInfinite, -2);
    CHECK_THROWS_AS(op.apply_row(psi), std::invalid_argument);
}

TEST_CASE("block apply preserves norm and matches entries") {
    auto g = std::mt19937(31);
    std::vector<Mat2> al(40);
    for (int j = 0; j < 40; ++j) al[j] = (j % 2 == 0) ? random_contraction(g) : Mat2::zero();
    BlockCmv op(Lattice::SemiInfinite, [al](int j) { return al.at(j); });
    StateVector psi = random_state(g, Lattice::SemiInfinite, 0, 9);
    StateVector one = op.apply_row_folded(psi);
    CHECK(std::abs(one.norm() - 1.0) < 1e-13);
    for (int k = 0; k <= 13; ++k) {
        cplx acc = 0.0;
        for (const auto& [j, v] : psi.amplitudes) {
            Mat2 blk = op.entry(j / 2, k / 2);
            acc += v * blk(j % 2, k % 2);
        }
        CHECK(std::abs(acc - one.at(k)) < 1e-13);
    }
}
