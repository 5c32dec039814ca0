#include "doctest.h"

#include <cmath>
#include <complex>

#include "ionqec/dense.hpp"

using namespace ionqec;
using cd = std::complex<double>;

namespace {
constexpr double kPi = 3.14159265358979323846;

double prob_of(const DenseState& s, size_t idx) { return std::norm(s.amplitudes()[idx]); }
}  // namespace

TEST_CASE("rotations against 2x2 matrix values") {
    DenseState s(1);
    s.rotate(Axis::Y, kPi / 2, 0);
    CHECK(prob_of(s, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(prob_of(s, 1) == doctest::Approx(0.5).epsilon(1e-12));

    DenseState t(1);
    t.rotate(Axis::X, kPi, 0);
    CHECK(prob_of(t, 1) == doctest::Approx(1.0).epsilon(1e-12));

    // Z(2pi) is a global phase of -1
    DenseState u(1);
    u.rotate(Axis::Y, 0.7, 0);
    DenseState v = u;
    v.rotate(Axis::Z, 2 * kPi, 0);
    CHECK(v.fidelity(u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(v.amplitudes()[0] + u.amplitudes()[0]) < 1e-12);
}

TEST_CASE("xx gate") {
    DenseState s(2);
    s.xx(0.0, 0, 1);
    CHECK(prob_of(s, 0) == doctest::Approx(1.0));

    s.xx(kPi / 2, 0, 1);
    // (|00> - i |11>)/sqrt(2)
    CHECK(std::abs(s.amplitudes()[0] - cd(1 / std::sqrt(2), 0)) < 1e-12);
    CHECK(std::abs(s.amplitudes()[3] - cd(0, -1 / std::sqrt(2))) < 1e-12);

    DenseState a(3), b(3);
    a.rotate(Axis::Y, 0.3, 0);
    b.rotate(Axis::Y, 0.3, 0);
    a.xx(kPi / 2, 1, 2);
    b.xx(kPi / 4, 1, 2);
    b.xx(kPi / 4, 1, 2);
    for (size_t i = 0; i < a.amplitudes().size(); ++i) {
        CHECK(std::abs(a.amplitudes()[i] - b.amplitudes()[i]) < 1e-12);
    }
}

TEST_CASE("crosstalk unitary") {
    std::vector<std::pair<size_t, size_t>> pairs = {{0, 1}};

    DenseState s(2);
    s.crosstalk_xx(0.0, pairs, {false});
    CHECK(prob_of(s, 0) == doctest::Approx(1.0));

    // eps_ct * theta = pi: full X X flip up to phase
    DenseState t(2);
    t.crosstalk_xx(kPi, pairs, {false});
    CHECK(prob_of(t, 3) == doctest::Approx(1.0).epsilon(1e-12));

    // eps_ct * theta / 2 = 0.1: flipped branch probability sin^2(0.1)
    DenseState u(2);
    u.crosstalk_xx(0.2, pairs, {false});
    CHECK(prob_of(u, 3) == doctest::Approx(std::sin(0.1) * std::sin(0.1)).epsilon(1e-10));
    CHECK(prob_of(u, 3) == doctest::Approx(9.9667e-3).epsilon(1e-4));

    // doubled neighbour gets twice the angle
    DenseState v(2);
    v.crosstalk_xx(0.2, pairs, {true});
    CHECK(prob_of(v, 3) == doctest::Approx(std::sin(0.2) * std::sin(0.2)).epsilon(1e-10));
}

TEST_CASE("stark unitary") {
    DenseState plus(1);
    plus.rotate(Axis::Y, kPi / 2, 0);

    DenseState s = plus;
    s.stark_z(0.0, {0});
    CHECK(s.fidelity(plus) == doctest::Approx(1.0));

    // mu = 2: Z(pi) maps |+> to |->
    DenseState minus(1);
    minus.rotate(Axis::Y, -kPi / 2, 0);
    DenseState t = plus;
    t.stark_z(2 * kPi / 4, {0});
    CHECK(t.fidelity(minus) == doctest::Approx(1.0).epsilon(1e-12));

    // mu = 0.1: |-> branch probability sin^2(mu pi / 4)
    DenseState u = plus;
    u.stark_z(0.1 * kPi / 4, {0});
    double p_minus = 1.0 - u.fidelity(plus);
    double expect = std::sin(0.1 * kPi / 4) * std::sin(0.1 * kPi / 4);
    CHECK(p_minus == doctest::Approx(expect).epsilon(1e-9));
    CHECK(p_minus == doctest::Approx(6.155e-3).epsilon(1e-3));
}

TEST_CASE("branch probabilities and projection") {
    DenseState s(1);
    auto [p0, p1] = s.branch_probs(0);
    CHECK(p0 == doctest::Approx(1.0));
    CHECK(p1 == doctest::Approx(0.0));

    s.h(0);
    auto [q0, q1] = s.branch_probs(0);
    CHECK(q0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q0 + q1 == doctest::Approx(1.0).epsilon(1e-12));

    // measuring one qubit of the MS Bell state pins the second
    DenseState b(2);
    b.xx(kPi / 2, 0, 1);
    Rng rng(3);
    bool first = b.measure_z(0, rng);
    auto [r0, r1] = b.branch_probs(1);
    CHECK((first ? r1 : r0) == doctest::Approx(1.0).epsilon(1e-12));

    DenseState z(1);
    CHECK_THROWS(z.project(0, true));
}

TEST_CASE("norm conserved across a long random circuit") {
    Rng rng(11);
    DenseState s(5);
    for (int i = 0; i < 1000; ++i) {
        int kind = int(rng.below(3));
        if (kind == 0) {
            s.rotate(Axis(int(rng.below(3))), rng.uniform() * 4 * kPi - 2 * kPi, rng.below(5));
        } else if (kind == 1) {
            size_t a = rng.below(5), b = (a + 1 + rng.below(4)) % 5;
            s.xx(rng.uniform() * kPi, a, b);
        } else {
            s.h(rng.below(5));
        }
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    for (size_t q = 0; q < 5; ++q) {
        auto [p0, p1] = s.branch_probs(q);
        CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("qubit 0 is the least significant amplitude bit") {
    DenseState s(3);
    s.rotate(Axis::X, kPi, 1);  // flip qubit 1
    CHECK(prob_of(s, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qubit cap enforced") {
    CHECK_THROWS(DenseState(15));
}
