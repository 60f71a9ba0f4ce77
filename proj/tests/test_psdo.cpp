// Matrix pseudodifferential operators: Leibniz composition, band floors,
// projections, and unit inversion, checked against independent expansions.

#include <catch2/catch_amalgamated.hpp>

#include "mckp/psdo.hpp"

using namespace mckp;

namespace {

const TimeVar t11{1, 1};
const TimeVar t21{2, 1};

AuxSeries poly(const Rational& c0, const Rational& c1, const Rational& c2, int cutoff) {
    Series s(cutoff);
    s.add_term(Monomial{}, c0);
    s.add_term(Monomial(t11, 1), c1);
    s.add_term(Monomial(t21, 1), c2);
    return AuxSeries::from_series(s);
}

// Total derivative d/dt_{1,1} + d/dt_{2,1} of a coefficient.
AuxSeries dtot(const AuxSeries& a) { return a.derive(t11) + a.derive(t21); }

} // namespace

TEST_CASE("composition with a multiplication operator obeys Leibniz") {
    const int d = 4, n = 2;
    MatrixPsdo A(n, d);
    A.set_entry(0, 0, 0, poly(1, 2, 3, d));
    A.set_entry(0, 1, 1, poly(0, {1, 2}, -1, d));
    A.set_entry(0, 0, 1, poly(-2, 1, 0, d));

    // D o A = A' + A D.
    MatrixPsdo lhs = MatrixPsdo::dee(1, n, d) * A;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CHECK((lhs.entry(0, i, j) - dtot(A.entry(0, i, j))).trusted_zero());
            CHECK((lhs.entry(1, i, j) - A.entry(0, i, j)).trusted_zero());
        }
    // A o D has no derivative term.
    MatrixPsdo rhs = A * MatrixPsdo::dee(1, n, d);
    CHECK(rhs.entry(0, 0, 0).is_zero());
    CHECK((rhs.entry(1, 0, 0) - A.entry(0, 0, 0)).trusted_zero());
}

TEST_CASE("negative-power composition matches the frozen expansion") {
    // Scalar identity: D^-1 o a = sum_k (-1)^k a^(k) D^(-1-k).
    const int d = 4, n = 1;
    MatrixPsdo A(n, d);
    AuxSeries a = poly({1, 3}, 2, -1, d);
    A.set_entry(0, 0, 0, a);
    MatrixPsdo Dinv = MatrixPsdo::dee(-1, n, d);
    MatrixPsdo C = Dinv * A;
    AuxSeries ak = a;
    Rational sign(1);
    for (int k = 0; k <= d; ++k) {
        CHECK((C.entry(-1 - k, 0, 0) - sign * ak).trusted_zero());
        ak = ak.derive(t11); // with n = 1 the total derivative is d/dt_{1,1}
        sign = -sign;
    }
    // And D o (D^-1 o a) recovers a.
    MatrixPsdo back = MatrixPsdo::dee(1, n, d) * C;
    CHECK((back.entry(0, 0, 0) - a).trusted_zero());
    for (int k = 1; k <= d; ++k) CHECK(back.entry(-k, 0, 0).trusted_zero());
}

TEST_CASE("composition is associative on banded operators") {
    const int d = 3, n = 2;
    MatrixPsdo A(n, d, -4), B(n, d, -4), C(n, d, -4);
    A.set_entry(1, 0, 0, poly(1, 0, 0, d));
    A.set_entry(-1, 0, 1, poly(2, 1, 0, d));
    B.set_entry(0, 1, 0, poly(0, 1, 1, d));
    B.set_entry(-2, 1, 1, poly(1, -1, 0, d));
    C.set_entry(1, 1, 1, poly(1, 0, 2, d));
    C.set_entry(-1, 0, 0, poly({2, 5}, 0, 1, d));
    MatrixPsdo lhs = (A * B) * C;
    MatrixPsdo rhs = A * (B * C);
    CHECK(lhs.floor() == rhs.floor());
    CHECK((lhs - rhs).trusted_zero());
    // Distributivity.
    CHECK(((A + B) * C - (A * C + B * C)).trusted_zero());
}

TEST_CASE("band floor propagation") {
    const int d = 3, n = 1;
    MatrixPsdo A(n, d, -3); // trusted down to D^-3
    A.set_entry(1, 0, 0, poly(1, 0, 0, d));
    A.set_entry(-3, 0, 0, poly(1, 1, 0, d));
    MatrixPsdo B(n, d); // exact
    B.set_entry(2, 0, 0, poly(1, 0, 0, d));
    MatrixPsdo P = A * B;
    // Untrusted tail of A starts below -3; shifted by B's top power 2.
    CHECK(P.floor() == -1);
    MatrixPsdo Q = B * A;
    CHECK(Q.floor() == -1);
    CHECK_THROWS_AS(P.entry(-2, 0, 0), BandOverflow);
    CHECK_THROWS_AS(P.require_band(-2), BandOverflow);
    P.require_band(-1);
}

TEST_CASE("plus and minus parts split the operator") {
    const int d = 3, n = 2;
    MatrixPsdo A(n, d, -5);
    A.set_entry(2, 0, 1, poly(1, 2, 0, d));
    A.set_entry(0, 1, 1, poly(3, 0, 0, d));
    A.set_entry(-1, 0, 0, poly(0, 1, 0, d));
    A.set_entry(-4, 1, 0, poly(1, 0, 1, d));
    CHECK((A.plus_part() + A.minus_part() - A).trusted_zero());
    CHECK(A.plus_part().exact());
    CHECK(A.minus_part().floor() == -5);
    CHECK(A.plus_part().min_power() == 0);
    CHECK(A.minus_part().max_power() == -1);
}

TEST_CASE("unit inversion against composition oracle") {
    const int d = 3, n = 2;
    MatrixPsdo W(n, d, -5);
    W.set_entry(0, 0, 0, AuxSeries::constant(1, d));
    W.set_entry(0, 1, 1, AuxSeries::constant(1, d));
    W.set_entry(-1, 0, 0, poly(1, 2, 0, d));
    W.set_entry(-1, 0, 1, poly(0, 1, -1, d));
    W.set_entry(-2, 1, 0, poly({1, 2}, 0, 1, d));
    MatrixPsdo Winv = W.inverted_unit();
    MatrixPsdo prod = W * Winv - MatrixPsdo::identity(n, d);
    CHECK(prod.trusted_zero());
    MatrixPsdo prod2 = Winv * W - MatrixPsdo::identity(n, d);
    CHECK(prod2.trusted_zero());
    CHECK(Winv.floor() == -5);

    // Shape violations are rejected.
    MatrixPsdo bad(n, d, -3);
    bad.set_entry(1, 0, 0, poly(1, 0, 0, d));
    CHECK_THROWS_AS(bad.inverted_unit(), NotUnitShape);
}

TEST_CASE("derivative and commutator basics") {
    const int d = 3, n = 2;
    MatrixPsdo A(n, d, -3);
    A.set_entry(-1, 0, 0, poly(0, 1, 2, d));
    MatrixPsdo dA = A.derive(t11);
    CHECK((dA.entry(-1, 0, 0) - AuxSeries::constant(1, d)).trusted_zero());
    // d/dt is a derivation for the composition product.
    MatrixPsdo B(n, d, -3);
    B.set_entry(1, 0, 0, poly(2, 1, 0, d));
    B.set_entry(0, 1, 0, poly(0, 0, 1, d));
    MatrixPsdo lhs = (A * B).derive(t11);
    MatrixPsdo rhs = A.derive(t11) * B + A * B.derive(t11);
    CHECK((lhs - rhs).trusted_zero());
    // Commutator antisymmetry.
    CHECK((commutator(A, B) + commutator(B, A)).trusted_zero());
}
