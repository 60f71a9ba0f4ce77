// Order-by-order jet solver: exact linear algebra and hierarchy solving.

#include <catch2/catch_amalgamated.hpp>

#include "mckp/linsolve.hpp"
#include "mckp/solve.hpp"
#include "mckp/wave.hpp"

using namespace mckp;

TEST_CASE("exact linear solve with pivots and free columns") {
    // x + y = 3, 2x + 2y = 6 (dependent), z free.
    LinearSystem sys;
    sys.ncols = 3;
    sys.add_row({{0, Rational(1)}, {1, Rational(1)}}, Rational(3));
    sys.add_row({{0, Rational(2)}, {1, Rational(2)}}, Rational(6));
    auto x = solve_affine(sys, [] { return Rational(5); });
    CHECK(x[0] + x[1] == 3);
    CHECK(x[1] == 5); // free column took the injected value
    CHECK(x[2] == 5);

    LinearSystem bad;
    bad.ncols = 1;
    bad.add_row({{0, Rational(1)}}, Rational(1));
    bad.add_row({{0, Rational(1)}}, Rational(2));
    CHECK_THROWS_AS(solve_affine(bad, [] { return Rational(0); }), Inconsistent);
}

TEST_CASE("weighted-degree monomial enumeration") {
    // n=2, j <= 2, wdeg 2: t11^2, t11 t21, t21^2, t12, t22.
    auto m = detail::monomials_of_wdeg(2, 2, 2);
    CHECK(m.size() == 5);
    for (const Monomial& x : m) CHECK(x.wdeg() == 2);
    // n=3, j <= 3, wdeg 3: three wdeg-3 vars, 3*3 mixed w1*w2, C(3+2,3)=10 cubes.
    CHECK(detail::monomials_of_wdeg(3, 3, 3).size() == 22);
}

TEST_CASE("jet-solved tau is seed-dependent and satisfies the equations") {
    TauFunction a = solve_hierarchy_tau(2, 4, 4, 1, 1);
    TauFunction b = solve_hierarchy_tau(2, 4, 4, 1, 2);
    CHECK(a.serialize() != b.serialize());
    for (const TauFunction* t : {&a, &b}) {
        for (const Charge& s : t->charges()) {
            CHECK(t->at(s).constant_term() != 0);
            for (int al = 1; al <= 2; ++al) CHECK(check_dfi(*t, s, al).passed());
        }
        CHECK(check_dfii(*t, Charge{0, 0}, 1, 2).passed());
        CHECK(check_dfiii(*t, Charge{0, 0}, 2, 1).passed());
    }
}

TEST_CASE("jet-solved tau passes the independent pairing-residue oracle") {
    // The solver imposes the cross-multiplied identity forms; the pairing
    // residue evaluates the underlying contour identity by an unrelated
    // code path (wave kernels, geometric factors, formal residue).
    TauFunction tau = solve_hierarchy_tau(2, 4, 4, 1, 21);
    Charge s{0, 0};
    std::vector<MiwaShiftSpec> shifts = {{1, Aux::Mu, -1}, {1, Aux::Nu, -1}};
    for (int kappa = 1; kappa <= 2; ++kappa) {
        AuxSeries r = bilinear_pairing_residue(tau, s, s, shifts, 1, 1, kappa);
        INFO("kappa=" << kappa);
        CHECK(r.trusted_zero());
    }
    // Charge transfer between the components, differentiated at kappa=1.
    std::vector<MiwaShiftSpec> cross = {{1, Aux::Mu, -1}, {2, Aux::Nu, -1}};
    AuxSeries r2 = bilinear_pairing_residue(tau, s, s, cross, 1, 2, 1);
    CHECK(r2.trusted_zero());
}

TEST_CASE("solver rejects insufficient jet depth") {
    CHECK_THROWS_AS(solve_hierarchy_tau(2, 2, 3, 1, 0), BadParams);
}

TEST_CASE("four-component solve needs minor-generated constants") {
    // Regression guard for the degree-0 normalization: all windows solve,
    // including the four-component one whose charge-bond graph has loops.
    TauFunction tau = solve_hierarchy_tau(4, 2, 2, 1, 3);
    for (const Charge& s : tau.charges()) CHECK(tau.at(s).constant_term() != 0);
    CHECK(check_dfiv(tau, Charge{0, 0, 0, 0}, 1, 2, 3).passed());
}
