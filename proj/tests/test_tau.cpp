// Tau-function storage, queries, and the text serialization format.

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "mckp/tau.hpp"

using namespace mckp;

namespace {
TauFunction sample_tau() {
    TauFunction tau(2, 4, 4, 1);
    Series t0(4);
    t0.add_term(Monomial{}, 1);
    t0.add_term(Monomial(TimeVar{1, 1}, 1), Rational(2, 3));
    t0.add_term(Monomial(TimeVar{2, 2}, 1), Rational(-1, 2));
    tau.set(Charge{0, 0}, t0);
    Series t1(4);
    t1.add_term(Monomial{}, 1);
    t1.add_term(Monomial({{TimeVar{1, 1}, 1}, {TimeVar{2, 1}, 2}}), Rational(5));
    tau.set(Charge{1, -1}, t1);
    Series t2 = Series::constant(1, 4);
    tau.set(Charge{-1, 1}, t2);
    return tau;
}
} // namespace

TEST_CASE("window membership and errors") {
    TauFunction tau = sample_tau();
    CHECK(tau.in_window(Charge{1, -1}));
    CHECK(!tau.in_window(Charge{2, -2}));
    CHECK_THROWS_AS(tau.at(Charge{2, -2}), OutsideWindow);
    CHECK_THROWS_AS(tau.set(Charge{1, 0}, Series(4)), BadParams); // not zero-sum
    CHECK(tau.charges().size() == 3);
}

TEST_CASE("dlog oracle") {
    // tau = 1 + (2/3) t_{1,1} + ...: d/dt_{1,1} log tau at t=0 is 2/3.
    TauFunction tau = sample_tau();
    Series d = tau.dlog_t1(Charge{0, 0}, 1);
    CHECK(d.constant_term() == Rational(2, 3));
    // Full oracle: dlog * tau == dtau.
    Series check = d * tau.at(Charge{0, 0}) - tau.at(Charge{0, 0}).derive(TimeVar{1, 1});
    CHECK(check.trusted_zero());
    // Component 2 sees only the t_{2,*} dependence at lowest order.
    CHECK(tau.dlog_t1(Charge{0, 0}, 2).constant_term() == 0);
}

TEST_CASE("miwa query matches series-level shift") {
    TauFunction tau = sample_tau();
    AuxSeries a = tau.miwa(Charge{0, 0}, 1, -1, Aux::Mu);
    AuxSeries b = miwa_shift(tau.at(Charge{0, 0}), 1, -1, Aux::Mu);
    CHECK((a - b).trusted_zero());
}

TEST_CASE("serialization round trip is byte-identical") {
    TauFunction tau = sample_tau();
    std::string text = tau.serialize();
    std::istringstream is(text);
    TauFunction back = TauFunction::deserialize(is);
    CHECK(back.serialize() == text);
    CHECK(back.n() == 2);
    CHECK(back.cutoff() == 4);
    for (const Charge& s : tau.charges())
        CHECK((back.at(s) - tau.at(s)).is_zero());
}

TEST_CASE("deserialization rejects malformed input") {
    auto parse = [](const std::string& text) {
        std::istringstream is(text);
        return TauFunction::deserialize(is);
    };
    CHECK_THROWS_AS(parse("bogus"), ParseError);
    CHECK_THROWS_AS(parse("tau-jet 1\nn 2\njmax 4\ncutoff 4\n"), ParseError);
    // Non-zero-sum charge.
    CHECK_THROWS_AS(parse("tau-jet 1\nn 2\njmax 4\ncutoff 4\nradius 1\n"
                          "charge 1 0\nend\n"),
                    ParseError);
    // Bad factor token.
    CHECK_THROWS_AS(parse("tau-jet 1\nn 2\njmax 4\ncutoff 4\nradius 1\n"
                          "charge 0 0\ncoeff 1 : 1;1;1\nend\n"),
                    ParseError);
    // Monomial beyond cutoff.
    CHECK_THROWS_AS(parse("tau-jet 1\nn 2\njmax 4\ncutoff 2\nradius 1\n"
                          "charge 0 0\ncoeff 1 : 1,4,1\nend\n"),
                    ParseError);
    // Duplicate charge block.
    CHECK_THROWS_AS(parse("tau-jet 1\nn 2\njmax 4\ncutoff 4\nradius 1\n"
                          "charge 0 0\nend\ncharge 0 0\nend\n"),
                    ParseError);
    // Error message carries the line number.
    try {
        parse("tau-jet 1\nn 2\njmax 4\ncutoff 4\nradius 1\ncharge 0 0\nwat\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    }
}

TEST_CASE("perturbation helper for negative controls") {
    TauFunction tau = sample_tau();
    TauFunction bad = tau.with_perturbed(Charge{0, 0}, Monomial(TimeVar{1, 1}, 1), 1);
    CHECK(bad.at(Charge{0, 0}).coeff(Monomial(TimeVar{1, 1}, 1)) == Rational(5, 3));
    CHECK(tau.at(Charge{0, 0}).coeff(Monomial(TimeVar{1, 1}, 1)) == Rational(2, 3));
}
