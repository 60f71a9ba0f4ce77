// Series kernel tests: exact arithmetic, jets, Miwa substitution, and the
// trusted-window bookkeeping of the auxiliary-variable layer.

#include <catch2/catch_amalgamated.hpp>

#include "mckp/aux_series.hpp"
#include "mckp/series.hpp"

using namespace mckp;

namespace {

// Deterministic small-coefficient series generator (splitmix64-based).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    Rational small_rational() {
        int num = static_cast<int>(next() % 7) - 3;
        int den = static_cast<int>(next() % 3) + 1;
        return Rational(num, den);
    }
};

Series random_series(Rng& rng, int cutoff, bool unit) {
    Series s(cutoff);
    std::vector<TimeVar> vars = {{1, 1}, {1, 2}, {2, 1}};
    for (int i = 0; i < 6; ++i) {
        std::vector<std::pair<TimeVar, int>> fac;
        for (const TimeVar& v : vars) {
            int e = static_cast<int>(rng.next() % 3);
            if (e > 0) fac.emplace_back(v, e);
        }
        Monomial m{fac};
        if (m.wdeg() > cutoff) continue;
        s.add_term(m, rng.small_rational());
    }
    if (unit) {
        Rational c = s.constant_term();
        s.add_term(Monomial{}, Rational(1) - c); // force constant term 1
    }
    return s;
}

const TimeVar t11{1, 1};
const TimeVar t12{1, 2};
const TimeVar t21{2, 1};

} // namespace

TEST_CASE("monomial ordering and arithmetic") {
    Monomial one;
    Monomial a(t11, 2);
    Monomial b(t12, 1);
    CHECK(one.wdeg() == 0);
    CHECK(a.wdeg() == 2);
    CHECK(b.wdeg() == 2);
    CHECK((a * b).wdeg() == 4);
    CHECK(one < a);
    CHECK((a * b).exponent_of(t11) == 2);
    Monomial d;
    CHECK(a.derivative(t11, d) == 2);
    CHECK(d == Monomial(t11, 1));
    CHECK(a.derivative(t21, d) == 0);
}

TEST_CASE("exp jet coefficients match factorials") {
    // exp(t) = sum t^k / k!, frozen directly from the definition.
    Series t(4);
    t.add_term(Monomial(t11, 1), 1);
    Series e = t.exp_jet();
    CHECK(e.coeff(Monomial{}) == 1);
    CHECK(e.coeff(Monomial(t11, 1)) == 1);
    CHECK(e.coeff(Monomial(t11, 2)) == Rational(1, 2));
    CHECK(e.coeff(Monomial(t11, 3)) == Rational(1, 6));
    CHECK(e.coeff(Monomial(t11, 4)) == Rational(1, 24));
}

TEST_CASE("geometric inverse of 1 - t") {
    Series f = Series::constant(1, 5);
    f.add_term(Monomial(t11, 1), -1);
    Series g = f.invert();
    for (int k = 0; k <= 5; ++k) CHECK(g.coeff(Monomial(t11, k)) == 1);
    CHECK((f * g).coeff(Monomial{}) == 1);
    CHECK((f * g - Series::constant(1, 5)).is_zero());
}

TEST_CASE("ring and calculus properties on seeded series") {
    Rng rng(20260826);
    for (int round = 0; round < 8; ++round) {
        Series a = random_series(rng, 5, false);
        Series b = random_series(rng, 5, false);
        Series c = random_series(rng, 5, false);
        CHECK((a * b - b * a).is_zero());
        CHECK(((a + b) * c - (a * c + b * c)).is_zero());
        CHECK(((a * b) * c - a * (b * c)).is_zero());
        // Leibniz rule.
        Series lhs = (a * b).derive(t12);
        Series rhs = a.derive(t12) * b + a * b.derive(t12);
        CHECK((lhs - rhs).trusted_zero());
        // Mixed partials commute.
        CHECK((a.derive(t11).derive(t21) - a.derive(t21).derive(t11)).is_zero());
    }
}

TEST_CASE("unit inversion and exp/log round trips") {
    Rng rng(7);
    for (int round = 0; round < 8; ++round) {
        Series u = random_series(rng, 5, true);
        CHECK((u * u.invert() - Series::constant(1, 5)).is_zero());
        CHECK((u.log_jet().exp_jet() - u).is_zero());
        Series g = random_series(rng, 5, false);
        g.add_term(Monomial{}, -g.constant_term());
        CHECK((g.exp_jet().log_jet() - g).is_zero());
        // log turns products into sums.
        Series v = random_series(rng, 5, true);
        CHECK(((u * v).log_jet() - (u.log_jet() + v.log_jet())).is_zero());
    }
}

TEST_CASE("trusted order propagation") {
    Series a(6, 3); // trusted only to order 3
    a.add_term(Monomial(t11, 1), 1);
    Series b(6);
    b.add_term(Monomial(t11, 2), 1);
    CHECK((a * b).trusted() == 3);
    CHECK((a + b).trusted() == 3);
    CHECK(a.derive(t11).trusted() == 2);
    CHECK(a.derive(t12).trusted() == 1);
    Series junk(6, 3);
    junk.add_term(Monomial(t11, 5), 7); // beyond trust: must be ignored
    CHECK(junk.trusted_zero());
    junk.add_term(Monomial(t11, 2), 1);
    CHECK(!junk.trusted_zero());
}

TEST_CASE("miwa shift basic slots") {
    // tau = 1 + t_{1,1}: shifting t_{1,*} by -[mu^-1] gives
    //   slot mu^0 : 1 + t_{1,1},  slot mu^-1 : -1.
    Series tau = Series::constant(1, 4);
    tau.add_term(Monomial(t11, 1), 1);
    AuxSeries sh = miwa_shift(tau, 1, -1, Aux::Mu);
    AuxSeries s0 = sh.coeff_at(Aux::Mu, 0);
    AuxSeries s1 = sh.coeff_at(Aux::Mu, -1);
    CHECK((s0 - AuxSeries::from_series(tau)).trusted_zero());
    CHECK((s1 + AuxSeries::constant(1, 4)).trusted_zero());
    // Depth reduces the trusted order by exactly the depth; the combined
    // grade bound equals the source trust.
    CHECK(sh.terms().at(AuxKey{0, 0, -1, 0}).trusted() == 3);
    CHECK(sh.gtrust() == 4);

    // tau = t_{1,2}: the shift subtracts mu^-2 / 2.
    Series tau2(4);
    tau2.add_term(Monomial(t12, 1), 1);
    AuxSeries sh2 = miwa_shift(tau2, 1, -1, Aux::Mu);
    CHECK(sh2.coeff_at(Aux::Mu, -2).terms().at(AuxKey{0, 0, 0, 0}).constant_term() ==
          Rational(-1, 2));

    // Components other than the shifted one are untouched.
    Series tau3(4);
    tau3.add_term(Monomial(t21, 1), 1);
    AuxSeries sh3 = miwa_shift(tau3, 1, -1, Aux::Mu);
    CHECK((sh3 - AuxSeries::from_series(tau3)).trusted_zero());
}

TEST_CASE("miwa shift is a ring homomorphism commuting with derivatives") {
    Rng rng(99);
    for (int round = 0; round < 5; ++round) {
        Series a = random_series(rng, 5, false);
        Series b = random_series(rng, 5, false);
        AuxSeries ma = miwa_shift(a, 1, -1, Aux::Mu);
        AuxSeries mb = miwa_shift(b, 1, -1, Aux::Mu);
        CHECK((miwa_shift(a + b, 1, -1, Aux::Mu) - (ma + mb)).trusted_zero());
        CHECK((miwa_shift(a * b, 1, -1, Aux::Mu) - ma * mb).trusted_zero());
        CHECK((miwa_shift(a.derive(t21), 1, -1, Aux::Mu) - ma.derive(t21)).trusted_zero());
        CHECK((miwa_shift(a.derive(t11), 1, -1, Aux::Mu) - ma.derive(t11)).trusted_zero());
        // Opposite shifts cancel.
        AuxSeries back = miwa_shift(ma, 1, 1, Aux::Mu);
        CHECK((back - AuxSeries::from_series(a)).trusted_zero());
    }
}

TEST_CASE("geometric factor and window arithmetic") {
    // (1 - z/mu)^-1 truncated at z^6.
    AuxSeries g = AuxSeries::geometric(Aux::Z, Aux::Mu, 6, 3);
    CHECK(g.window_hi(Aux::Z).value() == 6);
    CHECK(g.gtrust() == 3);
    // Multiplying by (1 - z/mu) gives 1 within the trusted window.
    AuxSeries lin = AuxSeries::constant(1, 3) - AuxSeries::aux_monomial(1, Aux::Z, 1, 3) *
                                                    AuxSeries::aux_monomial(1, Aux::Mu, -1, 3);
    AuxSeries prod = lin * g;
    CHECK(prod.window_hi(Aux::Z).value() == 6); // shifted by min z-exponent 0
    CHECK((prod - AuxSeries::constant(1, 3)).trusted_zero());

    // Residue extraction: (1 - z/mu)^-1 * z^-1 has residue 1 at z.
    AuxSeries r = (g * AuxSeries::aux_monomial(1, Aux::Z, -1, 3)).residue(Aux::Z);
    CHECK((r - AuxSeries::constant(1, 3)).trusted_zero());
    // The z^-2 slot of the same object picks out nothing.
    AuxSeries none = (g * AuxSeries::aux_monomial(1, Aux::Z, -1, 3)).coeff_at(Aux::Z, -2);
    CHECK(none.trusted_zero());
    // Slots above the trusted ceiling are refused.
    CHECK_THROWS_AS(g.coeff_at(Aux::Z, 7), RangeTooNarrow);
}

TEST_CASE("aux unit inversion against multiplication oracle") {
    // Invert 1 - mu^-1: the Neumann series terminates at the grade bound,
    // so slots down to mu^-gtrust are produced.
    AuxSeries a = AuxSeries::constant(1, 3) - AuxSeries::aux_monomial(1, Aux::Mu, -1, 3);
    AuxSeries inv = a.inverted_unit();
    for (int k = 0; k >= -inv.gtrust(); --k) {
        AuxSeries slot = inv.coeff_at(Aux::Mu, k);
        REQUIRE(slot.gtrust() >= 0);
        CHECK((slot - AuxSeries::constant(1, 3)).trusted_zero());
    }
    CHECK((a * inv - AuxSeries::constant(1, 3)).trusted_zero());
    CHECK(inv.gtrust() == 3);

    // A non-unit (zero scalar term) is rejected.
    AuxSeries z = AuxSeries::aux_monomial(1, Aux::Mu, -1, 3);
    CHECK_THROWS_AS(z.inverted_unit(), NonUnit);

    // Inversion of a shifted tau-style unit, checked by multiplying back.
    Series tau = Series::constant(1, 4);
    tau.add_term(Monomial(t11, 1), Rational(2, 3));
    tau.add_term(Monomial(t12, 1), Rational(-1, 2));
    AuxSeries m = miwa_shift(tau, 1, -1, Aux::Lambda);
    AuxSeries minv = m.inverted_unit();
    CHECK((m * minv - AuxSeries::constant(1, 4)).trusted_zero());
}

TEST_CASE("grade trust tracks shifts, derivatives and products") {
    Series tau = Series::constant(1, 5);
    tau.add_term(Monomial(t11, 1), 1);
    AuxSeries m = miwa_shift(tau, 1, -1, Aux::Mu);
    CHECK(m.gtrust() == 5);
    CHECK(m.shifted(Aux::Mu, -2).gtrust() == 7);
    CHECK(m.shifted(Aux::Z, 1).gtrust() == 4);
    CHECK(m.derive(t12).gtrust() == 3);
    // Multiplying by a grade-0 geometric factor keeps the bound; deep
    // untrusted tails cannot resurface below it.
    AuxSeries g = AuxSeries::geometric(Aux::Mu, Aux::Nu, 12, 5);
    CHECK((m * g).gtrust() == 5);
    // A positive power of an aux variable lowers it.
    CHECK((m * AuxSeries::aux_monomial(1, Aux::Mu, 2, 5)).gtrust() == 3);
}

TEST_CASE("serialization helpers on rationals") {
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("5") == 5);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
    CHECK(to_string(Rational(-1, 2)) == "-1/2");
}
