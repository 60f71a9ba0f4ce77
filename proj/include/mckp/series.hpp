#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "monomial.hpp"
#include "rational.hpp"

namespace mckp {

// Truncated formal power series over Q in the time variables.
//
// Two integers ride along with the term map:
//   - cutoff:  terms of weighted degree > cutoff are discarded on sight.
//     Every series in one computation shares a cutoff.
//   - trusted: coefficients of weighted degree <= trusted agree with the
//     untruncated object the series is a jet of.  Operations propagate the
//     trusted order conservatively (min across operands, minus j for a
//     d/dt_{alpha,j}), so a zero test can ignore coefficients that
//     truncation may have corrupted without ever ignoring a trusted one.
class Series {
public:
    Series() : cutoff_(0), trusted_(0) {}

    explicit Series(int cutoff) : Series(cutoff, cutoff) {}

    // `trusted` is taken literally; negative values mean nothing is trusted.
    Series(int cutoff, int trusted) : cutoff_(cutoff), trusted_(trusted) {
        if (cutoff < 0) throw IndexOutOfRange("negative series cutoff");
        clamp_trusted();
    }

    static Series constant(const Rational& c, int cutoff) {
        return constant(c, cutoff, cutoff);
    }
    static Series constant(const Rational& c, int cutoff, int trusted) {
        Series s(cutoff, trusted);
        s.add_term(Monomial{}, c);
        return s;
    }

    int cutoff() const { return cutoff_; }
    int trusted() const { return trusted_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }

    void set_trusted(int t) {
        trusted_ = t;
        clamp_trusted();
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0 || m.wdeg() > cutoff_) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coeff(Monomial{}); }

    bool is_zero() const { return terms_.empty(); }

    // True when every coefficient inside the trusted range vanishes.
    bool trusted_zero() const {
        for (const auto& [m, c] : terms_)
            if (m.wdeg() <= trusted_) return false;
        return true;
    }

    // Nonzero trusted coefficients, in term order.
    std::vector<std::pair<Monomial, Rational>> trusted_terms() const {
        std::vector<std::pair<Monomial, Rational>> out;
        for (const auto& [m, c] : terms_)
            if (m.wdeg() <= trusted_) out.emplace_back(m, c);
        return out;
    }

    Series& operator+=(const Series& o) {
        require_same_cutoff(o);
        trusted_ = std::min(trusted_, o.trusted_);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Series& operator-=(const Series& o) {
        require_same_cutoff(o);
        trusted_ = std::min(trusted_, o.trusted_);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }

    Series operator-() const {
        Series r(cutoff_, trusted_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend Series operator*(const Series& a, const Series& b) {
        a.require_same_cutoff(b);
        Series r(a.cutoff_, std::min(a.trusted_, b.trusted_));
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                if (ma.wdeg() + mb.wdeg() > a.cutoff_) continue;
                r.add_term(ma * mb, ca * cb);
            }
        }
        return r;
    }

    friend Series operator*(const Rational& c, const Series& a) {
        Series r(a.cutoff_, a.trusted_);
        if (c != 0)
            for (const auto& [m, v] : a.terms_) r.terms_.emplace(m, c * v);
        return r;
    }
    friend Series operator*(const Series& a, const Rational& c) { return c * a; }

    // d/dt_{v.alpha, v.j}.  The derivative of a jet trusted to order T is
    // trusted to order T - j only.
    Series derive(TimeVar v) const {
        Series r(cutoff_, trusted_ - v.j);
        for (const auto& [m, c] : terms_) {
            Monomial dm;
            int e = m.derivative(v, dm);
            if (e != 0) r.add_term(dm, c * e);
        }
        return r;
    }

    // Multiplicative inverse; requires a nonzero constant term.
    Series invert() const {
        Rational c = constant_term();
        if (c == 0) throw NonUnit("series inversion needs a nonzero constant term");
        // f = c (1 + g)  =>  1/f = (1/c) sum (-g)^k, which terminates
        // because g has positive weighted degree.
        Series g = (Rational(1) / c) * (*this);
        g.add_term(Monomial{}, Rational(-1));
        Series r = Series::constant(Rational(1) / c, cutoff_, trusted_);
        Series pow = Series::constant(Rational(1), cutoff_, trusted_);
        for (int k = 1; k <= cutoff_ && !pow.is_zero(); ++k) {
            pow = pow * (-g);
            r += (Rational(1) / c) * pow;
        }
        r.set_trusted(trusted_);
        return r;
    }

    // exp of a jet with zero constant term.
    Series exp_jet() const {
        if (constant_term() != 0)
            throw BadConstantTerm("exp of a jet with nonzero constant term");
        Series r = Series::constant(Rational(1), cutoff_, trusted_);
        Series pow = Series::constant(Rational(1), cutoff_, trusted_);
        Rational fact(1);
        for (int k = 1; k <= cutoff_ && !pow.is_zero(); ++k) {
            pow = pow * (*this);
            fact *= k;
            r += (Rational(1) / fact) * pow;
        }
        r.set_trusted(trusted_);
        return r;
    }

    // log of a jet with constant term 1.
    Series log_jet() const {
        if (constant_term() != 1)
            throw BadConstantTerm("log of a jet whose constant term is not 1");
        Series g = *this;
        g.add_term(Monomial{}, Rational(-1));
        Series r(cutoff_, trusted_);
        Series pow = Series::constant(Rational(1), cutoff_, trusted_);
        for (int k = 1; k <= cutoff_ && !pow.is_zero(); ++k) {
            pow = pow * g;
            Rational sign = (k % 2 == 1) ? Rational(1) : Rational(-1);
            r += (sign / k) * pow;
        }
        r.set_trusted(trusted_);
        return r;
    }

    // Copy into a (usually smaller) cutoff, dropping higher terms.
    Series truncated(int new_cutoff) const {
        Series r(new_cutoff, std::min(trusted_, new_cutoff));
        for (const auto& [m, c] : terms_)
            if (m.wdeg() <= new_cutoff) r.terms_.emplace(m, c);
        return r;
    }

    // Copy into a larger cutoff.  The new range is untrusted unless the
    // series is known to be a polynomial, which the caller asserts by
    // passing trusted explicitly.
    Series extended(int new_cutoff, int new_trusted) const {
        if (new_cutoff < cutoff_) throw IndexOutOfRange("extended() cannot shrink the cutoff");
        Series r(new_cutoff, new_trusted);
        r.terms_ = terms_;
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        return a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
    }

private:
    void require_same_cutoff(const Series& o) const {
        if (cutoff_ != o.cutoff_)
            throw IndexOutOfRange("series cutoff mismatch: " + std::to_string(cutoff_) +
                                  " vs " + std::to_string(o.cutoff_));
    }
    void clamp_trusted() {
        if (trusted_ > cutoff_) trusted_ = cutoff_;
    }

    int cutoff_;
    int trusted_;
    std::map<Monomial, Rational> terms_;
};

inline std::string to_string(const Series& s) {
    if (s.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : s.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(c) << ")";
        if (!m.is_one()) os << "*" << to_string(m);
    }
    return os.str();
}

} // namespace mckp
