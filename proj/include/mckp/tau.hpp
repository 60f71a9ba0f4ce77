#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aux_series.hpp"
#include "charge.hpp"
#include "series.hpp"

namespace mckp {

// A truncated tau function: one series jet per zero-sum charge vector in a
// box window |s_i| <= radius.  Queries outside the window throw
// OutsideWindow, which identity drivers convert into a skipped status.
class TauFunction {
public:
    TauFunction(int n, int jmax, int cutoff, int radius)
        : n_(n), jmax_(jmax), cutoff_(cutoff), radius_(radius) {
        if (n < 1) throw BadParams("component count must be >= 1");
        if (jmax < 1) throw BadParams("time index bound must be >= 1");
        if (cutoff < 0) throw BadParams("cutoff must be >= 0");
        if (radius < 0) throw BadParams("charge radius must be >= 0");
        for (const Charge& s : charge_box(n, radius))
            window_.emplace(s, Series(cutoff));
    }

    int n() const { return n_; }
    int jmax() const { return jmax_; }
    int cutoff() const { return cutoff_; }
    int radius() const { return radius_; }

    bool in_window(const Charge& s) const { return window_.count(s) != 0; }

    std::vector<Charge> charges() const {
        std::vector<Charge> out;
        for (const auto& [s, t] : window_) out.push_back(s);
        return out;
    }

    const Series& at(const Charge& s) const {
        auto it = window_.find(s);
        if (it == window_.end())
            throw OutsideWindow("tau requested at charge " + to_string(s) +
                                " outside the stored window");
        return it->second;
    }

    void set(const Charge& s, Series value) {
        if (static_cast<int>(s.size()) != n_ || !zero_sum(s))
            throw BadParams("tau jet must sit at a zero-sum charge of the right length");
        auto it = window_.find(s);
        if (it == window_.end())
            throw OutsideWindow("tau assignment at charge " + to_string(s) +
                                " outside the stored window");
        if (value.cutoff() != cutoff_) throw BadParams("tau jet cutoff mismatch");
        it->second = std::move(value);
    }

    // tau(s, t -+ [v^-1]_gamma) as a Laurent expansion in v.
    AuxSeries miwa(const Charge& s, int gamma, int sign, Aux v) const {
        require_component_count(gamma);
        return miwa_shift(at(s), gamma, sign, v);
    }

    // d/dt_{kappa,1} log tau(s, t).
    Series dlog_t1(const Charge& s, int kappa) const {
        require_component_count(kappa);
        const Series& t = at(s);
        return t.derive(TimeVar{kappa, 1}) * t.invert();
    }

    // Fault injection for negative controls: add delta to one coefficient.
    TauFunction with_perturbed(const Charge& s, const Monomial& m, const Rational& delta) const {
        TauFunction r = *this;
        Series t = r.at(s);
        t.add_term(m, delta);
        r.set(s, t);
        return r;
    }

    void serialize(std::ostream& os) const {
        os << "tau-jet 1\n";
        os << "n " << n_ << "\n";
        os << "jmax " << jmax_ << "\n";
        os << "cutoff " << cutoff_ << "\n";
        os << "radius " << radius_ << "\n";
        for (const auto& [s, t] : window_) {
            os << "charge";
            for (int c : s) os << " " << c;
            os << "\n";
            for (const auto& [m, c] : t.terms()) {
                os << "coeff " << to_string(c) << " :";
                for (const auto& [v, e] : m.factors())
                    os << " " << v.alpha << "," << v.j << "," << e;
                os << "\n";
            }
            os << "end\n";
        }
    }

    std::string serialize() const {
        std::ostringstream os;
        serialize(os);
        return os.str();
    }

    static TauFunction deserialize(std::istream& is) {
        int lineno = 0;
        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("line " + std::to_string(lineno) + ": " + msg);
        };
        auto next_line = [&](std::string& line) -> bool {
            while (std::getline(is, line)) {
                ++lineno;
                if (!line.empty() && line.back() == '\r') line.pop_back();
                // skip blanks and comments
                size_t p = line.find_first_not_of(" \t");
                if (p == std::string::npos || line[p] == '#') continue;
                return true;
            }
            return false;
        };

        std::string line;
        if (!next_line(line) || line != "tau-jet 1") throw fail("expected header 'tau-jet 1'");
        auto read_int = [&](const std::string& key) -> int {
            if (!next_line(line)) throw fail("unexpected end of file, wanted '" + key + "'");
            std::istringstream ls(line);
            std::string k;
            long v;
            if (!(ls >> k >> v) || k != key) throw fail("expected '" + key + " <int>'");
            std::string rest;
            if (ls >> rest) throw fail("trailing tokens after '" + key + "'");
            return static_cast<int>(v);
        };
        int n = read_int("n");
        int jmax = read_int("jmax");
        int cutoff = read_int("cutoff");
        int radius = read_int("radius");
        TauFunction tau(n, jmax, cutoff, radius);

        std::map<Charge, bool> seen;
        while (next_line(line)) {
            std::istringstream ls(line);
            std::string kw;
            ls >> kw;
            if (kw != "charge") throw fail("expected 'charge', got '" + kw + "'");
            Charge s;
            long v;
            while (ls >> v) s.push_back(static_cast<int>(v));
            if (static_cast<int>(s.size()) != n) throw fail("charge vector has wrong length");
            if (!zero_sum(s)) throw fail("charge vector is not zero-sum");
            if (!tau.in_window(s)) throw fail("charge " + to_string(s) + " outside window");
            if (seen[s]) throw fail("duplicate charge block " + to_string(s));
            seen[s] = true;

            Series jet(cutoff);
            bool closed = false;
            while (next_line(line)) {
                std::istringstream cs(line);
                std::string tag;
                cs >> tag;
                if (tag == "end") {
                    closed = true;
                    break;
                }
                if (tag != "coeff") throw fail("expected 'coeff' or 'end'");
                std::string rat, colon;
                if (!(cs >> rat >> colon) || colon != ":")
                    throw fail("expected 'coeff <rational> : <factors>'");
                Rational c = parse_rational(rat);
                std::vector<std::pair<TimeVar, int>> factors;
                std::string tok;
                while (cs >> tok) {
                    int a, j, e;
                    char c1, c2;
                    std::istringstream ts(tok);
                    if (!(ts >> a >> c1 >> j >> c2 >> e) || c1 != ',' || c2 != ',')
                        throw fail("bad factor token '" + tok + "', want alpha,j,exp");
                    if (a < 1 || a > n) throw fail("factor component out of range in '" + tok + "'");
                    if (j < 1 || j > jmax) throw fail("factor time index out of range in '" + tok + "'");
                    if (e < 1) throw fail("factor exponent must be positive in '" + tok + "'");
                    factors.emplace_back(TimeVar{a, j}, e);
                }
                Monomial m(factors);
                if (m.wdeg() > cutoff) throw fail("monomial exceeds the declared cutoff");
                if (jet.coeff(m) != 0) throw fail("duplicate monomial in charge block");
                jet.add_term(m, c);
            }
            if (!closed) throw fail("charge block not terminated by 'end'");
            tau.set(s, std::move(jet));
        }
        return tau;
    }

private:
    void require_component_count(int alpha) const {
        if (alpha < 1 || alpha > n_)
            throw IndexOutOfRange("component index " + std::to_string(alpha) +
                                  " out of range for n=" + std::to_string(n_));
    }

    int n_, jmax_, cutoff_, radius_;
    std::map<Charge, Series> window_;
};

} // namespace mckp
