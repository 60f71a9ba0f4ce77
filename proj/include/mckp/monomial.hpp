#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace mckp {

// A time variable t_{alpha,j}: component index alpha >= 1, weight j >= 1.
struct TimeVar {
    int alpha;
    int j;

    friend auto operator<=>(const TimeVar&, const TimeVar&) = default;
};

inline std::string to_string(const TimeVar& v) {
    return "t[" + std::to_string(v.alpha) + "," + std::to_string(v.j) + "]";
}

// Sparse monomial in the time variables.  Factors are kept sorted by
// variable so equal monomials have equal representations; the weighted
// degree (sum of j * exponent) is cached because every truncation decision
// consults it.
class Monomial {
public:
    Monomial() = default;

    // Single variable to a power.
    Monomial(TimeVar v, int exp) {
        if (v.alpha < 1 || v.j < 1) throw IndexOutOfRange("bad time variable in monomial");
        if (exp < 0) throw IndexOutOfRange("negative exponent in monomial");
        if (exp > 0) factors_.emplace_back(v, exp);
        recompute();
    }

    explicit Monomial(std::vector<std::pair<TimeVar, int>> factors)
        : factors_(std::move(factors)) {
        std::sort(factors_.begin(), factors_.end());
        for (size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].second <= 0) throw IndexOutOfRange("non-positive exponent in monomial");
            if (i > 0 && factors_[i].first == factors_[i - 1].first)
                throw IndexOutOfRange("repeated variable in monomial factor list");
        }
        recompute();
    }

    int wdeg() const { return wdeg_; }
    bool is_one() const { return factors_.empty(); }
    const std::vector<std::pair<TimeVar, int>>& factors() const { return factors_; }

    int exponent_of(TimeVar v) const {
        for (const auto& [var, e] : factors_)
            if (var == v) return e;
        return 0;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.factors_.reserve(factors_.size() + o.factors_.size());
        auto a = factors_.begin();
        auto b = o.factors_.begin();
        while (a != factors_.end() || b != o.factors_.end()) {
            if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
                r.factors_.push_back(*a++);
            } else if (a == factors_.end() || b->first < a->first) {
                r.factors_.push_back(*b++);
            } else {
                r.factors_.emplace_back(a->first, a->second + b->second);
                ++a;
                ++b;
            }
        }
        r.wdeg_ = wdeg_ + o.wdeg_;
        return r;
    }

    // d/dv applied to this monomial: returns the exponent (the cofactor
    // coefficient) and writes the reduced monomial.  Exponent 0 means the
    // derivative vanishes and `out` is untouched.
    int derivative(TimeVar v, Monomial& out) const {
        for (size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i].first == v) {
                out = *this;
                int e = out.factors_[i].second;
                if (e == 1)
                    out.factors_.erase(out.factors_.begin() + static_cast<long>(i));
                else
                    out.factors_[i].second = e - 1;
                out.wdeg_ = wdeg_ - v.j;
                return e;
            }
        }
        return 0;
    }

    // Graded-lex order: by weighted degree, then by factor list.  Gives a
    // deterministic term order for maps and serialized output.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.wdeg_ != b.wdeg_) return a.wdeg_ < b.wdeg_;
        return a.factors_ < b.factors_;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors_ == b.factors_;
    }

private:
    void recompute() {
        wdeg_ = 0;
        for (const auto& [v, e] : factors_) wdeg_ += v.j * e;
    }

    std::vector<std::pair<TimeVar, int>> factors_;
    int wdeg_ = 0;
};

inline std::string to_string(const Monomial& m) {
    if (m.is_one()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, e] : m.factors()) {
        if (!first) os << "*";
        first = false;
        os << to_string(v);
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

} // namespace mckp
