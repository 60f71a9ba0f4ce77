#pragma once

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "series.hpp"

namespace mckp {

// Auxiliary (spectral) variables.  At most four are ever in play at once.
enum class Aux : int { Z = 0, Lambda = 1, Mu = 2, Nu = 3 };

inline constexpr int kNumAux = 4;

inline const char* aux_name(Aux v) {
    switch (v) {
        case Aux::Z: return "z";
        case Aux::Lambda: return "lambda";
        case Aux::Mu: return "mu";
        case Aux::Nu: return "nu";
    }
    return "?";
}

// Exponent vector over the four auxiliary variables.
using AuxKey = std::array<int, kNumAux>;

inline std::string to_string(const AuxKey& k) {
    std::ostringstream os;
    bool any = false;
    for (int v = 0; v < kNumAux; ++v) {
        if (k[v] == 0) continue;
        if (any) os << "*";
        any = true;
        os << aux_name(static_cast<Aux>(v));
        if (k[v] != 1) os << "^" << k[v];
    }
    return any ? os.str() : std::string("1");
}

// One reportable nonzero coefficient of an expression that should vanish.
struct AuxTerm {
    AuxKey key;
    Monomial mono;
    Rational coeff;
};

inline std::string to_string(const AuxTerm& t) {
    return to_string(t.key) + " * " + to_string(t.mono) + " : " + to_string(t.coeff);
}

// Finite Laurent expansion in the auxiliary variables whose coefficients are
// truncated time series.
//
// Trust bookkeeping uses the combined grading
//     grade(v^k * monomial) = wdeg(monomial) - k   (summed over aux vars),
// under which a Miwa substitution t_{g,j} -> t_{g,j} +- v^-j/j is
// homogeneous: the unknown tail of a jet trusted to order T feeds exactly
// the terms of grade > T, whether they sit at deeper spectral slots or at
// higher weights.  A single integer `gtrust` therefore bounds the trusted
// region, propagates through products by a min rule shifted with the lowest
// grade of the other factor, and makes unit inversions terminate without
// any artificial depth floors (every Neumann iterate gains at least one
// grade).
//
// The one truncation the grading cannot express is the ceiling of a
// geometric expansion (1 - z/v)^-1, whose dropped tail z^k v^-k lives at
// grade 0; each variable may therefore carry an upper trusted exponent
// window `hi`, propagated by interval arithmetic, and slot extraction above
// the window is refused.
class AuxSeries {
public:
    AuxSeries() : cutoff_(0), gtrust_(0) {}
    explicit AuxSeries(int cutoff) : cutoff_(cutoff), gtrust_(cutoff) {}

    static AuxSeries from_series(const Series& s) {
        AuxSeries r(s.cutoff());
        r.gtrust_ = s.trusted();
        r.store(AuxKey{0, 0, 0, 0}, s);
        return r;
    }

    static AuxSeries constant(const Rational& c, int cutoff) {
        return from_series(Series::constant(c, cutoff));
    }

    // c * v^exp.
    static AuxSeries aux_monomial(const Rational& c, Aux v, int exp, int cutoff) {
        AuxSeries r(cutoff);
        r.gtrust_ = cutoff - exp;
        AuxKey k{0, 0, 0, 0};
        k[static_cast<int>(v)] = exp;
        r.store(k, Series::constant(c, cutoff));
        return r;
    }

    // Truncated geometric series (1 - num/den)^-1 = sum_{k<=ceiling}
    // num^k den^-k.  Exponents of `num` above `ceiling` are untrusted.
    static AuxSeries geometric(Aux num, Aux den, int ceiling, int cutoff) {
        if (num == den) throw IndexOutOfRange("geometric expansion needs distinct variables");
        if (ceiling < 0) throw IndexOutOfRange("negative geometric ceiling");
        AuxSeries r(cutoff);
        for (int k = 0; k <= ceiling; ++k) {
            AuxKey key{0, 0, 0, 0};
            key[static_cast<int>(num)] = k;
            key[static_cast<int>(den)] = -k;
            r.store(key, Series::constant(Rational(1), cutoff));
        }
        r.hi_[static_cast<int>(num)] = ceiling;
        return r;
    }

    int cutoff() const { return cutoff_; }
    int gtrust() const { return gtrust_; }
    const std::map<AuxKey, Series>& terms() const { return terms_; }
    std::optional<int> window_hi(Aux v) const { return hi_[static_cast<int>(v)]; }

    static int key_grade(const AuxKey& k) {
        int g = 0;
        for (int v = 0; v < kNumAux; ++v) g -= k[v];
        return g;
    }

    bool is_zero() const { return terms_.empty(); }

    bool trusted_zero() const {
        for (const auto& [k, s] : terms_)
            if (!s.trusted_zero()) return false;
        return true;
    }

    std::vector<AuxTerm> discrepancies(size_t cap = SIZE_MAX) const {
        std::vector<AuxTerm> out;
        for (const auto& [k, s] : terms_) {
            for (const auto& [m, c] : s.trusted_terms()) {
                if (out.size() >= cap) return out;
                out.push_back(AuxTerm{k, m, c});
            }
        }
        return out;
    }

    // Coefficient slot at v^exp, with v removed from the result.  Throws
    // RangeTooNarrow above the trusted ceiling of v.
    AuxSeries coeff_at(Aux v, int exp) const {
        int iv = static_cast<int>(v);
        if (hi_[iv] && exp > *hi_[iv])
            throw RangeTooNarrow(std::string("coefficient of ") + aux_name(v) + "^" +
                                 std::to_string(exp) + " lies above the trusted ceiling");
        AuxSeries r(cutoff_);
        r.gtrust_ = gtrust_ + exp; // removing v^exp shifts every grade by +exp
        for (int w = 0; w < kNumAux; ++w)
            if (w != iv) r.hi_[w] = hi_[w];
        for (const auto& [k, s] : terms_) {
            if (k[iv] != exp) continue;
            AuxKey k2 = k;
            k2[iv] = 0;
            r.store(k2, s);
        }
        return r;
    }

    // Formal residue: the coefficient of v^-1.
    AuxSeries residue(Aux v) const { return coeff_at(v, -1); }

    AuxSeries& operator+=(const AuxSeries& o) {
        require_same_cutoff(o);
        gtrust_ = std::min(gtrust_, o.gtrust_);
        for (int v = 0; v < kNumAux; ++v) hi_[v] = opt_min(hi_[v], o.hi_[v]);
        for (const auto& [k, s] : o.terms_) {
            auto it = terms_.find(k);
            if (it == terms_.end())
                terms_.emplace(k, s);
            else
                it->second += s;
        }
        normalize();
        return *this;
    }
    AuxSeries& operator-=(const AuxSeries& o) { return *this += -o; }
    friend AuxSeries operator+(AuxSeries a, const AuxSeries& b) { return a += b; }
    friend AuxSeries operator-(AuxSeries a, const AuxSeries& b) { return a -= b; }

    AuxSeries operator-() const {
        AuxSeries r = *this;
        for (auto& [k, s] : r.terms_) s = -s;
        return r;
    }

    friend AuxSeries operator*(const AuxSeries& a, const AuxSeries& b) {
        a.require_same_cutoff(b);
        AuxSeries r(a.cutoff_);
        if (a.terms_.empty() || b.terms_.empty()) {
            // A vanishing factor is zero wherever it is trusted; the
            // product inherits the weaker claim.
            r.gtrust_ = std::min(a.gtrust_ + b.min_grade(), b.gtrust_ + a.min_grade());
            return r;
        }
        r.gtrust_ = std::min(a.gtrust_ + b.min_grade(), b.gtrust_ + a.min_grade());
        for (int v = 0; v < kNumAux; ++v) {
            std::optional<int> hi;
            if (a.hi_[v]) hi = opt_min(hi, *a.hi_[v] + b.min_exp(v));
            if (b.hi_[v]) hi = opt_min(hi, *b.hi_[v] + a.min_exp(v));
            r.hi_[v] = hi;
        }
        for (const auto& [ka, sa] : a.terms_) {
            for (const auto& [kb, sb] : b.terms_) {
                AuxKey k;
                bool inside = true;
                for (int v = 0; v < kNumAux; ++v) {
                    k[v] = ka[v] + kb[v];
                    if (r.hi_[v] && k[v] > *r.hi_[v]) inside = false;
                }
                if (!inside) continue;
                // Terms of grade beyond the trust bound are garbage; skip
                // whole slots that cannot reach it.
                if (key_grade(k) > r.gtrust_) continue;
                Series prod = sa * sb;
                auto it = r.terms_.find(k);
                if (it == r.terms_.end())
                    r.terms_.emplace(k, prod);
                else
                    it->second += prod;
            }
        }
        r.normalize();
        return r;
    }

    friend AuxSeries operator*(const Rational& c, const AuxSeries& a) {
        if (c == 0) {
            AuxSeries r(a.cutoff_);
            r.gtrust_ = a.gtrust_;
            return r;
        }
        AuxSeries r = a;
        for (auto& [k, s] : r.terms_) s = c * s;
        r.normalize();
        return r;
    }
    friend AuxSeries operator*(const AuxSeries& a, const Rational& c) { return c * a; }

    friend AuxSeries operator*(const Series& c, const AuxSeries& a) {
        return AuxSeries::from_series(c) * a;
    }
    friend AuxSeries operator*(const AuxSeries& a, const Series& c) {
        return a * AuxSeries::from_series(c);
    }

    // Multiply by v^k: shifts slots, the ceiling, and the grade bound.
    AuxSeries shifted(Aux v, int k) const {
        if (k == 0) return *this;
        int iv = static_cast<int>(v);
        AuxSeries r(cutoff_);
        r.gtrust_ = gtrust_ - k;
        r.hi_ = hi_;
        if (r.hi_[iv]) r.hi_[iv] = *r.hi_[iv] + k;
        for (const auto& [key, s] : terms_) {
            AuxKey k2 = key;
            k2[iv] += k;
            r.store(k2, s);
        }
        return r;
    }

    // Coefficientwise d/dt_{alpha,j}.
    AuxSeries derive(TimeVar tv) const {
        AuxSeries r(cutoff_);
        r.gtrust_ = gtrust_ - tv.j;
        r.hi_ = hi_;
        for (const auto& [k, s] : terms_) r.store(k, s.derive(tv));
        return r;
    }

    // Lower the grade-trust bound (e.g. to model an external truncation).
    AuxSeries with_gtrust(int g) const {
        AuxSeries r = *this;
        r.gtrust_ = std::min(r.gtrust_, g);
        r.normalize();
        return r;
    }

    // Inverse of a unit: the scalar part (key 0, weight 0) must be a
    // nonzero rational and everything else must have positive grade, which
    // makes the Neumann series terminate under the grade truncation.
    AuxSeries inverted_unit() const {
        Rational c = 0;
        if (auto it = terms_.find(AuxKey{0, 0, 0, 0}); it != terms_.end())
            c = it->second.constant_term();
        if (c == 0) throw NonUnit("aux series inversion needs a nonzero scalar term");
        AuxSeries g = (Rational(1) / c) * (*this);
        g -= AuxSeries::constant(Rational(1), cutoff_);
        for (const auto& [k, s] : g.terms_) {
            int kg = key_grade(k);
            for (const auto& [m, coef] : s.terms())
                if (kg + m.wdeg() <= 0)
                    throw NotUnitShape("aux series inversion needs 1 + (positive grade)");
        }
        AuxSeries r = AuxSeries::constant(Rational(1) / c, cutoff_);
        r.gtrust_ = gtrust_;
        AuxSeries pow = AuxSeries::constant(Rational(1), cutoff_);
        pow.gtrust_ = gtrust_;
        int bound = std::max(gtrust_, 0) + cutoff_ + 4;
        int k = 0;
        for (; k <= bound && !pow.is_zero(); ++k) {
            // Clamp the iterate to the result's grade bound: iterate k has
            // grade >= k, so beyond the bound nothing trusted remains.
            pow = (pow * (-g)).with_gtrust(gtrust_);
            r += (Rational(1) / c) * pow;
        }
        if (!pow.is_zero())
            throw NotUnitShape("aux series Neumann inversion did not terminate");
        return r;
    }

    friend bool operator==(const AuxSeries& a, const AuxSeries& b) {
        return a.cutoff_ == b.cutoff_ && a.terms_ == b.terms_;
    }

private:
    static std::optional<int> opt_min(std::optional<int> a, std::optional<int> b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    void require_same_cutoff(const AuxSeries& o) const {
        if (cutoff_ != o.cutoff_) throw IndexOutOfRange("aux series cutoff mismatch");
    }

    int min_exp(int v) const {
        int m = 0;
        bool first = true;
        for (const auto& [k, s] : terms_) {
            if (first || k[v] < m) m = k[v];
            first = false;
        }
        return m;
    }

    // Lowest grade present (0 for an empty expansion).
    int min_grade() const {
        int g = 0;
        bool first = true;
        for (const auto& [k, s] : terms_) {
            if (s.is_zero()) continue;
            int kg = key_grade(k);
            for (const auto& [m, c] : s.terms()) {
                int tg = kg + m.wdeg();
                if (first || tg < g) g = tg;
                first = false;
            }
        }
        return first ? 0 : g;
    }

    // Insert a slot, clamping its series trust to the grade bound and
    // discarding untrusted monomials; drop slots that end up empty.
    void store(const AuxKey& k, const Series& s) {
        int cap = gtrust_ - key_grade(k);
        Series t(cutoff_, std::min(s.trusted(), cap));
        for (const auto& [m, c] : s.terms())
            if (m.wdeg() <= t.trusted()) t.add_term(m, c);
        if (!t.is_zero()) terms_.insert_or_assign(k, std::move(t));
    }

    void normalize() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            int cap = gtrust_ - key_grade(it->first);
            Series t(cutoff_, std::min(it->second.trusted(), cap));
            for (const auto& [m, c] : it->second.terms())
                if (m.wdeg() <= t.trusted()) t.add_term(m, c);
            if (t.is_zero()) {
                it = terms_.erase(it);
            } else {
                it->second = std::move(t);
                ++it;
            }
        }
    }

    friend AuxSeries miwa_shift(const AuxSeries&, int, int, Aux);
    friend AuxSeries miwa_shift(const Series&, int, int, Aux);

    int cutoff_;
    int gtrust_;
    std::array<std::optional<int>, kNumAux> hi_{};
    std::map<AuxKey, Series> terms_;
};

inline std::string to_string(const AuxSeries& a) {
    std::ostringstream os;
    bool any = false;
    for (const auto& [k, s] : a.terms()) {
        if (any) os << "  +  ";
        any = true;
        os << to_string(k) << " * [" << to_string(s) << "]";
    }
    return any ? os.str() : std::string("0");
}

namespace detail {
inline Rational binomial(int n, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r *= Rational(n - i) / Rational(i + 1);
    return r;
}
} // namespace detail

// Miwa substitution t_{gamma,k} -> t_{gamma,k} + sign * v^-k / k applied to
// a plain time series; the result acquires negative powers of v.  The
// substitution is homogeneous for the combined grading, so the grade-trust
// bound of the result equals the trusted order of the source.
inline AuxSeries miwa_shift(const Series& src, int gamma, int sign, Aux v) {
    if (sign != 1 && sign != -1) throw IndexOutOfRange("miwa shift sign must be +-1");
    int cutoff = src.cutoff();
    std::map<int, Series> slots; // depth -> coefficient
    for (const auto& [m, c] : src.terms()) {
        std::map<int, Series> acc;
        acc.emplace(0, Series::constant(c, cutoff));
        for (const auto& [var, e] : m.factors()) {
            if (var.alpha != gamma) {
                // Variable of another component: unaffected by the shift.
                Monomial mv(var, e);
                std::map<int, Series> next;
                for (auto& [d, s] : acc) {
                    Series t(cutoff, s.trusted());
                    for (const auto& [mm, cc] : s.terms()) t.add_term(mm * mv, cc);
                    next.emplace(d, std::move(t));
                }
                acc = std::move(next);
                continue;
            }
            std::map<int, Series> next;
            for (int i = 0; i <= e; ++i) {
                // binom(e,i) t^(e-i) (sign/k)^i v^(-k i)
                Rational coef = detail::binomial(e, i);
                Rational sk = Rational(sign) / Rational(var.j);
                for (int p = 0; p < i; ++p) coef *= sk;
                Monomial mv(var, e - i);
                int ddepth = var.j * i;
                for (auto& [d, s] : acc) {
                    Series t(cutoff, s.trusted());
                    for (const auto& [mm, cc] : s.terms()) t.add_term(mm * mv, cc * coef);
                    auto [it, inserted] = next.try_emplace(d + ddepth, t);
                    if (!inserted) it->second += t;
                }
            }
            acc = std::move(next);
        }
        for (auto& [d, s] : acc) {
            auto [it, inserted] = slots.try_emplace(d, s);
            if (!inserted) it->second += s;
        }
    }
    AuxSeries r(cutoff);
    r.gtrust_ = src.trusted();
    int iv = static_cast<int>(v);
    for (auto& [d, s] : slots) {
        AuxKey k{0, 0, 0, 0};
        k[iv] = -d;
        r.store(k, s);
    }
    return r;
}

// Miwa substitution applied to every slot of an aux series; exponents of
// the shift variable add, grades are preserved slotwise.
inline AuxSeries miwa_shift(const AuxSeries& src, int gamma, int sign, Aux v) {
    AuxSeries r(src.cutoff());
    r.gtrust_ = src.gtrust_;
    r.hi_ = src.hi_;
    int iv = static_cast<int>(v);
    for (const auto& [k, s] : src.terms_) {
        AuxSeries sh = miwa_shift(s, gamma, sign, v);
        for (const auto& [k2, s2] : sh.terms_) {
            AuxKey key = k;
            key[iv] += k2[iv];
            // Slot trust: grade-preserving, so series trust carries over.
            auto it = r.terms_.find(key);
            if (it == r.terms_.end())
                r.terms_.emplace(key, s2);
            else
                it->second += s2;
        }
    }
    r.normalize();
    return r;
}

} // namespace mckp
