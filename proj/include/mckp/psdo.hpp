#pragma once

#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "aux_series.hpp"

namespace mckp {

// Band floor sentinel for operators that are exact (no band truncation
// anywhere): differential operators, identity, projections.
inline constexpr int kExactFloor = std::numeric_limits<int>::min() / 4;

// One reportable discrepancy of an operator identity.
struct BandTerm {
    int power; // attached to D^power
    int row, col;
    AuxTerm term;
};

inline std::string to_string(const BandTerm& t) {
    return "D^" + std::to_string(t.power) + " entry (" + std::to_string(t.row) + "," +
           std::to_string(t.col) + ") " + to_string(t.term);
}

// Matrix pseudodifferential operator: finite band of n x n matrices of
// auxiliary series attached to powers of the total derivative D.
//
// `floor` marks the trusted part of the band: coefficients of D^p with
// p < floor have been contaminated by truncation (of the tau window, of a
// Neumann inversion, or of a composition with a truncated operand) and are
// neither stored nor compared.  Compositions shift the floor by the extreme
// band exponents of the operands, mirroring the window arithmetic of the
// auxiliary series layer.
class MatrixPsdo {
public:
    MatrixPsdo() : n_(0), cutoff_(0), floor_(kExactFloor) {}
    MatrixPsdo(int n, int cutoff, int floor = kExactFloor)
        : n_(n), cutoff_(cutoff), floor_(floor) {
        if (n < 1) throw BadParams("operator dimension must be >= 1");
    }

    static MatrixPsdo identity(int n, int cutoff) {
        MatrixPsdo r(n, cutoff);
        for (int i = 0; i < n; ++i)
            r.set_entry(0, i, i, AuxSeries::constant(1, cutoff));
        return r;
    }

    // The diagonal unit E_alpha (1-based component index).
    static MatrixPsdo unit_projector(int alpha, int n, int cutoff) {
        if (alpha < 1 || alpha > n) throw IndexOutOfRange("unit projector index out of range");
        MatrixPsdo r(n, cutoff);
        r.set_entry(0, alpha - 1, alpha - 1, AuxSeries::constant(1, cutoff));
        return r;
    }

    // D^k * identity.
    static MatrixPsdo dee(int k, int n, int cutoff) {
        MatrixPsdo r(n, cutoff);
        for (int i = 0; i < n; ++i)
            r.set_entry(k, i, i, AuxSeries::constant(1, cutoff));
        return r;
    }

    int n() const { return n_; }
    int cutoff() const { return cutoff_; }
    int floor() const { return floor_; }
    bool exact() const { return floor_ == kExactFloor; }

    void set_floor(int f) {
        floor_ = f;
        drop_below_floor();
    }

    void set_entry(int power, int i, int j, AuxSeries v) {
        check_rc(i, j);
        if (power < floor_) return;
        auto it = band_.find(power);
        if (it == band_.end())
            it = band_.emplace(power, std::vector<AuxSeries>(static_cast<size_t>(n_) * n_,
                                                            AuxSeries(cutoff_)))
                     .first;
        it->second[static_cast<size_t>(i) * n_ + j] = std::move(v);
    }

    void add_entry(int power, int i, int j, const AuxSeries& v) {
        check_rc(i, j);
        if (power < floor_) return;
        auto it = band_.find(power);
        if (it == band_.end()) {
            set_entry(power, i, j, v);
            return;
        }
        it->second[static_cast<size_t>(i) * n_ + j] += v;
    }

    AuxSeries entry(int power, int i, int j) const {
        check_rc(i, j);
        if (power < floor_)
            throw BandOverflow("entry requested below the trusted band floor D^" +
                               std::to_string(floor_));
        auto it = band_.find(power);
        if (it == band_.end()) return AuxSeries(cutoff_);
        return it->second[static_cast<size_t>(i) * n_ + j];
    }

    int max_power() const {
        int m = 0;
        bool first = true;
        for (const auto& [p, mat] : band_) {
            if (first || p > m) m = p;
            first = false;
        }
        return m;
    }
    int min_power() const {
        int m = 0;
        bool first = true;
        for (const auto& [p, mat] : band_) {
            if (first || p < m) m = p;
            first = false;
        }
        return m;
    }
    bool band_empty() const { return band_.empty(); }

    bool is_zero() const {
        for (const auto& [p, mat] : band_)
            for (const AuxSeries& e : mat)
                if (!e.is_zero()) return false;
        return true;
    }

    bool trusted_zero() const {
        for (const auto& [p, mat] : band_)
            for (const AuxSeries& e : mat)
                if (!e.trusted_zero()) return false;
        return true;
    }

    std::vector<BandTerm> discrepancies(size_t cap = SIZE_MAX) const {
        std::vector<BandTerm> out;
        for (const auto& [p, mat] : band_) {
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    for (const AuxTerm& t :
                         mat[static_cast<size_t>(i) * n_ + j].discrepancies()) {
                        if (out.size() >= cap) return out;
                        out.push_back(BandTerm{p, i, j, t});
                    }
        }
        return out;
    }

    MatrixPsdo& operator+=(const MatrixPsdo& o) {
        require_same(o);
        floor_ = std::max(floor_, o.floor_);
        for (const auto& [p, mat] : o.band_)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j)
                    add_entry(p, i, j, mat[static_cast<size_t>(i) * n_ + j]);
        drop_below_floor();
        return *this;
    }
    MatrixPsdo& operator-=(const MatrixPsdo& o) { return *this += -o; }
    friend MatrixPsdo operator+(MatrixPsdo a, const MatrixPsdo& b) { return a += b; }
    friend MatrixPsdo operator-(MatrixPsdo a, const MatrixPsdo& b) { return a -= b; }

    MatrixPsdo operator-() const {
        MatrixPsdo r = *this;
        for (auto& [p, mat] : r.band_)
            for (AuxSeries& e : mat) e = -e;
        return r;
    }

    friend MatrixPsdo operator*(const Rational& c, const MatrixPsdo& a) {
        MatrixPsdo r = a;
        for (auto& [p, mat] : r.band_)
            for (AuxSeries& e : mat) e = c * e;
        return r;
    }

    friend MatrixPsdo operator*(const AuxSeries& c, const MatrixPsdo& a) {
        MatrixPsdo r = a;
        for (auto& [p, mat] : r.band_)
            for (AuxSeries& e : mat) e = c * e;
        return r;
    }

    // Composition with the Leibniz expansion
    //   A_m D^m o B_p D^p = sum_k C(m,k) A_m B_p^(k) D^(m+p-k),
    // which terminates because the coefficient jets are polynomial.  The
    // trusted floor of the product follows the interval rule: the untrusted
    // tail of one operand, shifted by the highest power of the other, caps
    // what the product band can be trusted to.
    friend MatrixPsdo operator*(const MatrixPsdo& a, const MatrixPsdo& b) {
        a.require_same(b);
        int floor = kExactFloor;
        if (!a.exact() && !b.band_.empty()) floor = std::max(floor, a.floor_ + b.max_power());
        if (!b.exact() && !a.band_.empty()) floor = std::max(floor, b.floor_ + a.max_power());
        MatrixPsdo r(a.n_, a.cutoff_, floor);
        for (const auto& [m, am] : a.band_) {
            for (const auto& [p, bp] : b.band_) {
                std::vector<AuxSeries> bk = bp; // B_p derived k times
                Rational binom(1);
                for (int k = 0;; ++k) {
                    if (k > 0) {
                        binom *= Rational(m - (k - 1)) / Rational(k);
                        if (binom == 0) break; // nonnegative m: expansion ends
                        bool all_zero = true;
                        for (AuxSeries& e : bk) {
                            e = total_derive(e, a.n_);
                            if (!e.is_zero()) all_zero = false;
                        }
                        if (all_zero) break;
                    }
                    int power = m + p - k;
                    if (power < floor && floor != kExactFloor) {
                        if (m + p - k < floor) break; // deeper terms all below floor
                    } else {
                        for (int i = 0; i < a.n_; ++i)
                            for (int j = 0; j < a.n_; ++j) {
                                AuxSeries acc(a.cutoff_);
                                for (int l = 0; l < a.n_; ++l)
                                    acc += am[static_cast<size_t>(i) * a.n_ + l] *
                                           bk[static_cast<size_t>(l) * a.n_ + j];
                                if (binom != 1) acc = binom * acc;
                                r.add_entry(power, i, j, acc);
                            }
                    }
                }
            }
        }
        r.prune();
        return r;
    }

    // Projection onto nonnegative powers of D (the differential part).
    MatrixPsdo plus_part() const {
        MatrixPsdo r(n_, cutoff_, floor_ <= 0 ? kExactFloor : floor_);
        for (const auto& [p, mat] : band_)
            if (p >= 0) r.band_.emplace(p, mat);
        return r;
    }

    // Projection onto strictly negative powers.
    MatrixPsdo minus_part() const {
        MatrixPsdo r(n_, cutoff_, floor_);
        for (const auto& [p, mat] : band_)
            if (p < 0) r.band_.emplace(p, mat);
        return r;
    }

    // Coefficientwise d/dt_{alpha,j}.
    MatrixPsdo derive(TimeVar v) const {
        MatrixPsdo r(n_, cutoff_, floor_);
        for (const auto& [p, mat] : band_) {
            std::vector<AuxSeries> d;
            d.reserve(mat.size());
            for (const AuxSeries& e : mat) d.push_back(e.derive(v));
            r.band_.emplace(p, std::move(d));
        }
        r.prune();
        return r;
    }

    // Inverse of 1 + (strictly negative band).  Needs a finite floor to
    // terminate; each Neumann iterate is clamped back to it.
    MatrixPsdo inverted_unit() const {
        MatrixPsdo r0 = *this - identity(n_, cutoff_);
        for (const auto& [p, mat] : r0.band_)
            if (p >= 0)
                for (const AuxSeries& e : mat)
                    if (!e.is_zero())
                        throw NotUnitShape("operator inversion needs the shape 1 + "
                                           "(strictly negative band)");
        if (exact() && !r0.band_.empty())
            throw NotUnitShape("cannot invert an unfloored operator with an infinite "
                               "Neumann series");
        MatrixPsdo r = identity(n_, cutoff_);
        r.floor_ = floor_;
        MatrixPsdo pow = identity(n_, cutoff_);
        int bound = exact() ? 2 : -floor_ + 2;
        int k = 0;
        for (; k <= bound && !pow.is_zero(); ++k) {
            pow = pow * (-r0);
            pow.set_floor(std::max(pow.floor_, floor_));
            r += pow;
        }
        if (!pow.is_zero())
            throw NotUnitShape("operator Neumann inversion did not terminate");
        r.floor_ = floor_;
        return r;
    }

    MatrixPsdo power(int k) const {
        if (k < 0) throw IndexOutOfRange("negative operator power");
        MatrixPsdo r = identity(n_, cutoff_);
        for (int i = 0; i < k; ++i) r = r * (*this);
        return r;
    }

    friend MatrixPsdo commutator(const MatrixPsdo& a, const MatrixPsdo& b) {
        return a * b - b * a;
    }

    // Require that the trusted band reaches down to `power`.
    void require_band(int power) const {
        if (floor_ > power)
            throw BandOverflow("trusted band floor D^" + std::to_string(floor_) +
                               " does not reach the required depth D^" +
                               std::to_string(power));
    }

private:
    static AuxSeries total_derive(const AuxSeries& e, int n) {
        AuxSeries r(e.cutoff());
        for (int kappa = 1; kappa <= n; ++kappa) r += e.derive(TimeVar{kappa, 1});
        return r;
    }

    void check_rc(int i, int j) const {
        if (i < 0 || i >= n_ || j < 0 || j >= n_)
            throw IndexOutOfRange("operator entry index out of range");
    }
    void require_same(const MatrixPsdo& o) const {
        if (n_ != o.n_ || cutoff_ != o.cutoff_)
            throw IndexOutOfRange("operator shape or cutoff mismatch");
    }
    void drop_below_floor() {
        for (auto it = band_.begin(); it != band_.end();)
            it = (it->first < floor_) ? band_.erase(it) : std::next(it);
    }
    // Drop all-zero fully trusted matrices to keep bands small.
    void prune() {
        for (auto it = band_.begin(); it != band_.end();) {
            bool drop = true;
            for (const AuxSeries& e : it->second)
                if (!(e.is_zero() && e.terms().empty())) drop = false;
            it = drop ? band_.erase(it) : std::next(it);
        }
    }

    int n_;
    int cutoff_;
    int floor_;
    std::map<int, std::vector<AuxSeries>> band_;
};

} // namespace mckp
