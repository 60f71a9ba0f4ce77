#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "fay.hpp"
#include "linsolve.hpp"
#include "solutions.hpp"

namespace mckp {
namespace detail {

// One residual expression the solver drives to zero, together with the
// charges whose jets it reads (so perturbation columns can be skipped when
// the perturbed charge does not participate).
struct ResidualInstance {
    std::string name;
    std::vector<Charge> touched;
    std::function<AuxSeries(const TauFunction&)> eval;
    // Highest unknown degree minus component grade: 1 for the differential
    // identities (a derivative or spectral multiplication lowers the grade
    // below the degree), 0 for the pure-product difference identities.  At
    // degree step k only components of grade <= k - lag are closed in the
    // unknowns determined so far.
    int lag = 1;
};

// All cross-multiplied differential identity instances whose shifted
// charges fit inside the stored window.  Zero of every residual here, to
// the trusted grade, is the solver's definition of "solution"; the
// independent pairing-residue oracle then validates the result.
inline std::vector<ResidualInstance> hierarchy_residuals(const TauFunction& shape) {
    std::vector<ResidualInstance> out;
    int n = shape.n();
    for (const Charge& s : shape.charges()) {
        for (int a = 1; a <= n; ++a) {
            out.push_back({"dfi " + to_string(s) + " a=" + std::to_string(a),
                           {s},
                           [s, a](const TauFunction& t) { return dfi_residual(t, s, a); }});
            for (int b = 1; b <= n; ++b) {
                if (b == a) continue;
                Charge sab = shift_charge(s, a, b);
                Charge sba = shift_charge(s, b, a);
                if (shape.in_window(sab) && shape.in_window(sba))
                    out.push_back({"dfii " + to_string(s) + " a=" + std::to_string(a) +
                                       " b=" + std::to_string(b),
                                   {s, sab, sba},
                                   [s, a, b](const TauFunction& t) {
                                       return dfii_residual(t, s, a, b);
                                   }});
                if (shape.in_window(sab))
                    out.push_back({"dfiii " + to_string(s) + " a=" + std::to_string(a) +
                                       " b=" + std::to_string(b),
                                   {s, sab},
                                   [s, a, b](const TauFunction& t) {
                                       return dfiii_residual(t, s, a, b);
                                   }});
                for (int k = 1; k <= n; ++k) {
                    if (k == a || k == b) continue;
                    Charge sak = shift_charge(s, a, k);
                    Charge skb = shift_charge(s, k, b);
                    if (shape.in_window(sab) && shape.in_window(sak) &&
                        shape.in_window(skb))
                        out.push_back({"dfiv " + to_string(s) + " a=" + std::to_string(a) +
                                           " b=" + std::to_string(b) +
                                           " k=" + std::to_string(k),
                                       {s, sab, sak, skb},
                                       [s, a, b, k](const TauFunction& t) {
                                           return dfiv_residual(t, s, a, b, k);
                                       }});
                    // Difference identity with three components: its
                    // product form keeps trust one grade deeper than the
                    // differential identities, so it pins coefficient
                    // slots the differential set cannot reach at the last
                    // degree step.
                    Charge sal = shift_charge(s, a, k);
                    Charge slb = shift_charge(s, k, b);
                    if (shape.in_window(sab) && shape.in_window(sal) &&
                        shape.in_window(slb))
                        out.push_back({"cfii " + to_string(s) + " a=" + std::to_string(a) +
                                           " b=" + std::to_string(b) +
                                           " l=" + std::to_string(k),
                                       {s, sab, sal, slb},
                                       [s, a, b, k](const TauFunction& t) {
                                           return cfii_residual(t, s, a, b, k);
                                       },
                                       0});
                    for (int l = 1; l <= n; ++l) {
                        if (l == a || l == b || l == k) continue;
                        Charge slk = shift_charge(s, l, k);
                        Charge c1 = shift_charge(slk, a, b);
                        Charge c4 = shift_charge(s, l, b);
                        if (shape.in_window(slk) && shape.in_window(c1) &&
                            shape.in_window(sab) && shape.in_window(sak) &&
                            shape.in_window(c4))
                            out.push_back({"cfi " + to_string(s) + " a=" + std::to_string(a) +
                                               " b=" + std::to_string(b) +
                                               " l=" + std::to_string(l) +
                                               " k=" + std::to_string(k),
                                           {s, slk, c1, sab, sak, c4},
                                           [s, a, b, l, k](const TauFunction& t) {
                                               return cfi_residual(t, s, a, b, l, k);
                                           },
                                           0});
                    }
                }
            }
        }
    }
    return out;
}

// All monomials of weighted degree exactly w in the variables t_{alpha,j},
// alpha <= n, j <= jcap.
inline void monomials_of_wdeg_rec(int n, int jcap, int w, int from_a, int from_j,
                                  Monomial acc, std::vector<Monomial>& out) {
    if (w == 0) {
        out.push_back(acc);
        return;
    }
    for (int j = from_j; j <= std::min(jcap, w); ++j) {
        for (int a = (j == from_j ? from_a : 1); a <= n; ++a) {
            monomials_of_wdeg_rec(n, jcap, w - j, a, j, acc * Monomial(TimeVar{a, j}, 1),
                                  out);
        }
    }
}

inline std::vector<Monomial> monomials_of_wdeg(int n, int jcap, int w) {
    std::vector<Monomial> out;
    monomials_of_wdeg_rec(n, jcap, w, 1, 1, Monomial(), out);
    return out;
}

// Exact determinant by fraction-free-ish Gaussian elimination over Q.
inline Rational det_rational(std::vector<std::vector<Rational>> m) {
    size_t n = m.size();
    Rational det(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rational inv = Rational(1) / m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] * inv;
            for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

// Degree-0 values for a genuine solution: minors of one generic matrix.
// Mode (alpha, k) with -radius <= k < radius is a row of a seeded generic
// (2*radius*n) x (radius*n) matrix; the charge s selects the rows with
// k < s_alpha, and tau(s, 0) is the determinant of that square minor.
// These are the coordinates of a generic point of the quadric the degree-0
// data must lie on; independent generic constants fail the first solve step
// as soon as the window has four components.
inline std::map<Charge, Rational> minor_constants(const TauFunction& shape,
                                                  std::mt19937_64& rng) {
    int n = shape.n();
    int r = std::max(shape.radius(), 1);
    int rows = 2 * r * n, cols = r * n;
    std::uniform_int_distribution<int> entry(-4, 4);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::vector<Rational>> a(static_cast<size_t>(rows),
                                             std::vector<Rational>(cols, Rational(0)));
        for (auto& row : a)
            for (auto& e : row) e = Rational(entry(rng));
        std::map<Charge, Rational> out;
        bool ok = true;
        for (const Charge& s : shape.charges()) {
            std::vector<std::vector<Rational>> sub;
            // Row order is component-major (all modes of component 1, then
            // component 2, ...): this matches the sign convention of the
            // epsilon prefactors, which count charge entries componentwise.
            for (int al = 1; al <= n; ++al)
                for (int k = -r; k < r; ++k)
                    if (k < s[static_cast<size_t>(al - 1)])
                        sub.push_back(a[static_cast<size_t>((k + r) * n + (al - 1))]);
            Rational d = det_rational(std::move(sub));
            if (d == 0) {
                ok = false;
                break;
            }
            out[s] = d;
        }
        if (ok) return out;
    }
    throw Inconsistent("could not draw a generic matrix with all window minors nonzero");
}

} // namespace detail

// Solve the hierarchy order by order in the weighted degree: starting from
// tau = 1 at every charge, choose the degree-k coefficients at each step so
// that every grade-(k-1) component of every residual vanishes.
//
// Intermediate steps take the zero particular solution for undetermined
// coefficient slots: a free direction at step k is only free with respect
// to the grades imposed so far, and a nonzero choice can leave the solution
// variety and make a later step contradictory.  The final step faces no
// later compatibility constraints, so its free slots take small seeded
// rationals and different seeds give different exact solutions.
//
// At step k the perturbation by a degree-k monomial enters every residual
// linearly: any product of two degree-k perturbations sits at grade
// >= 2k-1 > k-1 and cannot reach the imposed components.  The column of an
// unknown is therefore exactly E(tau + m) - E(tau) restricted to grade
// <= k-1.
inline TauFunction solve_hierarchy_tau(int n, int jmax, int cutoff, int radius,
                                       std::uint64_t seed) {
    if (jmax < cutoff) throw BadParams("jet solve needs jmax >= cutoff");
    TauFunction tau(n, jmax, cutoff, radius);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-3, 3);
    std::uniform_int_distribution<int> den(1, 3);
    std::map<Charge, Rational> c0 = detail::minor_constants(tau, rng);
    for (const Charge& s : tau.charges())
        tau.set(s, Series::constant(c0.at(s), cutoff));
    std::vector<detail::ResidualInstance> inst = detail::hierarchy_residuals(tau);

    for (int k = 1; k <= cutoff; ++k) {
        bool last = (k == cutoff);
        auto free_value = [&]() -> Rational {
            if (!last) return Rational(0);
            Rational r(num(rng), den(rng));
            r.canonicalize(); // the two-argument constructor stores num/den as-is
            return r;
        };
        std::vector<std::pair<Charge, Monomial>> unknowns;
        std::vector<Monomial> monos = detail::monomials_of_wdeg(n, std::min(k, jmax), k);
        for (const Charge& s : tau.charges())
            for (const Monomial& m : monos) unknowns.emplace_back(s, m);

        // Row index per residual component: (instance, aux key, monomial).
        std::map<std::tuple<size_t, AuxKey, Monomial>, size_t> row_of;
        LinearSystem sys;
        sys.ncols = static_cast<int>(unknowns.size());
        auto row_for = [&](size_t i, const AuxKey& key, const Monomial& m) -> size_t {
            auto it = row_of.find({i, key, m});
            if (it != row_of.end()) return it->second;
            size_t r = sys.rows.size();
            row_of.emplace(std::make_tuple(i, key, m), r);
            sys.add_row({}, Rational(0));
            return r;
        };

        std::vector<AuxSeries> base;
        base.reserve(inst.size());
        for (size_t i = 0; i < inst.size(); ++i) {
            base.push_back(inst[i].eval(tau));
            for (const auto& [key, slot] : base.back().terms()) {
                int kg = AuxSeries::key_grade(key);
                for (const auto& [m, c] : slot.trusted_terms()) {
                    if (kg + m.wdeg() > k - inst[i].lag) continue;
                    sys.rhs[row_for(i, key, m)] = -c;
                }
            }
        }

        for (size_t u = 0; u < unknowns.size(); ++u) {
            const auto& [su, mu] = unknowns[u];
            TauFunction pert = tau.with_perturbed(su, mu, Rational(1));
            for (size_t i = 0; i < inst.size(); ++i) {
                bool touches = false;
                for (const Charge& c : inst[i].touched)
                    if (c == su) touches = true;
                if (!touches) continue;
                AuxSeries col = inst[i].eval(pert) - base[i];
                for (const auto& [key, slot] : col.terms()) {
                    int kg = AuxSeries::key_grade(key);
                    for (const auto& [m, c] : slot.trusted_terms()) {
                        if (kg + m.wdeg() > k - inst[i].lag) continue;
                        sys.rows[row_for(i, key, m)][static_cast<int>(u)] = c;
                    }
                }
            }
        }

        std::vector<Rational> x;
        try {
            x = solve_affine(sys, free_value);
        } catch (const Inconsistent&) {
            throw Inconsistent("hierarchy jet solve inconsistent at weighted degree " +
                               std::to_string(k));
        }
        for (size_t u = 0; u < unknowns.size(); ++u) {
            if (x[u] == 0) continue;
            const auto& [su, mu] = unknowns[u];
            tau = tau.with_perturbed(su, mu, x[u]);
        }
    }
    return tau;
}

} // namespace mckp
