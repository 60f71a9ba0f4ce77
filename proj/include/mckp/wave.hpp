#pragma once

#include <vector>

#include "psdo.hpp"
#include "tau.hpp"

namespace mckp {

// Reduced wave matrix at a fixed charge: entry (alpha,beta) of the wave
// function with the column factor z^(s_beta) e^(xi(t_beta,z)) stripped (for
// the adjoint, z^(-s_beta) e^(-xi)).  Reduced entries are Laurent series in
// the spectral variable with series jets as coefficients, which is what all
// identity drivers compare.
struct WaveMatrix {
    int n = 0;
    int cutoff = 0;
    Charge s;
    std::vector<AuxSeries> e; // row-major n x n

    WaveMatrix() = default;
    WaveMatrix(int n_, int cutoff_, Charge s_)
        : n(n_), cutoff(cutoff_), s(std::move(s_)),
          e(static_cast<size_t>(n_) * n_, AuxSeries(cutoff_)) {}

    AuxSeries& at(int alpha, int beta) {
        return e[static_cast<size_t>(alpha - 1) * n + (beta - 1)];
    }
    const AuxSeries& at(int alpha, int beta) const {
        return e[static_cast<size_t>(alpha - 1) * n + (beta - 1)];
    }

    bool trusted_zero() const {
        for (const AuxSeries& x : e)
            if (!x.trusted_zero()) return false;
        return true;
    }

    WaveMatrix operator-(const WaveMatrix& o) const {
        WaveMatrix r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }

    std::vector<BandTerm> discrepancies(size_t cap = SIZE_MAX) const {
        std::vector<BandTerm> out;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (const AuxTerm& t : e[static_cast<size_t>(i) * n + j].discrepancies()) {
                    if (out.size() >= cap) return out;
                    out.push_back(BandTerm{0, i, j, t});
                }
        return out;
    }
};

// Reduced wave matrix: entry (alpha,beta) =
//   eps_{alpha beta}(s) tau(s+e_a-e_b, t-[v^-1]_b) / tau(s,t) * v^(delta-1).
inline WaveMatrix wave_matrix(const TauFunction& tau, const Charge& s, Aux v = Aux::Z) {
    WaveMatrix w(tau.n(), tau.cutoff(), s);
    Series inv = tau.at(s).invert();
    for (int a = 1; a <= tau.n(); ++a)
        for (int b = 1; b <= tau.n(); ++b) {
            AuxSeries num = tau.miwa(shift_charge(s, a, b), b, -1, v);
            AuxSeries x = (Rational(epsilon(s, a, b)) * num * inv).shifted(v, a == b ? 0 : -1);
            w.at(a, b) = std::move(x);
        }
    return w;
}

// Reduced adjoint wave matrix: entry (alpha,beta) =
//   eps_{alpha beta}(s) tau(s-e_a+e_b, t+[v^-1]_b) / tau(s,t) * v^(delta-1).
inline WaveMatrix adjoint_wave_matrix(const TauFunction& tau, const Charge& s, Aux v = Aux::Z) {
    WaveMatrix w(tau.n(), tau.cutoff(), s);
    Series inv = tau.at(s).invert();
    for (int a = 1; a <= tau.n(); ++a)
        for (int b = 1; b <= tau.n(); ++b) {
            AuxSeries num = tau.miwa(shift_charge(s, b, a), b, 1, v);
            AuxSeries x = (Rational(epsilon(s, a, b)) * num * inv).shifted(v, a == b ? 0 : -1);
            w.at(a, b) = std::move(x);
        }
    return w;
}

// (d + v)^m applied to one reduced wave entry, where d is the total
// derivative sum_kappa d/dt_{kappa,1}: the action of D^m through the
// stripped column exponential.  Negative powers expand as
//   (d + v)^-1 = sum_k (-1)^k v^(-1-k) d^k,
// which terminates on polynomial jets.
inline AuxSeries wave_shift_pow(const AuxSeries& f, int m, int n, Aux v) {
    auto dtot = [n](const AuxSeries& x) {
        AuxSeries r(x.cutoff());
        for (int k = 1; k <= n; ++k) r += x.derive(TimeVar{k, 1});
        return r;
    };
    AuxSeries g = f;
    for (int i = 0; i < m; ++i) g = dtot(g) + g.shifted(v, 1);
    for (int i = 0; i > m; --i) {
        AuxSeries acc(g.cutoff());
        AuxSeries dk = g;
        Rational sign(1);
        for (int k = 0; !dk.is_zero(); ++k) {
            acc += sign * dk.shifted(v, -1 - k);
            dk = dtot(dk);
            sign = -sign;
        }
        g = acc;
    }
    return g;
}

// Lowest combined grade present in an aux series (0 when empty).
inline int lowest_grade(const AuxSeries& x) {
    int g = 0;
    bool first = true;
    for (const auto& [k, s] : x.terms()) {
        int kg = AuxSeries::key_grade(k);
        for (const auto& [m, c] : s.terms()) {
            if (first || kg + m.wdeg() < g) g = kg + m.wdeg();
            first = false;
        }
    }
    return g;
}

// Apply a matrix pseudodifferential operator to a reduced wave matrix.
// Band terms below the operator's trusted floor are unknown; a band D^m
// with m < floor acts on a column of lowest grade G with grade >= -m + G
// >= |floor| + 1 + G, so the result's grade trust is capped at
// |floor| + G per column.
inline WaveMatrix apply_to_wave(const MatrixPsdo& A, const WaveMatrix& psi, Aux v = Aux::Z) {
    if (A.n() != psi.n || A.cutoff() != psi.cutoff)
        throw IndexOutOfRange("operator/wave shape mismatch");
    WaveMatrix r(psi.n, psi.cutoff, psi.s);
    for (int b = 1; b <= psi.n; ++b) {
        int col_low = 0; // lowest grade present in column b
        for (int g = 1; g <= psi.n; ++g)
            col_low = std::min(col_low, lowest_grade(psi.at(g, b)));
        for (int g = 1; g <= psi.n; ++g) {
            const AuxSeries& f = psi.at(g, b);
            for (int m = A.exact() ? A.min_power() : A.floor(); m <= A.max_power(); ++m) {
                AuxSeries shifted;
                bool have = false;
                for (int a = 1; a <= psi.n; ++a) {
                    AuxSeries coeff = A.entry(m, a - 1, g - 1);
                    if (coeff.is_zero() && coeff.terms().empty()) continue;
                    if (!have) {
                        shifted = wave_shift_pow(f, m, psi.n, v);
                        have = true;
                    }
                    r.at(a, b) += coeff * shifted;
                }
            }
        }
        if (!A.exact())
            for (int a = 1; a <= psi.n; ++a)
                r.at(a, b) = r.at(a, b).with_gtrust(-A.floor() + col_low);
    }
    return r;
}

// Spectral coefficients w_j of the reduced wave matrix: psi-hat = sum_j w_j
// z^-j with w_0 = 1.  Returns the matrix coefficient of z^-j as plain
// series (index [i*n+j] row-major); `depth` caps j.
inline std::vector<Series> wave_coefficient(const WaveMatrix& psi, int j, Aux v = Aux::Z) {
    std::vector<Series> out;
    out.reserve(static_cast<size_t>(psi.n) * psi.n);
    for (int a = 1; a <= psi.n; ++a)
        for (int b = 1; b <= psi.n; ++b) {
            AuxSeries slot = psi.at(a, b).coeff_at(v, -j);
            // An absent slot is zero up to the grade-trust bound of the
            // extracted coefficient.
            Series s(psi.cutoff, std::min(psi.cutoff, slot.gtrust()));
            for (const auto& [k, c] : slot.terms()) {
                if (k != AuxKey{0, 0, 0, 0})
                    throw InternalMismatch("wave coefficient carries a stray auxiliary "
                                           "variable");
                s = c;
            }
            out.push_back(std::move(s));
        }
    return out;
}

// Dressing operator W-hat = 1 + sum_{j>=1} w_j D^-j assembled from the
// spectral coefficients of the reduced wave matrix.  `band_cap` limits the
// stored band depth; the trusted floor is the shallower of the cap and the
// depth the tau window supports.
inline MatrixPsdo sato_dressing(const TauFunction& tau, const Charge& s, int band_cap) {
    WaveMatrix psi = wave_matrix(tau, s);
    // Spectral coefficient w_j is trusted to order gtrust - j; keep bands
    // while that is nonnegative.
    int avail = psi.e.empty() ? 0 : psi.e.front().gtrust();
    for (const AuxSeries& x : psi.e) avail = std::min(avail, x.gtrust());
    avail = std::max(avail, 0);
    int depth = std::min(avail, band_cap);
    MatrixPsdo W = MatrixPsdo::identity(tau.n(), tau.cutoff());
    W.set_floor(-depth);
    for (int j = 1; j <= depth; ++j) {
        std::vector<Series> wj = wave_coefficient(psi, j);
        for (int a = 0; a < tau.n(); ++a)
            for (int b = 0; b < tau.n(); ++b) {
                const Series& c = wj[static_cast<size_t>(a) * tau.n() + b];
                if (!(c.is_zero() && c.trusted() >= tau.cutoff()))
                    W.set_entry(-j, a, b, AuxSeries::from_series(c));
            }
    }
    // w_0 must be the identity: the diagonal slot at z^0 is tau(s,t-[z]_a)
    // / tau(s,t) at depth 0, i.e. 1, and off-diagonal entries start at z^-1.
    std::vector<Series> w0 = wave_coefficient(psi, 0);
    for (int a = 0; a < tau.n(); ++a)
        for (int b = 0; b < tau.n(); ++b) {
            Series want = a == b ? Series::constant(1, tau.cutoff()) : Series(tau.cutoff());
            if (!(w0[static_cast<size_t>(a) * tau.n() + b] - want).trusted_zero())
                throw InternalMismatch("reduced wave matrix is not 1 + O(z^-1)");
        }
    return W;
}

// Factorization consistency: applying the dressing operator to the bare
// (identity) reduced wave must reproduce the reduced wave matrix.
inline WaveMatrix verify_wave_factorization(const TauFunction& tau, const Charge& s,
                                            int band_cap) {
    MatrixPsdo W = sato_dressing(tau, s, band_cap);
    WaveMatrix bare(tau.n(), tau.cutoff(), s);
    for (int a = 1; a <= tau.n(); ++a) bare.at(a, a) = AuxSeries::constant(1, tau.cutoff());
    WaveMatrix predicted = apply_to_wave(W, bare);
    WaveMatrix diff = predicted - wave_matrix(tau, s);
    // The dressing band is truncated at the floor; apply_to_wave has
    // already capped the grade trust of the difference accordingly.
    return diff;
}

// One Miwa shift of the second time argument in a bilinear pairing.
struct MiwaShiftSpec {
    int gamma;
    Aux var;
    int sign; // -1: t' omits [v^-1]_gamma;  +1: t' adds it
};

namespace detail {
// tau(charge, t'' (+/-) [z^-1]_gamma) where t'' = t + sum of spec shifts.
inline AuxSeries tau_with_shifts(const TauFunction& tau, const Charge& charge,
                                 const std::vector<MiwaShiftSpec>& shifts, int gamma,
                                 int zsign, Aux zvar) {
    AuxSeries acc = miwa_shift(tau.at(charge), gamma, zsign, zvar);
    for (const MiwaShiftSpec& sp : shifts) acc = miwa_shift(acc, sp.gamma, sp.sign, sp.var);
    return acc;
}
} // namespace detail

// The residue (coefficient of z^-1) of the bilinear pairing
//   sum_gamma eps_{alpha gamma}(s) eps_{beta gamma}(s')
//     z^(s_g - s'_g + delta_ag + delta_bg - 2) e^(xi(t_g - t'_g, z))
//     tau(s+e_a-e_g, t-[z^-1]_g) tau(s'-e_b+e_g, t'+[z^-1]_g)
// with t' = t + (shift spec); optionally differentiated by d/dt_{kappa,1}
// *before* t' is tied to t (kappa = 0 means no derivative).  The
// differentiated form is the independent oracle the cross-multiplied
// identity checkers are compared against.
inline AuxSeries bilinear_pairing_residue(const TauFunction& tau, const Charge& s,
                                          const Charge& sp,
                                          const std::vector<MiwaShiftSpec>& shifts,
                                          int alpha, int beta, int kappa = 0) {
    if (static_cast<int>(sp.size()) != tau.n() || !zero_sum(sp))
        throw BadParams("second charge must be zero-sum of matching length");
    if (shifts.size() > 2) throw BadParams("at most two Miwa shifts are supported");
    for (const MiwaShiftSpec& a : shifts) {
        if (a.var == Aux::Z) throw BadParams("shift variable conflicts with the pairing");
        for (const MiwaShiftSpec& b : shifts)
            if (&a != &b && a.var == b.var) throw BadParams("shift variables must differ");
    }
    int d = tau.cutoff();
    AuxSeries total(d);
    for (int g = 1; g <= tau.n(); ++g) {
        int pow = s[g - 1] - sp[g - 1] + (alpha == g ? 1 : 0) + (beta == g ? 1 : 0) - 2;
        // tau(s + e_alpha - e_gamma, t - [z^-1]_gamma), differentiated if
        // requested; the derivative acts on the t slot only.
        AuxSeries left = tau.miwa(shift_charge(s, alpha, g), g, -1, Aux::Z);
        if (kappa != 0) {
            AuxSeries dleft = left.derive(TimeVar{kappa, 1});
            // the exponential factor contributes delta_{gamma kappa} z.
            if (g == kappa) dleft += left.shifted(Aux::Z, 1);
            left = std::move(dleft);
        }
        AuxSeries right =
            detail::tau_with_shifts(tau, shift_charge(sp, g, beta), shifts, g, 1, Aux::Z);
        AuxSeries term = left * right;
        // e^(xi(t_gamma - t'_gamma, z)): each spec shift with component
        // gamma contributes (1 - z/v)^(sign).
        for (const MiwaShiftSpec& a : shifts) {
            if (a.gamma != g) continue;
            if (a.sign < 0) {
                // geometric ceiling deep enough that the residue slot stays
                // inside the trusted window of the product
                int need = 2 * (d + 1) + std::max(0, -pow) + 2;
                term = term * AuxSeries::geometric(Aux::Z, a.var, need, d);
            } else {
                AuxSeries lin = AuxSeries::constant(1, d);
                lin -= AuxSeries::aux_monomial(1, Aux::Z, 1, d)
                           .shifted(a.var, -1);
                term = term * lin;
            }
        }
        term = term.shifted(Aux::Z, pow);
        total += Rational(epsilon(s, alpha, g) * epsilon(sp, beta, g)) * term;
    }
    return total.residue(Aux::Z);
}

} // namespace mckp
