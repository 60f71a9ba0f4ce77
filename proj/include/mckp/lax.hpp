#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fay.hpp"
#include "wave.hpp"

namespace mckp {

// ---------------------------------------------------------------------------
// Lax bundle: the dressed operators at a fixed charge.
//
//   L     = W D W^-1   = D + u_1 D^-1 + u_2 D^-2 + ...
//   R_a   = W E_a W^-1 = E_a + u_{a,1} D^-1 + ...
//
// where W is the dressing operator assembled from the reduced wave matrix
// and E_a is the diagonal unit on component a.  The trusted band depth is
// inherited from the dressing (tau window and the requested cap).
// ---------------------------------------------------------------------------
struct LaxBundle {
    Charge s;
    MatrixPsdo W;    // dressing operator 1 + w_1 D^-1 + ...
    MatrixPsdo Winv; // its band-truncated inverse
    MatrixPsdo L;
    std::vector<MatrixPsdo> R; // R[a-1] for component a
};

inline LaxBundle build_lax(const TauFunction& tau, const Charge& s, int band_cap) {
    LaxBundle b;
    b.s = s;
    b.W = sato_dressing(tau, s, band_cap);
    b.Winv = b.W.inverted_unit();
    b.L = b.W * MatrixPsdo::dee(1, tau.n(), tau.cutoff()) * b.Winv;
    b.R.reserve(static_cast<size_t>(tau.n()));
    for (int a = 1; a <= tau.n(); ++a)
        b.R.push_back(b.W * MatrixPsdo::unit_projector(a, tau.n(), tau.cutoff()) * b.Winv);
    return b;
}

namespace detail {

// Classify a checker body that returns an operator residual.
inline IdentityReport run_op_residual(std::string name,
                                      const std::function<MatrixPsdo()>& body) {
    IdentityReport r;
    r.name = std::move(name);
    try {
        MatrixPsdo e = body();
        if (e.trusted_zero()) {
            r.status = CheckStatus::Pass;
        } else {
            r.status = CheckStatus::Fail;
            std::vector<BandTerm> bad = e.discrepancies(kDiscrepancyCap);
            if (!bad.empty()) r.note = "first at " + to_string(bad.front());
            for (const BandTerm& t : bad) r.discrepancies.push_back(t.term);
        }
    } catch (const OutsideWindow& ex) {
        r.status = CheckStatus::SkippedOutsideWindow;
        r.note = ex.what();
    } catch (const Error& ex) {
        r.status = CheckStatus::Error;
        r.note = ex.what();
    }
    return r;
}

// Classify a checker body that returns a wave-matrix residual.
inline IdentityReport run_wave_residual(std::string name,
                                        const std::function<WaveMatrix()>& body) {
    IdentityReport r;
    r.name = std::move(name);
    try {
        WaveMatrix e = body();
        if (e.trusted_zero()) {
            r.status = CheckStatus::Pass;
        } else {
            r.status = CheckStatus::Fail;
            std::vector<BandTerm> bad = e.discrepancies(kDiscrepancyCap);
            if (!bad.empty())
                r.note = "first at entry (" + std::to_string(bad.front().row) + "," +
                         std::to_string(bad.front().col) + ")";
            for (const BandTerm& t : bad) r.discrepancies.push_back(t.term);
        }
    } catch (const OutsideWindow& ex) {
        r.status = CheckStatus::SkippedOutsideWindow;
        r.note = ex.what();
    } catch (const Error& ex) {
        r.status = CheckStatus::Error;
        r.note = ex.what();
    }
    return r;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Algebraic relations of the dressed operators:
//   L R_a = R_a L,   R_a R_b = delta_ab R_a,   sum_a R_a = 1.
// ---------------------------------------------------------------------------
inline IdentityReport check_algebra(const LaxBundle& b) {
    return detail::run_op_residual("operator-algebra", [&] {
        int n = static_cast<int>(b.R.size());
        int d = b.L.cutoff();
        MatrixPsdo total(n, d);
        MatrixPsdo sum = MatrixPsdo::identity(n, d);
        sum = -sum;
        for (int a = 0; a < n; ++a) {
            total += commutator(b.L, b.R[a]);
            sum += b.R[a];
            for (int c = 0; c < n; ++c) {
                MatrixPsdo prod = b.R[a] * b.R[c];
                if (a == c) prod -= b.R[a];
                if (!prod.trusted_zero()) return prod;
            }
        }
        if (!total.trusted_zero()) return total;
        return sum;
    });
}

inline IdentityReport check_algebra(const TauFunction& tau, const Charge& s, int band_cap) {
    IdentityReport r;
    try {
        LaxBundle b = build_lax(tau, s, band_cap);
        return check_algebra(b);
    } catch (const OutsideWindow& ex) {
        r.name = "operator-algebra";
        r.status = CheckStatus::SkippedOutsideWindow;
        r.note = ex.what();
    } catch (const Error& ex) {
        r.name = "operator-algebra";
        r.status = CheckStatus::Error;
        r.note = ex.what();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Generator of the time flows: B_{a,j} = (L^j R_a)_+ = (W E_a D^j W^-1)_+.
// Both constructions are evaluated and must agree on the trusted band; a
// disagreement signals an internal band/trust bug, not a property of tau.
// ---------------------------------------------------------------------------
inline MatrixPsdo build_B(const LaxBundle& b, int alpha, int j) {
    if (j < 1) throw BadParams("flow index j must be >= 1");
    int n = static_cast<int>(b.R.size());
    int d = b.L.cutoff();
    if (alpha < 1 || alpha > n) throw IndexOutOfRange("flow component out of range");
    MatrixPsdo via_lax = (b.L.power(j) * b.R[static_cast<size_t>(alpha) - 1]).plus_part();
    MatrixPsdo via_dressing = (b.W * MatrixPsdo::unit_projector(alpha, n, d) *
                               MatrixPsdo::dee(j, n, d) * b.Winv)
                                  .plus_part();
    if (!(via_lax - via_dressing).trusted_zero())
        throw InternalMismatch("the two constructions of the flow generator disagree "
                               "within the trusted band");
    return via_dressing;
}

// ---------------------------------------------------------------------------
// First-order matrix blocks of the lambda Miwa-shift linear equation
//   (1 - S_a(lambda)) Psi = (B E_a + E_a C) Psi,
// where S_a(lambda) shifts every time argument t_{a,j} by lambda^-j / j.
//
//   B_kk = lambda^-1 D - lambda^-1 d_{t_k1} log psihat_kk(lambda),
//   B_bk = -eps_bk(s) [tau(s)/tau(s+e_k-e_b)] d_{t_b1} log psihat_kk(lambda),
//   C_bk = -lambda^-1 eps_bk(s) tau(s+e_b-e_k)/tau(s)   (zero diagonal),
//
// with psihat_kk(lambda) = tau(s, t - [lambda^-1]_k) / tau(s, t) the reduced
// diagonal wave entry at spectral value lambda.
// ---------------------------------------------------------------------------
inline MatrixPsdo lambda_op_b(const TauFunction& tau, const Charge& s,
                              Aux lambda = Aux::Lambda) {
    int n = tau.n();
    int d = tau.cutoff();
    MatrixPsdo B(n, d);
    AuxSeries inv0 = AuxSeries::from_series(tau.at(s).invert());
    for (int k = 1; k <= n; ++k) {
        AuxSeries ph = tau.miwa(s, k, -1, lambda) * inv0;
        AuxSeries phinv = ph.inverted_unit();
        B.set_entry(1, k - 1, k - 1, AuxSeries::aux_monomial(1, lambda, -1, d));
        AuxSeries dlog = ph.derive(TimeVar{k, 1}) * phinv;
        B.set_entry(0, k - 1, k - 1, -dlog.shifted(lambda, -1));
        for (int b = 1; b <= n; ++b) {
            if (b == k) continue;
            AuxSeries ratio = AuxSeries::from_series(tau.at(s)) *
                              AuxSeries::from_series(tau.at(shift_charge(s, k, b)).invert());
            AuxSeries dlb = ph.derive(TimeVar{b, 1}) * phinv;
            B.set_entry(0, b - 1, k - 1, Rational(-epsilon(s, b, k)) * ratio * dlb);
        }
    }
    return B;
}

inline MatrixPsdo lambda_op_c(const TauFunction& tau, const Charge& s,
                              Aux lambda = Aux::Lambda) {
    int n = tau.n();
    int d = tau.cutoff();
    MatrixPsdo C(n, d);
    AuxSeries inv0 = AuxSeries::from_series(tau.at(s).invert());
    for (int k = 1; k <= n; ++k)
        for (int b = 1; b <= n; ++b) {
            if (b == k) continue;
            AuxSeries ratio = AuxSeries::from_series(tau.at(shift_charge(s, b, k))) * inv0;
            C.set_entry(0, b - 1, k - 1,
                        (Rational(-epsilon(s, b, k)) * ratio).shifted(lambda, -1));
        }
    return C;
}

inline MatrixPsdo lambda_op(const TauFunction& tau, const Charge& s, int alpha,
                            Aux lambda = Aux::Lambda) {
    int n = tau.n();
    int d = tau.cutoff();
    MatrixPsdo ea = MatrixPsdo::unit_projector(alpha, n, d);
    return lambda_op_b(tau, s, lambda) * ea + ea * lambda_op_c(tau, s, lambda);
}

// Reduced wave matrix with all tau time arguments shifted by the lambda Miwa
// shift on component alpha; column alpha picks up the extra (1 - z/lambda)
// factor from the exponential prefactor.
inline WaveMatrix lambda_shifted_wave(const TauFunction& tau, const Charge& s, int alpha,
                                      Aux lambda = Aux::Lambda, Aux z = Aux::Z) {
    WaveMatrix w(tau.n(), tau.cutoff(), s);
    AuxSeries denom_inv = tau.miwa(s, alpha, -1, lambda).inverted_unit();
    AuxSeries col_factor = AuxSeries::constant(1, tau.cutoff()) -
                           AuxSeries::aux_monomial(1, z, 1, tau.cutoff()).shifted(lambda, -1);
    for (int a = 1; a <= tau.n(); ++a)
        for (int b = 1; b <= tau.n(); ++b) {
            AuxSeries num = tau.miwa(shift_charge(s, a, b), b, -1, z);
            num = miwa_shift(num, alpha, -1, lambda);
            AuxSeries x = Rational(epsilon(s, a, b)) * num * denom_inv;
            x = x.shifted(z, a == b ? 0 : -1);
            if (b == alpha) x = x * col_factor;
            w.at(a, b) = std::move(x);
        }
    return w;
}

// The lambda Miwa-shift linear equation for the wave matrix.
inline IdentityReport check_wave_lambda(const TauFunction& tau, const Charge& s, int alpha) {
    return detail::run_wave_residual("wave-lambda-shift", [&] {
        WaveMatrix psi = wave_matrix(tau, s);
        WaveMatrix shifted = lambda_shifted_wave(tau, s, alpha);
        WaveMatrix rhs = apply_to_wave(lambda_op(tau, s, alpha), psi);
        WaveMatrix lhs = psi - shifted;
        return lhs - rhs;
    });
}

// ---------------------------------------------------------------------------
// Time evolution of the wave matrix: d Psi / d t_{a,j} = B_{a,j} Psi.  The
// left side differentiates the reduced wave; column a gains the z^j term
// contributed by the exponential prefactor.
// ---------------------------------------------------------------------------
inline IdentityReport check_wave_time(const TauFunction& tau, const LaxBundle& bun,
                                      int alpha, int j) {
    return detail::run_wave_residual("wave-time-evolution", [&] {
        MatrixPsdo B = build_B(bun, alpha, j);
        WaveMatrix psi = wave_matrix(tau, bun.s);
        WaveMatrix lhs(psi.n, psi.cutoff, psi.s);
        for (int a = 1; a <= psi.n; ++a)
            for (int b = 1; b <= psi.n; ++b) {
                lhs.at(a, b) = psi.at(a, b).derive(TimeVar{alpha, j});
                if (b == alpha) lhs.at(a, b) += psi.at(a, b).shifted(Aux::Z, j);
            }
        return lhs - apply_to_wave(B, psi);
    });
}

inline IdentityReport check_wave_time(const TauFunction& tau, const Charge& s, int alpha,
                                      int j, int band_cap) {
    try {
        return check_wave_time(tau, build_lax(tau, s, band_cap), alpha, j);
    } catch (const OutsideWindow& ex) {
        IdentityReport r;
        r.name = "wave-time-evolution";
        r.status = CheckStatus::SkippedOutsideWindow;
        r.note = ex.what();
        return r;
    }
}

// ---------------------------------------------------------------------------
// Sato equation: dW/dt_{a,j} W^-1 = -(W E_a D^j W^-1)_-.
// ---------------------------------------------------------------------------
inline IdentityReport check_sato(const LaxBundle& b, int alpha, int j) {
    return detail::run_op_residual("sato", [&] {
        int n = static_cast<int>(b.R.size());
        int d = b.L.cutoff();
        MatrixPsdo conj = b.W * MatrixPsdo::unit_projector(alpha, n, d) *
                          MatrixPsdo::dee(j, n, d) * b.Winv;
        return b.W.derive(TimeVar{alpha, j}) * b.Winv + conj.minus_part();
    });
}

inline IdentityReport check_sato(const TauFunction& tau, const Charge& s, int alpha, int j,
                                 int band_cap) {
    try {
        return check_sato(build_lax(tau, s, band_cap), alpha, j);
    } catch (const OutsideWindow& ex) {
        IdentityReport r;
        r.name = "sato";
        r.status = CheckStatus::SkippedOutsideWindow;
        r.note = ex.what();
        return r;
    }
}

// ---------------------------------------------------------------------------
// Charge-shift operator P of the charge-sector linear equation
//   Psi(s + e_a - e_b) = P Psi(s) = (E_a D + G) Psi(s),
//   G = H(s + e_a - e_b) E_a - E_a H(s) + sum_{g != a,b} E_g,
// with H diagonal -d_{t_k1} log tau(s,t), off-diagonal
// eps_{lk}(s) tau(s + e_l - e_k)/tau(s).
// ---------------------------------------------------------------------------
inline MatrixPsdo charge_shift_h(const TauFunction& tau, const Charge& s) {
    int n = tau.n();
    int d = tau.cutoff();
    MatrixPsdo H(n, d);
    AuxSeries inv0 = AuxSeries::from_series(tau.at(s).invert());
    for (int l = 1; l <= n; ++l)
        for (int k = 1; k <= n; ++k) {
            if (l == k) {
                H.set_entry(0, l - 1, k - 1, -AuxSeries::from_series(tau.dlog_t1(s, k)));
            } else {
                AuxSeries ratio = AuxSeries::from_series(tau.at(shift_charge(s, l, k))) * inv0;
                H.set_entry(0, l - 1, k - 1, Rational(epsilon(s, l, k)) * ratio);
            }
        }
    return H;
}

inline MatrixPsdo build_charge_shift(const TauFunction& tau, const Charge& s, int alpha,
                                     int beta) {
    detail::require_distinct({alpha, beta});
    int n = tau.n();
    int d = tau.cutoff();
    MatrixPsdo ea = MatrixPsdo::unit_projector(alpha, n, d);
    MatrixPsdo G = charge_shift_h(tau, shift_charge(s, alpha, beta)) * ea -
                   ea * charge_shift_h(tau, s);
    for (int g = 1; g <= n; ++g)
        if (g != alpha && g != beta) G += MatrixPsdo::unit_projector(g, n, d);
    MatrixPsdo P = ea * MatrixPsdo::dee(1, n, d);
    P += G;
    return P;
}

// Charge-sector linear equation for the wave matrix.  Both sides are reduced
// against the column prefactors at the base charge; columns alpha and beta of
// the shifted wave carry different spectral powers, compensated by shifts.
inline IdentityReport check_wave_charge(const TauFunction& tau, const Charge& s, int alpha,
                                        int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_wave_residual("wave-charge-shift", [&] {
        WaveMatrix lhs = wave_matrix(tau, shift_charge(s, alpha, beta));
        WaveMatrix rhs = apply_to_wave(build_charge_shift(tau, s, alpha, beta),
                                       wave_matrix(tau, s));
        for (int a = 1; a <= tau.n(); ++a) {
            lhs.at(a, alpha) = lhs.at(a, alpha).shifted(Aux::Z, 1);
            lhs.at(a, beta) = lhs.at(a, beta).shifted(Aux::Z, -1);
        }
        return lhs - rhs;
    });
}

// ---------------------------------------------------------------------------
// The five Lax-equation families.  Operator time-derivatives act
// coefficientwise on the banded representation.
// ---------------------------------------------------------------------------

// (a) dL/dt_{g,j} = [B_{g,j}, L].
inline IdentityReport check_lax_time_l(const LaxBundle& b, int gamma, int j) {
    return detail::run_op_residual("lax-time-l", [&] {
        return b.L.derive(TimeVar{gamma, j}) - commutator(build_B(b, gamma, j), b.L);
    });
}

inline IdentityReport check_lax_time_l(const TauFunction& tau, const Charge& s, int gamma,
                                       int j, int band_cap) {
    return detail::run_op_residual("lax-time-l", [&] {
        LaxBundle b = build_lax(tau, s, band_cap);
        return b.L.derive(TimeVar{gamma, j}) - commutator(build_B(b, gamma, j), b.L);
    });
}

// (b) dR_b/dt_{g,j} = [B_{g,j}, R_b].
inline IdentityReport check_lax_time_r(const LaxBundle& b, int beta, int gamma, int j) {
    return detail::run_op_residual("lax-time-r", [&] {
        const MatrixPsdo& R = b.R[static_cast<size_t>(beta) - 1];
        return R.derive(TimeVar{gamma, j}) - commutator(build_B(b, gamma, j), R);
    });
}

inline IdentityReport check_lax_time_r(const TauFunction& tau, const Charge& s, int beta,
                                       int gamma, int j, int band_cap) {
    return detail::run_op_residual("lax-time-r", [&] {
        LaxBundle b = build_lax(tau, s, band_cap);
        const MatrixPsdo& R = b.R[static_cast<size_t>(beta) - 1];
        return R.derive(TimeVar{gamma, j}) - commutator(build_B(b, gamma, j), R);
    });
}

// (c) L(s + e_a - e_b) P = P L(s).
inline IdentityReport check_lax_charge_l(const LaxBundle& at_s, const LaxBundle& at_sp,
                                         const MatrixPsdo& P) {
    return detail::run_op_residual("lax-charge-l",
                                   [&] { return at_sp.L * P - P * at_s.L; });
}

inline IdentityReport check_lax_charge_l(const TauFunction& tau, const Charge& s, int alpha,
                                         int beta, int band_cap) {
    return detail::run_op_residual("lax-charge-l", [&] {
        MatrixPsdo P = build_charge_shift(tau, s, alpha, beta);
        LaxBundle at_s = build_lax(tau, s, band_cap);
        LaxBundle at_sp = build_lax(tau, shift_charge(s, alpha, beta), band_cap);
        return at_sp.L * P - P * at_s.L;
    });
}

// (d) R_g(s + e_a - e_b) P = P R_g(s).
inline IdentityReport check_lax_charge_r(const LaxBundle& at_s, const LaxBundle& at_sp,
                                         const MatrixPsdo& P, int gamma) {
    return detail::run_op_residual("lax-charge-r", [&] {
        return at_sp.R[static_cast<size_t>(gamma) - 1] * P -
               P * at_s.R[static_cast<size_t>(gamma) - 1];
    });
}

inline IdentityReport check_lax_charge_r(const TauFunction& tau, const Charge& s, int gamma,
                                         int alpha, int beta, int band_cap) {
    return detail::run_op_residual("lax-charge-r", [&] {
        MatrixPsdo P = build_charge_shift(tau, s, alpha, beta);
        LaxBundle at_s = build_lax(tau, s, band_cap);
        LaxBundle at_sp = build_lax(tau, shift_charge(s, alpha, beta), band_cap);
        return at_sp.R[static_cast<size_t>(gamma) - 1] * P -
               P * at_s.R[static_cast<size_t>(gamma) - 1];
    });
}

// (e) dP/dt_{g,j} = B_{g,j}(s + e_a - e_b) P - P B_{g,j}(s).
inline IdentityReport check_lax_time_p(const LaxBundle& at_s, const LaxBundle& at_sp,
                                       const MatrixPsdo& P, int gamma, int j) {
    return detail::run_op_residual("lax-time-p", [&] {
        return P.derive(TimeVar{gamma, j}) -
               (build_B(at_sp, gamma, j) * P - P * build_B(at_s, gamma, j));
    });
}

inline IdentityReport check_lax_time_p(const TauFunction& tau, const Charge& s, int alpha,
                                       int beta, int gamma, int j, int band_cap) {
    return detail::run_op_residual("lax-time-p", [&] {
        MatrixPsdo P = build_charge_shift(tau, s, alpha, beta);
        LaxBundle at_s = build_lax(tau, s, band_cap);
        LaxBundle at_sp = build_lax(tau, shift_charge(s, alpha, beta), band_cap);
        return P.derive(TimeVar{gamma, j}) -
               (build_B(at_sp, gamma, j) * P - P * build_B(at_s, gamma, j));
    });
}

} // namespace mckp
