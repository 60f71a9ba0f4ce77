#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tau.hpp"
#include "wave.hpp"

namespace mckp {

// Outcome of one identity check.
enum class CheckStatus {
    Pass,
    Fail,
    SkippedInsufficientN,  // identity needs more components than the model has
    SkippedOutsideWindow,  // a shifted charge left the stored charge box
    Error,                 // unexpected failure (reported, never swallowed)
};

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::SkippedInsufficientN: return "skipped-insufficient-n";
        case CheckStatus::SkippedOutsideWindow: return "skipped-outside-window";
        case CheckStatus::Error: return "error";
    }
    return "?";
}

struct IdentityReport {
    std::string name;
    CheckStatus status = CheckStatus::Error;
    std::vector<AuxTerm> discrepancies; // capped sample when failing
    std::string note;

    bool passed() const { return status == CheckStatus::Pass; }
    bool skipped() const {
        return status == CheckStatus::SkippedInsufficientN ||
               status == CheckStatus::SkippedOutsideWindow;
    }
};

namespace detail {

inline constexpr size_t kDiscrepancyCap = 8;

// Run a checker body that returns the residual expression; classify the
// outcome.  Window violations become skips: the caller asked for an
// identity instance the stored charge box cannot serve.
inline IdentityReport run_residual(std::string name,
                                   const std::function<AuxSeries()>& body) {
    IdentityReport r;
    r.name = std::move(name);
    try {
        AuxSeries e = body();
        if (e.trusted_zero()) {
            r.status = CheckStatus::Pass;
        } else {
            r.status = CheckStatus::Fail;
            r.discrepancies = e.discrepancies(kDiscrepancyCap);
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

inline void require_distinct(std::initializer_list<int> idx) {
    for (auto i = idx.begin(); i != idx.end(); ++i)
        for (auto j = std::next(i); j != idx.end(); ++j)
            if (*i == *j) throw IndicesNotDistinct("identity indices must be distinct");
}

inline IdentityReport skipped_n(std::string name, int need, int have) {
    IdentityReport r;
    r.name = std::move(name);
    r.status = CheckStatus::SkippedInsufficientN;
    r.note = "needs at least " + std::to_string(need) + " components, model has " +
             std::to_string(have);
    return r;
}

inline AuxSeries tt(const TauFunction& tau, const Charge& s) {
    return AuxSeries::from_series(tau.at(s));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Differential Fay identities.  All checkers verify the cross-multiplied
// polynomial form (no divisions), with mu and nu as auxiliary variables.
// ---------------------------------------------------------------------------

// Same-component identity: for any alpha,
//   {mu tau_mu + d_a1 tau_mu} tau_nu - mu tau tau_munu
// - {nu tau_nu + d_a1 tau_nu} tau_mu + nu tau tau_munu = 0
// where tau_mu = tau(s, t-[mu^-1]_a), tau_munu carries both shifts.
inline AuxSeries dfi_residual(const TauFunction& tau, const Charge& s, int alpha) {
    TimeVar d{alpha, 1};
    AuxSeries t0 = detail::tt(tau, s);
    AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
    AuxSeries tn = tau.miwa(s, alpha, -1, Aux::Nu);
    AuxSeries tmn = miwa_shift(tm, alpha, -1, Aux::Nu);
    return (tm.shifted(Aux::Mu, 1) + tm.derive(d)) * tn -
           (t0 * tmn).shifted(Aux::Mu, 1) -
           (tn.shifted(Aux::Nu, 1) + tn.derive(d)) * tm +
           (t0 * tmn).shifted(Aux::Nu, 1);
}

inline IdentityReport check_dfi(const TauFunction& tau, const Charge& s, int alpha) {
    return detail::run_residual("dfi", [&] { return dfi_residual(tau, s, alpha); });
}

// Cross-derivative identity: for distinct alpha, beta,
//   (d_b1 tau_mu · tau_nu - d_b1 tau_nu · tau_mu)
// + (mu^-1 - nu^-1) tau(s+e_a-e_b, t) tau(s-e_a+e_b, t-[mu^-1]_a-[nu^-1]_a) = 0.
inline AuxSeries dfii_residual(const TauFunction& tau, const Charge& s, int alpha,
                               int beta) {
    TimeVar d{beta, 1};
    AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
    AuxSeries tn = tau.miwa(s, alpha, -1, Aux::Nu);
    AuxSeries cross =
        detail::tt(tau, shift_charge(s, alpha, beta)) *
        miwa_shift(tau.miwa(shift_charge(s, beta, alpha), alpha, -1, Aux::Mu), alpha, -1,
                   Aux::Nu);
    return tm.derive(d) * tn - tn.derive(d) * tm + cross.shifted(Aux::Mu, -1) -
           cross.shifted(Aux::Nu, -1);
}

inline IdentityReport check_dfii(const TauFunction& tau, const Charge& s, int alpha,
                                 int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("dfii",
                                [&] { return dfii_residual(tau, s, alpha, beta); });
}

// Mixed-component identity: for distinct alpha, beta,
//   {mu tau_mu + d_a1 tau_mu} tau'_nu - mu tau tau'_munu - d_a1 tau'_nu · tau_mu = 0
// with tau' at charge s+e_a-e_b and its nu-shift at component beta.
inline AuxSeries dfiii_residual(const TauFunction& tau, const Charge& s, int alpha,
                                int beta) {
    TimeVar d{alpha, 1};
    Charge sp = shift_charge(s, alpha, beta);
    AuxSeries t0 = detail::tt(tau, s);
    AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
    AuxSeries tpn = tau.miwa(sp, beta, -1, Aux::Nu);
    AuxSeries tpmn = miwa_shift(tau.miwa(sp, alpha, -1, Aux::Mu), beta, -1, Aux::Nu);
    return (tm.shifted(Aux::Mu, 1) + tm.derive(d)) * tpn -
           (t0 * tpmn).shifted(Aux::Mu, 1) - tpn.derive(d) * tm;
}

inline IdentityReport check_dfiii(const TauFunction& tau, const Charge& s, int alpha,
                                  int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("dfiii",
                                [&] { return dfiii_residual(tau, s, alpha, beta); });
}

// Spectator-derivative identity: for distinct alpha, beta, kappa,
//   d_k1 tau_mu · tau'_nu - d_k1 tau'_nu · tau_mu
// + (eps_ak eps_bk / eps_ba)(s) tau(s+e_a-e_k, t) tau(s-e_b+e_k, t-[mu]_a-[nu]_b) = 0.
inline AuxSeries dfiv_residual(const TauFunction& tau, const Charge& s, int alpha,
                               int beta, int kappa) {
    TimeVar d{kappa, 1};
    Charge sp = shift_charge(s, alpha, beta);
    AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
    AuxSeries tpn = tau.miwa(sp, beta, -1, Aux::Nu);
    Rational pref(epsilon(s, alpha, kappa) * epsilon(s, beta, kappa) *
                  epsilon(s, beta, alpha));
    AuxSeries cross =
        detail::tt(tau, shift_charge(s, alpha, kappa)) *
        miwa_shift(tau.miwa(shift_charge(s, kappa, beta), alpha, -1, Aux::Mu), beta, -1,
                   Aux::Nu);
    return tm.derive(d) * tpn - tpn.derive(d) * tm + pref * cross;
}

inline IdentityReport check_dfiv(const TauFunction& tau, const Charge& s, int alpha,
                                 int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("dfiv", 3, tau.n());
    return detail::run_residual("dfiv",
                                [&] { return dfiv_residual(tau, s, alpha, beta, kappa); });
}

// ---------------------------------------------------------------------------
// Difference Fay identities: polynomial three-term sums with one aux
// variable.
// ---------------------------------------------------------------------------

// Four distinct components alpha, beta, lambda, kappa:
//   eps_ba(s+e_l-e_k) tau(s,t) tau(s+e_l-e_k-e_b+e_a, t-[mu]_k)
// + eps_ab(s) tau(s+e_a-e_b, t) tau(s+e_l-e_k, t-[mu]_k)
// + eps_ak(s) eps_bk(s+e_l-e_k) tau(s+e_a-e_k, t-[mu]_k) tau(s+e_l-e_b, t) = 0.
inline AuxSeries cfi_residual(const TauFunction& tau, const Charge& s, int alpha,
                              int beta, int lambda, int kappa) {
    Charge slk = shift_charge(s, lambda, kappa);
    return Rational(epsilon(slk, beta, alpha)) * detail::tt(tau, s) *
               tau.miwa(shift_charge(slk, alpha, beta), kappa, -1, Aux::Mu) +
           Rational(epsilon(s, alpha, beta)) *
               detail::tt(tau, shift_charge(s, alpha, beta)) *
               tau.miwa(slk, kappa, -1, Aux::Mu) +
           Rational(epsilon(s, alpha, kappa) * epsilon(slk, beta, kappa)) *
               tau.miwa(shift_charge(s, alpha, kappa), kappa, -1, Aux::Mu) *
               detail::tt(tau, shift_charge(s, lambda, beta));
}

inline IdentityReport check_cfi(const TauFunction& tau, const Charge& s, int alpha,
                                int beta, int lambda, int kappa) {
    detail::require_distinct({alpha, beta, lambda, kappa});
    if (tau.n() < 4) return detail::skipped_n("cfi", 4, tau.n());
    return detail::run_residual(
        "cfi", [&] { return cfi_residual(tau, s, alpha, beta, lambda, kappa); });
}

// Three distinct components alpha, beta, lambda:
//   eps_ba(s) tau(s,t) tau(s-e_b+e_a, t-[mu]_l)
// + eps_ab(s) tau(s+e_a-e_b, t) tau(s, t-[mu]_l)
// + eps_al(s) eps_bl(s) mu^-1 tau(s+e_a-e_l, t-[mu]_l) tau(s-e_b+e_l, t) = 0.
inline AuxSeries cfii_residual(const TauFunction& tau, const Charge& s, int alpha,
                               int beta, int lambda) {
    return Rational(epsilon(s, beta, alpha)) * detail::tt(tau, s) *
               tau.miwa(shift_charge(s, alpha, beta), lambda, -1, Aux::Mu) +
           Rational(epsilon(s, alpha, beta)) *
               detail::tt(tau, shift_charge(s, alpha, beta)) *
               tau.miwa(s, lambda, -1, Aux::Mu) +
           (Rational(epsilon(s, alpha, lambda) * epsilon(s, beta, lambda)) *
            tau.miwa(shift_charge(s, alpha, lambda), lambda, -1, Aux::Mu) *
            detail::tt(tau, shift_charge(s, lambda, beta)))
               .shifted(Aux::Mu, -1);
}

inline IdentityReport check_cfii(const TauFunction& tau, const Charge& s, int alpha,
                                 int beta, int lambda) {
    detail::require_distinct({alpha, beta, lambda});
    if (tau.n() < 3) return detail::skipped_n("cfii", 3, tau.n());
    return detail::run_residual("cfii",
                                [&] { return cfii_residual(tau, s, alpha, beta, lambda); });
}

// ---------------------------------------------------------------------------
// Degenerations of the differential Fay identities as one spectral
// parameter is sent to infinity.  Single aux variable, cross-multiplied.
// ---------------------------------------------------------------------------

// From dfii:  mu (d_b1 tau_mu · tau - d_b1 tau · tau_mu)
//           + tau(s+e_a-e_b, t) tau(s-e_a+e_b, t-[mu]_a) = 0.
inline IdentityReport check_limit_dfii(const TauFunction& tau, const Charge& s, int alpha,
                                       int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("limit-dfii", [&] {
        TimeVar d{beta, 1};
        AuxSeries t0 = detail::tt(tau, s);
        AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
        AuxSeries e = (tm.derive(d) * t0 - t0.derive(d) * tm).shifted(Aux::Mu, 1) +
                      detail::tt(tau, shift_charge(s, alpha, beta)) *
                          tau.miwa(shift_charge(s, beta, alpha), alpha, -1, Aux::Mu);
        return e;
    });
}

// From dfiii:  d_a1 tau' · tau_mu - d_a1 tau_mu · tau'
//            - mu tau_mu tau' + mu tau tau'_mu = 0
// with tau' at charge s+e_a-e_b evaluated at unshifted times.
inline IdentityReport check_limit_dfiii(const TauFunction& tau, const Charge& s, int alpha,
                                        int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("limit-dfiii", [&] {
        TimeVar d{alpha, 1};
        Charge sp = shift_charge(s, alpha, beta);
        AuxSeries t0 = detail::tt(tau, s);
        AuxSeries tp = detail::tt(tau, sp);
        AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
        AuxSeries tpm = tau.miwa(sp, alpha, -1, Aux::Mu);
        AuxSeries e = tp.derive(d) * tm - tm.derive(d) * tp -
                      (tm * tp).shifted(Aux::Mu, 1) + (t0 * tpm).shifted(Aux::Mu, 1);
        return e;
    });
}

// From dfiv, nu to infinity (mu survives at component alpha):
//   d_k1 tau_mu · tau' - d_k1 tau' · tau_mu
// + (eps_ak eps_bk / eps_ba)(s) tau(s+e_a-e_k, t) tau(s-e_b+e_k, t-[mu]_a) = 0.
inline IdentityReport check_limit_dfiv_mu(const TauFunction& tau, const Charge& s,
                                          int alpha, int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("limit-dfiv-mu", 3, tau.n());
    return detail::run_residual("limit-dfiv-mu", [&] {
        TimeVar d{kappa, 1};
        AuxSeries tp = detail::tt(tau, shift_charge(s, alpha, beta));
        AuxSeries tm = tau.miwa(s, alpha, -1, Aux::Mu);
        Rational pref(epsilon(s, alpha, kappa) * epsilon(s, beta, kappa) *
                      epsilon(s, beta, alpha));
        AuxSeries e = tm.derive(d) * tp - tp.derive(d) * tm +
                      pref * detail::tt(tau, shift_charge(s, alpha, kappa)) *
                          tau.miwa(shift_charge(s, kappa, beta), alpha, -1, Aux::Mu);
        return e;
    });
}

// From dfiv, mu to infinity (nu survives at component beta):
//   d_k1 tau · tau'_nu - d_k1 tau'_nu · tau
// + (eps_ak eps_bk / eps_ba)(s) tau(s+e_a-e_k, t) tau(s-e_b+e_k, t-[nu]_b) = 0.
inline IdentityReport check_limit_dfiv_nu(const TauFunction& tau, const Charge& s,
                                          int alpha, int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("limit-dfiv-nu", 3, tau.n());
    return detail::run_residual("limit-dfiv-nu", [&] {
        TimeVar d{kappa, 1};
        AuxSeries t0 = detail::tt(tau, s);
        AuxSeries tpn = tau.miwa(shift_charge(s, alpha, beta), beta, -1, Aux::Nu);
        Rational pref(epsilon(s, alpha, kappa) * epsilon(s, beta, kappa) *
                      epsilon(s, beta, alpha));
        AuxSeries e = t0.derive(d) * tpn - tpn.derive(d) * t0 +
                      pref * detail::tt(tau, shift_charge(s, alpha, kappa)) *
                          tau.miwa(shift_charge(s, kappa, beta), beta, -1, Aux::Nu);
        return e;
    });
}

// Double degeneration (both parameters to infinity): a purely polynomial
// relation between neighboring charges,
//   d_k1 tau · tau' - d_k1 tau' · tau
// + (eps_ak eps_bk / eps_ba)(s) tau(s+e_a-e_k, t) tau(s-e_b+e_k, t) = 0.
inline IdentityReport check_limit_dfiv_double(const TauFunction& tau, const Charge& s,
                                              int alpha, int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("limit-dfiv-double", 3, tau.n());
    return detail::run_residual("limit-dfiv-double", [&] {
        TimeVar d{kappa, 1};
        AuxSeries t0 = detail::tt(tau, s);
        AuxSeries tp = detail::tt(tau, shift_charge(s, alpha, beta));
        Rational pref(epsilon(s, alpha, kappa) * epsilon(s, beta, kappa) *
                      epsilon(s, beta, alpha));
        AuxSeries e = t0.derive(d) * tp - tp.derive(d) * t0 +
                      pref * detail::tt(tau, shift_charge(s, alpha, kappa)) *
                          detail::tt(tau, shift_charge(s, kappa, beta));
        return e;
    });
}

// Consistency of the degeneration tower: the nu-constant slot of the
// single-parameter residual is exactly the double-degeneration residual.
inline IdentityReport check_limit_tower(const TauFunction& tau, const Charge& s, int alpha,
                                        int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("limit-tower", 3, tau.n());
    return detail::run_residual("limit-tower", [&] {
        TimeVar d{kappa, 1};
        AuxSeries t0 = detail::tt(tau, s);
        AuxSeries tpn = tau.miwa(shift_charge(s, alpha, beta), beta, -1, Aux::Nu);
        Rational pref(epsilon(s, alpha, kappa) * epsilon(s, beta, kappa) *
                      epsilon(s, beta, alpha));
        AuxSeries single = t0.derive(d) * tpn - tpn.derive(d) * t0 +
                           pref * detail::tt(tau, shift_charge(s, alpha, kappa)) *
                               tau.miwa(shift_charge(s, kappa, beta), beta, -1, Aux::Nu);
        AuxSeries tp = detail::tt(tau, shift_charge(s, alpha, beta));
        AuxSeries dbl = t0.derive(d) * tp - tp.derive(d) * t0 +
                        pref * detail::tt(tau, shift_charge(s, alpha, kappa)) *
                            detail::tt(tau, shift_charge(s, kappa, beta));
        return single.coeff_at(Aux::Nu, 0) - dbl;
    });
}

// ---------------------------------------------------------------------------
// Difference Fay identities re-derived from the differential ones: every
// analytic ingredient of the derivation is verified separately.  The
// remaining assembly steps are rational-function tautologies (factoring a
// common tau product out of the three-term sum and telescoping the
// log-derivative differences), which hold in any commutative ring and need
// no jets.
// ---------------------------------------------------------------------------

// Chain for the three-component difference identity at (alpha, beta,
// lambda): the degenerations entering the proof, the sign cancellation they
// rely on, and the conclusion itself.
inline std::vector<IdentityReport> derive_cfii_from_df(const TauFunction& tau,
                                                       const Charge& s, int alpha,
                                                       int beta, int lambda) {
    detail::require_distinct({alpha, beta, lambda});
    std::vector<IdentityReport> out;
    if (tau.n() < 3) {
        out.push_back(detail::skipped_n("cfii-from-df", 3, tau.n()));
        return out;
    }
    // Degeneration with the shift at component lambda and the derivative at
    // alpha (substituted instance of limit-dfiv-mu).
    IdentityReport s1 = check_limit_dfiv_mu(tau, s, lambda, beta, alpha);
    s1.name = "cfii-from-df/step1";
    out.push_back(s1);
    // Degeneration of the cross-derivative identity with indices (lambda,
    // alpha).
    IdentityReport s2 = check_limit_dfii(tau, s, lambda, alpha);
    s2.name = "cfii-from-df/step2";
    out.push_back(s2);
    // The fully degenerate relation used to rewrite the denominator.
    IdentityReport s3 = check_limit_dfiv_double(tau, s, lambda, beta, alpha);
    s3.name = "cfii-from-df/step3";
    out.push_back(s3);
    // Conclusion.
    IdentityReport s4 = check_cfii(tau, s, alpha, beta, lambda);
    s4.name = "cfii-from-df/conclusion";
    out.push_back(s4);
    return out;
}

// Chain for the four-component difference identity at (alpha, beta, lambda,
// kappa): the two substituted degenerations, the two sign facts, and the
// conclusion.
inline std::vector<IdentityReport> derive_cfi_from_df(const TauFunction& tau,
                                                      const Charge& s, int alpha,
                                                      int beta, int lambda, int kappa) {
    detail::require_distinct({alpha, beta, lambda, kappa});
    std::vector<IdentityReport> out;
    if (tau.n() < 4) {
        out.push_back(detail::skipped_n("cfi-from-df", 4, tau.n()));
        return out;
    }
    Charge slk = shift_charge(s, lambda, kappa);
    // Degeneration at the shifted charge with the roles of alpha and kappa
    // exchanged.
    IdentityReport s1 = check_limit_dfiv_mu(tau, slk, kappa, beta, alpha);
    s1.name = "cfi-from-df/step1";
    out.push_back(s1);
    // Degeneration at the shifted charge against the lambda column.
    IdentityReport s2 = check_limit_dfiv_mu(tau, slk, kappa, lambda, alpha);
    s2.name = "cfi-from-df/step2";
    out.push_back(s2);
    // The fully degenerate relation at the base charge.
    IdentityReport s3 = check_limit_dfiv_double(tau, s, lambda, beta, alpha);
    s3.name = "cfi-from-df/step3";
    out.push_back(s3);
    // Sign facts the assembly relies on.
    IdentityReport s4;
    s4.name = "cfi-from-df/signs";
    bool ok1 = epsilon(slk, kappa, alpha) * epsilon(slk, beta, kappa) ==
               epsilon(s, beta, lambda) * epsilon(s, lambda, alpha);
    bool ok2 = epsilon(s, alpha, kappa) * epsilon(slk, lambda, alpha) ==
               -epsilon(slk, lambda, kappa);
    s4.status = (ok1 && ok2) ? CheckStatus::Pass : CheckStatus::Fail;
    if (!ok1) s4.note = "sign ratio across the charge shift is not 1";
    if (!ok2) s4.note = "sign product across the charge shift is not -1";
    out.push_back(s4);
    // Conclusion.
    IdentityReport s5 = check_cfi(tau, s, alpha, beta, lambda, kappa);
    s5.name = "cfi-from-df/conclusion";
    out.push_back(s5);
    return out;
}

// ---------------------------------------------------------------------------
// Direct residue evaluation of the pairing identity, differentiated before
// the second time argument is tied: the independent oracle the
// cross-multiplied checkers are compared against.
// ---------------------------------------------------------------------------

// Oracle counterpart of check_dfi: residue of the kappa=alpha derivative of
// the pairing with s'=s and both shifts of t' at component alpha.
inline IdentityReport oracle_dfi(const TauFunction& tau, const Charge& s, int alpha) {
    return detail::run_residual("oracle-dfi", [&] {
        std::vector<MiwaShiftSpec> shifts = {{alpha, Aux::Mu, -1}, {alpha, Aux::Nu, -1}};
        return bilinear_pairing_residue(tau, s, s, shifts, alpha, alpha, alpha);
    });
}

// Oracle counterpart of check_dfii (derivative at beta, shifts at alpha).
inline IdentityReport oracle_dfii(const TauFunction& tau, const Charge& s, int alpha,
                                  int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("oracle-dfii", [&] {
        std::vector<MiwaShiftSpec> shifts = {{alpha, Aux::Mu, -1}, {alpha, Aux::Nu, -1}};
        return bilinear_pairing_residue(tau, s, s, shifts, alpha, alpha, beta);
    });
}

// Oracle counterpart of check_dfiii (derivative at alpha, shifts at alpha
// and beta, charge transfer alpha -> beta).
inline IdentityReport oracle_dfiii(const TauFunction& tau, const Charge& s, int alpha,
                                   int beta) {
    detail::require_distinct({alpha, beta});
    return detail::run_residual("oracle-dfiii", [&] {
        std::vector<MiwaShiftSpec> shifts = {{alpha, Aux::Mu, -1}, {beta, Aux::Nu, -1}};
        return bilinear_pairing_residue(tau, s, s, shifts, alpha, beta, alpha);
    });
}

// Oracle counterpart of check_dfiv (derivative at a spectator component).
inline IdentityReport oracle_dfiv(const TauFunction& tau, const Charge& s, int alpha,
                                  int beta, int kappa) {
    detail::require_distinct({alpha, beta, kappa});
    if (tau.n() < 3) return detail::skipped_n("oracle-dfiv", 3, tau.n());
    return detail::run_residual("oracle-dfiv", [&] {
        std::vector<MiwaShiftSpec> shifts = {{alpha, Aux::Mu, -1}, {beta, Aux::Nu, -1}};
        return bilinear_pairing_residue(tau, s, s, shifts, alpha, beta, kappa);
    });
}

} // namespace mckp
