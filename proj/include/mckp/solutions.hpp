#pragma once

#include "tau.hpp"

namespace mckp {

// Vacuum solution: tau identically 1 at every charge in the window.
inline TauFunction vacuum_tau(int n, int jmax, int cutoff, int radius) {
    TauFunction tau(n, jmax, cutoff, radius);
    for (const Charge& s : tau.charges())
        tau.set(s, Series::constant(1, cutoff));
    return tau;
}

// One-component one-soliton solution with momenta p != q and amplitude a:
//   tau(t) = (1 + a exp(sum_j (p^j - q^j) t_j)) / (1 + a),
// normalized so tau(0) = 1.  The charge lattice of a one-component
// hierarchy is the single point s = (0).
//
// The stored jet keeps time variables with index j <= jmax only; for the
// coefficient trust model to be sound under Miwa shifts, jmax must reach
// the series cutoff.
inline TauFunction soliton_tau_n1(const Rational& p, const Rational& q, const Rational& a,
                                  int jmax, int cutoff) {
    if (p == q) throw BadParams("soliton momenta must be distinct");
    if (a == -1) throw BadParams("soliton amplitude -1 degenerates the normalization");
    if (jmax < cutoff) throw BadParams("soliton jet needs jmax >= cutoff");
    TauFunction tau(1, jmax, cutoff, 0);
    Series eta(cutoff);
    Rational pj(1), qj(1);
    for (int j = 1; j <= jmax; ++j) {
        pj *= p;
        qj *= q;
        if (j <= cutoff) eta.add_term(Monomial(TimeVar{1, j}, 1), pj - qj);
    }
    Series t = Series::constant(1, cutoff) + a * eta.exp_jet();
    tau.set(Charge{0}, (Rational(1) / (Rational(1) + a)) * t);
    return tau;
}

} // namespace mckp
