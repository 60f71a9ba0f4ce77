#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mckp {

// Zero-sum integer charge vector (s_1, ..., s_n).  Component indices are
// 1-based throughout, matching the time variables.
using Charge = std::vector<int>;

inline std::string to_string(const Charge& s) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ")";
    return os.str();
}

inline void require_component(const Charge& s, int alpha) {
    if (alpha < 1 || alpha > static_cast<int>(s.size()))
        throw IndexOutOfRange("component index " + std::to_string(alpha) +
                              " out of range for n=" + std::to_string(s.size()));
}

inline bool zero_sum(const Charge& s) {
    return std::accumulate(s.begin(), s.end(), 0) == 0;
}

// s + e_alpha - e_beta.  Preserves the zero-sum property.
inline Charge shift_charge(Charge s, int alpha, int beta) {
    require_component(s, alpha);
    require_component(s, beta);
    s[alpha - 1] += 1;
    s[beta - 1] -= 1;
    return s;
}

// The sign epsilon_{alpha,gamma}(s):
//   alpha <  gamma :  (-1)^(s_{alpha+1} + ... + s_gamma)
//   alpha == gamma :  1
//   alpha >  gamma : -(-1)^(s_{gamma+1} + ... + s_alpha)
inline int epsilon(const Charge& s, int alpha, int gamma) {
    require_component(s, alpha);
    require_component(s, gamma);
    if (alpha == gamma) return 1;
    int lo = std::min(alpha, gamma), hi = std::max(alpha, gamma);
    int sum = 0;
    for (int i = lo + 1; i <= hi; ++i) sum += s[i - 1];
    int sign = (sum % 2 == 0) ? 1 : -1;
    return alpha < gamma ? sign : -sign;
}

// Enumerate all zero-sum charges with |s_i| <= radius for each component,
// in lexicographic order.  Used by window sweeps and the tau-model storage.
inline std::vector<Charge> charge_box(int n, int radius) {
    if (n < 1 || radius < 0) throw BadParams("bad charge box parameters");
    std::vector<Charge> out;
    Charge cur(static_cast<size_t>(n), -radius);
    while (true) {
        if (zero_sum(cur)) out.push_back(cur);
        int i = n - 1;
        while (i >= 0 && cur[i] == radius) cur[i--] = -radius;
        if (i < 0) break;
        ++cur[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Structural identities of the sign function.  Each returns true when the
// identity holds at the given instance; the sweep drivers below evaluate
// them exhaustively over a charge box.  The identities are exactly the sign
// manipulations the charge-shift and gauge-transfer arguments rely on, so a
// green sweep certifies every sign step those derivations use.

// epsilon_{alpha,beta}(s + e_alpha - e_beta) = epsilon_{beta,alpha}(s).
inline bool sign_shift_swap(const Charge& s, int alpha, int beta) {
    return epsilon(shift_charge(s, alpha, beta), alpha, beta) == epsilon(s, beta, alpha);
}

// epsilon_{alpha,gamma}(s + e_alpha - e_beta)
//   = epsilon_{beta,gamma}(s) * epsilon_{beta,alpha}(s),  gamma != alpha, beta.
inline bool sign_shift_transfer(const Charge& s, int alpha, int beta, int gamma) {
    return epsilon(shift_charge(s, alpha, beta), alpha, gamma) ==
           epsilon(s, beta, gamma) * epsilon(s, beta, alpha);
}

// epsilon_{beta,alpha}(s) = -epsilon_{alpha,beta}(s) for alpha != beta.
inline bool sign_antisymmetry(const Charge& s, int alpha, int beta) {
    return epsilon(s, beta, alpha) == -epsilon(s, alpha, beta);
}

// -eps_{ba}(s+ea-eg) eps_{ga}(s+ea-eg) / eps_{bg}(s+ea-eg)
//   = eps_{ag}(s+ea-eb) / eps_{ag}(s);  b, g distinct from a and each other.
inline bool sign_quot_diag(const Charge& s, int a, int b, int g) {
    Charge sg = shift_charge(s, a, g);
    return -epsilon(sg, b, a) * epsilon(sg, g, a) * epsilon(s, a, g) ==
           epsilon(sg, b, g) * epsilon(shift_charge(s, a, b), a, g);
}

// eps_{bg}(s+ea-eb) = eps_{ba}(s+ea-eb) eps_{ag}(s);  g != a, b.
inline bool sign_chain(const Charge& s, int a, int b, int g) {
    Charge sb = shift_charge(s, a, b);
    return epsilon(sb, b, g) == epsilon(sb, b, a) * epsilon(s, a, g);
}

// eps_{ba}(s) / eps_{lb}(s) = 1 / eps_{la}(s+ea-eb);  l distinct from a, b.
inline bool sign_gauge_ratio(const Charge& s, int l, int a, int b) {
    return epsilon(s, b, a) * epsilon(shift_charge(s, a, b), l, a) == epsilon(s, l, b);
}

// eps_{la}(s+ea-eb) eps_{ab}(s) = -eps_{lb}(s);  l distinct from a, b.
inline bool sign_gauge_product(const Charge& s, int l, int a, int b) {
    return epsilon(shift_charge(s, a, b), l, a) * epsilon(s, a, b) == -epsilon(s, l, b);
}

// eps_{lb}(s+ea-eb)/eps_{lb}(s)
//   = eps_{ab}(s+el-eb) eps_{lb}(s+el-eb) / eps_{la}(s+el-eb);  l != a, b.
inline bool sign_gauge_transfer(const Charge& s, int l, int a, int b) {
    Charge sl = shift_charge(s, l, b);
    return epsilon(shift_charge(s, a, b), l, b) * epsilon(sl, l, a) ==
           epsilon(s, l, b) * epsilon(sl, a, b) * epsilon(sl, l, b);
}

// eps_{la}(s+ea-eb)/eps_{lg}(s+ea-eb) = -eps_{bg}(s+el-eg)/eps_{ba}(s+el-eg);
// l distinct from a, b; g distinct from a, b, l.
inline bool sign_cross_ratio_1(const Charge& s, int l, int a, int b, int g) {
    Charge sab = shift_charge(s, a, b);
    Charge slg = shift_charge(s, l, g);
    return epsilon(sab, l, a) * epsilon(slg, b, a) == -epsilon(sab, l, g) * epsilon(slg, b, g);
}

// eps_{lg}(s)/eps_{lg}(s+ea-eb) = -eps_{ab}(s)/eps_{ba}(s+el-eg);  same arity.
inline bool sign_cross_ratio_2(const Charge& s, int l, int a, int b, int g) {
    return epsilon(s, l, g) * epsilon(shift_charge(s, l, g), b, a) ==
           -epsilon(s, a, b) * epsilon(shift_charge(s, a, b), l, g);
}

// eps_{ka}(s+el-ek) eps_{bk}(s+el-ek) = eps_{bl}(s) eps_{la}(s);
// the four indices pairwise distinctness required: k != l, a, b;  l != a, b.
inline bool sign_quad_product(const Charge& s, int l, int a, int b, int k) {
    Charge sk = shift_charge(s, l, k);
    return epsilon(sk, k, a) * epsilon(sk, b, k) == epsilon(s, b, l) * epsilon(s, l, a);
}

// eps_{ak}(s) eps_{la}(s+el-ek) = -eps_{lk}(s+el-ek);  k != l, a;  l != a.
inline bool sign_triple_product(const Charge& s, int l, int a, int k) {
    Charge sk = shift_charge(s, l, k);
    return epsilon(s, a, k) * epsilon(sk, l, a) == -epsilon(sk, l, k);
}

// Exhaustive sweep of every sign identity above over all zero-sum charges
// with |s_i| <= radius and all admissible index tuples.  Returns the number
// of identity instances checked; throws InternalMismatch at the first
// violation (the message pinpoints the instance).
inline long sign_sweep(int n, int radius) {
    long checked = 0;
    auto expect = [&](bool ok, const char* name, const Charge& s) {
        if (!ok)
            throw InternalMismatch(std::string("sign identity ") + name +
                                   " violated at s=" + to_string(s));
        ++checked;
    };
    for (const Charge& s : charge_box(n, radius)) {
        for (int a = 1; a <= n; ++a) {
            for (int b = 1; b <= n; ++b) {
                expect(sign_shift_swap(s, a, b), "shift_swap", s);
                if (a != b) expect(sign_antisymmetry(s, a, b), "antisymmetry", s);
                for (int g = 1; g <= n; ++g) {
                    expect(sign_shift_transfer(s, a, b, g), "shift_transfer", s);
                    if (a != b && g != a && g != b) {
                        expect(sign_quot_diag(s, a, b, g), "quot_diag", s);
                        expect(sign_chain(s, a, b, g), "chain", s);
                        expect(sign_gauge_ratio(s, g, a, b), "gauge_ratio", s);
                        expect(sign_gauge_product(s, g, a, b), "gauge_product", s);
                        expect(sign_gauge_transfer(s, g, a, b), "gauge_transfer", s);
                        expect(sign_triple_product(s, g, a, b), "triple_product", s);
                    }
                    for (int l = 1; l <= n; ++l) {
                        bool l_ok = l != a && l != b && a != b;
                        if (l_ok && g != a && g != b && g != l) {
                            expect(sign_cross_ratio_1(s, l, a, b, g), "cross_ratio_1", s);
                            expect(sign_cross_ratio_2(s, l, a, b, g), "cross_ratio_2", s);
                            expect(sign_quad_product(s, l, a, b, g), "quad_product", s);
                        }
                    }
                }
            }
        }
    }
    return checked;
}

} // namespace mckp
