#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace mckp {

// Exact rational scalar.  All arithmetic in the library is over Q; nothing
// is ever rounded, so an identity check either yields literal zero or a
// concrete nonzero discrepancy.
using Rational = mpq_class;

inline std::string to_string(const Rational& r) {
    return r.get_str();
}

// Parse "p" or "p/q" with optional leading '-'.  Throws ParseError on
// malformed input or zero denominator.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational literal");
    for (char c : text) {
        if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
            throw ParseError("bad character in rational literal: " + text);
    }
    mpq_class r;
    if (r.set_str(text, 10) != 0) throw ParseError("unparseable rational: " + text);
    if (r.get_den() == 0) throw ParseError("zero denominator: " + text);
    r.canonicalize();
    return r;
}

} // namespace mckp
