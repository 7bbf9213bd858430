#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace novtel {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p", "p/q". Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& q);

/// floor(q) as a plain long; throws if out of range.
long floor_long(const Rational& q);

/// ceil(q) as a plain long; throws if out of range.
long ceil_long(const Rational& q);

/// Valuations: a rational or +infinity (for the zero element).
using Valuation = std::optional<Rational>;  // nullopt == +infinity

inline bool val_lt(const Valuation& a, const Valuation& b) {
    if (!a) return false;
    if (!b) return true;
    return *a < *b;
}

inline Valuation val_add(const Valuation& a, const Valuation& b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

std::string to_string(const Valuation& v);

}  // namespace novtel
