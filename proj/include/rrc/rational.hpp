#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace rrc {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", "p" or a finite decimal such as "-0.97"; the result is canonical.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

inline Rational make_rational(long p, unsigned long q = 1) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Integer ceil(const Rational& value);
Integer floor(const Rational& value);

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

/// Decimal rendering with `digits` significant digits, for human-facing output only.
std::string to_decimal(const Rational& value, int digits = 20);

}  // namespace rrc
