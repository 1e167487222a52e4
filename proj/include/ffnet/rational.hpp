#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace ffnet {

/// Arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p" or "-p/q". Throws ParseError on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q", or just "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);
std::vector<double> to_doubles(const RationalVector& values);
std::vector<std::string> to_strings(const RationalVector& values);

Rational sum(const RationalVector& values);
Rational dot(const RationalVector& a, const RationalVector& b);
bool is_zero(const RationalVector& values);

} // namespace ffnet
