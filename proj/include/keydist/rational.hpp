#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace kd {

using Rational = mpq_class;

/// Canonical "num/den" text form. Integers keep the "/1" so every exact value
/// has the same shape on the wire.
std::string to_string(const Rational& value);

/// Accepts "num/den", "int", or a finite decimal such as "0.125" (converted exactly).
Rational parse_rational(std::string_view text);

/// value^exponent for any integer exponent; zero to a negative power throws.
Rational pow(const Rational& value, long exponent);

inline double to_double(const Rational& value) { return value.get_d(); }

Rational sum(const std::vector<Rational>& values);

}  // namespace kd
