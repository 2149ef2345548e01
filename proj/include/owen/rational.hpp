#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace owen {

// Exact fraction, always kept in canonical form.
using Rational = mpq_class;

// Accepts "p", "-p", "p/q". Throws ParseError otherwise or on q == 0.
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

// Rounded decimal rendering, for human-readable output only.
std::string to_decimal(const Rational& value, int places = 6);

Rational sum(std::span<const Rational> values);

}  // namespace owen
