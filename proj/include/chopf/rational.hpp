#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace chopf {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator) as long as every arithmetic result is assigned before use.
using Rational = mpq_class;

// "num" or "num/den", as produced by GMP.
std::string to_string(const Rational& q);

// Accepts "-?digits" or "-?digits/digits" with a nonzero denominator.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

} // namespace chopf
