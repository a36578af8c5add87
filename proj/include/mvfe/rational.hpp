#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace mvfe {

// All coefficients in this library are exact rationals; there is no floating
// point anywhere.
using Rational = mpq_class;
using Integer = mpz_class;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Renders "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

// Parses "p" or "p/q" (optionally signed). Throws mvfe::error on malformed
// input or a zero denominator.
Rational rational_from_string(const std::string& text);

}  // namespace mvfe
