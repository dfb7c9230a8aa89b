/*
 * rational.hpp
 * ------------
 * Arbitrary-precision rational and integer arithmetic, backed by GMP.
 * All exact computation in the library goes through these types; no
 * floating point ever enters the exact path.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcstat {

using Integer = mpz_class;
using Rational = mpq_class;

// Raised on malformed text input; `position` is a 0-based byte offset
// (or line number for line-oriented formats, see the throw site).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Raised when a configurable resource cap would be exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// num/den in lowest terms; den must be nonzero.
Rational make_rational(const Integer& num, const Integer& den);
Rational make_rational(long num, long den);

// Accepts "p" or "p/q" with optional leading '-'. Throws ParseError.
Rational parse_rational(const std::string& text);

// Canonical text: "p" when the denominator is 1, else "p/q".
std::string rational_str(const Rational& x);

// Fixed-point decimal with `digits` fractional digits, round half away
// from zero. digits >= 0.
std::string decimal_string(const Rational& x, int digits);

Integer factorial_int(unsigned n);
Integer binomial_int(unsigned n, unsigned k);
Rational pow_rational(const Rational& base, unsigned exp);

// FNV-1a over bytes, used for cache record checksums.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace mcstat
