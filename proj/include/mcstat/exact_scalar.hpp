/*
 * exact_scalar.hpp
 * ----------------
 * Elements of Q[u], where the formal symbol u stands for pi^2. Every
 * coefficient that shows up in the volume polynomials and the derived
 * statistics lives in this ring. A scalar with no u-terms can be read
 * back as a plain rational.
 */
#pragma once

#include <map>
#include <string>

#include "mcstat/rational.hpp"

namespace mcstat {

// Closed interval [lo, hi] with rational endpoints. Used to enclose
// values of pi-dependent quantities rigorously.
struct RationalInterval {
    Rational lo, hi;

    RationalInterval() : lo(0), hi(0) {}
    RationalInterval(Rational a, Rational b);

    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    Rational width() const { return hi - lo; }

    RationalInterval operator+(const RationalInterval& o) const;
    RationalInterval operator*(const RationalInterval& o) const;
    RationalInterval pow(unsigned e) const;

    // Decimal rendering of both endpoints: "[a, b]".
    std::string to_string(int digits) const;
};

// Enclosure of pi^2 with width at most 10^-digits, computed from the
// Machin arctangent series with alternating-series tail bounds.
RationalInterval pi_squared_enclosure(int digits);

class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(long value);                       // NOLINT(google-explicit-constructor)
    ExactScalar(const Rational& value);            // NOLINT(google-explicit-constructor)
    static ExactScalar u_power(unsigned j, const Rational& coeff = Rational(1));

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;           // no u-terms (zero counts)
    Rational rational_value() const;    // throws if u-terms present
    unsigned u_degree() const;          // highest u-power; 0 for zero scalar

    const std::map<unsigned, Rational>& terms() const { return terms_; }
    const Rational& coeff(unsigned j) const;  // 0 if absent

    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator*=(const Rational& c);
    ExactScalar operator-() const;

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
    friend ExactScalar operator*(ExactScalar a, const Rational& c) { return a *= c; }
    friend ExactScalar operator*(const Rational& c, ExactScalar a) { return a *= c; }

    bool operator==(const ExactScalar& o) const { return terms_ == o.terms_; }
    bool operator!=(const ExactScalar& o) const { return !(*this == o); }

    // Division by a nonzero rational.
    ExactScalar divided_by(const Rational& c) const;

    // Exact evaluation with u ranging over the given enclosure.
    RationalInterval eval(const RationalInterval& u) const;

    // Enclosure of the value with u = pi^2 at the requested precision.
    RationalInterval eval_numeric(int pi_digits) const;

    // All coefficients > 0 (and at least one term). Zero is not positive.
    bool is_positive() const;

    // Standalone rendering: "13/16", "(1/6)*u + 1/24", "0".
    std::string to_string() const;

private:
    std::map<unsigned, Rational> terms_;  // u-power -> nonzero coefficient

    void prune(unsigned j);
};

}  // namespace mcstat
