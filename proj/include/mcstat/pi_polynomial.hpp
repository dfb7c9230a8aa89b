/*
 * pi_polynomial.hpp
 * -----------------
 * Sparse multivariate polynomials in length variables x1..xn with
 * coefficients in Q[u] (u = pi^2). Monomials are keyed by exponent
 * vectors in graded-lexicographic order; serialization emits terms in
 * descending (length-degree, exponent vector, u-power) order, which is
 * the canonical text form (see docs/formats.md).
 *
 * Degree always means degree in the length variables; u contributes 0.
 */
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcstat/exact_scalar.hpp"

namespace mcstat {

struct GradedLexLess {
    bool operator()(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const;
};

class PiPolynomial {
public:
    using MonomialMap = std::map<std::vector<unsigned>, ExactScalar, GradedLexLess>;

    explicit PiPolynomial(int nvars = 0);
    static PiPolynomial constant(int nvars, const ExactScalar& value);
    static PiPolynomial variable(int nvars, int index);
    static PiPolynomial monomial(int nvars, std::vector<unsigned> exps, const ExactScalar& coeff);

    int nvars() const { return nvars_; }
    bool is_zero() const { return monomials_.empty(); }
    std::size_t term_count() const { return monomials_.size(); }
    const MonomialMap& monomials() const { return monomials_; }
    const ExactScalar& coeff(const std::vector<unsigned>& exps) const;

    // max total degree in the x-variables; -1 for the zero polynomial
    int length_degree() const;
    // all monomials share the same length degree (zero counts as homogeneous)
    bool is_homogeneous() const;

    void add_term(const std::vector<unsigned>& exps, const ExactScalar& coeff);

    PiPolynomial& operator+=(const PiPolynomial& o);
    PiPolynomial& operator-=(const PiPolynomial& o);
    PiPolynomial operator*(const PiPolynomial& o) const;
    PiPolynomial& operator*=(const ExactScalar& c);
    PiPolynomial& operator*=(const Rational& c);
    friend PiPolynomial operator+(PiPolynomial a, const PiPolynomial& b) { return a += b; }
    friend PiPolynomial operator-(PiPolynomial a, const PiPolynomial& b) { return a -= b; }

    bool operator==(const PiPolynomial& o) const {
        return nvars_ == o.nvars_ && monomials_ == o.monomials_;
    }
    bool operator!=(const PiPolynomial& o) const { return !(*this == o); }

    // Monomials of maximal length degree. Throws on the zero polynomial.
    PiPolynomial top_part() const;

    // Exact substitution of variables by polynomials over the same
    // variable space; unassigned variables remain.
    PiPolynomial substitute(const std::map<int, PiPolynomial>& assignments) const;
    PiPolynomial substitute(int var, const ExactScalar& value) const;

    // Relabel variable i to target[i] in a space of new_nvars variables.
    // Several source variables may map to one target (exponents add).
    PiPolynomial embed(int new_nvars, const std::vector<int>& target) const;

    // Evaluate at a rational point; the result may still carry u.
    ExactScalar eval_exact(const std::vector<Rational>& point) const;

    // Enclosure of the value with u = pi^2 at the requested precision.
    RationalInterval eval_numeric(const std::vector<Rational>& point, int pi_digits) const;

    bool all_coefficients_positive() const;

    std::string serialize() const;
    // nvars: enforced when given, otherwise inferred from the largest
    // variable index present.
    static PiPolynomial parse(const std::string& text, std::optional<int> nvars = std::nullopt);

private:
    int nvars_;
    MonomialMap monomials_;  // no zero coefficients stored
};

}  // namespace mcstat
