/*
 * simplex_integral.hpp
 * --------------------
 * Exact integration of monomials and polynomials over the weighted
 * simplex {x >= 0 : c1 x1 + ... + ck xk = L}, its solid cone, and
 * box-cone restrictions a_i <= c_i x_i / L <= b_i.
 *
 * Measure convention: the simplex carries the L-derivative of the
 * Lebesgue measure of the solid region {sum c_i x_i <= L} (coarea in L).
 * Under the parametrization by the first k-1 coordinates this is
 * (1/c_k) dx_1 ... dx_{k-1}. All normalized statistics downstream are
 * independent of this calibration.
 *
 * Closed form over the full simplex:
 *   int prod x_i^{a_i} ds = (prod a_i!) / (m+k-1)! * L^{m+k-1} / prod c_i^{a_i+1}
 * Box restrictions are computed by exact piecewise-polynomial
 * convolution with rational breakpoints.
 */
#pragma once

#include <optional>
#include <vector>

#include "mcstat/pi_polynomial.hpp"

namespace mcstat {

struct SimplexDomain {
    std::vector<unsigned long> weights;       // c_i >= 1
    std::optional<Rational> scale;            // L; empty = symbolic

    explicit SimplexDomain(std::vector<unsigned long> c, std::optional<Rational> L = std::nullopt);
    int k() const { return static_cast<int>(weights.size()); }
};

// Rational bounds on the normalized coordinates; unconstrained indices
// default to [0, 1].
class BoxCone {
public:
    explicit BoxCone(int k);
    static BoxCone full(int k) { return BoxCone(k); }

    int k() const { return static_cast<int>(lo_.size()); }
    void set_bounds(int i, const Rational& lo, const Rational& hi);
    const Rational& lo(int i) const { return lo_[i]; }
    const Rational& hi(int i) const { return hi_[i]; }
    bool constrained(int i) const { return lo_[i] != 0 || hi_[i] != 1; }
    bool is_full() const;

    // The box meets the open simplex in a set of positive measure iff
    // sum lo < 1 < sum hi.
    bool feasible() const;

    bool operator==(const BoxCone& o) const { return lo_ == o.lo_ && hi_ == o.hi_; }

private:
    std::vector<Rational> lo_, hi_;
};

// coeff * L^l_power
struct ScaledIntegral {
    ExactScalar coeff;
    unsigned l_power = 0;
};

// Univariate polynomial in L over Q[u]; the total-mass polynomials live here.
class MassPolynomial {
public:
    MassPolynomial() = default;

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const;  // -1 for zero
    const ExactScalar& coeff(unsigned p) const;
    ExactScalar leading_coefficient() const;
    const std::map<unsigned, ExactScalar>& coeffs() const { return coeffs_; }

    void add_term(unsigned l_power, const ExactScalar& c);
    MassPolynomial& operator+=(const MassPolynomial& o);
    MassPolynomial& operator*=(const Rational& c);
    bool operator==(const MassPolynomial& o) const { return coeffs_ == o.coeffs_; }

    ExactScalar evaluate(const Rational& L) const;
    std::string to_string() const;  // canonical grammar with variable "L"

private:
    std::map<unsigned, ExactScalar> coeffs_;
};

// Lebesgue integral over the solid region {x >= 0, sum c_i x_i <= L}.
ScaledIntegral monomial_ball_integral(const std::vector<unsigned>& exps, const SimplexDomain& dom);

// Integral over the level set at L, coarea calibration.
ScaledIntegral monomial_simplex_integral(const std::vector<unsigned>& exps,
                                         const SimplexDomain& dom);

// Linear extension of the simplex integral to polynomials; the result is
// a polynomial in L.
MassPolynomial poly_simplex_integral(const PiPolynomial& p, const SimplexDomain& dom);

// Exact integral over {x in simplex at L=1 : box}; empty regions give 0.
ExactScalar box_simplex_integral(const PiPolynomial& p, const SimplexDomain& dom,
                                 const BoxCone& box);

// Box-restricted mass as a polynomial in L (the box scales with L).
MassPolynomial box_mass_polynomial(const PiPolynomial& p, const SimplexDomain& dom,
                                   const BoxCone& box);

// Lebesgue integral over Cone(simplex ∩ box) up to radius 1; requires p
// homogeneous in the length variables.
ExactScalar cone_integral(const PiPolynomial& p, const SimplexDomain& dom, const BoxCone& box);

}  // namespace mcstat
