/*
 * length_stats.hpp
 * ----------------
 * Assembly of the graph polynomial of a multicurve and the limiting
 * distribution of its normalized component lengths: total masses,
 * leading coefficients, densities, box probabilities, moments,
 * marginals, and the counting coefficient.
 *
 * The graph polynomial is
 *   P = 2^{-M} / |Sym+| * prod_e x_e * prod_v V_{g_v, n_v}(x_v),
 * with M the number of one-handle vertices and x_v the variables of the
 * edges at v (a loop contributes its variable twice). The limiting
 * length distribution on the weighted simplex has density proportional
 * to the top part of P.
 */
#pragma once

#include "mcstat/simplex_integral.hpp"
#include "mcstat/stable_graph.hpp"
#include "mcstat/volume_table.hpp"

namespace mcstat {

struct GraphPolynomial {
    StableGraph graph;
    PiPolynomial full;                  // P, with the 2^{-M}/|Sym+| prefactor
    PiPolynomial top;                   // top_part(P); homogeneous of degree 2d-k
    std::vector<int> edge_order;        // edge index for each variable x1..xk
    std::vector<unsigned long> weights; // c_i in variable order
    int k = 0;                          // edge count
    int d = 0;                          // 3g-3

    SimplexDomain domain() const { return SimplexDomain(weights); }
};

struct StatsContext {
    VolumeTable& table;
    // Test hook: multiplies every simplex integral. Normalized outputs
    // (density, probability, moments, marginal) must not depend on it.
    Rational measure_scale{1};
};

GraphPolynomial graph_polynomial(const StableGraph& graph, VolumeTable& table);
PiPolynomial graph_polynomial_top(const StableGraph& graph, VolumeTable& table);

struct MassResult {
    MassPolynomial mass;   // polynomial in L of degree 2d-1 when nonempty
    bool feasible = true;  // the box meets the simplex in positive measure
};

// M^L over the box-restricted simplex of radius L.
MassResult total_mass(const GraphPolynomial& gp, const BoxCone& box, const StatsContext& ctx);

// C = integral of top(P) over the box at L = 1; equals the L^{2d-1}
// coefficient of total_mass.
ExactScalar leading_coefficient(const GraphPolynomial& gp, const BoxCone& box,
                                const StatsContext& ctx);

// Density of the limiting distribution at a strictly positive rational
// point of the simplex, relative to the reference simplex measure.
Rational density_at(const GraphPolynomial& gp, const std::vector<Rational>& point,
                    const StatsContext& ctx);

// nu(box) = C_box / C_full, an exact rational in [0, 1].
Rational box_probability(const GraphPolynomial& gp, const BoxCone& box, const StatsContext& ctx);

// E[prod x_i^{m_i}] under the limiting distribution.
Rational moment(const GraphPolynomial& gp, const std::vector<unsigned>& exponents,
                const StatsContext& ctx);

struct MarginalDensity {
    int index = 0;            // variable index (0-based)
    Rational support_hi{1};   // density lives on (0, 1/c_i)
    PiPolynomial density;     // one variable, normalized to total mass 1
};

// Exact marginal density of one normalized component length (k >= 2).
MarginalDensity marginal(const GraphPolynomial& gp, int index, const StatsContext& ctx);

// C * |Sym| * ratio / (2d), with ratio the user-supplied value of B(X)/b_g.
ExactScalar counting_coefficient(const GraphPolynomial& gp, const BoxCone& box,
                                 const Rational& bx_over_bg, const StatsContext& ctx);

}  // namespace mcstat
