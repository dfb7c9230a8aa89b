#include "mcstat/length_stats.hpp"

namespace mcstat {

GraphPolynomial graph_polynomial(const StableGraph& graph, VolumeTable& table) {
    GraphPolynomial gp{graph, PiPolynomial(0), PiPolynomial(0), {}, {}, 0, 0};
    gp.edge_order = graph.edges_by_id();
    gp.k = graph.edge_count();
    gp.d = graph.dim();
    gp.weights.reserve(gp.k);
    for (int v = 0; v < gp.k; ++v) gp.weights.push_back(graph.edge(gp.edge_order[v]).weight);

    // prod of edge variables
    std::vector<unsigned> ones(gp.k, 1);
    PiPolynomial p = PiPolynomial::monomial(gp.k, ones, ExactScalar(1));

    // vertex volume polynomials, arguments = incident edge variables
    for (int w = 0; w < graph.vertex_count(); ++w) {
        std::vector<int> args;
        for (int v = 0; v < gp.k; ++v) {
            const GraphEdge& e = graph.edge(gp.edge_order[v]);
            if (e.a == w) args.push_back(v);
            if (e.b == w) args.push_back(v);
        }
        SurfaceType s{graph.vertex(w).genus, static_cast<unsigned>(args.size())};
        PiPolynomial vol = table.volume(s);
        p = p * vol.embed(gp.k, args);
    }

    // 2^{-M} / |Sym+|
    Integer denom = Integer(1) << graph.one_handle_count();
    denom *= Integer(graph.sym_plus_order());
    p *= make_rational(Integer(1), denom);

    gp.full = std::move(p);
    gp.top = gp.full.top_part();
    if (gp.top.length_degree() != 2 * gp.d - gp.k)
        throw std::logic_error("graph polynomial degree != 2d-k");
    return gp;
}

PiPolynomial graph_polynomial_top(const StableGraph& graph, VolumeTable& table) {
    return graph_polynomial(graph, table).top;
}

MassResult total_mass(const GraphPolynomial& gp, const BoxCone& box, const StatsContext& ctx) {
    MassResult out;
    out.feasible = box.feasible();
    out.mass = box_mass_polynomial(gp.full, gp.domain(), box);
    out.mass *= ctx.measure_scale;
    return out;
}

ExactScalar leading_coefficient(const GraphPolynomial& gp, const BoxCone& box,
                                const StatsContext& ctx) {
    return box_simplex_integral(gp.top, gp.domain(), box) * ctx.measure_scale;
}

Rational density_at(const GraphPolynomial& gp, const std::vector<Rational>& point,
                    const StatsContext& ctx) {
    if (static_cast<int>(point.size()) != gp.k)
        throw std::invalid_argument("point dimension != number of components");
    Rational total(0);
    for (int i = 0; i < gp.k; ++i) {
        if (point[i] <= 0) throw std::invalid_argument("point must be strictly positive");
        total += Rational(gp.weights[i]) * point[i];
    }
    if (total != 1) throw std::invalid_argument("point off simplex: sum c_i x_i != 1");
    ExactScalar num = gp.top.eval_exact(point) * ctx.measure_scale;
    ExactScalar den = box_simplex_integral(gp.top, gp.domain(), BoxCone::full(gp.k));
    den *= ctx.measure_scale;
    return num.rational_value() / den.rational_value();
}

Rational box_probability(const GraphPolynomial& gp, const BoxCone& box, const StatsContext& ctx) {
    ExactScalar num = leading_coefficient(gp, box, ctx);
    ExactScalar den = leading_coefficient(gp, BoxCone::full(gp.k), ctx);
    return num.rational_value() / den.rational_value();
}

Rational moment(const GraphPolynomial& gp, const std::vector<unsigned>& exponents,
                const StatsContext& ctx) {
    if (static_cast<int>(exponents.size()) != gp.k)
        throw std::invalid_argument("moment exponent vector has wrong length");
    PiPolynomial weighted = gp.top * PiPolynomial::monomial(gp.k, exponents, ExactScalar(1));
    ExactScalar num = box_simplex_integral(weighted, gp.domain(), BoxCone::full(gp.k));
    num *= ctx.measure_scale;
    ExactScalar den = leading_coefficient(gp, BoxCone::full(gp.k), ctx);
    return num.rational_value() / den.rational_value();
}

MarginalDensity marginal(const GraphPolynomial& gp, int index, const StatsContext& ctx) {
    if (index < 0 || index >= gp.k) throw std::invalid_argument("marginal index out of range");
    if (gp.k < 2)
        throw std::invalid_argument(
            "marginal undefined for a single component (point mass at 1/c)");

    const Rational ci(gp.weights[index]);
    // fiber over x_index = t is a scaled simplex in the other variables;
    // the simplex measure factors exactly as dt x (fiber measure)
    PiPolynomial density(1);
    for (const auto& [e, c] : gp.top.monomials()) {
        std::vector<unsigned> rest;
        std::vector<unsigned long> rest_weights;
        unsigned m_rest = 0;
        for (int j = 0; j < gp.k; ++j) {
            if (j == index) continue;
            rest.push_back(e[j]);
            rest_weights.push_back(gp.weights[j]);
            m_rest += e[j];
        }
        ScaledIntegral fiber =
            monomial_simplex_integral(rest, SimplexDomain(std::move(rest_weights)));
        // contribution c * fiber.coeff * t^{e_index} * (1 - c_i t)^{fiber.l_power}
        unsigned p = fiber.l_power;
        ExactScalar base = c * fiber.coeff.rational_value();
        for (unsigned q = 0; q <= p; ++q) {
            Rational binom(binomial_int(p, q));
            Rational sign = q % 2 == 0 ? Rational(1) : Rational(-1);
            ExactScalar coeff = base * (binom * sign * pow_rational(ci, q));
            density.add_term({e[index] + q}, coeff);
        }
    }
    density *= ExactScalar(ctx.measure_scale);

    // normalize: divide by the total mass, which equals the integral of
    // the unnormalized marginal over (0, 1/c_i)
    ExactScalar total = leading_coefficient(gp, BoxCone::full(gp.k), ctx);
    PiPolynomial normalized(1);
    for (const auto& [e, c] : density.monomials())
        normalized.add_term(e, ExactScalar(c.rational_value() / total.rational_value()));

    MarginalDensity out;
    out.index = index;
    out.support_hi = Rational(1) / ci;
    out.density = std::move(normalized);
    return out;
}

ExactScalar counting_coefficient(const GraphPolynomial& gp, const BoxCone& box,
                                 const Rational& bx_over_bg, const StatsContext& ctx) {
    if (bx_over_bg < 0) throw std::invalid_argument("B(X)/b_g ratio must be nonnegative");
    ExactScalar c = leading_coefficient(gp, box, ctx);
    Rational factor = Rational(gp.graph.sym_order()) * bx_over_bg / Rational(2 * gp.d);
    return c * factor;
}

}  // namespace mcstat
