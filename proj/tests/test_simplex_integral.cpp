#include <doctest.h>

#include <random>

#include "mcstat/simplex_integral.hpp"

using namespace mcstat;

namespace {

Rational closed_form(const std::vector<unsigned>& exps, const std::vector<unsigned long>& c) {
    unsigned m = 0;
    Integer num(1);
    for (unsigned a : exps) {
        m += a;
        num *= factorial_int(a);
    }
    Integer den = factorial_int(m + exps.size() - 1);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        Integer p;
        Integer base(c[i]);
        mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), exps[i] + 1);
        den *= p;
    }
    return make_rational(num, den);
}

}  // namespace

TEST_CASE("ball integrals") {
    auto r = monomial_ball_integral({1}, SimplexDomain({1}));
    CHECK(r.coeff == ExactScalar(make_rational(1, 2)));
    CHECK(r.l_power == 2);

    r = monomial_ball_integral({1, 1, 1}, SimplexDomain({1, 1, 1}));
    CHECK(r.coeff == ExactScalar(make_rational(1, 720)));
    CHECK(r.l_power == 6);

    r = monomial_ball_integral({0, 0}, SimplexDomain({1, 2}));
    CHECK(r.coeff == ExactScalar(make_rational(1, 4)));
    CHECK(r.l_power == 2);
}

TEST_CASE("level-set integrals") {
    auto r = monomial_simplex_integral({1, 1, 1}, SimplexDomain({1, 1, 1}));
    CHECK(r.coeff == ExactScalar(make_rational(1, 120)));
    CHECK(r.l_power == 5);

    // k=1: point mass at x = L/c with coarea density 1/c
    r = monomial_simplex_integral({3}, SimplexDomain({2}));
    CHECK(r.coeff == ExactScalar(make_rational(1, 16)));
    CHECK(r.l_power == 3);

    r = monomial_simplex_integral({0, 0}, SimplexDomain({1, 1}));
    CHECK(r.coeff == ExactScalar(1));
    CHECK(r.l_power == 1);
}

TEST_CASE("polynomial mass over the full simplex") {
    PiPolynomial p = PiPolynomial::parse("x1*x2*x3", 3);
    MassPolynomial m = poly_simplex_integral(p, SimplexDomain({1, 1, 1}));
    CHECK(m.degree() == 5);
    CHECK(m.coeff(5) == ExactScalar(make_rational(1, 120)));

    PiPolynomial just_u = PiPolynomial::parse("u", 2);
    m = poly_simplex_integral(just_u, SimplexDomain({1, 1}));
    CHECK(m.degree() == 1);
    CHECK(m.coeff(1) == ExactScalar::u_power(1));

    // (1/48) x1 x2^3 + (1/12) u x1 x2 integrates to L^5/960 + u L^3/72
    PiPolynomial pg = PiPolynomial::parse("(1/48)*x1*x2^3 + (1/12)*u*x1*x2", 2);
    m = poly_simplex_integral(pg, SimplexDomain({1, 1}));
    CHECK(m.coeff(5) == ExactScalar(make_rational(1, 960)));
    CHECK(m.coeff(3) == ExactScalar::u_power(1, make_rational(1, 72)));
    CHECK(m.to_string() == "(1/960)*L^5 + (1/72)*u*L^3");
    CHECK(m.evaluate(Rational(1)) ==
          ExactScalar(make_rational(1, 960)) + ExactScalar::u_power(1, make_rational(1, 72)));
}

TEST_CASE("box integrals against hand values") {
    SimplexDomain dom({1, 1});
    PiPolynomial p = PiPolynomial::parse("x1*x2^3", 2);

    BoxCone full = BoxCone::full(2);
    CHECK(box_simplex_integral(p, dom, full) == ExactScalar(make_rational(1, 20)));

    BoxCone half(2);
    half.set_bounds(0, Rational(0), make_rational(1, 2));
    // int_0^{1/2} t (1-t)^3 dt = 13/320
    CHECK(box_simplex_integral(p, dom, half) == ExactScalar(make_rational(13, 320)));

    BoxCone disjoint(2);
    disjoint.set_bounds(0, make_rational(3, 4), make_rational(7, 8));
    disjoint.set_bounds(1, make_rational(3, 4), make_rational(7, 8));
    CHECK(box_simplex_integral(p, dom, disjoint).is_zero());
    CHECK_FALSE(disjoint.feasible());

    // k=1: the box keeps or discards the single point
    SimplexDomain point({3});
    PiPolynomial q = PiPolynomial::parse("x1^2", 1);
    BoxCone keep(1);
    keep.set_bounds(0, make_rational(1, 2), Rational(1));
    BoxCone drop(1);
    drop.set_bounds(0, Rational(0), make_rational(1, 2));
    CHECK(box_simplex_integral(q, point, keep) == ExactScalar(make_rational(1, 27)));
    CHECK(box_simplex_integral(q, point, drop).is_zero());
    CHECK(keep.feasible());
    CHECK_FALSE(drop.feasible());
}

TEST_CASE("full boxes agree with the closed form on random cases") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> kdist(1, 4), expdist(0, 5);
    std::uniform_int_distribution<unsigned long> wdist(1, 3);
    for (int trial = 0; trial < 100; ++trial) {
        int k = kdist(rng);
        std::vector<unsigned> exps(k);
        std::vector<unsigned long> c(k);
        for (int i = 0; i < k; ++i) {
            exps[i] = static_cast<unsigned>(expdist(rng));
            c[i] = wdist(rng);
        }
        PiPolynomial mono = PiPolynomial::monomial(k, exps, ExactScalar(1));
        ExactScalar got = box_simplex_integral(mono, SimplexDomain(c), BoxCone::full(k));
        CHECK(got == ExactScalar(closed_form(exps, c)));

        auto level = monomial_simplex_integral(exps, SimplexDomain(c));
        unsigned m = 0;
        for (auto e : exps) m += e;
        CHECK(level.l_power == m + k - 1);
    }
}

TEST_CASE("level-set integrals scale as L^(m+k-1)") {
    std::vector<unsigned> exps{2, 1, 0};
    SimplexDomain dom({1, 2, 1});
    auto sym = monomial_simplex_integral(exps, dom);
    PiPolynomial mono = PiPolynomial::monomial(3, exps, ExactScalar(1));
    MassPolynomial m = poly_simplex_integral(mono, dom);
    for (const Rational& L : {Rational(2), Rational(3), make_rational(7, 2)}) {
        ExactScalar direct = sym.coeff * pow_rational(L, sym.l_power);
        CHECK(m.evaluate(L) == direct);
    }
}

TEST_CASE("additivity over a partition of the simplex") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> kdist(2, 4), expdist(0, 4);
    std::uniform_int_distribution<long> cutnum(1, 7);
    for (int trial = 0; trial < 60; ++trial) {
        int k = kdist(rng);
        std::vector<unsigned> exps(k);
        for (int i = 0; i < k; ++i) exps[i] = static_cast<unsigned>(expdist(rng));
        SimplexDomain dom(std::vector<unsigned long>(k, 1));
        PiPolynomial mono = PiPolynomial::monomial(k, exps, ExactScalar(1));
        Rational cut = make_rational(cutnum(rng), 8);
        BoxCone left(k), right(k);
        left.set_bounds(0, Rational(0), cut);
        right.set_bounds(0, cut, Rational(1));
        ExactScalar total = box_simplex_integral(mono, dom, BoxCone::full(k));
        ExactScalar sum = box_simplex_integral(mono, dom, left);
        sum += box_simplex_integral(mono, dom, right);
        CHECK(sum == total);
    }
}

TEST_CASE("monotonicity in the box for nonnegative integrands") {
    SimplexDomain dom({1, 1, 1});
    PiPolynomial p = PiPolynomial::parse("x1^2*x2 + x3", 3);
    BoxCone small(3), large(3);
    small.set_bounds(0, Rational(0), make_rational(1, 3));
    large.set_bounds(0, Rational(0), make_rational(2, 3));
    Rational a = box_simplex_integral(p, dom, small).rational_value();
    Rational b = box_simplex_integral(p, dom, large).rational_value();
    CHECK(a <= b);
}

TEST_CASE("cone integrals") {
    SimplexDomain dom3({1, 1, 1});
    PiPolynomial prod = PiPolynomial::parse("x1*x2*x3", 3);
    ExactScalar c = cone_integral(prod, dom3, BoxCone::full(3));
    CHECK(c == ExactScalar(make_rational(1, 720)));
    // (6g-6)! times the cone integral is 1 for the genus-2 normalization
    CHECK(Rational(factorial_int(6)) * c.rational_value() == 1);

    SimplexDomain dom2({1, 1});
    PiPolynomial one = PiPolynomial::constant(2, ExactScalar(1));
    CHECK(cone_integral(one, dom2, BoxCone::full(2)) == ExactScalar(make_rational(1, 2)));

    // defining identity on random boxes
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(0, 5);
    PiPolynomial sq = PiPolynomial::parse("x1^2", 2);
    for (int trial = 0; trial < 10; ++trial) {
        long a = num(rng);
        BoxCone box(2);
        box.set_bounds(0, make_rational(a, 8), make_rational(a + 2, 8));
        ExactScalar lhs = cone_integral(sq, dom2, box);
        ExactScalar rhs = box_simplex_integral(sq, dom2, box).divided_by(Rational(2 + 2));
        CHECK(lhs == rhs);
    }

    CHECK_THROWS_AS(cone_integral(PiPolynomial::parse("x1^2 + x1", 2), dom2, BoxCone::full(2)),
                    std::invalid_argument);
}

TEST_CASE("box mass polynomial matches the closed form when unrestricted") {
    PiPolynomial pg = PiPolynomial::parse("(1/48)*x1*x2^3 + (1/12)*u*x1*x2", 2);
    SimplexDomain dom({1, 1});
    CHECK(box_mass_polynomial(pg, dom, BoxCone::full(2)) == poly_simplex_integral(pg, dom));

    BoxCone half(2);
    half.set_bounds(0, Rational(0), make_rational(1, 2));
    MassPolynomial m = box_mass_polynomial(pg, dom, half);
    CHECK(m.degree() == 5);
    CHECK(m.coeff(5) == ExactScalar(make_rational(13, 320) / 48));
}
