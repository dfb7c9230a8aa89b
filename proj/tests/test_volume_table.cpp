#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <thread>

#include "mcstat/volume_table.hpp"

using namespace mcstat;

namespace {

// substitute x_n^2 -> -4u (the 2 pi i boundary specialization)
PiPolynomial specialize_last(const PiPolynomial& p) {
    int n = p.nvars();
    PiPolynomial out(n - 1);
    for (const auto& [e, c] : p.monomials()) {
        unsigned j = e[n - 1] / 2;
        std::vector<unsigned> rest(e.begin(), e.end() - 1);
        out.add_term(rest, c * ExactScalar::u_power(j, pow_rational(Rational(-4), j)));
    }
    return out;
}

// sum_j j A_j (-4u)^{j-1} where p = sum_j A_j x_n^{2j}
PiPolynomial dilaton_lhs(const PiPolynomial& p) {
    int n = p.nvars();
    PiPolynomial out(n - 1);
    for (const auto& [e, c] : p.monomials()) {
        unsigned j = e[n - 1] / 2;
        if (j == 0) continue;
        std::vector<unsigned> rest(e.begin(), e.end() - 1);
        out.add_term(rest,
                     c * ExactScalar::u_power(j - 1, pow_rational(Rational(-4), j - 1) * j));
    }
    return out;
}

// sum_k int_0^{x_k} t V(..., t at slot k, ...) dt
PiPolynomial string_rhs(const PiPolynomial& p) {
    int n = p.nvars();
    PiPolynomial out(n);
    for (int k = 0; k < n; ++k) {
        for (const auto& [e, c] : p.monomials()) {
            std::vector<unsigned> e2 = e;
            e2[k] += 2;
            out.add_term(e2, c.divided_by(Rational(e[k] + 2)));
        }
    }
    return out;
}

// orbifold normalization: the one-holed torus carries half the table value
PiPolynomial orbifold(VolumeTable& t, SurfaceType s) {
    PiPolynomial v = t.volume(s);
    if (s == SurfaceType{1, 1}) v *= make_rational(1, 2);
    return v;
}

}  // namespace

TEST_CASE("base cases and published anchors") {
    VolumeTable t;
    CHECK(t.volume({0, 3}) == PiPolynomial::constant(3, ExactScalar(1)));
    CHECK(t.volume({1, 1}) == PiPolynomial::parse("(1/24)*x1^2 + (1/6)*u", 1));

    PiPolynomial v04 = t.volume({0, 4});
    CHECK(v04 == PiPolynomial::parse(
                     "(1/2)*x1^2 + (1/2)*x2^2 + (1/2)*x3^2 + (1/2)*x4^2 + 2*u", 4));

    PiPolynomial s = PiPolynomial::parse("x1^2 + x2^2", 2);
    PiPolynomial u4 = PiPolynomial::parse("4*u", 2), u12 = PiPolynomial::parse("12*u", 2);
    PiPolynomial v12_expected = (s + u4) * (s + u12);
    v12_expected *= make_rational(1, 192);
    CHECK(t.volume({1, 2}) == v12_expected);

    PiPolynomial v21 = t.volume({2, 1});
    PiPolynomial v21_expected = PiPolynomial::parse(
        "(1/442368)*x1^8 + (29/138240)*u*x1^6 + (139/23040)*u^2*x1^4 + (169/2880)*u^3*x1^2 + "
        "(29/192)*u^4",
        1);
    CHECK(v21 == v21_expected);

    // product form printed in the literature
    PiPolynomial x2 = PiPolynomial::parse("x1^2", 1);
    PiPolynomial f1 = PiPolynomial::parse("x1^2 + 4*u", 1);
    PiPolynomial f2 = PiPolynomial::parse("x1^2 + 12*u", 1);
    PiPolynomial f3 = PiPolynomial::parse("5*x1^4 + 384*u*x1^2 + 6960*u^2", 1);
    PiPolynomial prod = f1 * f2 * f3;
    prod *= make_rational(1, 2211840);
    CHECK(v21 == prod);
}

TEST_CASE("top parts") {
    VolumeTable t;
    CHECK(t.volume_top({1, 1}) == PiPolynomial::parse("(1/24)*x1^2", 1));
    CHECK(t.volume_top({0, 3}) == PiPolynomial::constant(3, ExactScalar(1)));
    CHECK(t.volume_top({2, 1}) == PiPolynomial::parse("(1/442368)*x1^8", 1));
    // homogeneous of degree 6g-6+2n and u-free
    for (SurfaceType s : {SurfaceType{0, 5}, SurfaceType{1, 2}, SurfaceType{1, 3},
                          SurfaceType{2, 2}}) {
        PiPolynomial top = t.volume_top(s);
        CHECK(top.is_homogeneous());
        CHECK(top.length_degree() == 6 * static_cast<int>(s.g) - 6 + 2 * static_cast<int>(s.n));
        for (const auto& [e, c] : top.monomials()) CHECK(c.is_rational());
    }
}

TEST_CASE("hand-derived five-boundary sphere volume") {
    VolumeTable t;
    // (1/8) sum x_i^4 + (1/2) sum_{i<j} x_i^2 x_j^2 + 3u sum x_i^2 + 10u^2
    PiPolynomial expected(5);
    for (int i = 0; i < 5; ++i) {
        std::vector<unsigned> e(5, 0);
        e[i] = 4;
        expected.add_term(e, ExactScalar(make_rational(1, 8)));
        e[i] = 2;
        expected.add_term(e, ExactScalar::u_power(1, Rational(3)));
        for (int j = i + 1; j < 5; ++j) {
            std::vector<unsigned> f(5, 0);
            f[i] = f[j] = 2;
            expected.add_term(f, ExactScalar(make_rational(1, 2)));
        }
    }
    expected.add_term(std::vector<unsigned>(5, 0), ExactScalar::u_power(2, Rational(10)));
    CHECK(t.volume({0, 5}) == expected);
}

TEST_CASE("structural invariants hold on every computed entry") {
    VolumeTable t;
    for (SurfaceType s : {SurfaceType{0, 3}, SurfaceType{0, 4}, SurfaceType{0, 5},
                          SurfaceType{0, 6}, SurfaceType{1, 1}, SurfaceType{1, 2},
                          SurfaceType{1, 3}, SurfaceType{1, 4}, SurfaceType{2, 1},
                          SurfaceType{2, 2}}) {
        PiPolynomial v = t.volume(s);
        CHECK_NOTHROW(VolumeTable::validate_volume(s, v));
    }
    CHECK_THROWS_AS(t.volume({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(t.volume({1, 0}), std::invalid_argument);
}

TEST_CASE("string and dilaton identities across the table") {
    VolumeTable t;
    // targets V_{g,n} with n >= 1 and 2g-2+n <= 4
    std::vector<SurfaceType> targets{{0, 3}, {0, 4}, {0, 5}, {1, 1}, {1, 2}, {1, 3}, {2, 1}};
    for (SurfaceType s : targets) {
        PiPolynomial big = orbifold(t, {s.g, s.n + 1});
        PiPolynomial small = orbifold(t, s);

        PiPolynomial lhs_string = specialize_last(big);
        CHECK(lhs_string == string_rhs(small));

        PiPolynomial lhs_dilaton = dilaton_lhs(big);
        PiPolynomial rhs = small;
        rhs *= make_rational(2 * static_cast<long>(s.g) - 2 + static_cast<long>(s.n), 2);
        CHECK(lhs_dilaton == rhs);
    }
}

TEST_CASE("volume of the closed genus-two moduli space") {
    VolumeTable t;
    PiPolynomial v20 = t.volume({2, 0});
    PiPolynomial expected =
        PiPolynomial::constant(0, ExactScalar::u_power(3, make_rational(43, 2160)));
    CHECK(v20 == expected);
}

TEST_CASE("provenance tags") {
    VolumeTable t;
    t.volume({1, 1});
    t.volume({0, 4});
    for (const auto& [s, poly, prov] : t.entries()) {
        if (s == SurfaceType{1, 1} || s == SurfaceType{0, 3})
            CHECK(prov == Provenance::Builtin);
        else
            CHECK(prov == Provenance::Computed);
    }
}

TEST_CASE("complexity cap") {
    VolumeTable t(3);
    CHECK_NOTHROW(t.volume({1, 2}));
    CHECK_THROWS_AS(t.volume({2, 2}), ResourceLimitError);
    t.set_complexity_cap(4);
    CHECK_NOTHROW(t.volume({2, 2}));
}

TEST_CASE("concurrent lookups agree") {
    VolumeTable t;
    std::vector<SurfaceType> want{{2, 1}, {1, 3}, {2, 1}, {0, 6}, {1, 3}, {2, 1}, {0, 6}, {2, 1}};
    std::vector<PiPolynomial> got(want.size(), PiPolynomial(0));
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < want.size(); ++i)
        pool.emplace_back([&, i] { got[i] = t.volume(want[i]); });
    for (auto& th : pool) th.join();
    VolumeTable ref;
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(got[i] == ref.volume(want[i]));
}

TEST_CASE("cache round trip, tampering, empty file") {
    std::string path = "vol_cache_test.tmp";
    {
        VolumeTable t;
        t.volume({0, 3});
        t.volume({1, 1});
        t.volume({2, 1});
        t.save(path);
    }
    {
        VolumeTable loaded = VolumeTable::load(path);
        auto entries = loaded.entries();
        // (2,1) pulls its recursion dependency (1,2) into the table
        CHECK(entries.size() == 4);
        CHECK(std::get<2>(entries[0]) == Provenance::Loaded);
        VolumeTable ref;
        for (const auto& [s, poly, prov] : entries) CHECK(poly == ref.volume(s));
        // records sorted by (2g-2+n, g)
        CHECK(std::get<0>(entries[0]) == SurfaceType{0, 3});
        CHECK(std::get<0>(entries[1]) == SurfaceType{1, 1});
        CHECK(std::get<0>(entries[2]) == SurfaceType{1, 2});
        CHECK(std::get<0>(entries[3]) == SurfaceType{2, 1});
    }
    {
        // flip one digit of a coefficient: the checksum catches it
        std::ifstream in(path);
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        in.close();
        std::string broken = content;
        auto pos = broken.find("1/24");
        REQUIRE(pos != std::string::npos);
        broken[pos] = '2';
        std::ofstream out(path, std::ios::trunc);
        out << broken;
        out.close();
        CHECK_THROWS_WITH_AS(static_cast<void>(VolumeTable::load(path)),
                             doctest::Contains("checksum mismatch"), std::runtime_error);
    }
    {
        // a symmetry-breaking edit with a recomputed checksum is caught by
        // validation and names the entry
        VolumeTable t;
        t.volume({1, 2});
        t.save(path);
        std::ifstream in(path);
        std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
        in.close();
        // break x1 <-> x2 symmetry: (1/96)*x1^2*x2^2 -> (1/96)*x1^2*x2^4
        auto pos = content.find("x1^2*x2^2");
        REQUIRE(pos != std::string::npos);
        std::string text_broken = content;
        text_broken.replace(pos, 9, "x1^2*x2^4");
        // recompute the record checksum so only validation can object
        auto body_start = text_broken.find(" : ") + 3;
        auto body_end = text_broken.rfind(" : ");
        std::string body = text_broken.substr(body_start, body_end - body_start);
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016lx",
                      static_cast<unsigned long>(fnv1a64(body)));
        text_broken = text_broken.substr(0, body_end + 3) + hex + "\n";
        std::ofstream out(path, std::ios::trunc);
        out << text_broken;
        out.close();
        CHECK_THROWS_WITH_AS(static_cast<void>(VolumeTable::load(path)),
                             doctest::Contains("V 1 2"), std::runtime_error);
    }
    {
        std::ofstream out(path, std::ios::trunc);
        out.close();
        VolumeTable empty = VolumeTable::load(path);
        CHECK(empty.entries().empty());
    }
    std::remove(path.c_str());
}
