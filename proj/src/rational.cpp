#include "mcstat/rational.hpp"

#include <cctype>

namespace mcstat {

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational make_rational(long num, long den) {
    return make_rational(Integer(num), Integer(den));
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational", 0);
    std::size_t i = 0;
    if (text[i] == '-' || text[i] == '+') ++i;
    std::size_t digits_start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == digits_start) throw ParseError("expected digits in rational", i);
    if (i == text.size()) return Rational(Integer(text));
    if (text[i] != '/') throw ParseError("unexpected character in rational", i);
    std::size_t den_start = ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == den_start || i != text.size())
        throw ParseError("malformed denominator", i);
    Integer num(text.substr(0, den_start - 1));
    Integer den(text.substr(den_start));
    if (den == 0) throw ParseError("zero denominator", den_start);
    return make_rational(num, den);
}

std::string rational_str(const Rational& x) {
    return x.get_str();
}

std::string decimal_string(const Rational& x, int digits) {
    if (digits < 0) throw std::invalid_argument("negative digit count");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Integer num = x.get_num() * scale;
    Integer den = x.get_den();
    bool negative = num < 0;
    if (negative) num = -num;
    // round half away from zero: q = floor((2*num + den) / (2*den))
    Integer q = (2 * num + den) / (2 * den);
    Integer ip = q / scale;
    Integer fp = q % scale;
    std::string out;
    if (negative && (ip != 0 || fp != 0)) out += '-';
    out += ip.get_str();
    if (digits > 0) {
        std::string frac = fp.get_str();
        out += '.';
        out += std::string(static_cast<std::size_t>(digits) - frac.size(), '0');
        out += frac;
    }
    return out;
}

Integer factorial_int(unsigned n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Integer binomial_int(unsigned n, unsigned k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational pow_rational(const Rational& base, unsigned exp) {
    Rational r(1);
    Rational b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace mcstat
