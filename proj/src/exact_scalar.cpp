#include "mcstat/exact_scalar.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcstat {

RationalInterval::RationalInterval(Rational a, Rational b) : lo(std::move(a)), hi(std::move(b)) {
    if (lo > hi) throw std::invalid_argument("interval endpoints out of order");
}

RationalInterval RationalInterval::operator+(const RationalInterval& o) const {
    return RationalInterval(lo + o.lo, hi + o.hi);
}

RationalInterval RationalInterval::operator*(const RationalInterval& o) const {
    Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return RationalInterval(std::min(std::min(a, b), std::min(c, d)),
                            std::max(std::max(a, b), std::max(c, d)));
}

RationalInterval RationalInterval::pow(unsigned e) const {
    RationalInterval r(Rational(1), Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

std::string RationalInterval::to_string(int digits) const {
    return "[" + decimal_string(lo, digits) + ", " + decimal_string(hi, digits) + "]";
}

namespace {

// arctan(1/x) enclosure from the alternating series, truncated so that
// the first omitted term is below `tail`.
RationalInterval arctan_inv(long x, const Rational& tail) {
    Rational sum(0);
    Rational xr(1, x);
    Rational term = xr;
    unsigned k = 0;
    bool positive = true;
    while (true) {
        Rational contrib = term / (2 * k + 1);
        if (contrib <= tail) {
            // partial sum alternates around the limit
            if (positive) return RationalInterval(sum, sum + contrib);
            return RationalInterval(sum - contrib, sum);
        }
        sum += positive ? contrib : -contrib;
        positive = !positive;
        term *= xr * xr;
        ++k;
    }
}

}  // namespace

RationalInterval pi_squared_enclosure(int digits) {
    if (digits < 1) throw std::invalid_argument("pi precision must be >= 1 digit");
    // pi = 16 arctan(1/5) - 4 arctan(1/239); a couple of guard digits keep
    // the squared interval inside the requested width.
    Rational tail = pow_rational(Rational(1, 10), static_cast<unsigned>(digits) + 4);
    RationalInterval a5 = arctan_inv(5, tail);
    RationalInterval a239 = arctan_inv(239, tail);
    Rational lo = 16 * a5.lo - 4 * a239.hi;
    Rational hi = 16 * a5.hi - 4 * a239.lo;
    RationalInterval pi(lo, hi);
    return pi * pi;
}

ExactScalar::ExactScalar(long value) {
    if (value != 0) terms_[0] = Rational(value);
}

ExactScalar::ExactScalar(const Rational& value) {
    if (value != 0) terms_[0] = value;
}

ExactScalar ExactScalar::u_power(unsigned j, const Rational& coeff) {
    ExactScalar s;
    if (coeff != 0) s.terms_[j] = coeff;
    return s;
}

bool ExactScalar::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Rational ExactScalar::rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw std::domain_error("scalar carries u-terms, not a plain rational");
    return terms_.begin()->second;
}

unsigned ExactScalar::u_degree() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first;
}

const Rational& ExactScalar::coeff(unsigned j) const {
    static const Rational zero(0);
    auto it = terms_.find(j);
    return it == terms_.end() ? zero : it->second;
}

void ExactScalar::prune(unsigned j) {
    auto it = terms_.find(j);
    if (it != terms_.end() && it->second == 0) terms_.erase(it);
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    for (const auto& [j, c] : o.terms_) {
        terms_[j] += c;
        prune(j);
    }
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    for (const auto& [j, c] : o.terms_) {
        terms_[j] -= c;
        prune(j);
    }
    return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    std::map<unsigned, Rational> out;
    for (const auto& [j1, c1] : terms_)
        for (const auto& [j2, c2] : o.terms_) out[j1 + j2] += c1 * c2;
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    terms_ = std::move(out);
    return *this;
}

ExactScalar& ExactScalar::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [j, v] : terms_) v *= c;
    return *this;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r = *this;
    for (auto& [j, v] : r.terms_) v = -v;
    return r;
}

ExactScalar ExactScalar::divided_by(const Rational& c) const {
    if (c == 0) throw std::invalid_argument("division by zero");
    ExactScalar r = *this;
    for (auto& [j, v] : r.terms_) v /= c;
    return r;
}

RationalInterval ExactScalar::eval(const RationalInterval& u) const {
    RationalInterval acc;
    for (const auto& [j, c] : terms_) {
        RationalInterval t = u.pow(j);
        acc = acc + t * RationalInterval(c, c);
    }
    return acc;
}

RationalInterval ExactScalar::eval_numeric(int pi_digits) const {
    return eval(pi_squared_enclosure(pi_digits));
}

bool ExactScalar::is_positive() const {
    if (terms_.empty()) return false;
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.second > 0; });
}

std::string ExactScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    // descending u-power, matching the polynomial grammar
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [j, c] = *it;
        std::string term;
        Rational abs = c < 0 ? Rational(-c) : c;
        if (j == 0) {
            term = abs.get_str();
        } else {
            std::string cs = abs.get_den() == 1 ? abs.get_str() : "(" + abs.get_str() + ")";
            std::string uf = j == 1 ? "u" : "u^" + std::to_string(j);
            term = (abs == 1) ? uf : cs + "*" + uf;
        }
        if (out.empty())
            out = (c < 0 ? "-" : "") + term;
        else
            out += (c < 0 ? " - " : " + ") + term;
    }
    return out;
}

}  // namespace mcstat
