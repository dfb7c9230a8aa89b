#include "mcstat/pi_polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace mcstat {

namespace {

unsigned total_degree(const std::vector<unsigned>& exps) {
    return std::accumulate(exps.begin(), exps.end(), 0u);
}

}  // namespace

bool GradedLexLess::operator()(const std::vector<unsigned>& a,
                               const std::vector<unsigned>& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a < b;
}

PiPolynomial::PiPolynomial(int nvars) : nvars_(nvars) {
    if (nvars < 0) throw std::invalid_argument("negative variable count");
}

PiPolynomial PiPolynomial::constant(int nvars, const ExactScalar& value) {
    PiPolynomial p(nvars);
    p.add_term(std::vector<unsigned>(nvars, 0), value);
    return p;
}

PiPolynomial PiPolynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
    std::vector<unsigned> e(nvars, 0);
    e[index] = 1;
    return monomial(nvars, std::move(e), ExactScalar(1));
}

PiPolynomial PiPolynomial::monomial(int nvars, std::vector<unsigned> exps,
                                    const ExactScalar& coeff) {
    PiPolynomial p(nvars);
    p.add_term(exps, coeff);
    return p;
}

const ExactScalar& PiPolynomial::coeff(const std::vector<unsigned>& exps) const {
    static const ExactScalar zero;
    auto it = monomials_.find(exps);
    return it == monomials_.end() ? zero : it->second;
}

int PiPolynomial::length_degree() const {
    if (monomials_.empty()) return -1;
    return static_cast<int>(total_degree(monomials_.rbegin()->first));
}

bool PiPolynomial::is_homogeneous() const {
    if (monomials_.empty()) return true;
    unsigned d = total_degree(monomials_.begin()->first);
    return total_degree(monomials_.rbegin()->first) == d;
}

void PiPolynomial::add_term(const std::vector<unsigned>& exps, const ExactScalar& coeff) {
    if (static_cast<int>(exps.size()) != nvars_)
        throw std::invalid_argument("exponent vector length != variable count");
    if (coeff.is_zero()) return;
    auto [it, inserted] = monomials_.try_emplace(exps, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) monomials_.erase(it);
    }
}

PiPolynomial& PiPolynomial::operator+=(const PiPolynomial& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable count mismatch in +");
    for (const auto& [e, c] : o.monomials_) add_term(e, c);
    return *this;
}

PiPolynomial& PiPolynomial::operator-=(const PiPolynomial& o) {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable count mismatch in -");
    for (const auto& [e, c] : o.monomials_) add_term(e, -c);
    return *this;
}

PiPolynomial PiPolynomial::operator*(const PiPolynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("variable count mismatch in *");
    PiPolynomial out(nvars_);
    std::vector<unsigned> e(nvars_);
    for (const auto& [e1, c1] : monomials_) {
        for (const auto& [e2, c2] : o.monomials_) {
            for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
            out.add_term(e, c1 * c2);
        }
    }
    return out;
}

PiPolynomial& PiPolynomial::operator*=(const ExactScalar& c) {
    if (c.is_zero()) {
        monomials_.clear();
        return *this;
    }
    MonomialMap out;
    for (const auto& [e, v] : monomials_) {
        ExactScalar w = v * c;
        if (!w.is_zero()) out.emplace(e, std::move(w));
    }
    monomials_ = std::move(out);
    return *this;
}

PiPolynomial& PiPolynomial::operator*=(const Rational& c) {
    return *this *= ExactScalar(c);
}

PiPolynomial PiPolynomial::top_part() const {
    if (monomials_.empty()) throw std::domain_error("top part of the zero polynomial");
    unsigned d = total_degree(monomials_.rbegin()->first);
    PiPolynomial out(nvars_);
    for (auto it = monomials_.rbegin(); it != monomials_.rend(); ++it) {
        if (total_degree(it->first) != d) break;
        out.monomials_.emplace(it->first, it->second);
    }
    return out;
}

PiPolynomial PiPolynomial::substitute(const std::map<int, PiPolynomial>& assignments) const {
    for (const auto& [i, q] : assignments) {
        if (i < 0 || i >= nvars_) throw std::invalid_argument("substitution index out of range");
        if (q.nvars() != nvars_)
            throw std::invalid_argument("substituted polynomial has wrong variable count");
    }
    PiPolynomial out(nvars_);
    for (const auto& [e, c] : monomials_) {
        PiPolynomial term = constant(nvars_, c);
        std::vector<unsigned> rest(e);
        for (const auto& [i, q] : assignments) rest[i] = 0;
        PiPolynomial base = monomial(nvars_, rest, ExactScalar(1));
        term = term * base;
        for (const auto& [i, q] : assignments) {
            for (unsigned rep = 0; rep < e[i]; ++rep) term = term * q;
        }
        out += term;
    }
    return out;
}

PiPolynomial PiPolynomial::substitute(int var, const ExactScalar& value) const {
    std::map<int, PiPolynomial> m;
    m.emplace(var, constant(nvars_, value));
    return substitute(m);
}

PiPolynomial PiPolynomial::embed(int new_nvars, const std::vector<int>& target) const {
    if (static_cast<int>(target.size()) != nvars_)
        throw std::invalid_argument("embed map length != variable count");
    for (int t : target)
        if (t < 0 || t >= new_nvars) throw std::invalid_argument("embed target out of range");
    PiPolynomial out(new_nvars);
    std::vector<unsigned> e(new_nvars);
    for (const auto& [src, c] : monomials_) {
        std::fill(e.begin(), e.end(), 0u);
        for (int i = 0; i < nvars_; ++i) e[target[i]] += src[i];
        out.add_term(e, c);
    }
    return out;
}

ExactScalar PiPolynomial::eval_exact(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw std::invalid_argument("point dimension mismatch");
    ExactScalar acc;
    for (const auto& [e, c] : monomials_) {
        Rational m(1);
        for (int i = 0; i < nvars_; ++i)
            if (e[i] > 0) m *= pow_rational(point[i], e[i]);
        acc += c * m;
    }
    return acc;
}

RationalInterval PiPolynomial::eval_numeric(const std::vector<Rational>& point,
                                            int pi_digits) const {
    return eval_exact(point).eval_numeric(pi_digits);
}

bool PiPolynomial::all_coefficients_positive() const {
    return std::all_of(monomials_.begin(), monomials_.end(),
                       [](const auto& kv) { return kv.second.is_positive(); });
}

// ---------------------------------------------------------------------------
// canonical text form

namespace {

void render_term(std::string& out, bool first, const Rational& c,
                 unsigned upow, const std::vector<unsigned>& exps) {
    Rational abs = c < 0 ? Rational(-c) : c;
    std::string factors;
    if (upow > 0) {
        factors = upow == 1 ? "u" : "u^" + std::to_string(upow);
    }
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (exps[i] == 0) continue;
        if (!factors.empty()) factors += "*";
        factors += "x" + std::to_string(i + 1);
        if (exps[i] > 1) factors += "^" + std::to_string(exps[i]);
    }
    std::string body;
    std::string cs = abs.get_den() == 1 ? abs.get_str() : "(" + abs.get_str() + ")";
    if (factors.empty())
        body = cs;
    else if (abs == 1)
        body = factors;
    else
        body = cs + "*" + factors;
    if (first)
        out += (c < 0 ? "-" : "") + body;
    else
        out += (c < 0 ? " - " : " + ") + body;
}

}  // namespace

std::string PiPolynomial::serialize() const {
    if (monomials_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = monomials_.rbegin(); it != monomials_.rend(); ++it) {
        const auto& [e, scalar] = *it;
        for (auto jt = scalar.terms().rbegin(); jt != scalar.terms().rend(); ++jt) {
            render_term(out, first, jt->second, jt->first, e);
            first = false;
        }
    }
    return out;
}

namespace {

struct Token {
    enum Kind { Int, U, Var, LParen, RParen, Slash, Star, Caret, Plus, Minus, End } kind;
    std::string text;   // for Int
    unsigned index = 0;  // for Var (1-based)
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        std::size_t start = i_;
        if (i_ >= s_.size()) return {Token::End, "", 0, start};
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i_;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            Token t{Token::Int, s_.substr(i_, j - i_), 0, start};
            i_ = j;
            return t;
        }
        if (c == 'u') {
            ++i_;
            return {Token::U, "u", 0, start};
        }
        if (c == 'x') {
            std::size_t j = i_ + 1;
            while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
            if (j == i_ + 1) throw ParseError("variable needs an index", start);
            unsigned idx = std::stoul(s_.substr(i_ + 1, j - i_ - 1));
            if (idx == 0) throw ParseError("variable indices are 1-based", start);
            i_ = j;
            return {Token::Var, "", idx, start};
        }
        ++i_;
        switch (c) {
            case '(': return {Token::LParen, "(", 0, start};
            case ')': return {Token::RParen, ")", 0, start};
            case '/': return {Token::Slash, "/", 0, start};
            case '*': return {Token::Star, "*", 0, start};
            case '^': return {Token::Caret, "^", 0, start};
            case '+': return {Token::Plus, "+", 0, start};
            case '-': return {Token::Minus, "-", 0, start};
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;
};

struct ParsedTerm {
    Rational coeff{1};
    unsigned upow = 0;
    std::map<unsigned, unsigned> exps;  // 1-based variable index -> exponent
};

}  // namespace

PiPolynomial PiPolynomial::parse(const std::string& text, std::optional<int> nvars) {
    Lexer lex(text);
    Token tok = lex.next();
    if (tok.kind == Token::End) throw ParseError("empty polynomial text", 0);

    std::vector<std::pair<ParsedTerm, bool>> terms;  // term, negated
    bool negated = false;
    if (tok.kind == Token::Minus) {
        negated = true;
        tok = lex.next();
    }
    auto expect_exponent = [&](Token& t) -> unsigned {
        if (t.kind != Token::Caret) return 1;
        Token e = lex.next();
        if (e.kind != Token::Int) throw ParseError("expected exponent after '^'", e.pos);
        unsigned v = std::stoul(e.text);
        t = lex.next();
        return v;
    };

    while (true) {
        ParsedTerm term;
        bool saw_factor = false;
        bool expect_more = true;
        while (expect_more) {
            if (tok.kind == Token::Int) {
                Integer num(tok.text);
                tok = lex.next();
                if (tok.kind == Token::Slash) {
                    Token den = lex.next();
                    if (den.kind != Token::Int) throw ParseError("expected denominator", den.pos);
                    Integer q(den.text);
                    if (q == 0) throw ParseError("zero denominator", den.pos);
                    term.coeff *= make_rational(num, q);
                    tok = lex.next();
                } else {
                    term.coeff *= Rational(num);
                }
                saw_factor = true;
            } else if (tok.kind == Token::LParen) {
                Token num = lex.next();
                bool neg = false;
                if (num.kind == Token::Minus) {
                    neg = true;
                    num = lex.next();
                }
                if (num.kind != Token::Int) throw ParseError("expected numerator", num.pos);
                Integer p(num.text);
                Token t2 = lex.next();
                Integer q(1);
                if (t2.kind == Token::Slash) {
                    Token den = lex.next();
                    if (den.kind != Token::Int) throw ParseError("expected denominator", den.pos);
                    q = Integer(den.text);
                    if (q == 0) throw ParseError("zero denominator", den.pos);
                    t2 = lex.next();
                }
                if (t2.kind != Token::RParen) throw ParseError("expected ')'", t2.pos);
                term.coeff *= make_rational(neg ? Integer(-p) : p, q);
                tok = lex.next();
                saw_factor = true;
            } else if (tok.kind == Token::U) {
                tok = lex.next();
                term.upow += expect_exponent(tok);
                saw_factor = true;
            } else if (tok.kind == Token::Var) {
                unsigned idx = tok.index;
                tok = lex.next();
                term.exps[idx] += expect_exponent(tok);
                saw_factor = true;
            } else {
                throw ParseError("expected a coefficient or factor", tok.pos);
            }
            if (tok.kind == Token::Star) {
                tok = lex.next();
                continue;
            }
            expect_more = false;
        }
        if (!saw_factor) throw ParseError("empty term", tok.pos);
        terms.emplace_back(std::move(term), negated);
        if (tok.kind == Token::End) break;
        if (tok.kind == Token::Plus)
            negated = false;
        else if (tok.kind == Token::Minus)
            negated = true;
        else
            throw ParseError("expected '+' or '-' between terms", tok.pos);
        tok = lex.next();
    }

    unsigned max_index = 0;
    for (const auto& [t, neg] : terms)
        if (!t.exps.empty()) max_index = std::max(max_index, t.exps.rbegin()->first);
    int n = nvars.value_or(static_cast<int>(max_index));
    if (static_cast<int>(max_index) > n)
        throw ParseError("variable index exceeds declared variable count", 0);

    PiPolynomial out(n);
    for (const auto& [t, neg] : terms) {
        std::vector<unsigned> e(n, 0);
        for (const auto& [idx, ex] : t.exps) e[idx - 1] = ex;
        Rational c = neg ? Rational(-t.coeff) : t.coeff;
        out.add_term(e, ExactScalar::u_power(t.upow, c));
    }
    return out;
}

}  // namespace mcstat
