#include "mcstat/simplex_integral.hpp"

#include <algorithm>

namespace mcstat {

SimplexDomain::SimplexDomain(std::vector<unsigned long> c, std::optional<Rational> L)
    : weights(std::move(c)), scale(std::move(L)) {
    if (weights.empty()) throw std::invalid_argument("simplex needs k >= 1");
    for (unsigned long w : weights)
        if (w < 1) throw std::invalid_argument("simplex weights must be >= 1");
    if (scale && *scale <= 0) throw std::invalid_argument("simplex scale must be positive");
}

BoxCone::BoxCone(int k) {
    if (k < 1) throw std::invalid_argument("box needs k >= 1");
    lo_.assign(k, Rational(0));
    hi_.assign(k, Rational(1));
}

void BoxCone::set_bounds(int i, const Rational& lo, const Rational& hi) {
    if (i < 0 || i >= k()) throw std::invalid_argument("box index out of range");
    if (lo < 0 || hi > 1 || lo >= hi)
        throw std::invalid_argument("box bounds must satisfy 0 <= lo < hi <= 1");
    lo_[i] = lo;
    hi_[i] = hi;
}

bool BoxCone::is_full() const {
    for (int i = 0; i < k(); ++i)
        if (constrained(i)) return false;
    return true;
}

bool BoxCone::feasible() const {
    Rational lo_sum(0), hi_sum(0);
    for (int i = 0; i < k(); ++i) {
        lo_sum += lo_[i];
        hi_sum += hi_[i];
    }
    // k = 1: the simplex is the single point y = 1, a point mass
    if (k() == 1) return lo_sum <= 1 && hi_sum >= 1;
    return lo_sum < 1 && hi_sum > 1;
}

int MassPolynomial::degree() const {
    return coeffs_.empty() ? -1 : static_cast<int>(coeffs_.rbegin()->first);
}

const ExactScalar& MassPolynomial::coeff(unsigned p) const {
    static const ExactScalar zero;
    auto it = coeffs_.find(p);
    return it == coeffs_.end() ? zero : it->second;
}

ExactScalar MassPolynomial::leading_coefficient() const {
    return coeffs_.empty() ? ExactScalar() : coeffs_.rbegin()->second;
}

void MassPolynomial::add_term(unsigned l_power, const ExactScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(l_power, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

MassPolynomial& MassPolynomial::operator+=(const MassPolynomial& o) {
    for (const auto& [p, c] : o.coeffs_) add_term(p, c);
    return *this;
}

MassPolynomial& MassPolynomial::operator*=(const Rational& c) {
    if (c == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [p, v] : coeffs_) v *= c;
    return *this;
}

ExactScalar MassPolynomial::evaluate(const Rational& L) const {
    ExactScalar acc;
    for (const auto& [p, c] : coeffs_) acc += c * pow_rational(L, p);
    return acc;
}

std::string MassPolynomial::to_string() const {
    // render through the polynomial grammar with one variable called L
    PiPolynomial p(1);
    for (const auto& [pw, c] : coeffs_) p.add_term({pw}, c);
    std::string s = p.serialize();
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == 'x' && i + 1 < s.size() && s[i + 1] == '1') {
            out += 'L';
            ++i;
        } else {
            out += s[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// closed forms over the unrestricted domain

namespace {

Rational dirichlet_coeff(const std::vector<unsigned>& exps, const SimplexDomain& dom,
                         bool ball) {
    unsigned m = 0;
    Integer num(1);
    for (unsigned a : exps) {
        m += a;
        num *= factorial_int(a);
    }
    unsigned k = exps.size();
    Integer den = factorial_int(ball ? m + k : m + k - 1);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        Integer cw(static_cast<unsigned long>(dom.weights[i]));
        Integer cpow;
        mpz_pow_ui(cpow.get_mpz_t(), cw.get_mpz_t(), exps[i] + 1);
        den *= cpow;
    }
    return make_rational(num, den);
}

}  // namespace

ScaledIntegral monomial_ball_integral(const std::vector<unsigned>& exps,
                                      const SimplexDomain& dom) {
    if (static_cast<int>(exps.size()) != dom.k())
        throw std::invalid_argument("exponent vector length != simplex dimension");
    unsigned m = 0;
    for (unsigned a : exps) m += a;
    return {ExactScalar(dirichlet_coeff(exps, dom, true)), m + static_cast<unsigned>(dom.k())};
}

ScaledIntegral monomial_simplex_integral(const std::vector<unsigned>& exps,
                                         const SimplexDomain& dom) {
    if (static_cast<int>(exps.size()) != dom.k())
        throw std::invalid_argument("exponent vector length != simplex dimension");
    unsigned m = 0;
    for (unsigned a : exps) m += a;
    return {ExactScalar(dirichlet_coeff(exps, dom, false)),
            m + static_cast<unsigned>(dom.k()) - 1};
}

MassPolynomial poly_simplex_integral(const PiPolynomial& p, const SimplexDomain& dom) {
    if (p.nvars() != dom.k()) throw std::invalid_argument("polynomial/simplex dimension mismatch");
    MassPolynomial out;
    for (const auto& [e, c] : p.monomials()) {
        ScaledIntegral s = monomial_simplex_integral(e, dom);
        out.add_term(s.l_power, c * s.coeff.rational_value());
    }
    return out;
}

// ---------------------------------------------------------------------------
// exact piecewise-polynomial convolution for box restrictions
//
// After substituting y_i = c_i x_i the level-set integral of a monomial
// prod x_i^{e_i} over the box becomes
//   (prod c_i^{-(e_i+1)}) * (f_1 * f_2 * ... * f_k)(1)
// where f_i(t) = t^{e_i} on [a_i, b_i] and * is convolution. Piecewise
// polynomials with rational breakpoints are closed under convolution.

namespace {

using Poly = std::vector<Rational>;  // coefficient vector, ascending powers

Rational poly_eval(const Poly& p, const Rational& x) {
    Rational v(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

struct Piece {
    Rational lo, hi;
    Poly poly;
};

// (c0 + c1 s)^n
Poly affine_pow(const Rational& c0, const Rational& c1, unsigned n) {
    Poly out(n + 1, Rational(0));
    for (unsigned j = 0; j <= n; ++j)
        out[j] = Rational(binomial_int(n, j)) * pow_rational(c0, n - j) * pow_rational(c1, j);
    return out;
}

// Convolve one piece (P on [lo,hi]) with t^e on [a,b]; the result is a
// list of pieces to be summed into the accumulator.
std::vector<Piece> convolve_piece(const Piece& piece, unsigned e, const Rational& a,
                                  const Rational& b) {
    // G(t, s) = int P(t) (s - t)^e dt, a polynomial in t and s; evaluated
    // at affine bounds t = c0 + c1 s it becomes a polynomial in s.
    auto antiderivative_at = [&](const Rational& c0, const Rational& c1) -> Poly {
        Poly out(piece.poly.size() + e + 2, Rational(0));
        for (std::size_t i = 0; i < piece.poly.size(); ++i) {
            if (piece.poly[i] == 0) continue;
            for (unsigned j = 0; j <= e; ++j) {
                // coeff of t^{i+e-j} s^j in P(t)(s-t)^e
                Rational q = piece.poly[i] * Rational(binomial_int(e, j));
                if ((e - j) % 2 == 1) q = -q;
                unsigned ti = static_cast<unsigned>(i) + (e - j) + 1;
                Poly tp = affine_pow(c0, c1, ti);
                Rational scale = q / Rational(ti);
                for (std::size_t jj = 0; jj < tp.size(); ++jj) {
                    out[j + jj] += scale * tp[jj];
                }
            }
        }
        return out;
    };

    std::vector<Rational> bps{piece.lo + a, piece.lo + b, piece.hi + a, piece.hi + b};
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    std::vector<Piece> out;
    for (std::size_t t = 0; t + 1 < bps.size(); ++t) {
        const Rational& s0 = bps[t];
        const Rational& s1 = bps[t + 1];
        Rational mid = (s0 + s1) / 2;
        Rational lower = std::max(piece.lo, Rational(mid - b));
        Rational upper = std::min(piece.hi, Rational(mid - a));
        if (lower >= upper) continue;
        // the active bound forms are constant on (s0, s1)
        bool lower_const = piece.lo >= mid - b;
        bool upper_const = piece.hi <= mid - a;
        Poly up = upper_const ? antiderivative_at(piece.hi, Rational(0))
                              : antiderivative_at(-a, Rational(1));
        Poly lo = lower_const ? antiderivative_at(piece.lo, Rational(0))
                              : antiderivative_at(-b, Rational(1));
        Poly diff(std::max(up.size(), lo.size()), Rational(0));
        for (std::size_t i = 0; i < up.size(); ++i) diff[i] += up[i];
        for (std::size_t i = 0; i < lo.size(); ++i) diff[i] -= lo[i];
        out.push_back({s0, s1, std::move(diff)});
    }
    return out;
}

std::vector<Piece> merge_pieces(const std::vector<Piece>& pieces) {
    std::vector<Rational> bps;
    for (const auto& p : pieces) {
        bps.push_back(p.lo);
        bps.push_back(p.hi);
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    std::vector<Piece> out;
    for (std::size_t t = 0; t + 1 < bps.size(); ++t) {
        Poly acc;
        for (const auto& p : pieces) {
            if (p.lo <= bps[t] && bps[t + 1] <= p.hi) {
                if (p.poly.size() > acc.size()) acc.resize(p.poly.size(), Rational(0));
                for (std::size_t i = 0; i < p.poly.size(); ++i) acc[i] += p.poly[i];
            }
        }
        while (!acc.empty() && acc.back() == 0) acc.pop_back();
        if (!acc.empty()) out.push_back({bps[t], bps[t + 1], std::move(acc)});
    }
    return out;
}

// Value at 1 of f_1 * ... * f_k with f_i(t) = t^{e_i} on [lo_i, hi_i].
Rational convolution_at_one(const std::vector<unsigned>& exps, const std::vector<Rational>& lo,
                            const std::vector<Rational>& hi) {
    std::size_t k = exps.size();
    for (std::size_t i = 0; i < k; ++i)
        if (lo[i] >= hi[i]) return Rational(0);
    if (k == 1) {
        // the level set is the single point t = 1
        return lo[0] <= 1 && 1 <= hi[0] ? Rational(1) : Rational(0);
    }
    std::vector<Piece> f{{lo[0], hi[0], Poly(exps[0] + 1, Rational(0))}};
    f[0].poly[exps[0]] = 1;
    for (std::size_t i = 1; i < k; ++i) {
        std::vector<Piece> parts;
        for (const auto& piece : f) {
            auto add = convolve_piece(piece, exps[i], lo[i], hi[i]);
            parts.insert(parts.end(), add.begin(), add.end());
        }
        f = merge_pieces(parts);
        if (f.empty()) return Rational(0);
    }
    for (const auto& piece : f)
        if (piece.lo <= 1 && 1 <= piece.hi) return poly_eval(piece.poly, Rational(1));
    return Rational(0);
}

}  // namespace

ExactScalar box_simplex_integral(const PiPolynomial& p, const SimplexDomain& dom,
                                 const BoxCone& box) {
    if (p.nvars() != dom.k()) throw std::invalid_argument("polynomial/simplex dimension mismatch");
    if (box.k() != dom.k()) throw std::invalid_argument("box/simplex dimension mismatch");
    if (box.is_full()) {
        ExactScalar acc;
        for (const auto& [e, c] : p.monomials())
            acc += c * dirichlet_coeff(e, dom, false);
        return acc;
    }
    // degenerate or empty intersections fall out of the convolution as 0

    const int k = dom.k();
    std::vector<Rational> lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
        lo[i] = std::max(box.lo(i), Rational(0));
        hi[i] = std::min(box.hi(i), Rational(1));
    }
    ExactScalar acc;
    for (const auto& [e, c] : p.monomials()) {
        Rational base = convolution_at_one(e, lo, hi);
        if (base == 0) continue;
        for (int i = 0; i < k; ++i) {
            base /= pow_rational(Rational(static_cast<unsigned long>(dom.weights[i])), e[i] + 1);
        }
        acc += c * base;
    }
    return acc;
}

MassPolynomial box_mass_polynomial(const PiPolynomial& p, const SimplexDomain& dom,
                                   const BoxCone& box) {
    if (box.is_full()) return poly_simplex_integral(p, dom);
    MassPolynomial out;
    const unsigned k = static_cast<unsigned>(dom.k());
    for (const auto& [e, c] : p.monomials()) {
        PiPolynomial mono = PiPolynomial::monomial(p.nvars(), e, c);
        ExactScalar val = box_simplex_integral(mono, dom, box);
        unsigned m = 0;
        for (unsigned a : e) m += a;
        out.add_term(m + k - 1, val);
    }
    return out;
}

ExactScalar cone_integral(const PiPolynomial& p, const SimplexDomain& dom, const BoxCone& box) {
    if (!p.is_homogeneous())
        throw std::invalid_argument("cone integral needs a homogeneous polynomial");
    if (p.is_zero()) return ExactScalar();
    int m = p.length_degree();
    ExactScalar level = box_simplex_integral(p, dom, box);
    return level.divided_by(Rational(m + dom.k()));
}

}  // namespace mcstat
