#include "mcstat/volume_table.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mcstat {

namespace {

// Bernoulli numbers B_0, B_1, ... via the defining recurrence.
const Rational& bernoulli(unsigned m) {
    static std::vector<Rational> table{Rational(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (table.size() <= m) {
        unsigned k = table.size();
        Rational acc(0);
        for (unsigned j = 0; j + 1 <= k; ++j)
            acc += Rational(binomial_int(k + 1, j)) * table[j];
        table.push_back(-acc / Rational(binomial_int(k + 1, k)));
    }
    return table[m];
}

// F_{2k+1}(t) = int_0^inf s^{2k+1} H(s,t) ds for the recursion kernel
// H(s,t) = 1/(1+e^{(s+t)/2}) + 1/(1+e^{(s-t)/2}); an even polynomial in t
// of degree 2k+2. Returned as t-power -> coefficient in Q[u].
const std::map<unsigned, ExactScalar>& kernel_moment(unsigned m) {
    static std::map<unsigned, std::map<unsigned, ExactScalar>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    if (m % 2 == 0) throw std::logic_error("kernel moment needs an odd power");
    unsigned k = (m - 1) / 2;
    std::map<unsigned, ExactScalar> F;
    Rational fac(factorial_int(2 * k + 1));
    for (unsigned i = 0; i <= k + 1; ++i) {
        unsigned tpow = 2 * k + 2 - 2 * i;
        Rational z = zeta_even_rational(i);
        Rational c = fac * z * Rational(Integer(1) << (2 * i + 1), 1);
        c -= fac * z * 4;
        c /= Rational(factorial_int(tpow));
        ExactScalar& slot = F[tpow];
        slot += ExactScalar::u_power(i, c);
        if (slot.is_zero()) F.erase(tpow);
    }
    return cache.emplace(m, std::move(F)).first->second;
}

}  // namespace

Rational zeta_even_rational(unsigned i) {
    if (i == 0) return Rational(-1, 2);
    // zeta(2i) = (-1)^{i+1} B_{2i} (2 pi)^{2i} / (2 (2i)!), with pi^2 = u
    Rational b = bernoulli(2 * i);
    Rational c = b * Rational(Integer(1) << (2 * i), 1) / (2 * Rational(factorial_int(2 * i)));
    return (i % 2 == 1) ? c : Rational(-c);
}

VolumeTable::VolumeTable(int complexity_cap) : cap_(complexity_cap) {}

PiPolynomial VolumeTable::volume(SurfaceType s) {
    if (!s.stable())
        throw std::invalid_argument("unstable surface type (" + std::to_string(s.g) + "," +
                                    std::to_string(s.n) + ")");
    if (s.complexity() > cap_)
        throw ResourceLimitError("surface complexity 2g-2+n = " + std::to_string(s.complexity()) +
                                 " exceeds cap " + std::to_string(cap_));
    std::promise<PiPolynomial> promise;
    std::shared_future<PiPolynomial> fut;
    bool owner = false;
    {
        std::lock_guard<std::mutex> lock(*mu_);
        auto it = memo_.find(s);
        if (it != memo_.end()) {
            fut = it->second;
        } else {
            fut = promise.get_future().share();
            memo_.emplace(s, fut);
            owner = true;
        }
    }
    if (!owner) return fut.get();
    try {
        PiPolynomial result = compute(s);
        {
            std::lock_guard<std::mutex> lock(*mu_);
            bool builtin = (s == SurfaceType{0, 3}) || (s == SurfaceType{1, 1});
            provenance_.emplace(s, builtin ? Provenance::Builtin : Provenance::Computed);
        }
        promise.set_value(result);
        return result;
    } catch (...) {
        {
            std::lock_guard<std::mutex> lock(*mu_);
            memo_.erase(s);
        }
        promise.set_exception(std::current_exception());
        throw;
    }
}

PiPolynomial VolumeTable::volume_top(SurfaceType s) {
    return volume(s).top_part();
}

PiPolynomial VolumeTable::compute(SurfaceType s) {
    if (s == SurfaceType{0, 3}) return PiPolynomial::constant(3, ExactScalar(1));
    if (s == SurfaceType{1, 1}) {
        PiPolynomial p(1);
        p.add_term({2}, ExactScalar(Rational(1, 24)));
        p.add_term({0}, ExactScalar::u_power(1, Rational(1, 6)));
        return p;
    }
    PiPolynomial result = s.n == 0 ? boundaryless_volume(s.g) : recursion_step(s);
    validate_volume(s, result);
    return result;
}

PiPolynomial VolumeTable::internal_volume(SurfaceType s) {
    PiPolynomial v = volume(s);
    if (s == SurfaceType{1, 1}) v *= Rational(1, 2);
    return v;
}

// V_{g,0} from the dilaton relation applied to V_{g,1}:
// sum_j j A_j (-4u)^{j-1} = (g-1) V_{g,0}, where V_{g,1} = sum_j A_j x^{2j}.
PiPolynomial VolumeTable::boundaryless_volume(unsigned g) {
    if (g < 2) throw std::invalid_argument("boundaryless volume needs genus >= 2");
    PiPolynomial v1 = volume({g, 1});
    ExactScalar acc;
    for (const auto& [e, c] : v1.monomials()) {
        unsigned j = e[0] / 2;
        if (j == 0) continue;
        Rational pw = pow_rational(Rational(-4), j - 1);
        acc += c * ExactScalar::u_power(j - 1, pw * j);
    }
    acc = acc.divided_by(Rational(static_cast<long>(g) - 1));
    return PiPolynomial::constant(0, acc);
}

PiPolynomial VolumeTable::recursion_step(SurfaceType s) {
    const unsigned g = s.g;
    const int n = static_cast<int>(s.n);
    PiPolynomial rhs(n);
    std::vector<unsigned> r(n);

    // one pair of pants carrying boundary 1 and two new boundaries,
    // attached to a connected surface of genus g-1
    if (g >= 1 && SurfaceType{g - 1, s.n + 1}.stable()) {
        PiPolynomial w = internal_volume({g - 1, s.n + 1});
        for (const auto& [e, c] : w.monomials()) {
            unsigned a = e[0], b = e[1];
            unsigned m = a + b + 3;
            Rational beta = make_rational(factorial_int(a + 1) * factorial_int(b + 1),
                                                  factorial_int(m));
            ExactScalar coeff = c * (beta / 2);
            for (const auto& [tpow, fc] : kernel_moment(m)) {
                r[0] = tpow;
                for (int j = 1; j < n; ++j) r[j] = e[j + 1];
                rhs.add_term(r, coeff * fc);
            }
        }
    }

    // same pair of pants, attached to an ordered pair of surfaces
    const int rest = n - 1;
    for (unsigned g1 = 0; g1 <= g; ++g1) {
        unsigned g2 = g - g1;
        for (unsigned mask = 0; mask < (1u << rest); ++mask) {
            std::vector<int> I, J;
            for (int j = 0; j < rest; ++j)
                (mask >> j & 1u ? I : J).push_back(j + 1);
            SurfaceType s1{g1, static_cast<unsigned>(I.size()) + 1};
            SurfaceType s2{g2, static_cast<unsigned>(J.size()) + 1};
            if (!s1.stable() || !s2.stable()) continue;
            PiPolynomial wa = internal_volume(s1);
            PiPolynomial wb = internal_volume(s2);
            for (const auto& [ea, ca] : wa.monomials()) {
                for (const auto& [eb, cb] : wb.monomials()) {
                    unsigned a = ea[0], b = eb[0];
                    unsigned m = a + b + 3;
                    Rational beta = make_rational(factorial_int(a + 1) * factorial_int(b + 1),
                                                  factorial_int(m));
                    ExactScalar coeff = ca * cb * (beta / 2);
                    for (const auto& [tpow, fc] : kernel_moment(m)) {
                        r.assign(n, 0);
                        r[0] = tpow;
                        for (std::size_t t = 0; t < I.size(); ++t) r[I[t]] = ea[1 + t];
                        for (std::size_t t = 0; t < J.size(); ++t) r[J[t]] = eb[1 + t];
                        rhs.add_term(r, coeff * fc);
                    }
                }
            }
        }
    }

    // boundaries 1 and j joined into one pair of pants
    if (n >= 2 && SurfaceType{g, s.n - 1}.stable()) {
        PiPolynomial w = internal_volume({g, s.n - 1});
        for (int j = 1; j < n; ++j) {
            for (const auto& [e, c] : w.monomials()) {
                unsigned a = e[0];
                unsigned m = a + 1;
                for (const auto& [p, fc] : kernel_moment(m)) {
                    // (L1+Lj)^p + (L1-Lj)^p = 2 sum_{q even} C(p,q) L1^{p-q} Lj^q,
                    // and the overall 1/2 cancels the 2.
                    for (unsigned q = 0; q <= p; q += 2) {
                        r.assign(n, 0);
                        r[0] = p - q;
                        r[j] = q;
                        int t = 0;
                        for (int lab = 1; lab < n; ++lab) {
                            if (lab == j) continue;
                            r[lab] += e[1 + t];
                            ++t;
                        }
                        rhs.add_term(r, c * fc * Rational(binomial_int(p, q)));
                    }
                }
            }
        }
    }

    // d/dL1 (L1 V) = rhs; integrate and divide by L1
    PiPolynomial out(n);
    for (const auto& [e, c] : rhs.monomials())
        out.add_term(e, c.divided_by(Rational(e[0] + 1)));
    return out;
}

void VolumeTable::validate_volume(SurfaceType s, const PiPolynomial& p) {
    const std::string tag = "V " + std::to_string(s.g) + " " + std::to_string(s.n);
    if (p.nvars() != static_cast<int>(s.n))
        throw std::runtime_error(tag + ": variable count != boundary count");
    if (p.is_zero()) throw std::runtime_error(tag + ": zero polynomial");
    const int d = s.dim();
    // a boundaryless volume is a constant in Q[u]; otherwise the top
    // degree in the length variables is exactly 2(3g-3+n)
    const int expected_degree = s.n == 0 ? 0 : 2 * d;
    if (p.length_degree() != expected_degree)
        throw std::runtime_error(tag + ": total degree " + std::to_string(p.length_degree()) +
                                 " != " + std::to_string(expected_degree));
    for (const auto& [e, c] : p.monomials()) {
        for (unsigned v : e)
            if (v % 2 != 0) throw std::runtime_error(tag + ": odd exponent present");
        if (static_cast<int>(c.u_degree()) > d)
            throw std::runtime_error(tag + ": u-power exceeds " + std::to_string(d));
        if (!c.is_positive()) throw std::runtime_error(tag + ": nonpositive coefficient");
    }
    // S_n is generated by a transposition and an n-cycle
    const int n = static_cast<int>(s.n);
    if (n >= 2) {
        auto permuted = [&](const std::vector<int>& perm) {
            PiPolynomial q(n);
            std::vector<unsigned> e2(n);
            for (const auto& [e, c] : p.monomials()) {
                for (int i = 0; i < n; ++i) e2[perm[i]] = e[i];
                q.add_term(e2, c);
            }
            return q;
        };
        std::vector<int> swap01(n), cycle(n);
        for (int i = 0; i < n; ++i) swap01[i] = i, cycle[i] = (i + 1) % n;
        std::swap(swap01[0], swap01[1]);
        if (permuted(swap01) != p || permuted(cycle) != p)
            throw std::runtime_error(tag + ": not symmetric under boundary permutations");
    }
}

std::vector<std::tuple<SurfaceType, PiPolynomial, Provenance>> VolumeTable::entries() const {
    std::vector<std::pair<SurfaceType, std::shared_future<PiPolynomial>>> snapshot;
    std::map<SurfaceType, Provenance> prov;
    {
        std::lock_guard<std::mutex> lock(*mu_);
        for (const auto& [s, fut] : memo_) snapshot.emplace_back(s, fut);
        prov = provenance_;
    }
    std::vector<std::tuple<SurfaceType, PiPolynomial, Provenance>> out;
    for (auto& [s, fut] : snapshot) {
        auto it = prov.find(s);
        if (it == prov.end()) continue;  // still in flight
        out.emplace_back(s, fut.get(), it->second);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const SurfaceType sa = std::get<0>(a), sb = std::get<0>(b);
        return std::pair(sa.complexity(), sa.g) < std::pair(sb.complexity(), sb.g);
    });
    return out;
}

namespace {

std::string checksum_hex(const std::string& text) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(text);
    return os.str();
}

}  // namespace

void VolumeTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open cache file for writing: " + path);
    for (const auto& [s, poly, prov] : entries()) {
        std::string text = poly.serialize();
        out << "V " << s.g << " " << s.n << " : " << text << " : " << checksum_hex(text) << "\n";
    }
    if (!out) throw std::runtime_error("write failure on cache file: " + path);
}

VolumeTable VolumeTable::load(const std::string& path, int complexity_cap) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cache file: " + path);
    VolumeTable table(complexity_cap);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string tag, colon1;
        unsigned g, n;
        if (!(is >> tag >> g >> n >> colon1) || tag != "V" || colon1 != ":")
            throw ParseError("cache line " + std::to_string(lineno) + ": malformed record", lineno);
        std::string rest;
        std::getline(is, rest);
        std::size_t sep = rest.rfind(" : ");
        if (sep == std::string::npos)
            throw ParseError("cache line " + std::to_string(lineno) + ": missing checksum", lineno);
        std::string text = rest.substr(1, sep - 1);
        std::string sum = rest.substr(sep + 3);
        if (checksum_hex(text) != sum)
            throw std::runtime_error("cache line " + std::to_string(lineno) + ": checksum mismatch for V " +
                                     std::to_string(g) + " " + std::to_string(n));
        SurfaceType s{g, n};
        if (!s.stable())
            throw std::runtime_error("cache line " + std::to_string(lineno) + ": unstable surface type");
        PiPolynomial poly = PiPolynomial::parse(text, static_cast<int>(n));
        validate_volume(s, poly);
        std::promise<PiPolynomial> promise;
        promise.set_value(poly);
        std::lock_guard<std::mutex> lock(*table.mu_);
        table.memo_.emplace(s, promise.get_future().share());
        table.provenance_.emplace(s, Provenance::Loaded);
    }
    return table;
}

}  // namespace mcstat
