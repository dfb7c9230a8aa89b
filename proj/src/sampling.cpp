#include "mcstat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

namespace mcstat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct PreparedTarget {
    // top(P) with denominators cleared: value = sum_e W_e prod_i m_i^{e_i}
    // over (D * 2^{64 m}), m the common degree
    std::vector<std::pair<std::vector<unsigned>, Integer>> terms;
    Integer scaled_envelope;  // R-side constant: p_env * D << 64(m-1)
    Integer q_env;
    unsigned degree = 0;
};

PreparedTarget prepare_target(const GraphPolynomial& gp) {
    if (gp.top.is_zero()) throw std::invalid_argument("degenerate sampling envelope: zero density");
    PreparedTarget t;
    t.degree = static_cast<unsigned>(gp.top.length_degree());
    if (t.degree == 0) throw std::invalid_argument("sampling needs a nonconstant density");

    // per-monomial constants w_e = kappa_e / prod c_i^{e_i}; envelope = sum |w_e|
    std::vector<Rational> w;
    Rational envelope(0);
    Integer common_den(1);
    for (const auto& [e, c] : gp.top.monomials()) {
        Rational v = c.rational_value();
        for (int i = 0; i < gp.k; ++i)
            v /= pow_rational(Rational(gp.weights[i]), e[i]);
        envelope += v < 0 ? Rational(-v) : v;
        Integer den = v.get_den();
        mpz_lcm(common_den.get_mpz_t(), common_den.get_mpz_t(), den.get_mpz_t());
        w.push_back(v);
    }
    std::size_t idx = 0;
    for (const auto& [e, c] : gp.top.monomials()) {
        Integer weight = w[idx].get_num() * (common_den / w[idx].get_den());
        t.terms.emplace_back(e, weight);
        ++idx;
    }
    // accept iff R * p_env * D * 2^{64(m-1)} < q_env * sum_e W_e prod m_i^{e_i}
    t.scaled_envelope = envelope.get_num() * common_den;
    t.scaled_envelope <<= 64 * (t.degree - 1);
    t.q_env = envelope.get_den();
    return t;
}

void run_worker(const GraphPolynomial& gp, const PreparedTarget& target, std::size_t quota,
                std::uint64_t worker_seed, std::vector<Rational>& out_coords,
                std::uint64_t& out_proposals) {
    const int k = gp.k;
    std::mt19937_64 rng(worker_seed);
    const Integer two64 = Integer(1) << 64;

    std::vector<std::uint64_t> cuts(k - 1);
    std::vector<Integer> gaps(k);
    Integer value, term, rside;
    out_coords.reserve(quota * k);
    std::size_t accepted = 0;
    while (accepted < quota) {
        ++out_proposals;
        for (int i = 0; i < k - 1; ++i) cuts[i] = rng();
        std::uint64_t r = rng();
        std::sort(cuts.begin(), cuts.end());
        bool boundary = false;
        for (int i = 0; i < k; ++i) {
            unsigned __int128 lo = i == 0 ? 0 : static_cast<unsigned __int128>(cuts[i - 1]);
            unsigned __int128 hi = i == k - 1 ? (static_cast<unsigned __int128>(1) << 64)
                                              : static_cast<unsigned __int128>(cuts[i]);
            if (hi == lo) {
                boundary = true;
                break;
            }
            std::uint64_t g_lo = static_cast<std::uint64_t>(hi - lo);
            // hi - lo == 2^64 only when k == 1, excluded here
            gaps[i] = Integer(static_cast<unsigned long>(g_lo));
            if (g_lo == 0) {
                boundary = true;
                break;
            }
        }
        if (boundary) continue;  // proposals live on the open simplex

        // value = sum_e W_e prod_i gaps_i^{e_i}
        value = 0;
        for (const auto& [e, weight] : target.terms) {
            term = weight;
            for (int i = 0; i < k; ++i) {
                for (unsigned rep = 0; rep < e[i]; ++rep) term *= gaps[i];
            }
            value += term;
        }
        // accept iff r/2^64 * envelope < value / (D * 2^{64 m})
        rside = target.scaled_envelope * Integer(static_cast<unsigned long>(r));
        if (rside < target.q_env * value) {
            for (int i = 0; i < k; ++i)
                out_coords.push_back(
                    make_rational(gaps[i], two64 * Integer(gp.weights[i])));
            ++accepted;
        }
    }
}

}  // namespace

SampleBatch sample_distribution(const GraphPolynomial& gp, std::size_t count, std::uint64_t seed,
                                unsigned workers) {
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");

    SampleBatch batch;
    batch.k = gp.k;
    batch.seed = seed;
    batch.workers = workers;

    if (gp.k == 1) {
        // the distribution is the point mass at 1/c_1
        if (gp.top.is_zero()) throw std::invalid_argument("degenerate sampling envelope");
        Rational x = make_rational(1, static_cast<long>(gp.weights[0]));
        batch.coords.assign(count, x);
        batch.proposals = count;
        return batch;
    }

    PreparedTarget target = prepare_target(gp);

    std::vector<std::size_t> quota(workers, count / workers);
    for (std::size_t i = 0; i < count % workers; ++i) ++quota[i];
    std::vector<std::vector<Rational>> coords(workers);
    std::vector<std::uint64_t> proposals(workers, 0);

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) {
        if (quota[i] == 0) continue;
        std::uint64_t worker_seed = splitmix64(seed + i);
        pool.emplace_back(run_worker, std::cref(gp), std::cref(target), quota[i], worker_seed,
                          std::ref(coords[i]), std::ref(proposals[i]));
    }
    for (auto& t : pool) t.join();

    for (unsigned i = 0; i < workers; ++i) {
        batch.coords.insert(batch.coords.end(), coords[i].begin(), coords[i].end());
        batch.proposals += proposals[i];
    }
    return batch;
}

std::string SampleBatch::serialize() const {
    std::string out;
    for (std::size_t s = 0; s < size(); ++s) {
        for (int i = 0; i < k; ++i) {
            if (i) out += ' ';
            out += rational_str(at(s, i));
        }
        out += '\n';
    }
    return out;
}

double StatsReport::max_abs_z() const {
    double m = 0;
    for (const auto& r : records) m = std::max(m, std::abs(r.z));
    return m;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    return buf;
}

}  // namespace

std::string StatsReport::render_machine(int digits) const {
    std::string out;
    out += "samples " + std::to_string(count) + " seed " + std::to_string(seed) + "\n";
    for (const auto& r : records) {
        out += "stat " + r.name + " exact " + rational_str(r.exact) + " decimal " +
               decimal_string(r.exact, digits) + " empirical " + fmt_double(r.empirical) +
               " stderr " + fmt_double(r.stderr_value) + " z " + fmt_double(r.z) + "\n";
    }
    return out;
}

std::string StatsReport::render_table(int digits) const {
    std::ostringstream os;
    os << "statistic | exact | decimal | empirical | stderr | z\n";
    for (const auto& r : records) {
        os << r.name << " | " << rational_str(r.exact) << " | " << decimal_string(r.exact, digits)
           << " | " << fmt_double(r.empirical) << " | " << fmt_double(r.stderr_value) << " | "
           << fmt_double(r.z) << "\n";
    }
    return os.str();
}

std::string box_stat_name(const BoxCone& box) {
    if (box.is_full()) return "P[full]";
    std::string s = "P[";
    bool first = true;
    for (int i = 0; i < box.k(); ++i) {
        if (!box.constrained(i)) continue;
        if (!first) s += ",";
        s += std::to_string(i + 1) + "=" + rational_str(box.lo(i)) + ":" + rational_str(box.hi(i));
        first = false;
    }
    return s + "]";
}

std::string moment_stat_name(const std::vector<unsigned>& m) {
    std::string s = "E[";
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first) s += "*";
        s += "x" + std::to_string(i + 1);
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
        first = false;
    }
    if (first) s += "1";
    return s + "]";
}

StatsReport empirical_compare(const SampleBatch& batch, const GraphPolynomial& gp,
                              const std::vector<BoxCone>& boxes,
                              const std::vector<std::vector<unsigned>>& moments,
                              const StatsContext& ctx) {
    if (batch.k != gp.k) throw std::invalid_argument("batch dimension != graph dimension");
    const std::size_t n = batch.size();
    if (n == 0) throw std::invalid_argument("empty sample batch");

    StatsReport report;
    report.count = n;
    report.seed = batch.seed;

    for (const auto& box : boxes) {
        if (box.k() != gp.k) throw std::invalid_argument("box dimension != graph dimension");
        Rational p = box_probability(gp, box, ctx);
        if (p <= 0 || p >= 1)
            throw std::invalid_argument(box_stat_name(box) +
                                        ": exact probability is degenerate (0 or 1), no z-score");
        std::size_t hits = 0;
        for (std::size_t s = 0; s < n; ++s) {
            bool inside = true;
            for (int i = 0; i < gp.k && inside; ++i) {
                if (!box.constrained(i)) continue;
                Rational y = Rational(gp.weights[i]) * batch.at(s, i);
                inside = box.lo(i) <= y && y <= box.hi(i);
            }
            if (inside) ++hits;
        }
        double pd = p.get_d();
        double emp = static_cast<double>(hits) / static_cast<double>(n);
        double se = std::sqrt(pd * (1.0 - pd) / static_cast<double>(n));
        StatRecord rec{box_stat_name(box), p, emp, se, std::abs(emp - pd) / se};
        report.records.push_back(std::move(rec));
    }

    for (const auto& m : moments) {
        Rational exact = moment(gp, m, ctx);
        // Welford in sample order; deterministic
        double mean = 0, m2 = 0;
        for (std::size_t s = 0; s < n; ++s) {
            double v = 1;
            for (int i = 0; i < gp.k; ++i) {
                double x = batch.at(s, i).get_d();
                for (unsigned rep = 0; rep < m[i]; ++rep) v *= x;
            }
            double delta = v - mean;
            mean += delta / static_cast<double>(s + 1);
            m2 += delta * (v - mean);
        }
        double sd = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
        if (sd <= 0)
            throw std::invalid_argument(moment_stat_name(m) + ": constant statistic, no z-score");
        double se = sd / std::sqrt(static_cast<double>(n));
        StatRecord rec{moment_stat_name(m), exact, mean, se, std::abs(mean - exact.get_d()) / se};
        report.records.push_back(std::move(rec));
    }

    return report;
}

}  // namespace mcstat
