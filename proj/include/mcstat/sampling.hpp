/*
 * sampling.hpp
 * ------------
 * Seeded rejection sampler for the limiting length distribution, plus
 * the exact-vs-empirical comparison report.
 *
 * Proposals are uniform on the simplex (sorted-gap construction over a
 * fixed 2^64 grid, so every coordinate is an exact rational) and are
 * accepted against the coefficient-sum envelope of top(P) using integer
 * arithmetic only. Results are deterministic given (seed, count,
 * workers); workers derive their streams by seed-splitting and the
 * merged batch is ordered by worker index.
 */
#pragma once

#include <cstdint>

#include "mcstat/length_stats.hpp"

namespace mcstat {

struct SampleBatch {
    int k = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::uint64_t proposals = 0;   // total proposals drawn
    std::vector<Rational> coords;  // k rationals per sample

    std::size_t size() const { return k == 0 ? 0 : coords.size() / k; }
    const Rational& at(std::size_t sample, int var) const { return coords[sample * k + var]; }

    // One sample per line, canonical rationals, space-separated.
    std::string serialize() const;
};

SampleBatch sample_distribution(const GraphPolynomial& gp, std::size_t count, std::uint64_t seed,
                                unsigned workers = 4);

struct StatRecord {
    std::string name;
    Rational exact;
    double empirical = 0;
    double stderr_value = 0;
    double z = 0;
};

struct StatsReport {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::vector<StatRecord> records;

    double max_abs_z() const;
    // one record per line: name, exact p/q, decimal, empirical, stderr, z
    std::string render_machine(int digits = 12) const;
    std::string render_table(int digits = 6) const;
};

// Deterministic statistic labels used in reports and CLI output.
std::string box_stat_name(const BoxCone& box);
std::string moment_stat_name(const std::vector<unsigned>& exponents);

// Exact box probabilities and moments vs empirical frequencies/means.
// Boxes with exact probability 0 or 1 and constant moment statistics are
// rejected (the z-score would have no standard error).
StatsReport empirical_compare(const SampleBatch& batch, const GraphPolynomial& gp,
                              const std::vector<BoxCone>& boxes,
                              const std::vector<std::vector<unsigned>>& moments,
                              const StatsContext& ctx);

}  // namespace mcstat
