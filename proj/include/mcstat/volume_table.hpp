/*
 * volume_table.hpp
 * ----------------
 * Weil-Petersson volume polynomials V_{g,n}(x1..xn), computed exactly by
 * Mirzakhani's boundary-length recursion and memoized. The kernel
 * integrals reduce to moment polynomials with zeta(2i) coefficients, so
 * everything stays in Q[u] with u = pi^2.
 *
 * Hard-coded bases: V_{0,3} = 1 and V_{1,1} = (x^2 + 4u)/24. Inside the
 * recursion a one-holed torus enters with half that value (the extra
 * involution of the (1,1) piece); the table always hands out the /24
 * normalization.
 */
#pragma once

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mcstat/pi_polynomial.hpp"

namespace mcstat {

struct SurfaceType {
    unsigned g = 0;  // genus
    unsigned n = 0;  // boundary components

    bool stable() const { return 2 * static_cast<int>(g) - 2 + static_cast<int>(n) > 0; }
    int complexity() const { return 2 * static_cast<int>(g) - 2 + static_cast<int>(n); }
    int dim() const { return 3 * static_cast<int>(g) - 3 + static_cast<int>(n); }

    auto operator<=>(const SurfaceType&) const = default;
};

enum class Provenance { Builtin, Computed, Loaded };

// zeta(2i) = zeta_even_rational(i) * u^i, exact; zeta(0) = -1/2.
Rational zeta_even_rational(unsigned i);

class VolumeTable {
public:
    explicit VolumeTable(int complexity_cap = 8);
    VolumeTable(const VolumeTable&) = delete;
    VolumeTable& operator=(const VolumeTable&) = delete;
    VolumeTable(VolumeTable&&) = default;
    VolumeTable& operator=(VolumeTable&&) = default;

    // V_{g,n}; memoized, get-or-compute is atomic per entry.
    PiPolynomial volume(SurfaceType s);
    // Top-degree part; homogeneous of degree 6g-6+2n, u-free.
    PiPolynomial volume_top(SurfaceType s);

    int complexity_cap() const { return cap_; }
    void set_complexity_cap(int cap) { cap_ = cap; }

    // Completed entries with provenance, sorted by (2g-2+n, g).
    std::vector<std::tuple<SurfaceType, PiPolynomial, Provenance>> entries() const;

    void save(const std::string& path) const;
    static VolumeTable load(const std::string& path, int complexity_cap = 8);

    // Structural checks every table entry must pass: symmetry, even
    // exponents only, exact top degree 2(3g-3+n), u-power bound,
    // positive coefficients. Throws std::runtime_error on violation.
    static void validate_volume(SurfaceType s, const PiPolynomial& p);

private:
    PiPolynomial compute(SurfaceType s);
    PiPolynomial recursion_step(SurfaceType s);
    PiPolynomial boundaryless_volume(unsigned g);
    // V_{g,n} as consumed by the recursion (halved one-holed torus).
    PiPolynomial internal_volume(SurfaceType s);

    int cap_;
    std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
    std::map<SurfaceType, std::shared_future<PiPolynomial>> memo_;
    std::map<SurfaceType, Provenance> provenance_;
};

}  // namespace mcstat
