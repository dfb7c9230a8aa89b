#include "quadrature.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace mcstat::testing {

double scalar_to_double(const ExactScalar& v) {
    const double pi2 = 9.869604401089358;
    double acc = 0;
    for (const auto& [j, c] : v.terms()) acc += c.get_d() * std::pow(pi2, j);
    return acc;
}

namespace {

struct NumericTerm {
    double coeff;
    std::vector<unsigned> exps;
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 28);
}

}  // namespace

double quadrature_box_integral(const PiPolynomial& p, const SimplexDomain& dom,
                               const BoxCone& box, double tol) {
    const int k = dom.k();
    std::vector<NumericTerm> terms;
    for (const auto& [e, c] : p.monomials()) {
        double w = scalar_to_double(c);
        for (int i = 0; i < k; ++i)
            w /= std::pow(static_cast<double>(dom.weights[i]), e[i] + 1.0);
        terms.push_back({w, e});
    }
    std::vector<double> lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
        lo[i] = std::max(box.lo(i).get_d(), 0.0);
        hi[i] = std::min(box.hi(i).get_d(), 1.0);
        if (lo[i] >= hi[i]) return 0;
    }

    if (k == 1) {
        // the level set is the point y = 1
        if (!(lo[0] <= 1.0 && 1.0 <= hi[0])) return 0;
        double acc = 0;
        for (const auto& t : terms) acc += t.coeff;
        return acc;
    }

    // integrate over y_0..y_{k-2}; the last coordinate is 1 - sum
    std::vector<double> ys(k, 0.0);
    std::vector<double> tail_lo(k + 1, 0.0), tail_hi(k + 1, 0.0);
    for (int i = k - 1; i >= 0; --i) {
        tail_lo[i] = tail_lo[i + 1] + lo[i];
        tail_hi[i] = tail_hi[i + 1] + hi[i];
    }

    std::function<double(int, double, double)> level = [&](int i, double prefix,
                                                           double tol_here) -> double {
        if (i == k - 1) {
            double last = 1.0 - prefix;
            double acc = 0;
            for (const auto& t : terms) {
                double v = t.coeff;
                for (int j = 0; j + 1 < k; ++j)
                    for (unsigned rep = 0; rep < t.exps[j]; ++rep) v *= ys[j];
                for (unsigned rep = 0; rep < t.exps[k - 1]; ++rep) v *= last;
                acc += v;
            }
            return acc;
        }
        double a = std::max(lo[i], 1.0 - prefix - tail_hi[i + 1]);
        double b = std::min(hi[i], 1.0 - prefix - tail_lo[i + 1]);
        if (a >= b) return 0;
        auto f = [&, i, prefix, tol_here](double t) {
            ys[i] = t;
            return level(i + 1, prefix + t, tol_here);
        };
        return integrate_1d(f, a, b, tol_here);
    };
    // coarse pass, then refine with the tolerance scaled to the magnitude
    double estimate = level(0, 0.0, 1e-9);
    double scaled = std::max(std::abs(estimate) * tol, 1e-16);
    if (scaled >= 1e-9) return estimate;
    return level(0, 0.0, scaled);
}

}  // namespace mcstat::testing
