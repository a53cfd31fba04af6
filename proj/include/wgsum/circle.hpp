#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wgsum/dioph.hpp"

namespace wgsum {

// Trigonometric polynomial on the Fourier side: real coefficient per integer
// frequency, entries sorted ascending, no zero coefficients stored.
struct CoefficientSeries {
    std::vector<std::pair<int64_t, double>> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    int64_t min_freq() const { return entries.front().first; }
    int64_t max_freq() const { return entries.back().first; }
    double at(int64_t m) const; // 0 when absent
};

enum class WeightSeriesKind {
    PrimeLogAtPk,            // entry log p at p^k for primes |p - X| <= Y
    SingularIntegralWeights, // entry m^{-1+1/k}/k at every m in [(X-Y)^k, (X+Y)^k]
};

// The prime window is the closed interval [X-Y, X+Y]; the integer window for
// the v-weights is computed from exact rational (X-Y)^k, (X+Y)^k.
CoefficientSeries weight_series(double X, double Y, unsigned k, WeightSeriesKind kind);

// Coefficients of series^s.  Two engines, chosen by support density:
//  - density <= 1/8: enumeration of nondecreasing support tuples, product
//    grouped left-to-right, times the multinomial count, accumulated in
//    lexicographic tuple order (so the brute-force count below reproduces the
//    exact same floats);
//  - density > 1/8, or more than 1e9 tuples: repeated dense pairwise
//    convolution, left-associated.
// Every output coefficient is asserted >= 0.
CoefficientSeries convolve_power(const CoefficientSeries& series, int s);

struct RepCount {
    int64_t n = 0;
    int s = 0;
    double value = 0;
    std::vector<std::vector<int64_t>> solutions; // collect mode only
};

// Coefficient of frequency n in series^s: the weighted representation count.
RepCount rho_s(int64_t n, const CoefficientSeries& series, int s);

// Nested loop over nondecreasing prime tuples with early exit; float products
// match rho_s bit for bit.  collect also returns the prime tuples.
RepCount rho_s_bruteforce(int64_t n, double X, double Y, unsigned k, int s,
                          bool collect = false);

// Integral of series(alpha)^s e(-n alpha) over a union of intervals, by the
// closed-form primitive of e(t alpha) — no quadrature involved.  The region
// must be symmetric under alpha -> 1-alpha (as arc dissections are), which
// makes the value real; this is asserted.
double arc_integral(const CoefficientSeries& series, int s, int64_t n,
                    const std::vector<std::pair<Rat, Rat>>& intervals);
// Convenience: the arcs of a dissection, or their complement.
double arc_integral(const CoefficientSeries& series, int s, int64_t n,
                    const ArcDissection& dissection, bool major_part);

enum class HuaMethod { Parseval, Quadrature };

// Integral of |series(alpha)|^s over the circle.  Parseval needs even s
// (sum of squared coefficients of series^{s/2}); Quadrature uses a rectangle
// rule with at least 4 s max|freq| nodes, exact for even s, an estimate for
// odd s.
double hua_moment(const CoefficientSeries& series, int s, HuaMethod method);

} // namespace wgsum
