#pragma once
// Exponential-sum engine.  Every sum here is sum w(n) e(n^k alpha) over an
// integer range, with the phase n^k alpha computed in B-bit fixed point:
// alpha is frozen as A = floor(alpha 2^B), and the fractional part of
// n^k alpha is the low B bits of n^k * A, exactly.  With
// B >= k log2(n_max) + 64 the phase error is <= 2^-64 per term.
//
// Accumulation is deterministic: terms are grouped into fixed chunks,
// chunks are summed sequentially in long double, and chunk totals combine
// by a pairwise tree whose shape depends only on the chunk count — never
// on the worker count.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "wgsum/arith.hpp"
#include "wgsum/rat.hpp"

namespace wgsum {

class PhaseContext {
  public:
    // alpha is reduced mod 1.  bits is rounded up to a multiple of 64.
    // Throws usage_error unless bits >= k*ceil(log2(n_max+1)) + 64.
    PhaseContext(const Rat& alpha, unsigned k, uint64_t n_max, unsigned bits = 320);

    unsigned k() const { return k_; }
    unsigned bits() const { return bits_; }
    uint64_t n_max() const { return n_max_; }
    const Rat& alpha() const { return alpha_; }

    // fractional part of n^k alpha as a double in [0,1)
    double phase(uint64_t n) const;

    // full B-bit fraction (little-endian limbs), for exactness checks
    std::vector<uint64_t> phase_fraction(uint64_t n) const;

    std::complex<double> unit_phase(uint64_t n) const; // e(n^k alpha)

  private:
    Rat alpha_;
    unsigned k_ = 0;
    unsigned bits_ = 0;
    uint64_t n_max_ = 0;
    std::vector<uint64_t> A_; // floor(alpha 2^B), B/64 limbs, little-endian

    // low-limbs product helpers
    void pow_limbs(uint64_t n, uint64_t* out, std::size_t& len) const;
    void frac_limbs(uint64_t n, uint64_t* out) const;
};

struct SumValue {
    std::complex<double> value{0.0, 0.0};
    uint64_t terms = 0;        // evaluated (nonzero-weight) terms
    int reduction_depth = 0;   // pairwise-tree depth of the combine step

    double abs() const { return std::abs(value); }
};

// sum_{x < n <= x+y} e(n^k alpha)
SumValue weyl_sum(const PhaseContext& ctx, double x, double y);

// sum over the table's range of w(n) e(n^k alpha)
SumValue weighted_sum(const PhaseContext& ctx, const WeightTable& table);

using CoefFn = std::function<double(int64_t)>;

// sum_{m_lo < m <= m_hi} xi(m) sum_{x < mn <= x+y} eta(n) [log n] e((mn)^k alpha)
// Inner endpoints are exact integer floors of x/m and (x+y)/m.  eta == nullptr
// means unit inner weights.
SumValue bilinear_sum(const PhaseContext& ctx, int64_t m_lo, int64_t m_hi,
                      const CoefFn& xi, const CoefFn& eta, const Rat& x,
                      const Rat& x_plus_y, bool with_log);

// Type I: outer range m ~ M, unit (or log-weighted) inner sum.
SumValue type_i_sum(const CoefFn& xi, double M, const PhaseContext& ctx, double x,
                    double y, bool with_log = false);

struct TypeIIResult {
    SumValue sum;
    int window_admissible = -1; // -1 unknown, 0 no, 1 yes
    double window_lo = 0, window_hi = 0;
};

struct SumParams; // dioph.hpp

// Type II: outer range m ~ M with inner coefficients eta.  When params is
// given, records whether M sits in the admissible window
// x^{1/2} <= M <= y^{1-2 rho}.
TypeIIResult type_ii_sum(const CoefFn& xi, const CoefFn& eta, double M,
                         const PhaseContext& ctx, double x, double y,
                         const SumParams* params = nullptr);

// (lo, hi] integer endpoints of the real interval (x, x+y]
std::pair<int64_t, int64_t> integer_range(const Rat& x, const Rat& x_plus_y);

} // namespace wgsum
