#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace wgsum {

// Complete exponential sum S(q,a) = sum over residues r coprime to q of
// e(a r^k / q).  Phases are exact rationals (r^k a mod q)/q; only the final
// cosine/sine is floating point.  Any integer a is accepted; the classical
// bounds assume gcd(a,q) = 1.
std::complex<double> gauss_sum(int64_t q, int64_t a, unsigned k);

// Term A(q,n) = phi(q)^{-s} sum over a coprime to q of S(q,a)^s e(-n a / q).
// Real for every q (the a and q-a contributions are conjugate); the imaginary
// part of the computed value must vanish to 1e-10 and this is asserted.
double series_term(int64_t q, int64_t n, int s, unsigned k);

enum class SeriesMethod { Truncate, EulerProduct, Both };

struct SingularSeriesResult {
    int64_t n = 0;
    int s = 0;
    unsigned k = 0;
    int64_t Q_S = 0;
    // Per-q values: q = 1..Q_S for Truncate, prime powers <= Q_S for
    // EulerProduct, the full range for Both.
    std::vector<std::pair<int64_t, double>> terms;
    double total = 0;               // sum of A(q,n), q <= Q_S
    double euler_product_total = 0; // prod over p of (1 + sum of A(p^j,n))
    double tail_estimate = 0;       // see below; 0 when not computed
};

// Truncated singular series sum_{q <= Q_S} A(q,n), the Euler product over
// prime powers p^j <= Q_S, or both.  tail_estimate extrapolates the decay of
// sum |A(q,n)| across the last decade of q: the mass M2 over (sqrt(lo Q), Q]
// against M1 over (lo, sqrt(lo Q)] with lo = Q/10 gives the geometric guess
// M2 r/(1-r), r = M2/M1.  It is 0 when M2 = 0 and +infinity when no decay
// was observed (M1 <= M2) — the estimate is honest, not a bound.
SingularSeriesResult singular_series(int64_t n, int s, unsigned k,
                                     int64_t Q_S = 1000,
                                     SeriesMethod method = SeriesMethod::Both);

// Singular integral J(n): coefficient of frequency n in the s-th power of the
// SingularIntegralWeights series for the window (X,Y,k).  Shares the engine
// (and the budget guards) of convolve_power.
double singular_integral(int64_t n, double X, double Y, unsigned k, int s);

struct MainTerm {
    double S_val = 0;   // truncated singular series
    double J_val = 0;   // singular integral
    double product = 0; // S * J, the predicted main term
    double scale = 0;   // Y^{s-1} X^{1-k}, the expected order of J
    double ratio = 0;   // product / scale
};

// Main-term prediction S(n) J(n) for sums of s k-th powers of primes in the
// window |p - X| <= Y, with the series truncated at Q_S.
MainTerm main_term(int64_t n, double X, double Y, unsigned k, int s,
                   int64_t Q_S = 1000);

} // namespace wgsum
