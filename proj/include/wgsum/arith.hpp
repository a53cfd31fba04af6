#pragma once
// Sieve-backed arithmetic weights and elementary multiplicative machinery.

#include <cstdint>
#include <string>
#include <vector>

#include "wgsum/rat.hpp"

namespace wgsum {

enum class WeightKind { VonMangoldt, Moebius, PrimeLog, Unit };

const char* weight_kind_name(WeightKind k);
WeightKind weight_kind_from_name(const std::string& s);

// Weights over the half-open integer range (lo, hi].  weight(n) for
// lo < n <= hi lives at w[n - lo - 1].
struct WeightTable {
    int64_t lo = 0; // exclusive
    int64_t hi = 0; // inclusive
    WeightKind kind = WeightKind::Unit;
    std::vector<double> w;

    int64_t size() const { return hi - lo; }
    bool contains(int64_t n) const { return n > lo && n <= hi; }
    double at(int64_t n) const { return w[static_cast<std::size_t>(n - lo - 1)]; }
};

// Largest table the sieve will build (entries); above this -> resource_error.
constexpr int64_t kMaxTableEntries = int64_t(1) << 27;

// Segmented sieve over (lo, hi].  lo >= 0, hi >= lo required.
WeightTable sieve_weights(int64_t lo, int64_t hi, WeightKind kind);

// Ascending primes <= limit (simple Eratosthenes).
std::vector<uint64_t> prime_list(uint64_t limit);

// Prime table with an optional newline-delimited decimal cache file
// ("primes_<limit>.txt", ascending).  dir == "" disables caching.
struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;

    static PrimeTable load_or_sieve(uint64_t limit, const std::string& cache_dir);
    bool is_prime(uint64_t n) const;
};

enum class MultFn { Moebius, DivisorCount, EulerPhi };

// Exact multiplicative function values by trial division against a prime
// table reaching 1e6 (enough to certify any n < 1e12).
int64_t multiplicative(MultFn fn, uint64_t n);

// R(n, h) = ((n+h)^k - n^k) / h, exact (always an integer).
Int forward_difference_ratio(uint64_t n, uint64_t h, unsigned k);

struct Lemma22Report {
    // part (a): sum_{N < n <= 2N} gcd(r, n^k)^{1/k}  <=  N tau(r)
    double lhs_a = 0, rhs_a = 0;
    bool holds_a = false;
    // part (b): sum_{N < n <= 2N, (n,h)=1} gcd(r, R(n,h))^{1/k}
    //             <=  C (N r^eps + r^{1/k+eps})
    double lhs_b = 0, rhs_b = 0;
    bool holds_b = false;
    double C = 0, eps = 0;
};

// Checks both divisor-sum inequalities for the given parameters.  C <= 0
// selects the default 4^k; eps <= 0 selects the default 0.1.
Lemma22Report check_divisor_bounds(uint64_t N, uint64_t r, uint64_t h, unsigned k,
                                   double C = 0, double eps = 0);

// Product over primes p with (p-1) | k of p^eta, where tau = v_p(k),
// eta = tau + 2 if p = 2 and tau > 0, else tau + 1.
uint64_t admissible_modulus(unsigned k);

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t mod);

} // namespace wgsum
