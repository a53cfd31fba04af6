#include "wgsum/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "wgsum/errors.hpp"

namespace wgsum {

const char* weight_kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::VonMangoldt: return "vonmangoldt";
        case WeightKind::Moebius: return "moebius";
        case WeightKind::PrimeLog: return "primelog";
        case WeightKind::Unit: return "unit";
    }
    return "?";
}

WeightKind weight_kind_from_name(const std::string& s) {
    if (s == "vonmangoldt") return WeightKind::VonMangoldt;
    if (s == "moebius") return WeightKind::Moebius;
    if (s == "primelog") return WeightKind::PrimeLog;
    if (s == "unit") return WeightKind::Unit;
    throw usage_error("unknown weight kind: " + s);
}

std::vector<uint64_t> prime_list(uint64_t limit) {
    std::vector<uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<uint8_t> comp(limit + 1, 0);
    for (uint64_t i = 2; i * i <= limit; ++i)
        if (!comp[i])
            for (uint64_t j = i * i; j <= limit; j += i) comp[j] = 1;
    for (uint64_t i = 2; i <= limit; ++i)
        if (!comp[i]) primes.push_back(i);
    return primes;
}

static uint64_t isqrt64(uint64_t n) {
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

WeightTable sieve_weights(int64_t lo, int64_t hi, WeightKind kind) {
    if (lo < 0 || hi < lo) throw domain_error("sieve_weights: need 0 <= lo <= hi");
    if (hi - lo > kMaxTableEntries)
        throw resource_error("sieve_weights: table of " + std::to_string(hi - lo) +
                             " entries exceeds budget");
    WeightTable t;
    t.lo = lo;
    t.hi = hi;
    t.kind = kind;
    const int64_t len = hi - lo;
    t.w.assign(static_cast<std::size_t>(len), kind == WeightKind::Unit ? 1.0 : 0.0);
    if (len == 0 || kind == WeightKind::Unit) return t;

    const uint64_t root = isqrt64(static_cast<uint64_t>(hi));
    const auto base = prime_list(root);
    auto idx = [lo](int64_t n) { return static_cast<std::size_t>(n - lo - 1); };
    // first multiple of p strictly above lo
    auto first_mult = [lo](int64_t p) { return (lo / p + 1) * p; };

    if (kind == WeightKind::VonMangoldt || kind == WeightKind::PrimeLog) {
        // mark composites with a small prime factor; survivors > 1 are prime
        std::vector<uint8_t> comp(static_cast<std::size_t>(len), 0);
        for (uint64_t p : base) {
            int64_t start = std::max<int64_t>(first_mult(static_cast<int64_t>(p)),
                                              static_cast<int64_t>(p * p));
            for (int64_t m = start; m <= hi; m += static_cast<int64_t>(p)) comp[idx(m)] = 1;
        }
        for (int64_t n = lo + 1; n <= hi; ++n)
            if (n > 1 && !comp[idx(n)])
                t.w[idx(n)] = std::log(static_cast<double>(n));
        if (kind == WeightKind::VonMangoldt) {
            // Lambda(p) = log p at primes; the loop above wrote log n = log p.
            // Proper prime powers p^j (j >= 2) have p <= sqrt(hi):
            for (uint64_t p : base) {
                double lp = std::log(static_cast<double>(p));
                for (Int pe = Int(p) * Int(p); pe <= hi; pe *= Int(p)) {
                    int64_t v = to_i64(pe);
                    if (v > lo) t.w[idx(v)] = lp;
                }
            }
        }
        return t;
    }

    // Moebius
    std::vector<int8_t> mu(static_cast<std::size_t>(len), 1);
    std::vector<uint64_t> rem(static_cast<std::size_t>(len));
    for (int64_t n = lo + 1; n <= hi; ++n) rem[idx(n)] = static_cast<uint64_t>(n);
    for (uint64_t p : base) {
        for (int64_t m = first_mult(static_cast<int64_t>(p)); m <= hi;
             m += static_cast<int64_t>(p)) {
            std::size_t i = idx(m);
            unsigned e = 0;
            while (rem[i] % p == 0) { rem[i] /= p; ++e; }
            if (e >= 2) mu[i] = 0;
            else mu[i] = static_cast<int8_t>(-mu[i]);
        }
    }
    for (int64_t n = lo + 1; n <= hi; ++n) {
        std::size_t i = idx(n);
        if (rem[i] > 1) mu[i] = static_cast<int8_t>(-mu[i]); // one prime factor > sqrt(hi)
        t.w[i] = static_cast<double>(mu[i]);
    }
    return t;
}

// ---------------------------------------------------------------------
// prime table + cache file

static const char* kCachePrefix = "primes_";

PrimeTable PrimeTable::load_or_sieve(uint64_t limit, const std::string& cache_dir) {
    PrimeTable t;
    t.limit = limit;
    namespace fs = std::filesystem;
    fs::path file;
    if (!cache_dir.empty())
        file = fs::path(cache_dir) / (kCachePrefix + std::to_string(limit) + ".txt");
    if (!file.empty() && fs::exists(file)) {
        std::ifstream in(file);
        uint64_t p, prev = 0;
        while (in >> p) {
            if (p <= prev || p > limit)
                throw domain_error("prime cache corrupt: " + file.string());
            t.primes.push_back(p);
            prev = p;
        }
        return t;
    }
    t.primes = prime_list(limit);
    if (!file.empty()) {
        std::ofstream out(file);
        for (uint64_t p : t.primes) out << p << '\n';
    }
    return t;
}

bool PrimeTable::is_prime(uint64_t n) const {
    if (n > limit) throw domain_error("is_prime query beyond table limit");
    return std::binary_search(primes.begin(), primes.end(), n);
}

// shared trial-division table, built on first use
static const PrimeTable& small_primes() {
    static PrimeTable t = PrimeTable::load_or_sieve(1000000, "");
    return t;
}

int64_t multiplicative(MultFn fn, uint64_t n) {
    if (n == 0) throw domain_error("multiplicative function at 0");
    const auto& pt = small_primes();
    uint64_t m = n;
    std::vector<std::pair<uint64_t, unsigned>> fac;
    for (uint64_t p : pt.primes) {
        if (p * p > m) break;
        if (m % p == 0) {
            unsigned e = 0;
            while (m % p == 0) { m /= p; ++e; }
            fac.push_back({p, e});
        }
    }
    if (m > 1) {
        // cofactor has no prime factor <= min(1e6, sqrt(m)); prime iff below table limit^2
        if (m > pt.limit * pt.limit)
            throw resource_error("multiplicative: cannot certify factorization of " +
                                 std::to_string(n));
        fac.push_back({m, 1});
    }
    switch (fn) {
        case MultFn::Moebius: {
            for (auto& [p, e] : fac)
                if (e > 1) return 0;
            return fac.size() % 2 == 0 ? 1 : -1;
        }
        case MultFn::DivisorCount: {
            int64_t r = 1;
            for (auto& [p, e] : fac) r *= static_cast<int64_t>(e) + 1;
            return r;
        }
        case MultFn::EulerPhi: {
            int64_t r = static_cast<int64_t>(n);
            for (auto& [p, e] : fac) r = r / static_cast<int64_t>(p) * static_cast<int64_t>(p - 1);
            return r;
        }
    }
    throw domain_error("multiplicative: bad selector");
}

Int forward_difference_ratio(uint64_t n, uint64_t h, unsigned k) {
    if (h == 0) throw domain_error("forward_difference_ratio: h = 0");
    if (k == 0) throw domain_error("forward_difference_ratio: k = 0");
    // bit budget: keep results comfortably inside desk scale
    if (k * (64 - static_cast<unsigned>(__builtin_clzll(n + h))) > (1u << 20))
        throw resource_error("forward_difference_ratio: operands too large");
    Int a, b;
    mpz_ui_pow_ui(a.get_mpz_t(), n + h, k);
    mpz_ui_pow_ui(b.get_mpz_t(), n, k);
    Int diff = a - b;
    Int q, r;
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), diff.get_mpz_t(), h);
    require(r == 0, "forward_difference_ratio: h does not divide the difference");
    return q;
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t mod) {
    if (mod == 0) throw domain_error("powmod: mod = 0");
    unsigned __int128 r = 1 % mod, b = base % mod;
    while (exp) {
        if (exp & 1) r = r * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<uint64_t>(r);
}

Lemma22Report check_divisor_bounds(uint64_t N, uint64_t r, uint64_t h, unsigned k,
                                   double C, double eps) {
    if (N == 0 || r == 0 || h == 0 || k < 2)
        throw domain_error("check_divisor_bounds: need N,r,h >= 1 and k >= 2");
    Lemma22Report rep;
    rep.C = C > 0 ? C : std::pow(4.0, static_cast<double>(k));
    rep.eps = eps > 0 ? eps : 0.1;

    for (uint64_t n = N + 1; n <= 2 * N; ++n) {
        uint64_t nk = powmod(n % r, k, r); // n^k mod r; gcd(r, n^k) = gcd(r, n^k mod r)
        rep.lhs_a += std::pow(static_cast<double>(std::gcd(r, nk)), 1.0 / k);
        if (std::gcd(n, h) == 1) {
            Int R = forward_difference_ratio(n, h, k);
            Int g;
            mpz_gcd(g.get_mpz_t(), R.get_mpz_t(), Int(static_cast<unsigned long>(r)).get_mpz_t());
            rep.lhs_b += std::pow(g.get_d(), 1.0 / k);
        }
    }
    rep.rhs_a = static_cast<double>(N) *
                static_cast<double>(multiplicative(MultFn::DivisorCount, r));
    rep.holds_a = rep.lhs_a <= rep.rhs_a;
    double rd = static_cast<double>(r);
    rep.rhs_b = rep.C * (static_cast<double>(N) * std::pow(rd, rep.eps) +
                         std::pow(rd, 1.0 / k + rep.eps));
    rep.holds_b = rep.lhs_b <= rep.rhs_b;
    return rep;
}

uint64_t admissible_modulus(unsigned k) {
    if (k < 2) throw domain_error("admissible_modulus: k >= 2 required");
    uint64_t R = 1;
    for (uint64_t p = 2; p <= k + 1; ++p) {
        bool prime = p >= 2;
        for (uint64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) { prime = false; break; }
        if (!prime || k % (p - 1) != 0) continue;
        unsigned tau = 0;
        uint64_t kk = k;
        while (kk % p == 0) { kk /= p; ++tau; }
        unsigned eta = (p == 2 && tau > 0) ? tau + 2 : tau + 1;
        for (unsigned i = 0; i < eta; ++i) {
            require(R <= UINT64_MAX / p, "admissible_modulus overflow");
            R *= p;
        }
    }
    return R;
}

} // namespace wgsum
