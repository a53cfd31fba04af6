#include "wgsum/singular.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "wgsum/arith.hpp"
#include "wgsum/circle.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/parallel.hpp"

namespace wgsum {

namespace {

// e(j/q) for j = 0..q-1, phases exact rationals before the final cos/sin
std::vector<std::complex<double>> unit_roots(uint64_t q) {
    std::vector<std::complex<double>> root(q);
    for (uint64_t j = 0; j < q; ++j) {
        double ph = 2.0 * M_PI * (static_cast<double>(j) / static_cast<double>(q));
        root[j] = {std::cos(ph), std::sin(ph)};
    }
    return root;
}

} // namespace

std::complex<double> gauss_sum(int64_t q, int64_t a, unsigned k) {
    if (q < 1) throw domain_error("gauss_sum: q >= 1 required");
    if (k < 1) throw domain_error("gauss_sum: k >= 1 required");
    const uint64_t Q = static_cast<uint64_t>(q);
    const uint64_t am = static_cast<uint64_t>(((a % q) + q) % q);
    std::complex<double> sum(0.0, 0.0);
    for (uint64_t r = 1; r <= Q; ++r) {
        if (std::gcd(r, Q) != 1) continue;
        uint64_t ph = static_cast<uint64_t>(
            static_cast<unsigned __int128>(powmod(r, k, Q)) * am % Q);
        double t = 2.0 * M_PI * (static_cast<double>(ph) / static_cast<double>(Q));
        sum += std::complex<double>(std::cos(t), std::sin(t));
    }
    return sum;
}

double series_term(int64_t q, int64_t n, int s, unsigned k) {
    if (q < 1) throw domain_error("series_term: q >= 1 required");
    if (s < 1) throw domain_error("series_term: s >= 1 required");
    if (k < 1) throw domain_error("series_term: k >= 1 required");
    if (q == 1) return 1.0;
    if (static_cast<uint64_t>(q) > kMaxTableEntries)
        throw resource_error("series_term: modulus too large");

    const uint64_t Q = static_cast<uint64_t>(q);
    const uint64_t nm = static_cast<uint64_t>(((n % q) + q) % q);
    const auto root = unit_roots(Q);

    std::vector<uint64_t> units;
    for (uint64_t r = 1; r < Q; ++r)
        if (std::gcd(r, Q) == 1) units.push_back(r);
    const uint64_t phi = units.size();

    // Distinct k-th powers of units.  The power map is an endomorphism of the
    // unit group, so its image is a subgroup and every value is hit by the
    // same number of units.
    std::vector<uint64_t> image;
    {
        std::vector<uint8_t> seen(Q, 0);
        for (uint64_t r : units) {
            uint64_t t = powmod(r, k, Q);
            if (!seen[t]) {
                seen[t] = 1;
                image.push_back(t);
            }
        }
        std::sort(image.begin(), image.end());
    }
    const double fiber = static_cast<double>(phi / image.size());

    // S(q,a) only depends on the coset a * image, so evaluate it once per
    // coset and pair it with that coset's share of the e(-na/q) sum.  Cosets
    // are visited by increasing least representative; this keeps the float
    // accumulation order fixed for any worker count.
    std::complex<double> acc(0.0, 0.0);
    std::vector<uint8_t> covered(Q, 0);
    for (uint64_t u : units) {
        if (covered[u]) continue;
        std::complex<double> gsum(0.0, 0.0);
        std::complex<double> chsum(0.0, 0.0);
        for (uint64_t t : image) {
            uint64_t a = u * t % Q;
            covered[a] = 1;
            gsum += root[a];
            chsum += root[(Q - nm * a % Q) % Q];
        }
        std::complex<double> S = fiber * gsum;
        std::complex<double> Spow(1.0, 0.0);
        for (int i = 0; i < s; ++i) Spow *= S;
        acc += Spow * chsum;
    }

    const std::complex<double> A = acc / std::pow(static_cast<double>(phi), s);
    require(std::abs(A.imag()) <= 1e-10, "series_term: A(q,n) must be real");
    return A.real();
}

namespace {

// Mass-ratio extrapolation over the last decade of q: compare the absolute
// mass on (sqrt(lo Q), Q] with the mass on (lo, sqrt(lo Q)], lo = Q/10, and
// continue the observed geometric decay.  No decade, no estimate.
double tail_from_terms(const std::vector<std::pair<int64_t, double>>& terms,
                       int64_t Q) {
    const int64_t lo = Q / 10;
    if (lo < 1) return 0.0;
    int64_t mid = static_cast<int64_t>(std::sqrt(static_cast<double>(lo) *
                                                 static_cast<double>(Q)));
    while (mid * mid > lo * Q) --mid;
    while ((mid + 1) * (mid + 1) <= lo * Q) ++mid;
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [q, v] : terms) {
        if (q > lo && q <= mid) m1 += std::abs(v);
        else if (q > mid && q <= Q) m2 += std::abs(v);
    }
    if (m2 == 0.0) return 0.0;
    if (m1 <= m2) return std::numeric_limits<double>::infinity();
    const double r = m2 / m1;
    return m2 * r / (1.0 - r);
}

} // namespace

SingularSeriesResult singular_series(int64_t n, int s, unsigned k, int64_t Q_S,
                                     SeriesMethod method) {
    if (Q_S < 1) throw domain_error("singular_series: Q_S >= 1 required");
    if (s < 1) throw domain_error("singular_series: s >= 1 required");
    SingularSeriesResult out;
    out.n = n;
    out.s = s;
    out.k = k;
    out.Q_S = Q_S;

    const bool want_sum = method != SeriesMethod::EulerProduct;
    const bool want_prod = method != SeriesMethod::Truncate;
    const auto primes = prime_list(static_cast<uint64_t>(Q_S));

    std::vector<int64_t> qs;
    if (want_sum) {
        qs.resize(static_cast<std::size_t>(Q_S));
        std::iota(qs.begin(), qs.end(), int64_t(1));
    } else {
        for (uint64_t p : primes)
            for (uint64_t pj = p;; pj *= p) {
                qs.push_back(static_cast<int64_t>(pj));
                if (pj > static_cast<uint64_t>(Q_S) / p) break;
            }
        std::sort(qs.begin(), qs.end());
    }

    std::vector<double> vals(qs.size(), 0.0);
    parallel_for(qs.size(),
                 [&](std::size_t i) { vals[i] = series_term(qs[i], n, s, k); });

    out.terms.reserve(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i)
        out.terms.emplace_back(qs[i], vals[i]);

    if (want_sum) {
        double total = 0.0;
        for (double v : vals) total += v; // ascending q
        out.total = total;
        out.tail_estimate = tail_from_terms(out.terms, Q_S);
    }
    if (want_prod) {
        double prod = 1.0;
        for (uint64_t p : primes) {
            double local = 1.0;
            for (uint64_t pj = p;; pj *= p) {
                auto it = std::lower_bound(qs.begin(), qs.end(),
                                           static_cast<int64_t>(pj));
                local += vals[static_cast<std::size_t>(it - qs.begin())];
                if (pj > static_cast<uint64_t>(Q_S) / p) break;
            }
            prod *= local;
        }
        out.euler_product_total = prod;
    }
    return out;
}

double singular_integral(int64_t n, double X, double Y, unsigned k, int s) {
    auto w = weight_series(X, Y, k, WeightSeriesKind::SingularIntegralWeights);
    return rho_s(n, w, s).value;
}

MainTerm main_term(int64_t n, double X, double Y, unsigned k, int s,
                   int64_t Q_S) {
    MainTerm m;
    m.S_val = singular_series(n, s, k, Q_S, SeriesMethod::Truncate).total;
    m.J_val = singular_integral(n, X, Y, k, s);
    m.product = m.S_val * m.J_val;
    m.scale = std::pow(Y, static_cast<double>(s - 1)) *
              std::pow(X, 1.0 - static_cast<double>(k));
    m.ratio = m.product / m.scale;
    return m;
}

} // namespace wgsum
