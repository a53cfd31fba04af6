#include "wgsum/expsum.hpp"

#include <cmath>

#include "wgsum/dioph.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/parallel.hpp"

namespace wgsum {

// ---------------------------------------------------------------------
// phase context

PhaseContext::PhaseContext(const Rat& alpha, unsigned k, uint64_t n_max, unsigned bits) {
    if (k < 1 || k > 63) throw domain_error("phase: k out of range");
    if (n_max < 1) throw domain_error("phase: n_max >= 1 required");
    bits = (bits + 63) / 64 * 64;
    unsigned lg = 0;
    while ((n_max >> lg) > 0 && lg < 64) ++lg; // ceil(log2(n_max+1))
    if (static_cast<uint64_t>(k) * lg + 64 > bits)
        throw usage_error("phase: B = " + std::to_string(bits) +
                          " too small for k = " + std::to_string(k) +
                          ", n_max = " + std::to_string(n_max));
    k_ = k;
    bits_ = bits;
    n_max_ = n_max;
    alpha_ = frac_rat(alpha);

    Int scaled = (alpha_.get_num() << bits) / alpha_.get_den(); // floor
    const std::size_t L = bits / 64;
    A_.assign(L, 0);
    std::size_t words = 0;
    mpz_export(A_.data(), &words, -1 /*LSW first*/, sizeof(uint64_t), 0, 0,
               scaled.get_mpz_t());
    require(words <= L, "phase: fixed-point export overflow");
}

void PhaseContext::pow_limbs(uint64_t n, uint64_t* out, std::size_t& len) const {
    out[0] = n;
    len = 1;
    for (unsigned e = 1; e < k_; ++e) {
        unsigned __int128 carry = 0;
        for (std::size_t i = 0; i < len; ++i) {
            unsigned __int128 cur = static_cast<unsigned __int128>(out[i]) * n + carry;
            out[i] = static_cast<uint64_t>(cur);
            carry = cur >> 64;
        }
        if (carry) out[len++] = static_cast<uint64_t>(carry);
    }
}

void PhaseContext::frac_limbs(uint64_t n, uint64_t* out) const {
    const std::size_t L = A_.size();
    uint64_t nk[64];
    std::size_t len;
    pow_limbs(n, nk, len);
    for (std::size_t i = 0; i < L; ++i) out[i] = 0;
    for (std::size_t i = 0; i < len && i < L; ++i) {
        unsigned __int128 carry = 0;
        const uint64_t a = nk[i];
        for (std::size_t j = 0; j + i < L; ++j) {
            unsigned __int128 cur =
                static_cast<unsigned __int128>(a) * A_[j] + out[i + j] + carry;
            out[i + j] = static_cast<uint64_t>(cur);
            carry = cur >> 64;
        }
    }
}

double PhaseContext::phase(uint64_t n) const {
    const std::size_t L = A_.size();
    uint64_t f[64];
    frac_limbs(n, f);
    double ph = std::ldexp(static_cast<double>(f[L - 1]), -64) +
                std::ldexp(static_cast<double>(f[L - 2]), -128);
    return ph >= 1.0 ? 0.0 : ph; // rounding of (1 - ulp) fractions
}

std::vector<uint64_t> PhaseContext::phase_fraction(uint64_t n) const {
    std::vector<uint64_t> f(A_.size());
    frac_limbs(n, f.data());
    return f;
}

std::complex<double> PhaseContext::unit_phase(uint64_t n) const {
    double t = 2.0 * M_PI * phase(n);
    return {std::cos(t), std::sin(t)};
}

// ---------------------------------------------------------------------
// deterministic accumulation

namespace {

struct Partial {
    std::complex<long double> s{0.0L, 0.0L};
    long double absw = 0.0L;
    uint64_t cnt = 0;

    Partial operator+(const Partial& o) const {
        return {s + o.s, absw + o.absw, cnt + o.cnt};
    }
};

SumValue finish(std::vector<Partial> parts) {
    auto [total, depth] = pairwise_reduce(std::move(parts));
    SumValue v;
    v.value = std::complex<double>(total.s);
    v.terms = total.cnt;
    v.reduction_depth = depth;
    double lim = static_cast<double>(total.absw);
    require(std::abs(v.value) <= lim * (1.0 + 1e-12) + 1e-9,
            "sum exceeds triangle-inequality bound");
    return v;
}

// weight(n) for n in [first, last], chunked by kChunkTerms
template <typename WeightFn>
SumValue chunked_sum(const PhaseContext& ctx, int64_t first, int64_t last,
                     WeightFn weight) {
    if (last < first) return SumValue{};
    if (first < 0) throw domain_error("sum range must be nonnegative");
    if (static_cast<uint64_t>(last) > ctx.n_max())
        throw usage_error("sum range exceeds phase context n_max");
    const uint64_t count = static_cast<uint64_t>(last - first + 1);
    const uint64_t nchunks = (count + kChunkTerms - 1) / kChunkTerms;
    std::vector<Partial> parts(nchunks);
    parallel_for(nchunks, [&](std::size_t c) {
        int64_t lo = first + static_cast<int64_t>(c * kChunkTerms);
        int64_t hi = std::min<int64_t>(last, lo + static_cast<int64_t>(kChunkTerms) - 1);
        Partial p;
        for (int64_t n = lo; n <= hi; ++n) {
            double w = weight(n);
            if (w == 0.0) continue;
            auto e = ctx.unit_phase(static_cast<uint64_t>(n));
            p.s += std::complex<long double>(w * e.real(), w * e.imag());
            p.absw += std::abs(static_cast<long double>(w));
            ++p.cnt;
        }
        parts[c] = p;
    });
    return finish(std::move(parts));
}

} // namespace

std::pair<int64_t, int64_t> integer_range(const Rat& x, const Rat& x_plus_y) {
    return {to_i64(floor_rat(x)), to_i64(floor_rat(x_plus_y))};
}

SumValue weyl_sum(const PhaseContext& ctx, double x, double y) {
    if (x < 0 || y < 0) throw domain_error("weyl_sum: x, y >= 0 required");
    Rat rx = rat_of_double(x);
    auto [lo, hi] = integer_range(rx, rx + rat_of_double(y));
    return chunked_sum(ctx, lo + 1, hi, [](int64_t) { return 1.0; });
}

SumValue weighted_sum(const PhaseContext& ctx, const WeightTable& table) {
    if (table.size() == 0) return SumValue{};
    return chunked_sum(ctx, table.lo + 1, table.hi,
                       [&table](int64_t n) { return table.at(n); });
}

SumValue bilinear_sum(const PhaseContext& ctx, int64_t m_lo, int64_t m_hi,
                      const CoefFn& xi, const CoefFn& eta, const Rat& x,
                      const Rat& x_plus_y, bool with_log) {
    if (m_hi <= m_lo) return SumValue{};
    if (m_lo < 0) throw domain_error("bilinear_sum: outer range must be nonnegative");
    int64_t top = to_i64(floor_rat(x_plus_y));
    if (top > 0 && static_cast<uint64_t>(top) > ctx.n_max())
        throw usage_error("sum range exceeds phase context n_max");

    const Int xnum = x.get_num(), xden = x.get_den();
    const Int pnum = x_plus_y.get_num(), pden = x_plus_y.get_den();
    const uint64_t outer = static_cast<uint64_t>(m_hi - m_lo);
    std::vector<Partial> parts(outer);
    parallel_for(outer, [&](std::size_t i) {
        const int64_t m = m_lo + 1 + static_cast<int64_t>(i);
        double xv = xi(m);
        if (xv == 0.0) return;
        Int nlo_z, nhi_z;
        mpz_fdiv_q(nlo_z.get_mpz_t(), xnum.get_mpz_t(), Int(xden * m).get_mpz_t());
        mpz_fdiv_q(nhi_z.get_mpz_t(), pnum.get_mpz_t(), Int(pden * m).get_mpz_t());
        int64_t nlo = to_i64(nlo_z), nhi = to_i64(nhi_z);
        Partial p;
        for (int64_t n = nlo + 1; n <= nhi; ++n) {
            double w = xv * (eta ? eta(n) : 1.0);
            if (with_log) w *= std::log(static_cast<double>(n));
            if (w == 0.0) continue;
            auto e = ctx.unit_phase(static_cast<uint64_t>(m * n));
            p.s += std::complex<long double>(w * e.real(), w * e.imag());
            p.absw += std::abs(static_cast<long double>(w));
            ++p.cnt;
        }
        parts[i] = p;
    });
    return finish(std::move(parts));
}

SumValue type_i_sum(const CoefFn& xi, double M, const PhaseContext& ctx, double x,
                    double y, bool with_log) {
    if (M < 0.5) throw domain_error("type_i_sum: M >= 1/2 required");
    Rat rx = rat_of_double(x);
    Rat rxy = rx + rat_of_double(y);
    int64_t m_lo = to_i64(floor_rat(rat_of_double(M)));
    int64_t m_hi = to_i64(floor_rat(rat_of_double(2 * M)));
    return bilinear_sum(ctx, m_lo, m_hi, xi, nullptr, rx, rxy, with_log);
}

TypeIIResult type_ii_sum(const CoefFn& xi, const CoefFn& eta, double M,
                         const PhaseContext& ctx, double x, double y,
                         const SumParams* params) {
    if (M < 0.5) throw domain_error("type_ii_sum: M >= 1/2 required");
    if (!eta) throw usage_error("type_ii_sum: eta required");
    TypeIIResult r;
    Rat rx = rat_of_double(x);
    Rat rxy = rx + rat_of_double(y);
    int64_t m_lo = to_i64(floor_rat(rat_of_double(M)));
    int64_t m_hi = to_i64(floor_rat(rat_of_double(2 * M)));
    r.sum = bilinear_sum(ctx, m_lo, m_hi, xi, eta, rx, rxy, false);
    if (params) {
        r.window_lo = std::sqrt(params->x);
        r.window_hi = std::pow(params->y, 1.0 - 2.0 * params->rho);
        r.window_admissible = (M >= r.window_lo && M <= r.window_hi) ? 1 : 0;
    }
    return r;
}

} // namespace wgsum
