#include "wgsum/circle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "wgsum/arith.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/parallel.hpp"

namespace wgsum {

double CoefficientSeries::at(int64_t m) const {
    auto it = std::lower_bound(
        entries.begin(), entries.end(), m,
        [](const std::pair<int64_t, double>& e, int64_t v) { return e.first < v; });
    if (it == entries.end() || it->first != m) return 0.0;
    return it->second;
}

// ---------------------------------------------------------------------
// weight series

namespace {

struct PrimeWindow {
    std::vector<int64_t> primes;
    std::vector<int64_t> freqs; // p^k, strictly increasing
    std::vector<double> logs;
};

PrimeWindow prime_window(double X, double Y, unsigned k) {
    if (!(Y > 0.0) || !(X > Y)) throw domain_error("weight window: need X > Y > 0");
    if (k < 1 || k > 60) throw domain_error("weight window: k out of range");
    Rat Xr = rat_of_double(X), Yr = rat_of_double(Y);
    // closed window [X-Y, X+Y] as a sieve range (lo, hi]
    int64_t lo = to_i64(ceil_rat(Xr - Yr)) - 1;
    int64_t hi = to_i64(floor_rat(Xr + Yr));
    if (lo < 0) lo = 0;
    PrimeWindow w;
    if (hi <= lo) return w;
    if (pow_int(Int(hi), k) > Int(std::numeric_limits<int64_t>::max()))
        throw resource_error("weight window: p^k exceeds the 64-bit frequency range");
    auto table = sieve_weights(lo, hi, WeightKind::PrimeLog);
    for (int64_t n = lo + 1; n <= hi; ++n) {
        double c = table.at(n);
        if (c == 0.0) continue;
        w.primes.push_back(n);
        w.freqs.push_back(to_i64(pow_int(Int(n), k)));
        w.logs.push_back(c);
    }
    return w;
}

} // namespace

CoefficientSeries weight_series(double X, double Y, unsigned k, WeightSeriesKind kind) {
    CoefficientSeries out;
    if (kind == WeightSeriesKind::PrimeLogAtPk) {
        auto w = prime_window(X, Y, k);
        out.entries.reserve(w.primes.size());
        for (std::size_t i = 0; i < w.primes.size(); ++i)
            out.entries.emplace_back(w.freqs[i], w.logs[i]);
        return out;
    }

    if (!(Y > 0.0) || !(X > Y)) throw domain_error("weight window: need X > Y > 0");
    if (k < 1 || k > 60) throw domain_error("weight window: k out of range");
    Rat Xr = rat_of_double(X), Yr = rat_of_double(Y);
    Int lo_i = ceil_rat(pow_rat(Xr - Yr, k));
    Int hi_i = floor_rat(pow_rat(Xr + Yr, k));
    if (lo_i < 1) lo_i = 1;
    if (hi_i < lo_i) return out;
    if (hi_i - lo_i + 1 > kMaxTableEntries)
        throw resource_error("weight window: v-weight support over the table budget");
    const int64_t lo = to_i64(lo_i), hi = to_i64(hi_i);
    const double expo = (1.0 - static_cast<double>(k)) / static_cast<double>(k);
    out.entries.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int64_t m = lo; m <= hi; ++m)
        out.entries.emplace_back(
            m, std::pow(static_cast<double>(m), expo) / static_cast<double>(k));
    return out;
}

// ---------------------------------------------------------------------
// convolution powers

namespace {

// s! / prod(runs!) as a product of binomials; exact in double arithmetic
// throughout the range the sparse engine accepts.
double multinomial_of_runs(int s, const std::vector<int>& runs) {
    double out = 1.0;
    int rem = s;
    for (int r : runs) {
        double c = 1.0;
        for (int i = 1; i <= r; ++i)
            c = c * static_cast<double>(rem - r + i) / static_cast<double>(i);
        out *= c;
        rem -= r;
    }
    return out;
}

// C(m+s-1, s), saturating well above the budget threshold
double tuple_count(std::size_t m, int s) {
    double t = 1.0;
    for (int j = 1; j <= s && t < 4e9; ++j)
        t = t * (static_cast<double>(m) - 1.0 + static_cast<double>(j)) /
            static_cast<double>(j);
    return t;
}

// Nondecreasing support tuples in lexicographic order.  prod carries the
// left-associated coefficient product seeded with 1.0; runs carries the
// multiplicity pattern of the tuple built so far.  The accumulation order
// into buf is what rho_s_bruteforce reproduces term for term.
struct SparseState {
    const std::vector<std::pair<int64_t, double>>& e;
    int s;
    int64_t out_min;
    std::vector<double>& buf;
    std::vector<int> runs;
};

void sparse_descend(SparseState& st, int depth, std::size_t start, int64_t freq,
                    double prod) {
    if (depth == st.s) {
        st.buf[static_cast<std::size_t>(freq - st.out_min)] +=
            prod * multinomial_of_runs(st.s, st.runs);
        return;
    }
    for (std::size_t i = start; i < st.e.size(); ++i) {
        bool same = depth > 0 && i == start;
        if (same)
            ++st.runs.back();
        else
            st.runs.push_back(1);
        sparse_descend(st, depth + 1, i, freq + st.e[i].first,
                       prod * st.e[i].second);
        if (same)
            --st.runs.back();
        else
            st.runs.pop_back();
    }
}

// One dense convolution step; each output cell is an ascending-j inner sum
// owned by exactly one shard, so the result is worker-count independent.
std::vector<double> dense_step(const std::vector<double>& acc,
                               const std::vector<double>& base) {
    const std::size_t olen = acc.size() + base.size() - 1;
    std::vector<double> out(olen, 0.0);
    const std::size_t shards = (olen + kChunkTerms - 1) / kChunkTerms;
    parallel_for(shards, [&](std::size_t sh) {
        const std::size_t t0 = sh * kChunkTerms;
        const std::size_t t1 = std::min(olen, t0 + kChunkTerms);
        for (std::size_t t = t0; t < t1; ++t) {
            const std::size_t j_lo = t >= base.size() ? t - base.size() + 1 : 0;
            const std::size_t j_hi = std::min(acc.size() - 1, t);
            double cell = 0.0;
            for (std::size_t j = j_lo; j <= j_hi; ++j) cell += acc[j] * base[t - j];
            out[t] = cell;
        }
    });
    return out;
}

} // namespace

CoefficientSeries convolve_power(const CoefficientSeries& series, int s) {
    if (s < 1) throw domain_error("convolve_power: s >= 1 required");
    CoefficientSeries out;
    if (series.empty()) return out;

    const Int lo_out = Int(s) * Int(series.min_freq());
    const Int hi_out = Int(s) * Int(series.max_freq());
    if (hi_out > Int(std::numeric_limits<int64_t>::max()) ||
        lo_out < Int(std::numeric_limits<int64_t>::min()))
        throw resource_error("convolve_power: output frequency over 64-bit range");
    if (hi_out - lo_out + 1 > kMaxTableEntries)
        throw resource_error("convolve_power: output support over the table budget");

    const int64_t out_min = to_i64(lo_out);
    const std::size_t out_len =
        static_cast<std::size_t>(to_i64(hi_out - lo_out)) + 1;

    const int64_t span = series.max_freq() - series.min_freq() + 1;
    const bool sparse =
        static_cast<int64_t>(series.size()) * 8 <= span &&
        tuple_count(series.size(), s) <= 1e9;

    std::vector<double> buf;
    if (sparse) {
        buf.assign(out_len, 0.0);
        SparseState st{series.entries, s, out_min, buf, {}};
        sparse_descend(st, 0, 0, 0, 1.0);
    } else {
        std::vector<double> base(static_cast<std::size_t>(span), 0.0);
        for (const auto& [f, c] : series.entries)
            base[static_cast<std::size_t>(f - series.min_freq())] = c;
        buf = base;
        for (int step = 2; step <= s; ++step) buf = dense_step(buf, base);
    }

    for (std::size_t i = 0; i < buf.size(); ++i) {
        const double c = buf[i];
        if (c == 0.0) continue;
        require(c >= 0.0, "convolve_power: negative output coefficient");
        out.entries.emplace_back(out_min + static_cast<int64_t>(i), c);
    }
    return out;
}

// ---------------------------------------------------------------------
// representation counts

RepCount rho_s(int64_t n, const CoefficientSeries& series, int s) {
    RepCount r;
    r.n = n;
    r.s = s;
    r.value = convolve_power(series, s).at(n);
    return r;
}

namespace {

struct BruteState {
    const PrimeWindow& w;
    int s;
    int64_t n;
    bool collect;
    double value = 0.0;
    std::vector<int> runs;
    std::vector<int64_t> tuple;
    std::vector<std::vector<int64_t>>& sols;
};

void brute_descend(BruteState& st, int depth, std::size_t start, int64_t freq,
                   double prod) {
    if (depth == st.s) {
        if (freq == st.n) {
            st.value += prod * multinomial_of_runs(st.s, st.runs);
            if (st.collect) st.sols.push_back(st.tuple);
        }
        return;
    }
    const auto& f = st.w.freqs;
    const __int128 left = st.s - depth;
    for (std::size_t i = start; i < f.size(); ++i) {
        if (static_cast<__int128>(freq) + left * f[i] > st.n) break;
        if (static_cast<__int128>(freq) + f[i] + (left - 1) * f.back() < st.n)
            continue; // cannot reach n even with maximal later choices
        bool same = depth > 0 && i == start;
        if (same)
            ++st.runs.back();
        else
            st.runs.push_back(1);
        st.tuple.push_back(st.w.primes[i]);
        brute_descend(st, depth + 1, i, freq + f[i], prod * st.w.logs[i]);
        st.tuple.pop_back();
        if (same)
            --st.runs.back();
        else
            st.runs.pop_back();
    }
}

} // namespace

RepCount rho_s_bruteforce(int64_t n, double X, double Y, unsigned k, int s,
                          bool collect) {
    if (s < 1) throw domain_error("rho_s: s >= 1 required");
    auto w = prime_window(X, Y, k);
    RepCount r;
    r.n = n;
    r.s = s;
    if (w.freqs.empty()) return r;
    if (tuple_count(w.freqs.size(), s) > 1e9)
        throw resource_error("rho_s: brute-force tuple count over budget");
    BruteState st{w, s, n, collect, 0.0, {}, {}, r.solutions};
    brute_descend(st, 0, 0, 0, 1.0);
    r.value = st.value;
    return r;
}

// ---------------------------------------------------------------------
// arc integrals

namespace {

std::complex<double> e_of(const Rat& beta) {
    const double t = 2.0 * M_PI * beta.get_d();
    return {std::cos(t), std::sin(t)};
}

} // namespace

double arc_integral(const CoefficientSeries& series, int s, int64_t n,
                    const std::vector<std::pair<Rat, Rat>>& intervals) {
    for (const auto& [lo, hi] : intervals)
        if (lo < 0 || hi > 1 || lo > hi)
            throw domain_error("arc_integral: intervals must sit inside [0, 1]");
    const auto conv = convolve_power(series, s);

    std::complex<double> total(0.0, 0.0);
    for (const auto& [m, c] : conv.entries) {
        const Int t = Int(m) - Int(n);
        for (const auto& [lo, hi] : intervals) {
            std::complex<double> seg;
            if (t == 0) {
                seg = {Rat(hi - lo).get_d(), 0.0};
            } else {
                // primitive of e(t alpha): phases reduced exactly mod 1
                const std::complex<double> d =
                    e_of(frac_rat(Rat(t) * hi)) - e_of(frac_rat(Rat(t) * lo));
                const double denom = 2.0 * M_PI * t.get_d();
                seg = {d.imag() / denom, -d.real() / denom};
            }
            total += c * seg;
        }
    }
    require(std::abs(total.imag()) <= 1e-8 * (1.0 + std::abs(total.real())),
            "arc_integral: region not symmetric under alpha -> 1 - alpha");
    return total.real();
}

double arc_integral(const CoefficientSeries& series, int s, int64_t n,
                    const ArcDissection& dissection, bool major_part) {
    std::vector<std::pair<Rat, Rat>> iv;
    if (major_part) {
        iv.reserve(dissection.arcs.size());
        for (const auto& a : dissection.arcs) iv.emplace_back(a.lo, a.hi);
    } else {
        iv = dissection.minor;
    }
    return arc_integral(series, s, n, iv);
}

// ---------------------------------------------------------------------
// Hua moments

double hua_moment(const CoefficientSeries& series, int s, HuaMethod method) {
    if (s < 1) throw domain_error("hua_moment: s >= 1 required");
    if (series.empty()) return 0.0;

    if (method == HuaMethod::Parseval) {
        if (s % 2 != 0)
            throw usage_error("hua_moment: Parseval needs even s; use Quadrature");
        const auto half = convolve_power(series, s / 2);
        double sum = 0.0;
        for (const auto& [m, c] : half.entries) sum += c * c;
        return sum;
    }

    Int maxabs = Int(series.max_freq());
    if (-Int(series.min_freq()) > maxabs) maxabs = -Int(series.min_freq());
    if (maxabs < 1) maxabs = 1;
    const Int nodes = Int(4) * Int(s) * maxabs; // past the Nyquist rate of |F|^s
    if (nodes > kMaxTableEntries)
        throw resource_error("hua_moment: quadrature grid over the table budget");
    const int64_t N = to_i64(nodes);

    const std::size_t chunks =
        (static_cast<std::size_t>(N) + kChunkTerms - 1) / kChunkTerms;
    std::vector<long double> partial(chunks, 0.0L);
    parallel_for(chunks, [&](std::size_t ci) {
        const int64_t j0 = static_cast<int64_t>(ci * kChunkTerms);
        const int64_t j1 = std::min<int64_t>(N, j0 + kChunkTerms);
        long double acc = 0.0L;
        for (int64_t j = j0; j < j1; ++j) {
            std::complex<double> F(0.0, 0.0);
            for (const auto& [m, c] : series.entries) {
                const int64_t r = static_cast<int64_t>(
                    ((static_cast<__int128>(m) % N) * j % N + N) % N);
                const double ph =
                    2.0 * M_PI * (static_cast<double>(r) / static_cast<double>(N));
                F += c * std::complex<double>(std::cos(ph), std::sin(ph));
            }
            acc += std::pow(std::norm(F), static_cast<double>(s) / 2.0);
        }
        partial[ci] = acc;
    });
    const long double sum = pairwise_reduce(partial).first;
    return static_cast<double>(sum / static_cast<long double>(N));
}

} // namespace wgsum
