#include "wgsum/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wgsum/arith.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/expsum.hpp"
#include "wgsum/parallel.hpp"

namespace wgsum {

double theorem1_rhs(const SumParams& params, const RationalApprox& approx) {
    if (params.rho <= 0)
        throw domain_error("theorem1_rhs: rho <= 0 (needs theta > 3/4)");
    require(approx.q >= 1, "theorem1_rhs: approximant has q < 1");
    double q = approx.q.get_d();
    double err = approx.err_d();
    double first = std::pow(params.y, 1.0 - params.rho + params.epsilon);
    double denom =
        q + params.y * params.y * std::pow(params.x, double(params.k) - 2.0) * err;
    double second =
        params.y * std::pow(params.x, params.epsilon) /
        std::pow(denom, 1.0 / (2.0 * params.k));
    return first + second;
}

double prop63_rhs(const SumParams& params) {
    if (params.varrho <= 0)
        throw domain_error("prop63_rhs: varrho <= 0 (needs theta > 3/4)");
    return std::pow(params.y, 1.0 - params.varrho + params.epsilon);
}

Lemma21Report lemma21_probe(unsigned k, double x, double y, double gamma, double rho,
                            double epsilon, const Rat& alpha, double C) {
    if (k < 3) throw domain_error("lemma21: k >= 3 required");
    if (gamma < 3) throw domain_error("lemma21: gamma >= 3 required");
    double sigma_k = 1.0 / (2.0 * k * (k - 1));
    if (rho <= 0 || rho > sigma_k / gamma + 1e-15)
        throw domain_error("lemma21: need 0 < rho <= sigma_k/gamma");
    if (y > x) throw domain_error("lemma21: y <= x required");
    if (y < std::pow(x, gamma / (2 * gamma - sigma_k - 1)))
        throw domain_error("lemma21: y below x^{gamma/(2 gamma - sigma_k - 1)}");
    require(C > 0, "lemma21: C > 0");

    Rat rx = rat_of_double(x);
    auto [lo, hi] = integer_range(rx, rx + rat_of_double(y));
    (void)lo;
    PhaseContext ctx(alpha, k, hi > 0 ? static_cast<uint64_t>(hi) : 1);

    Lemma21Report rep;
    rep.w_abs = weyl_sum(ctx, x, y).abs();
    rep.minor_bound = std::pow(y, 1.0 - rho + epsilon);

    double P0 = std::pow(y, 1.0 / gamma);
    double Q0 = std::pow(x, double(k) - 2.0) * y * y / P0;
    auto approx = dirichlet_approx(alpha, rat_of_double(Q0));
    rep.q = approx.q;
    rep.a = approx.a;
    double qd = approx.q.get_d();
    double err = approx.err_d();
    rep.approx_conditions =
        qd <= std::pow(y, k * rho) &&
        err <= std::pow(x, 1.0 - double(k)) * std::pow(y, k * rho - 1.0);
    rep.major_bound =
        rep.minor_bound +
        y / std::pow(qd + y * std::pow(x, double(k) - 1.0) * err, 1.0 / k);
    double bound = rep.approx_conditions ? rep.major_bound : rep.minor_bound;
    rep.ratio = rep.w_abs / (C * bound);
    rep.satisfied = rep.ratio <= 1.0;
    return rep;
}

// ---------------------------------------------------------------------
// minor-arc scan

namespace {

// Keep the sampler libm-free so a fixed seed reproduces bit-for-bit anywhere.
struct SplitMix {
    uint64_t s;
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    uint64_t below(uint64_t n) { // uniform [0, n), n >= 1
        uint64_t mask = ~0ull >> __builtin_clzll(n | 1);
        for (;;) {
            uint64_t r = next() & mask;
            if (r < n) return r;
        }
    }
};

Int int_below(SplitMix& rng, const Int& n) { // uniform [0, n), n >= 1
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    std::size_t limbs = (bits + 63) / 64;
    for (;;) {
        Int r = 0;
        for (std::size_t i = 0; i < limbs; ++i) {
            r <<= 64;
            r += rng.next();
        }
        r >>= static_cast<unsigned>(limbs * 64 - bits);
        if (r < n) return r;
    }
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Sample {
    Int q, a;
    int sign = 0;
    Rat alpha;
    double offset = 0;
};

} // namespace

ScanResult minor_arc_scan(const SumParams& params, const ScanSpec& spec) {
    SplitMix rng{spec.seed ^ 0x5851f42d4c957f2dull};
    Int Q_top = floor_rat(params.Q_exact);
    const Int& P = params.P_floor;
    require(Q_top > P, "scan: Q <= P leaves no minor q range");

    std::vector<Int> qs = spec.q_list;
    if (qs.empty()) {
        if (spec.count <= 0) throw domain_error("scan: empty sample spec");
        // log-uniform: pick a bit length, then uniform within that octave
        std::size_t bitsP = mpz_sizeinbase(Int(P + 1).get_mpz_t(), 2);
        std::size_t bitsQ = mpz_sizeinbase(Q_top.get_mpz_t(), 2);
        for (int i = 0; i < spec.count; ++i) {
            for (;;) {
                std::size_t e = bitsP + rng.below(bitsQ - bitsP + 1);
                Int lo = e > 1 ? Int(Int(1) << static_cast<unsigned>(e - 1)) : Int(1);
                Int hi = Int((Int(1) << static_cast<unsigned>(e)) - 1);
                lo = std::max(lo, Int(P + 1));
                hi = std::min(hi, Q_top);
                if (lo > hi) continue;
                qs.push_back(Int(lo + int_below(rng, Int(hi - lo + 1))));
                break;
            }
        }
    }

    std::vector<Sample> samples;
    for (const Int& q : qs) {
        require(q >= 1, "scan: q >= 1 required");
        Int a;
        do {
            a = Int(1 + int_below(rng, q));
        } while (gcd(a, q) != 1);
        Rat base(a, q);
        base.canonicalize();
        static const int kSigns[] = {0, 1, -1};
        for (std::size_t si = 0; si < (spec.offsets ? 3u : 1u); ++si) {
            int sign = kSigns[si];
            Sample s;
            s.q = q;
            s.a = a;
            s.sign = sign;
            if (sign == 0) {
                s.alpha = frac_rat(base);
            } else {
                Rat off(Int(sign), Int(2 * q * params.Q_ceil));
                off.canonicalize();
                s.alpha = frac_rat(base + off);
                s.offset = off.get_d();
            }
            samples.push_back(std::move(s));
        }
    }

    ScanResult res;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto cls = classify_arc(samples[i].alpha, params);
        if (cls.major)
            res.notes.push_back("sample " + std::to_string(i) + ": q=" +
                                samples[i].q.get_str() + " sign=" +
                                std::to_string(samples[i].sign) +
                                " classified major (arc q=" +
                                cls.witness_q.get_str() + "), skipped");
        else
            keep.push_back(i);
    }
    if (keep.empty())
        throw domain_error("scan: no minor samples left after classification");

    auto [ilo, ihi] = integer_range(params.x_exact, params.x_exact + params.y_exact);
    WeightTable lam = sieve_weights(ilo, ihi, WeightKind::VonMangoldt);

    res.records.resize(keep.size());
    parallel_for(keep.size(), [&](std::size_t j) {
        const Sample& s = samples[keep[j]];
        ScanRecord rec;
        rec.k = static_cast<int>(params.k);
        rec.x = params.x;
        rec.theta = params.theta;
        rec.alpha = ExactReal{s.alpha, s.alpha.get_num().get_str() + "/" +
                                           s.alpha.get_den().get_str()};
        rec.offset = s.offset;
        auto approx = dirichlet_approx(s.alpha, params.Q_exact);
        rec.q = approx.q;
        rec.a = approx.a;
        PhaseContext ctx(s.alpha, params.k, static_cast<uint64_t>(ihi));
        rec.abs_sum = weighted_sum(ctx, lam).abs();
        rec.rhs = theorem1_rhs(params, approx);
        rec.ratio = rec.abs_sum / rec.rhs;
        rec.arc = "minor";
        res.records[j] = std::move(rec);
    });
    for (const auto& rec : res.records) res.max_ratio = std::max(res.max_ratio, rec.ratio);
    return res;
}

std::string scan_to_csv(const ScanResult& result) {
    std::string out = "# max_ratio " + fmt_g(result.max_ratio) + "\n";
    out += "k,x,theta,q,a,offset,abs_sum,rhs,ratio,arc\n";
    for (const auto& rec : result.records) {
        out += std::to_string(rec.k) + ',' + fmt_g(rec.x) + ',' + fmt_g(rec.theta) +
               ',' + rec.q.get_str() + ',' + rec.a.get_str() + ',' +
               fmt_g(rec.offset) + ',' + fmt_g(rec.abs_sum) + ',' + fmt_g(rec.rhs) +
               ',' + fmt_g(rec.ratio) + ',' + rec.arc + '\n';
    }
    return out;
}

} // namespace wgsum
