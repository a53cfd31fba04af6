#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "wgsum/dioph.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/expsum.hpp"
#include "wgsum/parallel.hpp"

using namespace wgsum;

TEST_CASE("weyl_sum: alpha = 0 counts the range") {
    PhaseContext ctx(Rat(0), 3, 1u << 20);
    auto s = weyl_sum(ctx, 10, 10);
    CHECK(s.value.real() == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(s.value.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(s.terms == 10);
}

TEST_CASE("weyl_sum: k=3, alpha=1/2 alternates") {
    PhaseContext ctx(Rat(1, 2), 3, 100);
    auto s = weyl_sum(ctx, 0, 4); // e(1/2)+e(0)+e(1/2)+e(0) = 0
    CHECK(s.value.real() == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(s.value.imag() == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(s.terms == 4);
}

TEST_CASE("weyl_sum: empty range gives zero SumValue") {
    PhaseContext ctx(Rat(1, 3), 3, 100);
    auto s = weyl_sum(ctx, 10, 0.5); // no integers in (10, 10.5]
    CHECK(s.value == std::complex<double>(0, 0));
    CHECK(s.terms == 0);
    CHECK(s.reduction_depth == 0);
}

TEST_CASE("weighted_sum: frozen weight examples at alpha = 0") {
    PhaseContext ctx(Rat(0), 3, 1u << 16);
    auto lam = sieve_weights(10, 20, WeightKind::VonMangoldt);
    auto s1 = weighted_sum(ctx, lam);
    double want = std::log(11.) + std::log(13.) + std::log(2.) + std::log(17.) + std::log(19.);
    CHECK(s1.value.real() == doctest::Approx(want).epsilon(1e-13)); // ~11.4336
    CHECK(want == doctest::Approx(11.4336).epsilon(1e-4));

    // f(0) with X=10, Y=3: primes 7, 11, 13 -> (6, 13]
    auto pl = sieve_weights(6, 13, WeightKind::PrimeLog);
    auto s2 = weighted_sum(ctx, pl);
    double want2 = std::log(7.) + std::log(11.) + std::log(13.);
    CHECK(s2.value.real() == doctest::Approx(want2).epsilon(1e-13));
    CHECK(want2 == doctest::Approx(6.9088).epsilon(1e-4));
    CHECK(s2.terms == 3); // zero-weight integers are not evaluated

    auto mu = sieve_weights(1, 5, WeightKind::Moebius);
    auto s3 = weighted_sum(ctx, mu);
    CHECK(s3.value.real() == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("engine matches a naive long-double oracle") {
    std::mt19937_64 rng(777);
    for (int it = 0; it < 20; ++it) {
        uint64_t q = rng() % 95 + 5;
        uint64_t a = rng() % q;
        unsigned k = 3 + it % 3;
        Rat alpha(a, q);
        alpha.canonicalize();
        PhaseContext ctx(alpha, k, 4000);
        double x = static_cast<double>(rng() % 1000 + 50);
        double y = static_cast<double>(rng() % 500 + 10);
        auto s = weyl_sum(ctx, x, y);
        std::complex<long double> want{0, 0};
        uint64_t lo = static_cast<uint64_t>(x), hi = static_cast<uint64_t>(x + y);
        for (uint64_t n = lo + 1; n <= hi; ++n) {
            // exact rational phase: a n^k mod q over q
            mpz_class nk;
            mpz_ui_pow_ui(nk.get_mpz_t(), n, k);
            mpz_class ph = mpz_class(static_cast<unsigned long>(a)) * nk;
            ph %= static_cast<unsigned long>(q);
            long double t = 2.0L * M_PIl * ph.get_d() / static_cast<double>(q);
            want += std::complex<long double>(std::cos(t), std::sin(t));
        }
        CAPTURE(a); CAPTURE(q); CAPTURE(k); CAPTURE(x); CAPTURE(y);
        CHECK(std::abs(s.value - std::complex<double>(want)) < 1e-9);
    }
}

TEST_CASE("phase: fixed point matches exact modular arithmetic to 2^-64") {
    std::mt19937_64 rng(424242);
    for (int it = 0; it < 2000; ++it) {
        uint64_t q = rng() % 9999 + 2;
        uint64_t a = rng() % q + 1;
        unsigned k = 3 + it % 3;
        Rat alpha(a, q);
        alpha.canonicalize();
        PhaseContext ctx(alpha, k, 100000000ull);
        uint64_t n = rng() % 100000000ull + 1;

        auto limbs = ctx.phase_fraction(n);
        mpz_class F = 0;
        for (std::size_t i = limbs.size(); i-- > 0;) {
            F <<= 64;
            F += mpz_class(limbs[i]);
        }
        mpz_class nk;
        mpz_ui_pow_ui(nk.get_mpz_t(), n, k);
        mpz_class c = mpz_class(static_cast<unsigned long>(a)) * nk %
                      mpz_class(static_cast<unsigned long>(q));
        // distance mod 1: |F/2^B - c/q| <= 2^-64
        // <=> centered |F q - c 2^B| mod q 2^B  <=  q 2^{B-64}
        mpz_class twoB = mpz_class(1) << ctx.bits();
        mpz_class modq2B = mpz_class(static_cast<unsigned long>(q)) * twoB;
        mpz_class diff = (F * static_cast<unsigned long>(q) - c * twoB) % modq2B;
        if (diff < 0) diff += modq2B;
        if (diff * 2 > modq2B) diff = modq2B - diff;
        mpz_class bound = mpz_class(static_cast<unsigned long>(q)) * (mpz_class(1) << (ctx.bits() - 64));
        CAPTURE(n); CAPTURE(a); CAPTURE(q); CAPTURE(k);
        CHECK(diff <= bound);
    }
}

TEST_CASE("phase context rejects too-small B") {
    CHECK_THROWS_AS(PhaseContext(Rat(1, 3), 5, 100000000ull, 128), usage_error);
    CHECK_NOTHROW(PhaseContext(Rat(1, 3), 5, 100000000ull, 320));
}

TEST_CASE("type_i_sum: frozen examples") {
    PhaseContext ctx0(Rat(0), 3, 1u << 10);
    auto s = type_i_sum([](int64_t) { return 1.0; }, 2.0, ctx0, 10, 10);
    CHECK(s.value.real() == doctest::Approx(6.0).epsilon(1e-13));
    CHECK(s.terms == 6);

    PhaseContext ctx(Rat(1, 2), 3, 1u << 10);
    auto mu = sieve_weights(0, 4, WeightKind::Moebius);
    auto s2 = type_i_sum([&](int64_t m) { return mu.at(m); }, 1.0, ctx, 0, 8);
    CHECK(s2.value.real() == doctest::Approx(-4.0).epsilon(1e-13));
    CHECK(s2.value.imag() == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("type_i_sum with log weight matches direct evaluation") {
    PhaseContext ctx(Rat(3, 7), 3, 1u << 12);
    auto got = type_i_sum([](int64_t m) { return m % 2 ? 1.0 : -0.5; }, 3.0, ctx, 40, 25, true);
    std::complex<long double> want{0, 0};
    for (int64_t m = 4; m <= 6; ++m) {
        double xi = m % 2 ? 1.0 : -0.5;
        for (int64_t n = 40 / m + 1; m * n <= 65; ++n) {
            mpz_class t;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(m * n), 3);
            t = t * 3 % 7;
            long double ph = 2.0L * M_PIl * t.get_d() / 7.0L;
            want += std::complex<long double>(std::cos(ph), std::sin(ph)) *
                    static_cast<long double>(xi * std::log(static_cast<double>(n)));
        }
    }
    CHECK(std::abs(got.value - std::complex<double>(want)) < 1e-10);
}

TEST_CASE("type_ii_sum matches direct evaluation and reports the window") {
    auto params = make_sum_params(3, 10000, 0.9, 1e-4);
    PhaseContext ctx(Rat(5, 11), 3, 1u << 16);
    auto eta = [](int64_t n) { return n % 3 == 0 ? 0.25 : 1.0; };
    auto xi = [](int64_t m) { return 1.0 / static_cast<double>(m); };
    auto r = type_ii_sum(xi, eta, 110.0, ctx, 10000, std::pow(10000.0, 0.9), &params);
    CHECK(r.window_admissible == 1); // sqrt(x)=100 <= 110 <= y^{1-2rho}
    std::complex<long double> want{0, 0};
    for (int64_t m = 111; m <= 220; ++m)
        for (int64_t n = 10000 / m + 1; m * n <= 10000 + static_cast<int64_t>(std::pow(10000.0, 0.9)); ++n) {
            mpz_class t;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(m * n), 3);
            t = t * 5 % 11;
            long double ph = 2.0L * M_PIl * t.get_d() / 11.0L;
            want += std::complex<long double>(std::cos(ph), std::sin(ph)) *
                    static_cast<long double>(xi(m) * eta(n));
        }
    CHECK(std::abs(r.sum.value - std::complex<double>(want)) < 1e-9);

    auto r2 = type_ii_sum(xi, eta, 50.0, ctx, 10000, 500.0, &params);
    CHECK(r2.window_admissible == 0); // below sqrt(x)
}

TEST_CASE("determinism: identical results for 1 and 4 workers") {
    auto lam = sieve_weights(200000, 500000, WeightKind::VonMangoldt);
    Rat alpha(317, 1024);
    PhaseContext ctx(alpha, 3, 600000);
    set_worker_count(1);
    auto s1 = weighted_sum(ctx, lam);
    set_worker_count(4);
    auto s4 = weighted_sum(ctx, lam);
    set_worker_count(0);
    CHECK(s1.value.real() == s4.value.real()); // bit-identical
    CHECK(s1.value.imag() == s4.value.imag());
    CHECK(s1.terms == s4.terms);
    CHECK(s1.reduction_depth == s4.reduction_depth);
}

TEST_CASE("integer_range maps real intervals to (lo, hi]") {
    auto r = integer_range(Rat(10), Rat(20));
    CHECK(r.first == 10);
    CHECK(r.second == 20);
    auto r2 = integer_range(Rat(21, 2), Rat(41, 2)); // (10.5, 20.5]
    CHECK(r2.first == 10);
    CHECK(r2.second == 20);
}

TEST_CASE("sum contract: range beyond n_max rejected") {
    PhaseContext ctx(Rat(1, 3), 3, 1000);
    CHECK_THROWS_AS(weyl_sum(ctx, 990, 20), usage_error);
}
