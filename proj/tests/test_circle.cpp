#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "wgsum/circle.hpp"
#include "wgsum/errors.hpp"
#include "wgsum/parallel.hpp"

using namespace wgsum;

static CoefficientSeries plog(double X, double Y, unsigned k = 3) {
    return weight_series(X, Y, k, WeightSeriesKind::PrimeLogAtPk);
}

TEST_CASE("prime-power weight series") {
    auto s = plog(10, 3);
    REQUIRE(s.size() == 3);
    CHECK(s.entries[0].first == 343);
    CHECK(s.entries[0].second == std::log(7.0));
    CHECK(s.entries[1].first == 1331);
    CHECK(s.entries[1].second == std::log(11.0));
    CHECK(s.entries[2].first == 2197);
    CHECK(s.entries[2].second == std::log(13.0));
    CHECK(s.at(343) == std::log(7.0));
    CHECK(s.at(344) == 0.0);

    auto t = plog(2, 0.5);
    REQUIRE(t.size() == 1);
    CHECK(t.entries[0].first == 8);
    CHECK(t.entries[0].second == std::log(2.0));

    auto u = plog(2, 1); // primes 2 and 3, both endpoints included
    REQUIRE(u.size() == 2);
    CHECK(u.entries[0].first == 8);
    CHECK(u.entries[1].first == 27);

    CHECK(plog(24, 0.5).empty()); // no prime in [23.5, 24.5]

    CHECK_THROWS_AS(weight_series(1, 2, 3, WeightSeriesKind::PrimeLogAtPk),
                    domain_error); // X <= Y
    CHECK_THROWS_AS(weight_series(10, 0, 3, WeightSeriesKind::PrimeLogAtPk),
                    domain_error); // Y <= 0
    CHECK_THROWS_AS(plog(3e6, 2.0), resource_error); // p^k over 2^63
}

TEST_CASE("singular-integral weight series") {
    auto v = weight_series(2, 1, 3, WeightSeriesKind::SingularIntegralWeights);
    REQUIRE(v.size() == 27);
    CHECK(v.min_freq() == 1);
    CHECK(v.max_freq() == 27);
    CHECK(v.at(1) == 1.0 / 3.0);
    CHECK(v.at(27) == std::pow(27.0, -2.0 / 3.0) / 3.0);
    CHECK(v.at(27) == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
    CHECK(v.at(28) == 0.0);

    CHECK_THROWS_AS(
        weight_series(2000, 1000, 3, WeightSeriesKind::SingularIntegralWeights),
        resource_error);
}

TEST_CASE("convolution powers, sparse engine") {
    auto single = plog(2, 0.5);
    auto sq = convolve_power(single, 2);
    REQUIRE(sq.size() == 1);
    CHECK(sq.entries[0].first == 16);
    CHECK(sq.entries[0].second == std::log(2.0) * std::log(2.0));

    auto pair = plog(2, 1);
    CHECK(convolve_power(pair, 1).entries == pair.entries); // identity

    auto c = convolve_power(pair, 2);
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    REQUIRE(c.size() == 3);
    CHECK(c.at(16) == l2 * l2);
    CHECK(c.at(35) == 2.0 * (l2 * l3));
    CHECK(c.at(54) == l3 * l3);

    CHECK_THROWS_AS(convolve_power(pair, 0), domain_error);
    CHECK(convolve_power(CoefficientSeries{}, 3).empty());
}

TEST_CASE("convolution powers, dense engine") {
    auto v = weight_series(2, 1, 3, WeightSeriesKind::SingularIntegralWeights);
    auto c = convolve_power(v, 2);
    CHECK(c.min_freq() == 2);
    CHECK(c.max_freq() == 54);
    CHECK(c.at(2) == v.at(1) * v.at(1));
    CHECK(c.at(54) == v.at(27) * v.at(27));
    for (const auto& [m, w] : c.entries) CHECK(w >= 0.0);

    auto wide = weight_series(40, 20, 3, WeightSeriesKind::SingularIntegralWeights);
    CHECK_THROWS_AS(convolve_power(wide, 700), resource_error);
}

TEST_CASE("dense convolution is worker-independent") {
    auto v = weight_series(3, 1, 3, WeightSeriesKind::SingularIntegralWeights);
    int saved = worker_count();
    set_worker_count(1);
    auto c1 = convolve_power(v, 3);
    set_worker_count(4);
    auto c4 = convolve_power(v, 3);
    set_worker_count(saved);
    CHECK(c1.entries == c4.entries);
}

TEST_CASE("weighted representation counts") {
    auto pair = plog(2, 1);
    const double l2 = std::log(2.0), l3 = std::log(3.0);

    auto r16 = rho_s(16, pair, 2);
    CHECK(r16.value == l2 * l2);
    CHECK(r16.value == doctest::Approx(0.4805).epsilon(1e-3));
    auto r35 = rho_s(35, pair, 2);
    CHECK(r35.value == 2.0 * (l2 * l3));
    CHECK(r35.value == doctest::Approx(1.523).epsilon(1e-3));
    CHECK(rho_s(17, pair, 2).value == 0.0);

    // odd target, all-even support
    auto even_only = plog(2, 0.5); // {8}
    CHECK(rho_s(15, even_only, 2).value == 0.0);
}

TEST_CASE("brute force count matches and collects solutions") {
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    auto b16 = rho_s_bruteforce(16, 2, 1, 3, 2, true);
    CHECK(b16.value == l2 * l2);
    REQUIRE(b16.solutions.size() == 1);
    CHECK(b16.solutions[0] == std::vector<int64_t>{2, 2});

    auto b35 = rho_s_bruteforce(35, 2, 1, 3, 2, true);
    CHECK(b35.value == 2.0 * (l2 * l3));
    REQUIRE(b35.solutions.size() == 1);
    CHECK(b35.solutions[0] == std::vector<int64_t>{2, 3});

    CHECK(rho_s_bruteforce(1331, 10, 3, 3, 1).value == std::log(11.0));
    CHECK(rho_s_bruteforce(2 * 2197 + 1, 10, 3, 3, 2).value == 0.0); // above range

    CHECK_THROWS_AS(rho_s_bruteforce(1000000, 1e5, 5e4, 3, 3), resource_error);
}

TEST_CASE("convolution and brute force agree exactly") {
    for (int s : {2, 3}) {
        for (double X : {10.0, 20.0, 40.0}) {
            double Y = X / 2;
            auto series = plog(X, Y);
            auto conv = convolve_power(series, s);
            for (const auto& [n, c] : conv.entries) {
                INFO("X=", X, " s=", s, " n=", n);
                CHECK(rho_s_bruteforce(n, X, Y, 3, s).value == c);
                CHECK(rho_s(n, series, s).value == c);
            }
            // a few absent frequencies
            CHECK(rho_s_bruteforce(conv.min_freq() - 1, X, Y, 3, s).value == 0.0);
            CHECK(rho_s_bruteforce(conv.max_freq() + 1, X, Y, 3, s).value == 0.0);
        }
    }
}

TEST_CASE("arc integral: full circle, empty region, additivity") {
    auto series = plog(10, 3);
    auto conv = convolve_power(series, 2);

    std::vector<std::pair<Rat, Rat>> full{{Rat(0), Rat(1)}};
    CHECK(arc_integral(series, 2, 686, full) == conv.at(686));
    CHECK(arc_integral(series, 2, 2540, full) == conv.at(2540));
    CHECK(arc_integral(series, 2, 999, full) == 0.0);

    CHECK(arc_integral(series, 2, 686, {}) == 0.0);

    for (double P : {1.0, 3.0, 10.0}) {
        auto diss = build_dissection_raw(P, 400 * P * P);
        for (int64_t n : {int64_t(686), int64_t(1674), int64_t(2540), int64_t(4394)}) {
            double maj = arc_integral(series, 2, n, diss, true);
            double min = arc_integral(series, 2, n, diss, false);
            INFO("P=", P, " n=", n);
            CHECK(maj + min == doctest::Approx(conv.at(n)).epsilon(1e-6));
        }
        double maj0 = arc_integral(series, 2, 1000, diss, true);
        double min0 = arc_integral(series, 2, 1000, diss, false);
        CHECK(std::abs(maj0 + min0) <= 1e-6);
    }

    std::vector<std::pair<Rat, Rat>> lopsided{{Rat(1, 10), Rat(2, 10)}};
    CHECK_THROWS_AS(arc_integral(series, 2, 686, lopsided), invariant_error);
}

TEST_CASE("hua moments") {
    auto series = plog(10, 3);
    const double l7 = std::log(7.0), l11 = std::log(11.0), l13 = std::log(13.0);

    double p2 = hua_moment(series, 2, HuaMethod::Parseval);
    CHECK(p2 == ((l7 * l7 + l11 * l11) + l13 * l13));
    CHECK(p2 == doctest::Approx(16.115433253847595).epsilon(1e-12));
    CHECK(hua_moment(series, 2, HuaMethod::Quadrature) ==
          doctest::Approx(p2).epsilon(1e-9));

    double p4 = hua_moment(series, 4, HuaMethod::Parseval);
    CHECK(p4 == doctest::Approx(428.73214031409577).epsilon(1e-9));
    CHECK(hua_moment(series, 4, HuaMethod::Quadrature) ==
          doctest::Approx(p4).epsilon(1e-9));

    // s = 2 t_k = 12, the moment order used for k = 3
    double p12 = hua_moment(series, 12, HuaMethod::Parseval);
    CHECK(p12 == doctest::Approx(791817451.28866959).epsilon(1e-9));

    CHECK_THROWS_AS(hua_moment(series, 3, HuaMethod::Parseval), usage_error);
    CHECK(hua_moment(series, 3, HuaMethod::Quadrature) > 0.0);

    CHECK(hua_moment(CoefficientSeries{}, 2, HuaMethod::Parseval) == 0.0);
    CHECK(hua_moment(CoefficientSeries{}, 2, HuaMethod::Quadrature) == 0.0);
}
