#include "wgsum/vaughan.hpp"

#include <cmath>

#include "wgsum/arith.hpp"
#include "wgsum/errors.hpp"

namespace wgsum {

namespace {

// Lambda(m) by trial division; reference path only.
double von_mangoldt_single(int64_t m) {
    if (m < 2) return 0.0;
    for (int64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
    return std::log(static_cast<double>(m)); // m prime
}

} // namespace

int64_t lambda1_value(int64_t u, int64_t V_cut) {
    int64_t acc = 0;
    for (int64_t d = 1; d <= u && d <= V_cut; ++d)
        if (u % d == 0) acc += multiplicative(MultFn::Moebius, static_cast<uint64_t>(d));
    return acc;
}

double lambda0_value(int64_t v, int64_t U_cut, int64_t V_cut) {
    double acc = 0.0;
    for (int64_t d = 1; d <= v && d <= V_cut; ++d) {
        if (v % d) continue;
        int64_t m = v / d;
        if (m > U_cut) continue;
        int64_t mu = multiplicative(MultFn::Moebius, static_cast<uint64_t>(d));
        if (mu) acc += mu * von_mangoldt_single(m);
    }
    return acc;
}

VaughanPlan build_plan(const SumParams& params) {
    VaughanPlan plan;
    plan.x = params.x;
    plan.y = params.y;
    plan.theta = params.theta;
    plan.U = params.U;
    plan.V = params.V;
    plan.U_cut = static_cast<int64_t>(std::floor(params.U));
    plan.V_cut = static_cast<int64_t>(std::floor(params.V));
    require(plan.U_cut >= 1 && plan.V_cut >= 1, "vaughan: cuts below 1");
    require(params.x >= params.U, "vaughan: x < U breaks the identity");

    plan.UV = plan.U_cut * plan.V_cut;
    // m > U means m >= U_cut + 1, so u never exceeds (x+y)/(U_cut+1).
    Rat top = params.x_exact + params.y_exact;
    Int u_max_z;
    mpz_fdiv_q(u_max_z.get_mpz_t(), top.get_num().get_mpz_t(),
               Int(top.get_den() * (plan.U_cut + 1)).get_mpz_t());
    plan.u_max = to_i64(u_max_z);

    if (plan.UV > kMaxTableEntries || plan.u_max > kMaxTableEntries)
        throw resource_error("vaughan: coefficient tables need " +
                             std::to_string(std::max(plan.UV, plan.u_max)) +
                             " entries, over budget");

    // UV == x^{1 - theta/2 + rho} exactly; integer cuts lose at most a factor 4.
    double scale = std::pow(params.x, 1.0 - params.theta / 2 + params.rho);
    require(plan.UV >= scale / 8 && plan.UV <= scale * 8 &&
                plan.u_max <= 8 * (params.x + params.y) / params.U,
            "vaughan: table extents drifted from the x^{1-theta/2+rho} scale");

    WeightTable mu = sieve_weights(0, plan.V_cut, WeightKind::Moebius);
    WeightTable lam = sieve_weights(0, plan.U_cut, WeightKind::VonMangoldt);
    plan.mu.assign(mu.w.begin(), mu.w.end());

    // lambda0 by accumulation over (d, m) pairs rather than per-v factorization
    plan.lambda0.assign(static_cast<std::size_t>(plan.UV), 0.0);
    std::vector<std::pair<int64_t, double>> prime_powers;
    for (int64_t m = 2; m <= plan.U_cut; ++m)
        if (lam.at(m) != 0.0) prime_powers.emplace_back(m, lam.at(m));
    for (int64_t d = 1; d <= plan.V_cut; ++d) {
        double md = mu.at(d);
        if (md == 0.0) continue;
        for (auto [m, w] : prime_powers)
            plan.lambda0[static_cast<std::size_t>(d * m - 1)] += md * w;
    }
    for (int64_t v = 1; v <= plan.UV; ++v)
        require(std::abs(plan.lambda0[static_cast<std::size_t>(v - 1)]) <=
                    std::log(static_cast<double>(v)) + 1e-9,
                "vaughan: |lambda0(v)| <= log v violated");

    // lambda1 by sieving divisors d <= V_cut through the (V_cut, u_max] window
    const int64_t lo = plan.V_cut; // exclusive
    plan.lambda1.assign(static_cast<std::size_t>(plan.u_max - lo), 0);
    for (int64_t d = 1; d <= plan.V_cut; ++d) {
        int32_t md = static_cast<int32_t>(mu.at(d));
        if (md == 0) continue;
        for (int64_t u = (lo / d + 1) * d; u <= plan.u_max; u += d)
            plan.lambda1[static_cast<std::size_t>(u - lo - 1)] += md;
    }
    std::vector<int32_t> tau(static_cast<std::size_t>(plan.u_max - lo), 0);
    for (int64_t d = 1; d <= plan.u_max; ++d)
        for (int64_t u = std::max((lo / d + 1) * d, d); u <= plan.u_max; u += d)
            ++tau[static_cast<std::size_t>(u - lo - 1)];
    for (int64_t u = lo + 1; u <= plan.u_max; ++u)
        require(std::abs(plan.lambda1[static_cast<std::size_t>(u - lo - 1)]) <=
                    tau[static_cast<std::size_t>(u - lo - 1)],
                "vaughan: |lambda1(u)| <= tau(u) violated");
    return plan;
}

Decomposition decompose(const VaughanPlan& plan, const PhaseContext& ctx, double x,
                        double y) {
    if (x != plan.x)
        throw usage_error("vaughan: plan was built for x = " + std::to_string(plan.x));
    if (y > plan.y)
        throw usage_error("vaughan: interval longer than the plan covers");
    if (y < 0) throw domain_error("vaughan: y >= 0 required");

    Rat rx = rat_of_double(x);
    Rat rxy = rx + rat_of_double(y);

    // Lambda weights for the S3 inner variable: m > U_cut and
    // m <= (x+y)/u <= (x+y)/(V_cut+1).
    Int m_hi_z;
    mpz_fdiv_q(m_hi_z.get_mpz_t(), rxy.get_num().get_mpz_t(),
               Int(rxy.get_den() * (plan.V_cut + 1)).get_mpz_t());
    int64_t m_hi = to_i64(m_hi_z);
    WeightTable lam = m_hi > plan.U_cut
                          ? sieve_weights(plan.U_cut, m_hi, WeightKind::VonMangoldt)
                          : WeightTable{};

    CoefFn moebius = [&plan](int64_t d) {
        return plan.mu[static_cast<std::size_t>(d - 1)];
    };
    CoefFn lam0 = [&plan](int64_t v) { return plan.lambda0_at(v); };
    CoefFn lam1 = [&plan](int64_t u) {
        return static_cast<double>(plan.lambda1_at(u));
    };
    CoefFn eta = [&plan, &lam](int64_t m) {
        return (m > plan.U_cut && lam.contains(m)) ? lam.at(m) : 0.0;
    };

    Decomposition d;
    d.S1 = bilinear_sum(ctx, 0, plan.V_cut, moebius, nullptr, rx, rxy, true);
    d.S2 = bilinear_sum(ctx, 0, plan.UV, lam0, nullptr, rx, rxy, false);
    d.S3 = bilinear_sum(ctx, plan.V_cut, plan.u_max, lam1, eta, rx, rxy, false);
    return d;
}

double residual(const VaughanPlan& plan, const PhaseContext& ctx, double x, double y) {
    auto d = decompose(plan, ctx, x, y);
    Rat rx = rat_of_double(x);
    auto [lo, hi] = integer_range(rx, rx + rat_of_double(y));
    SumValue direct = weighted_sum(ctx, sieve_weights(lo, hi, WeightKind::VonMangoldt));
    double denom = std::max(1.0, std::abs(direct.value));
    return std::abs(direct.value - d.total()) / denom;
}

} // namespace wgsum
