#pragma once

#include <cstdint>
#include <vector>

#include "wgsum/dioph.hpp"
#include "wgsum/expsum.hpp"

namespace wgsum {

// Vaughan decomposition S_k(x,y;a) = S1 - S2 - S3 with cuts
//   U = x^{theta/2 - rho},  V = x^{1 - theta + 2 rho}.
// The integer cuts are U_cut = floor(U), V_cut = floor(V); the identity is
// exact for any cut, provided the same one is used in every piece.
struct VaughanPlan {
    double U = 0, V = 0;
    int64_t U_cut = 0, V_cut = 0;
    int64_t UV = 0;    // U_cut * V_cut, upper end of the lambda0 table
    int64_t u_max = 0; // floor((x+y)/(U_cut+1)), upper end of the lambda1 table

    // lambda0(v) = sum_{md=v, d<=V_cut, m<=U_cut} mu(d) Lambda(m), v in [1, UV]
    std::vector<double> lambda0;
    // lambda1(u) = sum_{d|u, d<=V_cut} mu(d), u in (V_cut, u_max]
    std::vector<int32_t> lambda1;
    // mu(d) for d in [1, V_cut], reused by the S1 pass
    std::vector<double> mu;

    double x = 0, y = 0, theta = 0; // snapshot of the parameters the plan serves

    double lambda0_at(int64_t v) const {
        return (v >= 1 && v <= UV) ? lambda0[static_cast<std::size_t>(v - 1)] : 0.0;
    }
    int64_t lambda1_at(int64_t u) const {
        return (u > V_cut && u <= u_max)
                   ? lambda1[static_cast<std::size_t>(u - V_cut - 1)]
                   : 0;
    }
};

// Per-value references (direct enumeration).  Slow; used for cross-checks.
double lambda0_value(int64_t v, int64_t U_cut, int64_t V_cut);
int64_t lambda1_value(int64_t u, int64_t V_cut);

// Tabulates lambda0 / lambda1 for params and asserts |lambda0(v)| <= log v,
// |lambda1(u)| <= tau(u) on every entry.  Table sizes beyond the sieve budget
// -> resource_error.
VaughanPlan build_plan(const SumParams& params);

struct Decomposition {
    SumValue S1, S2, S3;
    std::complex<double> total() const {
        return S1.value - S2.value - S3.value;
    }
};

// The three bilinear passes.  x must equal plan.x; y may be at most plan.y
// (the tables cover any shorter interval).
Decomposition decompose(const VaughanPlan& plan, const PhaseContext& ctx, double x,
                        double y);

// |S_k - (S1 - S2 - S3)| / max(1, |S_k|) with S_k summed directly from a
// von Mangoldt table.  Mathematically zero.
double residual(const VaughanPlan& plan, const PhaseContext& ctx, double x, double y);

} // namespace wgsum
