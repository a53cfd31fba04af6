#pragma once
// Diophantine approximation layer: continued fractions, best rational
// approximations with verified error bounds, derived sum parameters, and
// the major/minor arc dissection of [0,1).
//
// All membership and partition checks run in exact rational arithmetic.
// Reals that arrive as doubles (x, P, Q, ...) are converted exactly, so a
// comparison never silently rounds.

#include <cstdint>
#include <string>
#include <vector>

#include "wgsum/rat.hpp"

namespace wgsum {

struct Convergent {
    Int a; // numerator
    Int q; // denominator, strictly increasing along the list
};

// Convergents of alpha in [0,1).  For alpha = 0 returns {(0,1)}.  When the
// first partial quotient is 1 the redundant (0,1) entry is dropped so that
// denominators increase strictly.
std::vector<Convergent> continued_fraction(const Rat& alpha, int max_terms = 200);

struct RationalApprox {
    Int a;
    Int q;        // 1 <= q <= Q
    Rat err;      // |q alpha - a|, exact
    Rat alpha;    // the alpha that was approximated
    double err_d() const { return err.get_d(); }
};

// Best rational approximation in the dirichlet sense: among convergents
// with q <= Q and |q alpha - a| <= 1/Q, the one with largest q.  Such a
// convergent always exists for Q >= 1.  All three conditions are checked
// exactly; failure to find one is an invariant violation.
RationalApprox dirichlet_approx(const Rat& alpha, const Rat& Q);
RationalApprox dirichlet_approx(const Rat& alpha, double Q);

// ---------------------------------------------------------------------

struct SumParams {
    unsigned k = 3;
    double x = 0, theta = 0, delta = 0, epsilon = 0.05;
    double y = 0; // x^theta

    // derived
    int64_t t_k = 0;     // k(k-1)
    int64_t bigK = 0;    // 2 t_k (t_k + 2)
    double sigma_k = 0;  // 1/(2 t_k)
    double P = 0;        // x^{2 K delta}
    double Q = 0;        // x^{k-2} y^2 / P
    double gamma = 0;    // (theta - 3/4)^{-1}
    double rho = 0;      // min{ sigma_k (theta - 3/4)/8, delta }
    double varrho = 0;   // rho / 2
    double U = 0;        // x^{theta/2 - rho}
    double V = 0;        // x^{1 - theta + 2 rho}

    bool circle_mode = false; // 4 K delta < min{theta - 3/4, 1 - theta} verified

    // exact mirrors of the double fields, fixed at construction
    Rat x_exact, y_exact, Q_exact;
    Int P_floor;  // floor(P): arcs exist for q <= P_floor
    Int Q_ceil;   // ceil(Q): arc halfwidth is 1/(q Q_ceil)
};

// Derives every field from (k, x, theta, delta, epsilon).  Requires k >= 3,
// x >= 2, 3/4 < theta <= 1, delta > 0.  With require_circle the stronger
// constraint 4 K delta < min{theta - 3/4, 1 - theta} is enforced.
SumParams make_sum_params(unsigned k, double x, double theta, double delta,
                          double epsilon = 0.05, bool require_circle = false);

// ---------------------------------------------------------------------

struct Arc {
    Int q, a;      // center a/q, gcd(a,q) = 1, 0 <= a <= q <= P
    Rat center;    // a/q
    Rat halfwidth; // 1/(q Q_ceil)
    Rat lo, hi;    // clipped to [0,1]
};

struct ArcDissection {
    Int P_floor;
    Int Q_ceil;
    std::vector<Arc> arcs;                     // sorted by center
    std::vector<std::pair<Rat, Rat>> minor;    // complementary gaps, sorted
};

// Major arcs M(q,a) = { alpha : |q alpha - a| <= 1/Q_ceil } for all
// 0 <= a <= q <= P_floor with gcd(a,q) = 1; 0 and 1 are identified mod 1,
// giving separate clipped arcs at both ends.  Throws domain_error unless
// Q > 2 P^2 (arcs would overlap).  The arcs plus gaps partition [0,1]
// exactly (checked in rational arithmetic).
ArcDissection build_dissection(const SumParams& p);
ArcDissection build_dissection_raw(double P, double Q);

struct ArcClass {
    bool major = false;
    RationalApprox approx;  // Eq-(1.4)-style approximant at level Q
    Int witness_q, witness_a; // for major: the (q,a) whose arc contains alpha
};

// Classifies alpha against the dissection implied by params: major iff some
// convergent (or the wrap-around point 1/1) lands within 1/Q_ceil with
// denominator <= P_floor.  This agrees exactly with membership in
// build_dissection's arcs.
ArcClass classify_arc(const Rat& alpha, const SumParams& p);
ArcClass classify_arc_raw(const Rat& alpha, const Rat& Q_approx, const Int& P_floor,
                          const Int& Q_ceil);

} // namespace wgsum
