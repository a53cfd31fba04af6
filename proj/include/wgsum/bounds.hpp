#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgsum/dioph.hpp"

namespace wgsum {

// y^{1-rho+eps} + y x^eps / (q + y^2 x^{k-2} |q alpha - a|)^{1/(2k)}, the
// two-term bound evaluated with implied constant 1.  approx should come from
// dirichlet_approx(alpha, Q) for the same params.
double theorem1_rhs(const SumParams& params, const RationalApprox& approx);

// Y^{1-varrho+eps}: the minor-arc maximum scale.
double prop63_rhs(const SumParams& params);

// Empirical dichotomy probe for the short-interval Weyl sum: with
// P0 = y^{1/gamma}, Q0 = x^{k-2} y^2 / P0, either |W| <= C y^{1-rho+eps}, or
// the level-Q0 approximant satisfies q <= y^{k rho},
// |q alpha - a| <= x^{1-k} y^{k rho - 1} and
// |W| <= C (y^{1-rho+eps} + y/(q + y x^{k-1}|q alpha - a|)^{1/k}).
struct Lemma21Report {
    double w_abs = 0;       // |sum over x < n <= x+y of e(n^k alpha)|
    double minor_bound = 0; // y^{1-rho+eps}
    double major_bound = 0; // minor_bound + the (q, err)-dependent term
    Int q, a;               // approximant at level Q0
    bool approx_conditions = false;
    double ratio = 0; // w_abs / (C * applicable bound)
    bool satisfied = false;
};

// Requires gamma >= 3, 0 < rho <= sigma_k/gamma, x^{gamma/(2 gamma - sigma_k - 1)}
// <= y <= x.  C is the calibrated comparison constant.
Lemma21Report lemma21_probe(unsigned k, double x, double y, double gamma, double rho,
                            double epsilon, const Rat& alpha, double C);

// ---------------------------------------------------------------------
// minor-arc scan

struct ScanSpec {
    int count = 0;            // random q count, log-uniform over (P, Q]
    std::vector<Int> q_list;  // explicit q values (used instead when nonempty)
    bool offsets = true;      // also probe a/q +- 1/(2 q Q_ceil)
    uint64_t seed = 1;
};

struct ScanRecord {
    int k = 0;
    double x = 0, theta = 0;
    ExactReal alpha;    // the sampled point, exact
    Int q, a;           // Dirichlet approximant at level Q
    double offset = 0;  // applied perturbation, as a double
    double abs_sum = 0; // |S_k(x, y; alpha)|
    double rhs = 0;     // theorem1_rhs at the approximant
    double ratio = 0;   // abs_sum / rhs
    std::string arc;    // "minor" (major samples are skipped)
};

struct ScanResult {
    std::vector<ScanRecord> records;
    std::vector<std::string> notes; // skipped samples, one line each
    double max_ratio = 0;
};

// Samples alpha = a/q + offset, drops anything that classifies major (noted),
// computes |S_k| and the bound for the rest.  All samples major -> domain
// error.  Output order is fixed by sample index for any worker count.
ScanResult minor_arc_scan(const SumParams& params, const ScanSpec& spec);

// "# max_ratio ..." line, then the CSV header and one row per record.
std::string scan_to_csv(const ScanResult& result);

} // namespace wgsum
