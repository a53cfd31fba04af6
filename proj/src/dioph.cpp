#include "wgsum/dioph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "wgsum/errors.hpp"

namespace wgsum {

// ---------------------------------------------------------------------
// alpha grammar

static bool parse_int(const std::string& s, Int& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out = Int(s, 10);
    return true;
}

ExactReal parse_alpha(const std::string& text) {
    ExactReal r;
    r.repr = text;
    auto at = text.find('@');
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num, den;
        if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den))
            throw usage_error("alpha: malformed rational '" + text + "'");
        if (den == 0) throw usage_error("alpha: zero denominator in '" + text + "'");
        Rat v(num, den);
        v.canonicalize();
        r.value = frac_rat(v);
        return r;
    }
    if (at != std::string::npos) {
        std::string dec = text.substr(0, at);
        std::string bits = text.substr(at + 1);
        Int B;
        if (!parse_int(bits, B) || B <= 0 || B > 65536)
            throw usage_error("alpha: bad precision in '" + text + "'");
        auto dot = dec.find('.');
        std::string ip = dot == std::string::npos ? dec : dec.substr(0, dot);
        std::string fp = dot == std::string::npos ? "" : dec.substr(dot + 1);
        Int ipart, fpart = 0;
        if (!parse_int(ip, ipart) || (!fp.empty() && !parse_int(fp, fpart)) ||
            (!fp.empty() && (fp[0] == '+' || fp[0] == '-')))
            throw usage_error("alpha: malformed decimal in '" + text + "'");
        Rat dec_val = Rat(ipart) + Rat(fpart, pow_int(10, fp.size()));
        dec_val.canonicalize();
        unsigned long b = static_cast<unsigned long>(B.get_ui());
        Rat scaled = dec_val * Rat(pow_int(2, b));
        Rat v(floor_rat(scaled), pow_int(2, b));
        v.canonicalize();
        r.value = frac_rat(v);
        return r;
    }
    Int whole;
    if (parse_int(text, whole)) { // plain integers are exact
        r.value = frac_rat(Rat(whole));
        return r;
    }
    if (text.find('.') != std::string::npos)
        throw usage_error("alpha: bare decimal '" + text +
                          "' rejected; use a/q or append @B for fixed-point");
    throw usage_error("alpha: cannot parse '" + text + "'");
}

// ---------------------------------------------------------------------
// continued fractions

std::vector<Convergent> continued_fraction(const Rat& alpha, int max_terms) {
    if (alpha < 0 || alpha >= 1) throw domain_error("continued_fraction: alpha not in [0,1)");
    if (max_terms < 1) throw domain_error("continued_fraction: max_terms < 1");
    std::vector<Convergent> conv;
    Int h_prev = 1, k_prev = 0; // index -1
    Int h = 0, k = 1;           // index 0: a0 = 0
    conv.push_back({h, k});
    Rat rem = alpha;
    int terms = 1;
    while (rem != 0 && terms < max_terms) {
        Rat inv = 1 / rem;
        Int a = floor_rat(inv);
        rem = inv - Rat(a);
        Int h_new = a * h + h_prev;
        Int k_new = a * k + k_prev;
        h_prev = h; k_prev = k;
        h = h_new; k = k_new;
        conv.push_back({h, k});
        ++terms;
    }
    // a1 = 1 duplicates q = 1; drop the weaker (0,1) so q increases strictly
    if (conv.size() >= 2 && conv[1].q == 1) conv.erase(conv.begin());
    return conv;
}

RationalApprox dirichlet_approx(const Rat& alpha, const Rat& Q) {
    if (Q < 1) throw domain_error("dirichlet_approx: Q >= 1 required");
    if (alpha < 0 || alpha >= 1) throw domain_error("dirichlet_approx: alpha not in [0,1)");
    auto conv = continued_fraction(alpha);
    const Rat one(1);
    RationalApprox best;
    bool found = false;
    for (auto& c : conv) {
        if (Rat(c.q) > Q) break;
        Rat err = abs_rat(Rat(c.q) * alpha - Rat(c.a));
        if (err * Q <= one) {
            best.a = c.a;
            best.q = c.q;
            best.err = err;
            found = true; // keep scanning: largest valid q wins
        }
    }
    require(found, "dirichlet_approx: no convergent satisfied the bound (impossible)");
    best.alpha = alpha;
    // re-verify the contract exactly before returning
    Int g;
    mpz_gcd(g.get_mpz_t(), best.a.get_mpz_t(), best.q.get_mpz_t());
    require(g == 1 && best.q >= 1 && Rat(best.q) <= Q && best.err * Q <= one,
            "dirichlet_approx postcondition failed");
    return best;
}

RationalApprox dirichlet_approx(const Rat& alpha, double Q) {
    return dirichlet_approx(alpha, rat_of_double(Q));
}

// ---------------------------------------------------------------------
// derived parameters

SumParams make_sum_params(unsigned k, double x, double theta, double delta,
                          double epsilon, bool require_circle) {
    if (k < 3) throw domain_error("params: k >= 3 required");
    if (!(x >= 2)) throw domain_error("params: x >= 2 required");
    if (!(theta > 0.75 && theta <= 1.0))
        throw domain_error("params: theta must lie in (3/4, 1]");
    if (!(delta > 0)) throw domain_error("params: delta > 0 required");
    if (!(epsilon >= 0)) throw domain_error("params: epsilon >= 0 required");

    SumParams p;
    p.k = k;
    p.x = x;
    p.theta = theta;
    p.delta = delta;
    p.epsilon = epsilon;
    p.y = std::pow(x, theta);
    p.t_k = static_cast<int64_t>(k) * (k - 1);
    p.bigK = 2 * p.t_k * (p.t_k + 2);
    p.sigma_k = 1.0 / (2.0 * static_cast<double>(p.t_k));
    p.gamma = 1.0 / (theta - 0.75);
    p.rho = std::min(p.sigma_k * (theta - 0.75) / 8.0, delta);
    p.varrho = p.rho / 2.0;
    p.P = std::pow(x, 2.0 * static_cast<double>(p.bigK) * delta);
    p.Q = std::pow(x, static_cast<double>(k) - 2.0) * p.y * p.y / p.P;
    p.U = std::pow(x, theta / 2.0 - p.rho);
    p.V = std::pow(x, 1.0 - theta + 2.0 * p.rho);

    if (!std::isfinite(p.P) || !std::isfinite(p.Q) || !std::isfinite(p.y))
        throw domain_error("params: derived P/Q overflow double range; reduce delta");

    double margin = std::min(theta - 0.75, 1.0 - theta);
    p.circle_mode = 4.0 * static_cast<double>(p.bigK) * delta < margin;
    if (require_circle && !p.circle_mode)
        throw domain_error("params: 4*K*delta must stay below min{theta-3/4, 1-theta}");

    p.x_exact = rat_of_double(x);
    p.y_exact = rat_of_double(p.y);
    p.Q_exact = rat_of_double(p.Q);
    p.P_floor = floor_rat(rat_of_double(p.P));
    p.Q_ceil = ceil_rat(p.Q_exact);
    return p;
}

// ---------------------------------------------------------------------
// arc dissection

static ArcDissection build_dissection_exact(const Rat& P_r, const Rat& Q_r) {
    if (P_r < 1) throw domain_error("dissection: P >= 1 required");
    if (Q_r <= 2 * P_r * P_r)
        throw domain_error("dissection: arcs overlap, need Q > 2 P^2");

    ArcDissection d;
    d.P_floor = floor_rat(P_r);
    d.Q_ceil = ceil_rat(Q_r);
    int64_t P = to_i64(d.P_floor);

    for (int64_t q = 1; q <= P; ++q) {
        for (int64_t a = 0; a <= q; ++a) {
            if (std::gcd(a, q) != 1) continue; // gcd(0,1)=1 keeps the a=0 arc
            Arc arc;
            arc.q = q;
            arc.a = a;
            arc.center = Rat(static_cast<long>(a), static_cast<long>(q));
            arc.center.canonicalize();
            arc.halfwidth = Rat(1) / (Rat(static_cast<long>(q)) * Rat(d.Q_ceil));
            arc.halfwidth.canonicalize();
            arc.lo = arc.center - arc.halfwidth;
            arc.hi = arc.center + arc.halfwidth;
            if (arc.lo < 0) arc.lo = 0;
            if (arc.hi > 1) arc.hi = 1;
            d.arcs.push_back(std::move(arc));
        }
    }
    std::sort(d.arcs.begin(), d.arcs.end(),
              [](const Arc& u, const Arc& v) { return u.center < v.center; });

    Rat cursor(0);
    for (auto& arc : d.arcs) {
        require(arc.lo >= cursor, "dissection: arcs overlap after sort");
        if (arc.lo > cursor) d.minor.push_back({cursor, arc.lo});
        cursor = arc.hi;
    }
    if (cursor < 1) d.minor.push_back({cursor, Rat(1)});

    // exact partition check
    Rat total(0);
    for (auto& a : d.arcs) total += a.hi - a.lo;
    for (auto& g : d.minor) total += g.second - g.first;
    require(total == 1, "dissection: arcs + gaps do not tile [0,1]");
    return d;
}

ArcDissection build_dissection(const SumParams& p) {
    return build_dissection_exact(rat_of_double(p.P), p.Q_exact);
}

ArcDissection build_dissection_raw(double P, double Q) {
    return build_dissection_exact(rat_of_double(P), rat_of_double(Q));
}

ArcClass classify_arc_raw(const Rat& alpha, const Rat& Q_approx, const Int& P_floor,
                          const Int& Q_ceil) {
    ArcClass c;
    c.approx = dirichlet_approx(alpha, Q_approx);
    // membership in an arc |q alpha - a| <= 1/Q_ceil with q <= P_floor is
    // witnessed by a convergent (Legendre: the distance is < 1/(2q^2) since
    // Q_ceil > 2q), plus the wrap-around arc centered at 1/1
    auto conv = continued_fraction(alpha);
    for (auto& cv : conv) {
        if (cv.q > P_floor) break;
        Rat err = abs_rat(Rat(cv.q) * alpha - Rat(cv.a));
        if (err * Rat(Q_ceil) <= 1) {
            c.major = true;
            c.witness_q = cv.q;
            c.witness_a = cv.a;
            return c;
        }
    }
    if (abs_rat(alpha - 1) * Rat(Q_ceil) <= 1) { // arc (1,1)
        c.major = true;
        c.witness_q = 1;
        c.witness_a = 1;
        return c;
    }
    c.major = false;
    return c;
}

ArcClass classify_arc(const Rat& alpha, const SumParams& p) {
    return classify_arc_raw(alpha, p.Q_exact, p.P_floor, p.Q_ceil);
}

} // namespace wgsum
