#pragma once
// Exact rational helpers on top of gmpxx.  Doubles are converted exactly
// (every finite double is a rational), so all range endpoints and phase
// comparisons can be done without rounding.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "wgsum/errors.hpp"

namespace wgsum {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat_of_double(double x) {
    Rat r(x); // exact: mpq_set_d
    r.canonicalize();
    return r;
}

inline Int floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline Int ceil_rat(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

// {x} in [0,1)
inline Rat frac_rat(const Rat& r) {
    Rat f = r - Rat(floor_rat(r));
    f.canonicalize();
    return f;
}

inline Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
    return r;
}

inline int64_t to_i64(const Int& z) {
    if (!z.fits_slong_p()) throw resource_error("integer exceeds 64-bit range: " + z.get_str());
    return static_cast<int64_t>(z.get_si());
}

// Exact value of alpha plus the textual form it was given in.
struct ExactReal {
    Rat value;       // normalized into [0,1) by the alpha parser
    std::string repr; // original text ("a/q" or "0.ddd@B"), may be empty

    double approx() const { return value.get_d(); }
};

// Parses the alpha grammar:
//   "a/q"       exact rational (any integers, q > 0 after normalization)
//   "d.ddd@B"   decimal fixed-point: floor(decimal * 2^B) / 2^B
// Bare decimals are rejected: a float literal has no canonical exact value
// at a stated precision.  Result is reduced into [0, 1).
ExactReal parse_alpha(const std::string& text);

} // namespace wgsum
