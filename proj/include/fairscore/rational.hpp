#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairscore {

// Exact rational scalar used throughout; doubles appear only at I/O
// boundaries.
using Rat = mpq_class;

inline Rat rat_of_long(long long v) {
    Rat r;
    mpq_set_si(r.get_mpq_t(), static_cast<long>(v), 1);
    return r;
}

inline Rat rat(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

// Exact conversion: every finite double is a rational.
inline Rat rat_of_double(double v) {
    Rat r;
    mpq_set_d(r.get_mpq_t(), v);
    return r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

inline Rat abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Parses "3", "-1/2", "0.25", "1e-4" exactly.
Rat rat_parse(const std::string& s);

std::string rat_str(const Rat& r);

// Largest integer s with s*s <= v (v >= 0).
mpz_class isqrt(const mpz_class& v);

// Smallest integer m with m*m > num/den (num/den >= 0).
long long int_above_sqrt(const Rat& v);

}  // namespace fairscore
