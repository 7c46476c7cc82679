#ifndef ABMOD_RATIONAL_HPP
#define ABMOD_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace abmod {

// Exact rational scalar. GMP keeps the canonical form (coprime numerator and
// denominator, positive denominator) after every operation we expose.
using Rat = mpq_class;

// Parses "p" or "p/q" with optional sign; rejects q = 0 and garbage.
Rat parse_rat(const std::string& text);

// Canonical rendering: "p" when the denominator is 1, otherwise "p/q".
std::string rat_to_string(const Rat& q);

// Non-authoritative decimal rendering for human consumption.
std::string rat_to_decimal(const Rat& q, int digits = 12);

inline Rat rat_of(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

bool is_integer(const Rat& q);

// Floor of an exact rational as a long (values at artifact scale are tiny).
long floor_long(const Rat& q);

} // namespace abmod

#endif
