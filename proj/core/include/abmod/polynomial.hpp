#ifndef ABMOD_POLYNOMIAL_HPP
#define ABMOD_POLYNOMIAL_HPP

#include "abmod/linalg.hpp"
#include "abmod/rational.hpp"

#include <string>
#include <vector>

namespace abmod {

/// Dense univariate polynomial over Rat, coefficient of z^i at index i.
/// Small degrees only (degree = module rank); used for Bernstein polynomials.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    static QPoly constant(const Rat& v) { return QPoly({v}); }
    /// Monic product of (z - r) over the given roots.
    static QPoly from_roots(const std::vector<Rat>& roots);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rat& operator[](int i) const;

    QPoly operator+(const QPoly& rhs) const;
    QPoly operator-(const QPoly& rhs) const;
    QPoly operator*(const QPoly& rhs) const;
    bool operator==(const QPoly& rhs) const { return c_ == rhs.c_; }

    Rat eval(const Rat& z) const;
    QPoly monic() const;

    /// Quotient and remainder by a nonzero divisor.
    std::pair<QPoly, QPoly> divmod(const QPoly& d) const;

    /// Rational roots with multiplicity, for polynomials that split over Q
    /// (every Bernstein polynomial here does); throws Error otherwise.
    std::vector<Rat> rational_roots() const;

    std::string to_string(const std::string& var = "z") const;

private:
    void trim();
    std::vector<Rat> c_;
};

/// Characteristic polynomial det(z.I - M) by exact Faddeev-LeVerrier.
QPoly char_poly(const QMatrix& M);

/// Minimal polynomial of M: lcm over basis vectors of the first linear
/// dependency among v, Mv, M^2 v, ...
QPoly min_poly(const QMatrix& M);

} // namespace abmod

#endif
