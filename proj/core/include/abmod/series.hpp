#ifndef ABMOD_SERIES_HPP
#define ABMOD_SERIES_HPP

#include "abmod/rational.hpp"

#include <string>
#include <vector>

namespace abmod {

/// Formal power series in b over Rat, truncated at a fixed order N: the
/// coefficients of b^0 .. b^{N-1} are stored, everything above is unknown.
/// Binary operations truncate to the minimum of the operand orders; equality
/// compares coefficientwise up to the common order. No operation ever rounds.
class TruncSeries {
public:
    TruncSeries() = default;
    explicit TruncSeries(int order) : c_(static_cast<size_t>(order)) {}
    TruncSeries(int order, const Rat& constant) : c_(static_cast<size_t>(order)) {
        if (order > 0) c_[0] = constant;
    }
    TruncSeries(int order, std::vector<Rat> coeffs);

    static TruncSeries one(int order) { return TruncSeries(order, Rat(1)); }
    static TruncSeries zero(int order) { return TruncSeries(order); }
    /// c * b^n at the given order.
    static TruncSeries monomial(int order, int n, const Rat& c);

    int order() const { return static_cast<int>(c_.size()); }
    /// Coefficient of b^n; zero above the truncation order.
    const Rat& operator[](int n) const;
    void set(int n, const Rat& v);

    bool is_zero() const;
    /// Index of the first nonzero coefficient; order() when all stored
    /// coefficients vanish.
    int valuation() const;

    TruncSeries truncated(int order) const;

    TruncSeries operator-() const;
    TruncSeries& operator+=(const TruncSeries& rhs);
    TruncSeries& operator-=(const TruncSeries& rhs);

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
    friend TruncSeries operator*(const Rat& c, const TruncSeries& a);

    /// Equality up to the common order of the two operands.
    friend bool operator==(const TruncSeries& a, const TruncSeries& b);
    friend bool operator!=(const TruncSeries& a, const TruncSeries& b) { return !(a == b); }

    /// b^m * S at the same order (coefficients shift up, the top m fall off).
    TruncSeries shifted(int m) const;

    /// b.S' -- same order, (b.S')_n = n.S_n.
    TruncSeries b_derivative() const;
    /// b^2.S' -- same order, (b^2.S')_n = (n-1).S_{n-1}.
    TruncSeries b2_derivative() const;
    /// Plain S'; loses one order.
    TruncSeries derivative() const;

    std::string to_string() const;

private:
    std::vector<Rat> c_;
};

/// Multiplicative inverse at the operand's order. Throws NotAUnit when the
/// constant term vanishes.
TruncSeries series_inv(const TruncSeries& x);

/// exp(x) truncated; requires x(0) = 0, else NonzeroConstantTerm.
TruncSeries series_exp(const TruncSeries& x);

/// Solves b.U' - c.U = F at the order of F. Away from resonance the
/// coefficients are U_n = F_n / (n - c). When c is a natural number below the
/// order, F_c must vanish (else Obstruction) and the coefficient U_c is the
/// free parameter of the solution space, set to `resonant_value`.
TruncSeries solve_linear_b_ode(const Rat& c, const TruncSeries& F,
                               const Rat& resonant_value = Rat(0));

} // namespace abmod

#endif
