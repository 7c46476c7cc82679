#ifndef ABMOD_ORE_HPP
#define ABMOD_ORE_HPP

#include "abmod/series.hpp"

#include <string>
#include <vector>

namespace abmod {

/// Element of the noncommutative algebra generated by a and b-series with
/// a.S(b) = S(b).a + b^2.S'(b), stored in left-normal form
///   sum_j  S_j(b) . a^j,   S_j truncated at a common b-order.
/// Trailing zero a-coefficients are stripped, so a_degree is canonical.
class OreOperator {
public:
    OreOperator() = default;
    /// Zero operator at the given order.
    explicit OreOperator(int order) : order_(order), c_{TruncSeries(order)} {}
    /// a_degree 0 operator from a series.
    explicit OreOperator(TruncSeries s) : order_(s.order()), c_{std::move(s)} {}
    /// coeffs[j] is the left series coefficient of a^j.
    OreOperator(int order, std::vector<TruncSeries> coeffs);

    static OreOperator a_power(int order, int j);
    /// a - lambda.b
    static OreOperator linear_factor(int order, const Rat& lambda);
    /// theta(a) = sum_j theta[j-1].a^j for a polynomial with theta(0) = 0;
    /// index 0 of `theta` holds the coefficient of a^1.
    static OreOperator from_a_poly(int order, const std::vector<Rat>& theta);
    /// b.theta'(a) for the same coefficient convention.
    static OreOperator b_theta_prime(int order, const std::vector<Rat>& theta);

    int order() const { return order_; }
    int a_degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const;
    /// Left series coefficient of a^j (zero series above the degree).
    TruncSeries coeff(int j) const;
    bool is_monic() const;

    OreOperator truncated(int order) const;

    OreOperator operator-() const;
    friend OreOperator operator+(const OreOperator& x, const OreOperator& y);
    friend OreOperator operator-(const OreOperator& x, const OreOperator& y);
    /// Product in normal form via a^i.T = sum_m C(i,m).D^m(T).a^{i-m},
    /// D = b^2 d/db. No b-order is lost.
    friend OreOperator operator*(const OreOperator& x, const OreOperator& y);
    friend OreOperator operator*(const TruncSeries& s, const OreOperator& y);
    friend OreOperator operator*(const Rat& c, const OreOperator& y);
    friend bool operator==(const OreOperator& x, const OreOperator& y);
    friend bool operator!=(const OreOperator& x, const OreOperator& y) { return !(x == y); }

    std::string to_string() const;

private:
    void strip();
    int order_ = 0;
    std::vector<TruncSeries> c_;
};

/// Inverse of a unit up to b-order target_b_order. A unit here is
/// c.(1 - y) with c a nonzero constant and every normal-form term of y of
/// positive b-valuation; the geometric series terminates because y^n gains
/// b-valuation n. Throws NotAUnit otherwise.
OreOperator op_invert_unit(const OreOperator& x, int target_b_order);

/// Expanded monic operator (a - l_1 b).S_1^{-1}.(a - l_2 b)...S_{k-1}^{-1}.(a - l_k b).
/// Each S_j must be a unit series; the result order is the minimum of
/// `order` and the series orders.
OreOperator op_from_factors(int order, const std::vector<Rat>& lambda,
                            const std::vector<TruncSeries>& S);

/// Left division Q = T.P + R by a monic P, deg_a R < deg_a P; T and R are
/// unique. Throws NotMonic.
std::pair<OreOperator, OreOperator> op_left_divmod(const OreOperator& Q, const OreOperator& P);

/// One commuting rewrite. With l2 = l1 + p - 1 and U the solution of
/// b.U' = p.(U - S) for the given resonant term,
///   left  = (a - l1.b).S^{-1}.(a - l2.b)
///   right = U^{-1}.(a - (l2+1).b).[S.U^{-2}]^{-1}.(a - (l1-1).b).U^{-1}
/// are verified equal coefficientwise and both returned.
/// Requires S(0) = 1 and a vanishing b^p coefficient in S (else Obstruction).
struct CommutingRewrite {
    TruncSeries U;
    OreOperator left;
    OreOperator right;
};
CommutingRewrite commuting_rewrite(const Rat& lambda1, int p, const TruncSeries& S,
                                   const Rat& resonant_value = Rat(0));

/// Double rewrite of (a - l1 b).S1^{-1}.(a - l2 b).S2^{-1}.(a - l3 b).
/// U solves b.U' = p1.(U - S1); when the b^{p2} coefficient of S2 is nonzero
/// the resonant term of U is chosen so U.S2 has no b^{p1+p2} coefficient.
/// V solves b.V' = (p1+p2).(V - U.S2). Verifies the conservation identity
///   b.(ZV)' - p2.Z.V = p1.S1.U^{-2}.V - (p1+p2).S2,  Z = U^{-1},
/// and that the rewritten product equals the original operator.
/// coeff_p2 is the b^{p2} coefficient of S1.U^{-2}.V.
struct StandardComputation {
    TruncSeries U;
    TruncSeries V;
    OreOperator rewritten;
    Rat coeff_p2;
};
StandardComputation standard_computation(const Rat& lambda1, int p1, int p2,
                                         const TruncSeries& S1, const TruncSeries& S2);

} // namespace abmod

#endif
