#include "abmod/ore.hpp"

#include "abmod/errors.hpp"

#include <algorithm>
#include <sstream>

namespace abmod {

namespace {
Rat binom(int n, int k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(b);
}
} // namespace

OreOperator::OreOperator(int order, std::vector<TruncSeries> coeffs) : order_(order), c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(TruncSeries(order_));
    for (auto& s : c_) s = s.truncated(order_);
    strip();
}

void OreOperator::strip() {
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
}

OreOperator OreOperator::a_power(int order, int j) {
    std::vector<TruncSeries> c(static_cast<size_t>(j) + 1, TruncSeries(order));
    c.back() = TruncSeries::one(order);
    return OreOperator(order, std::move(c));
}

OreOperator OreOperator::linear_factor(int order, const Rat& lambda) {
    std::vector<TruncSeries> c(2, TruncSeries(order));
    c[0] = TruncSeries::monomial(order, 1, -lambda);
    c[1] = TruncSeries::one(order);
    return OreOperator(order, std::move(c));
}

OreOperator OreOperator::from_a_poly(int order, const std::vector<Rat>& theta) {
    std::vector<TruncSeries> c(theta.size() + 1, TruncSeries(order));
    for (size_t j = 0; j < theta.size(); ++j) c[j + 1] = TruncSeries(order, theta[j]);
    return OreOperator(order, std::move(c));
}

OreOperator OreOperator::b_theta_prime(int order, const std::vector<Rat>& theta) {
    std::vector<TruncSeries> c(theta.size(), TruncSeries(order));
    for (size_t j = 0; j < theta.size(); ++j)
        c[j] = TruncSeries::monomial(order, 1, Rat(static_cast<long>(j + 1)) * theta[j]);
    return OreOperator(order, std::move(c));
}

bool OreOperator::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const TruncSeries& s) { return s.is_zero(); });
}

TruncSeries OreOperator::coeff(int j) const {
    if (j < 0 || j > a_degree()) return TruncSeries(order_);
    return c_[static_cast<size_t>(j)];
}

bool OreOperator::is_monic() const {
    return c_.back() == TruncSeries::one(order_) && !c_.back().is_zero();
}

OreOperator OreOperator::truncated(int order) const {
    std::vector<TruncSeries> c;
    c.reserve(c_.size());
    for (const auto& s : c_) c.push_back(s.truncated(order));
    return OreOperator(order, std::move(c));
}

OreOperator OreOperator::operator-() const {
    OreOperator r(*this);
    for (auto& s : r.c_) s = -s;
    return r;
}

OreOperator operator+(const OreOperator& x, const OreOperator& y) {
    int order = std::min(x.order_, y.order_);
    std::vector<TruncSeries> c(static_cast<size_t>(std::max(x.a_degree(), y.a_degree())) + 1,
                               TruncSeries(order));
    for (size_t j = 0; j < c.size(); ++j)
        c[j] = x.coeff(static_cast<int>(j)).truncated(order) + y.coeff(static_cast<int>(j)).truncated(order);
    return OreOperator(order, std::move(c));
}

OreOperator operator-(const OreOperator& x, const OreOperator& y) {
    return x + (-y);
}

OreOperator operator*(const OreOperator& x, const OreOperator& y) {
    int order = std::min(x.order_, y.order_);
    int dx = x.a_degree(), dy = y.a_degree();
    std::vector<TruncSeries> c(static_cast<size_t>(dx + dy) + 1, TruncSeries(order));
    for (int j = 0; j <= dy; ++j) {
        // D^m of the right coefficient, D = b^2 d/db.
        TruncSeries dm = y.coeff(j).truncated(order);
        for (int m = 0; m <= dx; ++m) {
            if (m > 0) dm = dm.b2_derivative();
            if (dm.is_zero()) break;
            for (int i = m; i <= dx; ++i) {
                const TruncSeries xi = x.coeff(i).truncated(order);
                if (xi.is_zero()) continue;
                c[static_cast<size_t>(i + j - m)] += binom(i, m) * (xi * dm);
            }
        }
    }
    return OreOperator(order, std::move(c));
}

OreOperator operator*(const TruncSeries& s, const OreOperator& y) {
    return OreOperator(s) * y;
}

OreOperator operator*(const Rat& c, const OreOperator& y) {
    OreOperator r(y);
    for (auto& s : r.c_) s = c * s;
    return r;
}

bool operator==(const OreOperator& x, const OreOperator& y) {
    int d = std::max(x.a_degree(), y.a_degree());
    for (int j = 0; j <= d; ++j)
        if (x.coeff(j) != y.coeff(j)) return false;
    return true;
}

std::string OreOperator::to_string() const {
    std::ostringstream out;
    for (int j = a_degree(); j >= 0; --j) {
        out << "[" << c_[static_cast<size_t>(j)].to_string() << "]";
        if (j >= 1) out << "*a";
        if (j >= 2) out << "^" << j;
        if (j > 0) out << " + ";
    }
    return out.str();
}

OreOperator op_invert_unit(const OreOperator& x, int target_b_order) {
    int order = std::min(x.order(), target_b_order);
    OreOperator xt = x.truncated(order);
    if (order <= 0) throw InsufficientOrder("inversion needs a positive b-order");
    Rat c0 = xt.coeff(0)[0];
    if (c0 == 0) throw NotAUnit("operator lies in a.A + b.A");
    for (int j = 1; j <= xt.a_degree(); ++j)
        if (xt.coeff(j)[0] != 0)
            throw NotAUnit("a^" + std::to_string(j) + " coefficient has a nonzero constant term");
    // x = c0.(1 - y) with every term of y of positive b-valuation, so y^n
    // lies in b^n.A and the geometric series stops at the working order.
    OreOperator one(TruncSeries::one(order));
    Rat inv0 = 1 / c0;
    OreOperator y = one - OreOperator(TruncSeries(order, inv0)) * xt;
    OreOperator acc = one;
    OreOperator pow = one;
    for (int n = 1; n < order; ++n) {
        pow = pow * y;
        if (pow.is_zero()) break;
        acc = acc + pow;
    }
    return OreOperator(TruncSeries(order, inv0)) * acc;
}

OreOperator op_from_factors(int order, const std::vector<Rat>& lambda,
                            const std::vector<TruncSeries>& S) {
    if (lambda.empty()) throw ValidationError("at least one factor is required");
    if (S.size() + 1 != lambda.size())
        throw ValidationError("need exactly one unit series between consecutive factors");
    for (const auto& s : S) order = std::min(order, s.order());
    OreOperator acc = OreOperator::linear_factor(order, lambda[0]);
    for (size_t j = 0; j + 1 < lambda.size(); ++j) {
        acc = acc * OreOperator(series_inv(S[j].truncated(order)));
        acc = acc * OreOperator::linear_factor(order, lambda[j + 1]);
    }
    return acc;
}

std::pair<OreOperator, OreOperator> op_left_divmod(const OreOperator& Q, const OreOperator& P) {
    int order = std::min(Q.order(), P.order());
    OreOperator p = P.truncated(order);
    if (p.is_zero() || !p.is_monic()) throw NotMonic();
    int d = p.a_degree();
    OreOperator r = Q.truncated(order);
    std::vector<TruncSeries> tc(static_cast<size_t>(std::max(r.a_degree() - d, 0)) + 1,
                                TruncSeries(order));
    while (!r.is_zero() && r.a_degree() >= d) {
        int m = r.a_degree();
        TruncSeries lead = r.coeff(m);
        // lead.a^{m-d}.P has degree m with leading series `lead`.
        OreOperator step = OreOperator(lead) * (OreOperator::a_power(order, m - d) * p);
        r = r - step;
        if (r.a_degree() >= m && !r.coeff(m).is_zero())
            throw Error("DivisionFailure", "leading coefficient did not cancel");
        tc[static_cast<size_t>(m - d)] = lead;
    }
    return {OreOperator(order, std::move(tc)), r};
}

CommutingRewrite commuting_rewrite(const Rat& lambda1, int p, const TruncSeries& S,
                                   const Rat& resonant_value) {
    if (p < 1) throw ValidationError("the gap p must be a positive integer");
    if (S[0] != 1) throw ValidationError("S must have constant term 1");
    int order = S.order();
    Rat lambda2 = lambda1 + p - 1;
    TruncSeries U = solve_linear_b_ode(Rat(p), Rat(-p) * S, resonant_value);

    OreOperator left = OreOperator(series_inv(S)) * OreOperator::linear_factor(order, lambda2);
    left = OreOperator::linear_factor(order, lambda1) * left;

    TruncSeries Uinv = series_inv(U);
    TruncSeries SUm2 = S * Uinv * Uinv;
    OreOperator right = OreOperator(Uinv) * OreOperator::linear_factor(order, lambda2 + 1);
    right = right * OreOperator(series_inv(SUm2));
    right = right * OreOperator::linear_factor(order, lambda1 - 1);
    right = right * OreOperator(Uinv);

    if (left != right)
        throw Error("IdentityFailure", "commuting rewrite identity failed at the working order");
    return {U, left, right};
}

StandardComputation standard_computation(const Rat& lambda1, int p1, int p2,
                                         const TruncSeries& S1, const TruncSeries& S2) {
    if (p1 < 1 || p2 < 1) throw ValidationError("p1 and p2 must be positive integers");
    int order = std::min(S1.order(), S2.order());
    TruncSeries s1 = S1.truncated(order), s2 = S2.truncated(order);
    if (s1[0] != 1 || s2[0] != 1) throw ValidationError("S1 and S2 must have constant term 1");
    if (s1[p1] != 0) throw Obstruction(p1, "S1 has a nonzero b^p1 coefficient");

    Rat alpha = s2[p2];
    TruncSeries U = solve_linear_b_ode(Rat(p1), Rat(-p1) * s1, Rat(0));
    if (alpha != 0) {
        // Shift the resonant term so U.S2 has no b^{p1+p2} coefficient.
        Rat rho = -((U * s2)[p1 + p2]) / alpha;
        U += TruncSeries::monomial(order, p1, rho);
    } else if ((U * s2)[p1 + p2] != 0) {
        throw Obstruction(p1 + p2, "b^{p1+p2} coefficient of U.S2 cannot be cancelled");
    }
    TruncSeries US2 = U * s2;
    TruncSeries V = solve_linear_b_ode(Rat(p1 + p2), Rat(-(p1 + p2)) * US2, Rat(0));

    // Conservation identity b.(ZV)' - p2.Z.V = p1.S1.U^{-2}.V - (p1+p2).S2.
    TruncSeries Z = series_inv(U);
    TruncSeries ZV = Z * V;
    TruncSeries S1Um2V = s1 * Z * Z * V;
    TruncSeries lhs = ZV.b_derivative() - Rat(p2) * ZV;
    TruncSeries rhs = Rat(p1) * S1Um2V - Rat(p1 + p2) * s2;
    if (lhs != rhs) throw Error("IdentityFailure", "conservation identity failed");

    Rat lambda2 = lambda1 + p1 - 1;
    Rat lambda3 = lambda2 + p2 - 1;
    TruncSeries Vinv = series_inv(V);
    OreOperator rewritten = OreOperator(Z) * OreOperator::linear_factor(order, lambda2 + 1);
    rewritten = rewritten * OreOperator(series_inv(S1Um2V));
    rewritten = rewritten * OreOperator::linear_factor(order, lambda3 + 1);
    rewritten = rewritten * OreOperator(series_inv(US2 * Vinv * Vinv));
    rewritten = rewritten * OreOperator::linear_factor(order, lambda1 - 2);
    rewritten = rewritten * OreOperator(Vinv);

    OreOperator original = op_from_factors(order, {lambda1, lambda2, lambda3}, {s1, s2});
    if (rewritten != original)
        throw Error("IdentityFailure", "double rewrite does not reproduce the operator");

    return {U, V, rewritten, S1Um2V[p2]};
}

} // namespace abmod
