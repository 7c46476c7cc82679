#ifndef ABMOD_CHANGE_OF_VARIABLE_HPP
#define ABMOD_CHANGE_OF_VARIABLE_HPP

#include "abmod/module.hpp"

namespace abmod {

/// Polynomial coordinate change theta(a) = sum_j coeffs[j-1].a^j with
/// theta(0) = 0 and theta'(0) = coeffs[0] != 0. It acts on modules through
/// alpha = theta(a), beta = b.theta'(a).
struct ChangeOfVariable {
    std::vector<Rat> coeffs; // theta_1, theta_2, ...

    static ChangeOfVariable identity() { return {{Rat(1)}}; }

    int degree() const { return static_cast<int>(coeffs.size()); }
    const Rat& theta1() const { return coeffs.front(); }
    Rat coeff(int j) const; // theta_j, zero above the degree
    void validate() const;

    OreOperator alpha_op(int order) const;
    OreOperator beta_op(int order) const;
};

/// eta(theta(a)) as a polynomial change of variable.
ChangeOfVariable compose(const ChangeOfVariable& eta, const ChangeOfVariable& theta);

/// Exact matrices of alpha and beta on the finite model E/b^N.E, with the
/// commutator identity alpha.beta - beta.alpha = beta^2 checked on the spot.
struct AlphaBetaMaps {
    QMatrix alpha;
    QMatrix beta;
};
AlphaBetaMaps alpha_beta_matrices(const AbModule& E, const ChangeOfVariable& theta);

/// Coordinate series T (T(0) = 1) of the unique generator of the rank-1
/// module with exponent lambda that is an eigenvector of the transformed
/// action: (alpha - lambda.beta).(T(b).e) = 0.
TruncSeries rank1_eigen_series(const Rat& lambda, const ChangeOfVariable& theta, int N);

/// Closed form of that series for theta = a + rho.a^2 via the one-step
/// coefficient recursion; checks the second-order equation
/// rho.b^2.S'' + (1 + 2 rho.b).S' + lambda.rho.(1-lambda).S = 0 exactly.
TruncSeries s_rho_lambda_recursion(const Rat& lambda, const Rat& rho, int N);

/// Factorization (alpha - lambda.beta).S = (Z0t + Z1t.(a - mu.b)).(a - lambda.b)
/// for theta = a + rho.a^2, verified as an exact operator identity.
/// Returns (Z0t, Z1t).
std::pair<TruncSeries, TruncSeries> alpha_factor_through(const Rat& lambda, const Rat& mu,
                                                         const Rat& rho, int N);

/// The module E re-read through (alpha, beta) in its own basis: coordinates
/// of alpha(e_j) over the beta-power combinations of the e_s, solved through
/// the triangular b-filtration. The result is an honest module of the same
/// rank and order.
AbModule pushforward_module(const AbModule& E, const ChangeOfVariable& theta);

/// Full functor on presentations: build the module, rebase the annihilator of
/// the generator over the new variables and re-extract a principal
/// presentation. k+2 guard digits are consumed; the result is reported at
/// order N - (k+2).
FrescoPresentation pushforward(const FrescoPresentation& pres, const ChangeOfVariable& theta);

} // namespace abmod

#endif
