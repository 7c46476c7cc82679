#include "abmod/change_of_variable.hpp"

#include "abmod/errors.hpp"

#include <cassert>

namespace abmod {

namespace {

// Finite model of E/b^N.E: coordinates indexed level*k + coord.
int midx(int k, int level, int coord) { return level * k + coord; }

QMatrix model_a(const AbModule& E) {
    int k = E.rank(), N = E.order();
    QMatrix A(k * N, k * N);
    for (int n = 0; n < N; ++n)
        for (int j = 0; j < k; ++j) {
            int col = midx(k, n, j);
            for (int i = 0; i < k; ++i) {
                const TruncSeries& s = E.action(i, j);
                for (int m = n; m < N; ++m)
                    if (s[m - n] != 0) A.at(midx(k, m, i), col) += s[m - n];
            }
            if (n + 1 < N) A.at(midx(k, n + 1, j), col) += Rat(n);
        }
    return A;
}

QMatrix model_b(const AbModule& E) {
    int k = E.rank(), N = E.order();
    QMatrix B(k * N, k * N);
    for (int n = 0; n + 1 < N; ++n)
        for (int j = 0; j < k; ++j) B.at(midx(k, n + 1, j), midx(k, n, j)) = 1;
    return B;
}

std::vector<Rat> vec_to_model(const AbModule& E, const ModuleVec& v) {
    int k = E.rank(), N = E.order();
    std::vector<Rat> x(static_cast<size_t>(k) * N);
    for (int i = 0; i < k; ++i)
        for (int n = 0; n < N; ++n) x[static_cast<size_t>(midx(k, n, i))] = v[static_cast<size_t>(i)][n];
    return x;
}

} // namespace

Rat ChangeOfVariable::coeff(int j) const {
    if (j < 1 || j > degree()) return Rat(0);
    return coeffs[static_cast<size_t>(j - 1)];
}

void ChangeOfVariable::validate() const {
    if (coeffs.empty() || coeffs.front() == 0)
        throw ValidationError("a change of variable needs theta'(0) != 0");
}

OreOperator ChangeOfVariable::alpha_op(int order) const {
    validate();
    return OreOperator::from_a_poly(order, coeffs);
}

OreOperator ChangeOfVariable::beta_op(int order) const {
    validate();
    return OreOperator::b_theta_prime(order, coeffs);
}

ChangeOfVariable compose(const ChangeOfVariable& eta, const ChangeOfVariable& theta) {
    eta.validate();
    theta.validate();
    // eta(theta(a)) exactly; degrees multiply.
    int deg = eta.degree() * theta.degree();
    std::vector<Rat> acc(static_cast<size_t>(deg) + 1); // coefficient of a^i at index i
    std::vector<Rat> power(static_cast<size_t>(deg) + 1);
    power[0] = 1;
    for (int j = 1; j <= eta.degree(); ++j) {
        // power = theta^j
        std::vector<Rat> next(static_cast<size_t>(deg) + 1);
        for (int i = 0; i <= deg; ++i) {
            if (power[static_cast<size_t>(i)] == 0) continue;
            for (int t = 1; t <= theta.degree() && i + t <= deg; ++t)
                next[static_cast<size_t>(i + t)] += power[static_cast<size_t>(i)] * theta.coeff(t);
        }
        power = std::move(next);
        if (eta.coeff(j) == 0) continue;
        for (int i = 0; i <= deg; ++i) acc[static_cast<size_t>(i)] += eta.coeff(j) * power[static_cast<size_t>(i)];
    }
    std::vector<Rat> coeffs(acc.begin() + 1, acc.end());
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    return {coeffs};
}

AlphaBetaMaps alpha_beta_matrices(const AbModule& E, const ChangeOfVariable& theta) {
    theta.validate();
    int dim = E.rank() * E.order();
    QMatrix A = model_a(E);
    QMatrix B = model_b(E);
    QMatrix alpha(dim, dim), thetaprime(dim, dim);
    QMatrix apow = QMatrix::identity(dim);
    for (int j = 1; j <= theta.degree(); ++j) {
        apow = apow * A;
        if (theta.coeff(j) != 0) {
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    if (apow.at(r, c) != 0) alpha.at(r, c) += theta.coeff(j) * apow.at(r, c);
        }
    }
    apow = QMatrix::identity(dim);
    for (int j = 1; j <= theta.degree(); ++j) {
        if (theta.coeff(j) != 0) {
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    if (apow.at(r, c) != 0)
                        thetaprime.at(r, c) += Rat(j) * theta.coeff(j) * apow.at(r, c);
        }
        apow = apow * A;
    }
    QMatrix beta = B * thetaprime;
    if (!(alpha * beta - beta * alpha == beta * beta))
        throw Error("IdentityFailure", "commutator of alpha and beta is not beta^2");
    return {alpha, beta};
}

TruncSeries rank1_eigen_series(const Rat& lambda, const ChangeOfVariable& theta, int N) {
    theta.validate();
    AbModule El(1, N);
    El.set_action(0, 0, TruncSeries::monomial(N, 1, lambda));
    AlphaBetaMaps maps = alpha_beta_matrices(El, theta);
    QMatrix op = maps.alpha; // alpha - lambda.beta
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) op.at(r, c) -= lambda * maps.beta.at(r, c);

    // Images of (alpha - lambda.beta) on b^n.e have b-valuation n+1 with
    // leading coefficient theta_1.n, so the solve is triangular.
    std::vector<std::vector<Rat>> u(static_cast<size_t>(N));
    for (int n = 0; n < N; ++n) {
        std::vector<Rat> en(static_cast<size_t>(N));
        en[static_cast<size_t>(n)] = 1;
        u[static_cast<size_t>(n)] = op.apply(en);
        assert(n == 0 || u[static_cast<size_t>(n)][static_cast<size_t>(std::min(n, N - 1))] == 0);
    }
    TruncSeries T(N);
    T.set(0, Rat(1));
    std::vector<Rat> resid = u[0];
    for (int n = 1; n + 1 < N; ++n) {
        Rat lead = theta.theta1() * n;
        Rat tn = -resid[static_cast<size_t>(n + 1)] / lead;
        T.set(n, tn);
        if (tn != 0)
            for (int m = 0; m < N; ++m)
                resid[static_cast<size_t>(m)] += tn * u[static_cast<size_t>(n)][static_cast<size_t>(m)];
    }
    for (int m = 0; m + 1 < N; ++m)
        if (resid[static_cast<size_t>(m)] != 0)
            throw Error("EigenSolveFailure", "eigenvector residual did not vanish");
    return T;
}

TruncSeries s_rho_lambda_recursion(const Rat& lambda, const Rat& rho, int N) {
    TruncSeries S(N);
    Rat gamma(1);
    Rat s(1);
    S.set(0, Rat(1));
    Rat factor_pow(1);
    mpz_class fact(1);
    for (int n = 1; n < N; ++n) {
        Rat np1(n);
        gamma *= Rat(1) - 1 / np1 + lambda * (1 - lambda) / (np1 * np1);
        fact *= n;
        factor_pow *= -rho;
        S.set(n, Rat(fact) * factor_pow * gamma);
    }
    // b.(the second-order equation): rho.b^3.S'' + (b + 2 rho.b^2).S' +
    // lambda.rho.(1-lambda).b.S = 0, all order-preserving primitives.
    TruncSeries b3S2(N), bS1 = S.b_derivative(), b2S1 = S.b2_derivative();
    for (int n = 2; n < N; ++n) b3S2.set(n, Rat(n - 1) * Rat(n - 2) * S[n - 2]);
    TruncSeries check = rho * b3S2 + bS1 + (2 * rho) * b2S1 +
                        (lambda * rho * (1 - lambda)) * S.shifted(1);
    if (!check.is_zero())
        throw Error("IdentityFailure", "closed-form series fails its defining equation");
    return S;
}

std::pair<TruncSeries, TruncSeries> alpha_factor_through(const Rat& lambda, const Rat& mu,
                                                         const Rat& rho, int N) {
    TruncSeries S = s_rho_lambda_recursion(lambda, rho, N);
    TruncSeries Z1 = rho * S;
    TruncSeries Z0 = S - (lambda * rho) * S.shifted(1) + rho * S.b2_derivative();
    TruncSeries Z1t = Z1;
    TruncSeries Z0t = Z0 + mu * Z1.shifted(1) + Z1.b2_derivative();

    ChangeOfVariable theta{{Rat(1), rho}};
    OreOperator lhs = (theta.alpha_op(N) - lambda * theta.beta_op(N)) * OreOperator(S);
    OreOperator rhs = OreOperator(Z0t) + OreOperator(Z1t) * OreOperator::linear_factor(N, mu);
    rhs = rhs * OreOperator::linear_factor(N, lambda);
    if (lhs != rhs)
        throw Error("IdentityFailure", "factorization through (a - mu.b).(a - lambda.b) failed");
    return {Z0t, Z1t};
}

AbModule pushforward_module(const AbModule& E, const ChangeOfVariable& theta) {
    theta.validate();
    int k = E.rank(), N = E.order();
    int dim = k * N;
    AlphaBetaMaps maps = alpha_beta_matrices(E, theta);

    // The beta-power images of the basis vectors span the finite model
    // (b^n.E = beta^n.E); invert that base change once.
    QMatrix W(dim, dim);
    for (int s = 0; s < k; ++s) {
        std::vector<Rat> v = vec_to_model(E, E.basis_vec(s));
        for (int m = 0; m < N; ++m) {
            for (int t = 0; t < dim; ++t) W.at(t, midx(k, m, s)) = v[static_cast<size_t>(t)];
            if (m + 1 < N) v = maps.beta.apply(v);
        }
    }
    auto Winv = W.inverse();
    if (!Winv) throw Error("RebaseFailure", "beta-power images do not span the finite model");

    AbModule out(k, N);
    for (int j = 0; j < k; ++j) {
        std::vector<Rat> c = Winv->apply(maps.alpha.apply(vec_to_model(E, E.basis_vec(j))));
        for (int s = 0; s < k; ++s) {
            TruncSeries ser(N);
            for (int m = 0; m < N; ++m) ser.set(m, c[static_cast<size_t>(midx(k, m, s))]);
            out.set_action(s, j, ser);
        }
    }
    return out;
}

FrescoPresentation pushforward(const FrescoPresentation& pres, const ChangeOfVariable& theta) {
    theta.validate();
    pres.validate();
    int k = pres.rank();
    int N = pres.order;
    int guard = k + 2;
    if (N <= guard + k + 8) throw InsufficientOrder("pushforward needs order > 2k + 10");

    auto [E, phi] = module_from_presentation(pres);
    int dim = k * N;
    AlphaBetaMaps maps = alpha_beta_matrices(E, theta);

    // alpha-iterates of the generator.
    std::vector<std::vector<Rat>> it(static_cast<size_t>(k) + 1);
    it[0] = vec_to_model(E, phi);
    for (int j = 1; j <= k; ++j) it[static_cast<size_t>(j)] = maps.alpha.apply(it[static_cast<size_t>(j - 1)]);

    // Admissibility: the iterates must be a basis mod b.
    QMatrix B0(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) B0.at(i, j) = it[static_cast<size_t>(j)][static_cast<size_t>(i)];
    if (B0.rank() != k) throw NotAGenerator("alpha-iterates are dependent mod b");

    // Solve alpha^k.phi = sum_{j,m} T_{j,m}.beta^m.alpha^j.phi exactly; the
    // beta-power images of the lower iterates form a basis of the model.
    QMatrix W(dim, dim);
    for (int j = 0; j < k; ++j) {
        std::vector<Rat> v = it[static_cast<size_t>(j)];
        for (int m = 0; m < N; ++m) {
            for (int t = 0; t < dim; ++t) W.at(t, midx(k, m, j)) = v[static_cast<size_t>(t)];
            if (m + 1 < N) v = maps.beta.apply(v);
        }
    }
    auto sol = W.solve(it[static_cast<size_t>(k)]);
    if (!sol) throw NotAGenerator("annihilator solve is inconsistent at the working order");
    std::vector<TruncSeries> T(static_cast<size_t>(k), TruncSeries(N));
    for (int j = 0; j < k; ++j) {
        TruncSeries ser(N);
        for (int m = 0; m < N; ++m) ser.set(m, (*sol)[static_cast<size_t>(midx(k, m, j))]);
        T[static_cast<size_t>(j)] = ser;
    }

    int Nout = N - guard;
    std::vector<TruncSeries> coeffs(static_cast<size_t>(k) + 1, TruncSeries(Nout));
    for (int j = 0; j < k; ++j) coeffs[static_cast<size_t>(j)] = -T[static_cast<size_t>(j)].truncated(Nout);
    coeffs[static_cast<size_t>(k)] = TruncSeries::one(Nout);
    OreOperator Pnew(Nout, std::move(coeffs));

    auto [Enew, gen] = module_from_annihilator(Pnew);
    return present_fresco(Enew, gen).pres;
}

} // namespace abmod
