#include "abmod/classification.hpp"

#include "abmod/errors.hpp"

#include <algorithm>
#include <sstream>

namespace abmod {

FrescoPresentation make_E_gamma(const Rat& lambda1, int p1, int p2, const Rat& gamma, int N) {
    if (!(lambda1 > 2)) throw ValidationError("lambda1 must exceed 2");
    if (p1 < 2 || p2 < 1) throw ValidationError("need p1 >= 2 and p2 >= 1");
    FrescoPresentation pres;
    pres.lambda1 = lambda1;
    pres.p = {p1, p2};
    TruncSeries S1 = TruncSeries::one(N);
    S1.set(1, gamma);
    pres.S = {S1, TruncSeries::one(N)};
    pres.order = N;
    pres.validate();
    return pres;
}

std::optional<Rat> rank2_theme_param(const AbModule& E) {
    if (E.rank() != 2) throw WrongRank("rank-2 parameter needs a rank-2 module");
    PresentedFresco pf = present_fresco(E);
    int p = pf.pres.p[0];
    if (p == 0) return std::nullopt; // single class
    // Generator moves shift every coefficient of S except the b^p one.
    return pf.pres.S[0][p];
}

Rat extract_gamma(const FrescoPresentation& pres) {
    pres.validate();
    if (pres.rank() != 3) throw WrongRank("gamma extraction needs rank 3");
    int p1 = pres.p[0], p2 = pres.p[1];
    if (p1 < 2) throw ValidationError("gamma extraction needs p1 >= 2");
    if (p2 <= 1) throw NonUnique("for p2 <= 1 every class coincides with gamma = 0");
    const TruncSeries& S1 = pres.S[0];
    const TruncSeries& S2 = pres.S[1];
    if (pres.order <= p1 + p2) throw InsufficientOrder("order must exceed p1 + p2");
    if (S1[p1] != 0) throw NotSemisimple("F_2 is a rank-2 theme (b^{p1} coefficient of S1)");
    if (S2[p2] != 0) throw NotSemisimple("F_3/F_1 is a rank-2 theme (b^{p2} coefficient of S2)");

    // Basis change eps3 = e3 + V.e2 + Z.e1, eps2 = (a - l3 b).eps3,
    // eps1 = e1. Killing the e2-tail of eps2 fixes V up to its resonant
    // term; the remaining freedom cannot move the b coefficient of the
    // final unit, which is gamma.
    int N = pres.order;
    TruncSeries V(N);
    for (int n = 1; n < N; ++n) {
        if (n == p2) continue; // resonant term, set to zero
        V.set(n - 1, -S2[n] / Rat(n - p2));
    }
    // Realizability of the e1-tail elimination: the resonant index of the
    // Z-equation must come out right, or a sub-theme is hiding.
    TruncSeries VS1 = V * S1;
    if (p1 + p2 < N && VS1[p1 + p2 - 1] != -S1[p1 + p2] / Rat(p2))
        throw NotSemisimple("rank-3 module has a hidden sub-theme");
    return S1[1] + Rat(1 - p1) * V[0];
}

Rat extract_gamma(const AbModule& E) {
    if (E.rank() != 3) throw WrongRank("gamma extraction needs rank 3");
    return extract_gamma(present_fresco(E).pres);
}

SemisimplicityWitness semisimplicity_witness(const Rat& lambda1, int p1, int p2,
                                             const TruncSeries& S1, const TruncSeries& S2) {
    (void)lambda1;
    if (S1[0] != 1 || S2[0] != 1) throw ValidationError("S1 and S2 must have constant term 1");
    if (p1 < 1 || p2 < 1) throw ValidationError("p1 and p2 must be positive");
    SemisimplicityWitness w;
    w.alpha_coeff = S1[p1];
    w.beta_coeff = S2[p2];
    w.applicable = (w.alpha_coeff == 0 && w.beta_coeff == 0);
    if (!w.applicable) return w;
    TruncSeries U = solve_linear_b_ode(Rat(p1), Rat(-p1) * S1, Rat(0));
    w.gamma_coeff = (U * S2)[p1 + p2];
    w.semisimple = (w.gamma_coeff == 0);
    return w;
}

std::optional<Rat> find_L(const AbModule& E) {
    int k = E.rank();
    if (k < 2 || k > 4) throw WrongRank("socle search is implemented for ranks 2..4");
    JordanHolderData jh = principal_jh(E);
    const std::vector<Rat>& l = jh.exponents;
    Rat mu_delta = l.back() + (k - 1);
    int M = static_cast<int>(floor_long(mu_delta - l.front())) + 1;
    if (M > E.order()) throw InsufficientOrder("order below the kernel model bound");
    int delta = kernel_dim(E, mu_delta, M).dim;
    int d = k - delta + 1;
    if (d == 1) return std::nullopt; // semi-simple

    std::vector<Rat> candidates;
    for (int j = 0; j < k; ++j) {
        Rat mu = l[static_cast<size_t>(j)] + j;
        if (std::find(candidates.begin(), candidates.end(), mu) == candidates.end())
            candidates.push_back(mu);
    }
    std::sort(candidates.begin(), candidates.end());

    for (const Rat& mu : candidates) {
        KernelResult kern = kernel_dim(E, mu, E.order());
        for (const ModuleVec& x : kern.basis) {
            bool unitpart = false;
            for (const auto& s : x) unitpart |= (s[0] != 0);
            if (!unitpart) continue;
            Rank1Quotient q;
            try {
                q = quotient_by_normal_rank1(E, x);
            } catch (const Error&) {
                continue;
            }
            int dq;
            if (k - 1 == 1) {
                dq = 1;
            } else {
                try {
                    FrescoPresentation sub = present_fresco(q.quotient).pres;
                    dq = delta_and_depth(sub).second;
                } catch (const Error&) {
                    continue;
                }
            }
            if (dq == d - 1) return mu;
        }
    }
    throw SearchExhausted("no eigen-line drops the ss-depth by one");
}

EmpiricalL empirical_L(const Rat& lambda1, int p1, int p2, int N) {
    if (p1 < 2 || p2 < 2) throw ValidationError("the affine law needs p1, p2 >= 2");
    ChangeOfVariable unit2{{Rat(1), Rat(1)}};
    ChangeOfVariable unit2_rho2{{Rat(1), Rat(2)}};

    auto push_gamma = [&](const Rat& g, const ChangeOfVariable& th) {
        return extract_gamma(pushforward(make_E_gamma(lambda1, p1, p2, g, N), th));
    };

    EmpiricalL out;
    out.L = push_gamma(Rat(0), unit2);
    out.gamma_independent = (push_gamma(Rat(1), unit2) - 1 == out.L) &&
                            (push_gamma(Rat(-2), unit2) + 2 == out.L);
    out.rho_linear = (push_gamma(Rat(0), unit2_rho2) == 2 * out.L);

    Rat l2 = lambda1 + p1 - 1, l3 = l2 + p2 - 1;
    Rat sum_form = lambda1 * lambda1 + lambda1 + Rat((p1 - 1) * (p1 - p2 + 3));
    Rat diff_form = lambda1 * lambda1 + lambda1 - Rat((p1 - 1) * (p1 - p2 + 3));
    Rat l2_form = l2 * l2 - Rat(2 * p1 - 3) * l2 + Rat((p1 - 1) * (p2 - 5));
    Rat deriv_form = l2 * l2 - l2 + Rat(p1 - 1) * (l2 + l3 - 4);
    Rat gap_form = Rat(-(p1 - 1) * (p1 + p2 - 1));
    out.formula_matches = {
        {"lambda1^2 + lambda1 + (p1-1)(p1-p2+3)", out.L == sum_form},
        {"lambda1^2 + lambda1 - (p1-1)(p1-p2+3)", out.L == diff_form},
        {"lambda2^2 - (2p1-3)lambda2 + (p1-1)(p2-5)", out.L == l2_form},
        {"lambda2^2 - lambda2 + (p1-1)(lambda2+lambda3-4)", out.L == deriv_form},
        {"-(p1-1)(p1+p2-1)", out.L == gap_form},
    };
    return out;
}

Rat cross_ratio(const AbModule& E, const JordanHolderData& jh, int j1, int j2, int j3) {
    int k = E.rank();
    if (k < 5) throw WrongRank("cross ratio needs rank >= 5");
    if (!(3 <= j1 && j1 < j2 && j2 < j3 && j3 <= k))
        throw ValidationError("need 3 <= j1 < j2 < j3 <= rank");
    std::vector<int> p;
    for (size_t t = 1; t < jh.exponents.size(); ++t) {
        Rat gap = jh.exponents[t] - jh.exponents[t - 1] + 1;
        p.push_back(static_cast<int>(floor_long(gap)));
    }
    for (int j : {j1, j2, j3})
        if (p[static_cast<size_t>(j - 3)] < 2 || p[static_cast<size_t>(j - 2)] < 2)
            throw ValidationError("cross ratio needs the bracketing gaps >= 2");

    Rat g1 = extract_gamma(jh_subquotient(E, jh, j1 - 3, j1));
    Rat g2 = extract_gamma(jh_subquotient(E, jh, j2 - 3, j2));
    Rat g3 = extract_gamma(jh_subquotient(E, jh, j3 - 3, j3));
    if (g3 == g1) throw Degenerate("gamma_3 equals gamma_1");
    return (g3 - g2) / (g3 - g1);
}

Rat cross_ratio(const AbModule& E, int j1, int j2, int j3) {
    return cross_ratio(E, principal_jh(E), j1, j2, j3);
}

InvariantReport invariant_report(const FrescoPresentation& pres) {
    pres.validate();
    InvariantReport rep;
    rep.rank = pres.rank();
    rep.lambda1 = pres.lambda1;
    rep.p = pres.p;
    int k = rep.rank;

    auto [E, gen] = module_from_presentation(pres);
    (void)gen;
    SaturationResult sat = saturate_and_bernstein(E, k + 2);
    rep.bernstein_roots = sat.bernstein.rational_roots();

    std::vector<Rat> expected;
    std::vector<Rat> l = pres.exponents();
    for (int j = 1; j <= k; ++j) expected.push_back(-(l[static_cast<size_t>(j - 1)] + j - k));
    std::sort(expected.begin(), expected.end());
    rep.flags.push_back(std::string("bernstein_matches_invariant_product=") +
                        (expected == rep.bernstein_roots ? "yes" : "no"));

    auto dd = delta_and_depth(pres);
    rep.delta = dd.first;
    rep.d = dd.second;

    JordanHolderData jh = principal_jh(E);
    for (int j = 1; j <= k - 1; ++j) {
        try {
            rep.z_params.push_back(rank2_theme_param(jh_subquotient(E, jh, j - 1, j + 1)));
        } catch (const Error&) {
            rep.z_params.push_back(std::nullopt);
        }
    }
    for (int j = 3; j <= k; ++j) {
        try {
            rep.gamma_params.push_back(extract_gamma(jh_subquotient(E, jh, j - 3, j)));
        } catch (const Error&) {
            rep.gamma_params.push_back(std::nullopt);
        }
    }
    if (k >= 5) {
        for (int j1 = 3; j1 <= k && !rep.cross_ratio_value; ++j1)
            for (int j2 = j1 + 1; j2 <= k && !rep.cross_ratio_value; ++j2)
                for (int j3 = j2 + 1; j3 <= k && !rep.cross_ratio_value; ++j3) {
                    try {
                        rep.cross_ratio_value = cross_ratio(E, jh, j1, j2, j3);
                    } catch (const Error&) {
                    }
                }
    }
    return rep;
}

} // namespace abmod
