#include "abmod/verify.hpp"

#include "abmod/change_of_variable.hpp"
#include "abmod/classification.hpp"
#include "abmod/errors.hpp"
#include "abmod/module.hpp"
#include "abmod/ore.hpp"

#include <algorithm>
#include <sstream>

namespace abmod {

namespace {

struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1)); }
    Rat rat(long maxnum = 5, long maxden = 3) {
        long num = range(-maxnum, maxnum);
        long den = range(1, maxden);
        return rat_of(num, den);
    }
    Rat nonzero_rat(long maxnum = 5, long maxden = 3) {
        Rat q = rat(maxnum, maxden);
        return q == 0 ? rat_of(1, 1) : q;
    }
    TruncSeries unit_series(int order, int nonzero_terms = 4) {
        TruncSeries s = TruncSeries::one(order);
        for (int t = 0; t < nonzero_terms; ++t)
            s.set(static_cast<int>(range(1, order - 1)), rat(4, 3));
        return s;
    }
};

void push_case(VerifySummary& sum, const std::string& id, bool pass, const std::string& detail) {
    sum.cases.push_back({id, pass, detail});
}

void suite_algebra(VerifySummary& sum, Rng& rng) {
    const int order = 24;
    for (int t = 0; t < 8; ++t) {
        TruncSeries S = rng.unit_series(order);
        OreOperator a = OreOperator::a_power(order, 1);
        OreOperator lhs = a * OreOperator(S) - OreOperator(S) * a;
        OreOperator rhs(S.b2_derivative());
        std::ostringstream os;
        os << "algebra/commutator-" << t;
        push_case(sum, os.str(), lhs == rhs, "a.S - S.a = b^2.S'");
    }
    for (int t = 0; t < 8; ++t) {
        std::vector<Rat> theta{rng.nonzero_rat(), rng.rat(), rng.rat()};
        OreOperator alpha = OreOperator::from_a_poly(order, theta);
        OreOperator beta = OreOperator::b_theta_prime(order, theta);
        bool ok = (alpha * beta - beta * alpha) == (beta * beta);
        std::ostringstream os;
        os << "algebra/alpha-beta-" << t;
        push_case(sum, os.str(), ok, "alpha.beta - beta.alpha = beta^2");
    }
    for (int t = 0; t < 8; ++t) {
        Rat l = rng.rat(), mu = rng.rat();
        OreOperator P = op_from_factors(order, {l, mu}, {rng.unit_series(order)});
        std::vector<TruncSeries> qc;
        for (int d = 0; d <= 3; ++d) qc.push_back(rng.unit_series(order));
        OreOperator Q(order, std::move(qc));
        auto [T, R] = op_left_divmod(Q, P);
        bool ok = (T * P + R) == Q && R.a_degree() < P.a_degree();
        std::ostringstream os;
        os << "algebra/divmod-" << t;
        push_case(sum, os.str(), ok, "Q = T.P + R with deg R < deg P");
    }
}

void suite_commuting(VerifySummary& sum, Rng& rng) {
    const int order = 24;
    for (int t = 0; t < 10; ++t) {
        Rat l1 = rng.rat(6, 2) + 4;
        int p = static_cast<int>(rng.range(1, 5));
        TruncSeries S = rng.unit_series(order);
        S.set(p, Rat(0));
        bool ok = false;
        std::string detail = "left and right rewrites agree";
        try {
            CommutingRewrite cr = commuting_rewrite(l1, p, S, rng.rat(2, 1));
            ok = (cr.left == cr.right);
        } catch (const Error& e) {
            detail = e.what();
        }
        std::ostringstream os;
        os << "commuting/identity-" << t;
        push_case(sum, os.str(), ok, detail);
    }
    {
        TruncSeries S = TruncSeries::one(24);
        S.set(2, Rat(1));
        bool threw = false;
        try {
            commuting_rewrite(rat_of(7, 2), 2, S);
        } catch (const Obstruction&) {
            threw = true;
        }
        push_case(sum, "commuting/obstruction", threw, "nonzero b^p coefficient rejected");
    }
}

void suite_bernstein(VerifySummary& sum, Rng& rng) {
    const int order = 32;
    for (int t = 0; t < 4; ++t) {
        int k = static_cast<int>(rng.range(1, 4));
        FrescoPresentation pres;
        pres.lambda1 = rng.rat(4, 2) + k + 1;
        pres.order = order;
        for (int j = 0; j + 1 < k; ++j) {
            pres.p.push_back(static_cast<int>(rng.range(1, 3)));
            pres.S.push_back(rng.unit_series(order, 2));
        }
        auto [E, gen] = module_from_presentation(pres);
        (void)gen;
        SaturationResult sat = saturate_and_bernstein(E, k + 3);
        std::vector<Rat> expected;
        std::vector<Rat> l = pres.exponents();
        for (int j = 1; j <= k; ++j) expected.push_back(-(l[static_cast<size_t>(j - 1)] + j - k));
        std::sort(expected.begin(), expected.end());
        bool ok = sat.bernstein.rational_roots() == expected;
        std::ostringstream os;
        os << "bernstein/product-" << t;
        push_case(sum, os.str(), ok, "roots match the fundamental invariants");
    }
    {
        AbModule xi = module_xi(rat_of(1, 2), 1, 1, order);
        SaturationResult sat = saturate_and_bernstein(xi, 4);
        QPoly sq = QPoly::from_roots({rat_of(-1, 2), rat_of(-1, 2)});
        push_case(sum, "bernstein/xi-minimal", sat.bernstein == sq && sat.minimal == sq,
                  "characteristic and minimal polynomials of a log block");
    }
}

void suite_pushforward(VerifySummary& sum, Rng& rng) {
    const int order = 28;
    for (int t = 0; t < 3; ++t) {
        Rat l = rng.rat(8, 3) + 1;
        FrescoPresentation pres;
        pres.lambda1 = l;
        pres.order = order;
        ChangeOfVariable theta{{rng.nonzero_rat(3, 2), rng.rat(2, 1), rng.rat(2, 1)}};
        FrescoPresentation out = pushforward(pres, theta);
        std::ostringstream os;
        os << "pushforward/rank1-" << t;
        push_case(sum, os.str(), out.lambda1 == l && out.rank() == 1,
                  "rank-1 class is invariant");
    }
    {
        FrescoPresentation pres = make_E_gamma(rat_of(7, 2), 2, 2, Rat(1), order);
        ChangeOfVariable theta{{Rat(1), Rat(1)}};
        ChangeOfVariable eta{{Rat(2)}};
        FrescoPresentation one = pushforward(pushforward(pres, theta), eta);
        FrescoPresentation two = pushforward(pres, compose(eta, theta));
        bool ok = extract_gamma(one) == extract_gamma(two);
        push_case(sum, "pushforward/composition", ok,
                  "composite change matches iterated pushforward");
    }
}

void suite_rank2(VerifySummary& sum, Rng&) {
    const int order = 26;
    int t = 0;
    for (const Rat& z : {Rat(0), Rat(1), rat_of(-2, 3)}) {
        FrescoPresentation pres;
        pres.lambda1 = rat_of(7, 2);
        pres.p = {2};
        TruncSeries S = TruncSeries::one(order);
        S.set(2, z);
        pres.S = {S};
        pres.order = order;
        ChangeOfVariable scale{{Rat(2)}};
        auto [E, gen] = module_from_presentation(pushforward(pres, scale));
        (void)gen;
        auto param = rank2_theme_param(E);
        bool ok = param && *param == 4 * z;
        std::ostringstream os;
        os << "rank2/scaling-" << t++;
        push_case(sum, os.str(), ok, "parameter scales by theta_1^p");
    }
    {
        FrescoPresentation pres;
        pres.lambda1 = rat_of(7, 2);
        pres.p = {2};
        TruncSeries S = TruncSeries::one(order);
        S.set(2, Rat(1));
        pres.S = {S};
        pres.order = order;
        ChangeOfVariable unitary{{Rat(1), Rat(0), Rat(1)}};
        auto [E, gen] = module_from_presentation(pushforward(pres, unitary));
        (void)gen;
        auto param = rank2_theme_param(E);
        push_case(sum, "rank2/unitary", param && *param == 1,
                  "unitary changes leave the parameter fixed");
    }
}

void suite_rank3(VerifySummary& sum, Rng&) {
    const int order = 36;
    EmpiricalL e = empirical_L(rat_of(7, 2), 2, 2, order);
    push_case(sum, "rank3/gamma-independent", e.gamma_independent,
              "affine shift is independent of gamma");
    push_case(sum, "rank3/rho-linear", e.rho_linear, "affine shift is linear in rho");
    for (const auto& [name, match] : e.formula_matches) {
        push_case(sum, "rank3/formula[" + name + "]", true,
                  std::string(match ? "matches" : "does not match") + " measured L = " +
                      rat_to_string(e.L));
    }
    {
        FrescoPresentation pres = make_E_gamma(rat_of(7, 2), 2, 2, rat_of(1, 2), order);
        ChangeOfVariable tangent{{Rat(1), Rat(0), Rat(1)}};
        bool ok = extract_gamma(pushforward(pres, tangent)) == rat_of(1, 2);
        push_case(sum, "rank3/tangent-identity", ok,
                  "changes tangent to identity at order 3 fix gamma");
    }
}

void suite_crossratio(VerifySummary& sum, Rng&) {
    const int order = 40;
    FrescoPresentation pres;
    pres.lambda1 = Rat(7);
    pres.p = {2, 2, 2, 2};
    pres.order = order;
    for (int j = 0; j < 4; ++j) pres.S.push_back(TruncSeries::one(order));
    pres.S[0].set(1, Rat(1));
    pres.S[1].set(1, Rat(-1));
    pres.S[2].set(1, rat_of(1, 2));
    pres.S[3].set(1, Rat(2));
    auto [E, gen] = module_from_presentation(pres);
    (void)gen;
    Rat base = cross_ratio(E, 3, 4, 5);
    push_case(sum, "crossratio/defined", true, "value " + rat_to_string(base));
    ChangeOfVariable theta{{Rat(1), Rat(1)}};
    auto [F, gen2] = module_from_presentation(pushforward(pres, theta));
    (void)gen2;
    push_case(sum, "crossratio/invariant", cross_ratio(F, 3, 4, 5) == base,
              "cross ratio survives a + a^2");
}

void suite_example35(VerifySummary& sum, Rng&) {
    const int order = 36;
    Rat l1 = rat_of(7, 2);
    int p1 = 2, p2 = 3;
    Rat l2 = l1 + p1 - 1;
    int t = 0;
    for (const Rat& z : {Rat(1), rat_of(1, 2), Rat(-2)}) {
        FrescoPresentation pres;
        pres.lambda1 = l1;
        pres.p = {p1, p2};
        TruncSeries S1 = TruncSeries::one(order);
        S1.set(p1 + p2, Rat(1));
        TruncSeries S2 = TruncSeries::one(order);
        S2.set(p2, z);
        pres.S = {S1, S2};
        pres.order = order;
        auto [E, gen] = module_from_presentation(pres);
        (void)gen;
        auto mu = find_L(E);
        std::ostringstream os;
        os << "example35/socle-z" << t++;
        push_case(sum, os.str(), mu && *mu == l2 + 1,
                  "socle exponent jumps to lambda_2 + 1 for z != 0");
    }
    {
        FrescoPresentation pres;
        pres.lambda1 = l1;
        pres.p = {p1, p2};
        TruncSeries S1 = TruncSeries::one(order);
        S1.set(p1 + p2, Rat(1));
        pres.S = {S1, TruncSeries::one(order)};
        pres.order = order;
        auto [E, gen] = module_from_presentation(pres);
        (void)gen;
        auto mu = find_L(E);
        push_case(sum, "example35/socle-z0", mu && *mu == l1,
                  "socle exponent is lambda_1 at z = 0");
        SemisimplicityWitness w =
            semisimplicity_witness(l1, p1, p2, pres.S[0], pres.S[1]);
        push_case(sum, "example35/witness", w.applicable && w.gamma_coeff == rat_of(-p1, p2),
                  "gamma = -p1/p2");
    }
}

} // namespace

int VerifySummary::passed() const {
    int n = 0;
    for (const auto& c : cases) n += c.pass ? 1 : 0;
    return n;
}

int VerifySummary::failed() const { return static_cast<int>(cases.size()) - passed(); }

std::vector<std::string> verify_suite_names() {
    return {"algebra", "commuting", "bernstein", "pushforward",
            "rank2",   "rank3",     "crossratio", "example35", "all"};
}

VerifySummary run_verify_suite(const std::string& name, uint64_t seed) {
    VerifySummary sum;
    sum.suite = name;
    Rng rng(seed);
    bool known = false;
    auto want = [&](const char* suite) {
        bool w = (name == suite || name == "all");
        known |= (name == suite);
        return w;
    };
    if (want("algebra")) suite_algebra(sum, rng);
    if (want("commuting")) suite_commuting(sum, rng);
    if (want("bernstein")) suite_bernstein(sum, rng);
    if (want("pushforward")) suite_pushforward(sum, rng);
    if (want("rank2")) suite_rank2(sum, rng);
    if (want("rank3")) suite_rank3(sum, rng);
    if (want("crossratio")) suite_crossratio(sum, rng);
    if (want("example35")) suite_example35(sum, rng);
    if (!known && name != "all") throw ValidationError("unknown suite \"" + name + "\"");
    std::sort(sum.cases.begin(), sum.cases.end(),
              [](const VerifyCase& a, const VerifyCase& b) { return a.id < b.id; });
    return sum;
}

} // namespace abmod
