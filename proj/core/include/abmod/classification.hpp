#ifndef ABMOD_CLASSIFICATION_HPP
#define ABMOD_CLASSIFICATION_HPP

#include "abmod/change_of_variable.hpp"
#include "abmod/module.hpp"

#include <optional>
#include <string>

namespace abmod {

/// Rank-3 family (a - l1 b).(1 + gamma.b)^{-1}.(a - l2 b).(a - l3 b) with
/// S_1 = 1 + gamma.b, S_2 = 1. Requires lambda1 > 2 and p1 >= 2.
FrescoPresentation make_E_gamma(const Rat& lambda1, int p1, int p2, const Rat& gamma, int N);

/// Principal parameter of a rank-2 fresco: the b^p coefficient of the
/// presentation series, the one coefficient no generator change can move.
/// nullopt marks the p = 0 case, where there is a single class.
std::optional<Rat> rank2_theme_param(const AbModule& E);

/// Principal parameter of a rank-3 semi-simple fresco with p1, p2 >= 2,
/// extracted by reducing a principal presentation to the normal form
/// (a - l3 b).eps3 = eps2, (a - l2 b).eps2 = (1 + gamma.b).eps1.
/// Throws NotSemisimple when a hidden sub-theme obstructs the reduction and
/// NonUnique when p2 <= 1.
Rat extract_gamma(const FrescoPresentation& pres);
Rat extract_gamma(const AbModule& E);

/// The b^{p1} / b^{p2} / b^{p1+p2} coefficient test for rank-3 presentations
/// with vanishing alpha and beta.
struct SemisimplicityWitness {
    Rat alpha_coeff;
    Rat beta_coeff;
    Rat gamma_coeff;
    bool applicable = false; // alpha = beta = 0
    bool semisimple = false; // applicable and gamma = 0
};
SemisimplicityWitness semisimplicity_witness(const Rat& lambda1, int p1, int p2,
                                             const TruncSeries& S1, const TruncSeries& S2);

/// Exponent of the unique normal rank-1 submodule L with d(E/L) = d(E) - 1,
/// or nullopt when E is semi-simple. Candidates are the eigen-kernels at the
/// exponents l_j + j - 1; SearchExhausted when none qualifies.
std::optional<Rat> find_L(const AbModule& E);

/// Measures the constant in the affine transformation law
/// gamma' = gamma/theta_1 + (theta_2/theta_1^2).L by pushing E(0) through
/// a + a^2, and cross-checks gamma-independence, rho-linearity and the
/// candidate closed forms.
struct EmpiricalL {
    Rat L;
    bool gamma_independent = false;
    bool rho_linear = false;
    std::vector<std::pair<std::string, bool>> formula_matches;
};
EmpiricalL empirical_L(const Rat& lambda1, int p1, int p2, int N);

/// (gamma_3 - gamma_2) / (gamma_3 - gamma_1) over the rank-3 subquotients
/// F_{j_i}/F_{j_i - 3} of a semi-simple fresco of rank >= 5 (1-based j_i).
Rat cross_ratio(const AbModule& E, int j1, int j2, int j3);
Rat cross_ratio(const AbModule& E, const JordanHolderData& jh, int j1, int j2, int j3);

/// Everything the classification layer can say about one fresco.
struct InvariantReport {
    int rank = 0;
    Rat lambda1;
    std::vector<int> p;
    std::vector<Rat> bernstein_roots;
    int delta = 0;
    int d = 0;
    std::vector<std::optional<Rat>> z_params;     // entry j-1: F_{j+1}/F_{j-1}
    std::vector<std::optional<Rat>> gamma_params; // entry j-3: F_j/F_{j-3}
    std::optional<Rat> cross_ratio_value;
    std::vector<std::string> flags;
};
InvariantReport invariant_report(const FrescoPresentation& pres);

} // namespace abmod

#endif
