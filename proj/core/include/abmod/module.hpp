#ifndef ABMOD_MODULE_HPP
#define ABMOD_MODULE_HPP

#include "abmod/linalg.hpp"
#include "abmod/ore.hpp"
#include "abmod/polynomial.hpp"
#include "abmod/series.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace abmod {

/// Element of a rank-k module: k coordinate series over the working basis.
using ModuleVec = std::vector<TruncSeries>;

/// Fundamental invariants lambda_1, p_1..p_{k-1} plus the unit series
/// S_1..S_{k-1} of a principal presentation
///   (a - l_1 b).S_1^{-1}.(a - l_2 b) ... S_{k-1}^{-1}.(a - l_k b),
/// with l_{j+1} = l_j + p_j - 1.
struct FrescoPresentation {
    Rat lambda1;
    std::vector<int> p;
    std::vector<TruncSeries> S;
    int order = 0;

    int rank() const { return static_cast<int>(p.size()) + 1; }
    std::vector<Rat> exponents() const;
    /// Throws ValidationError when the invariants are malformed
    /// (S_j(0) != 1, negative p_j, mismatched lengths).
    void validate() const;
};

/// Free rank-k module over truncated series with an a-action obeying
/// a(S.v) = S.a(v) + b^2.S'.v. The action matrix stores a(e_j) in column j;
/// b acts coordinatewise.
class AbModule {
public:
    AbModule() = default;
    AbModule(int rank, int order);
    AbModule(int rank, int order, std::vector<TruncSeries> action_col_major);

    int rank() const { return rank_; }
    int order() const { return order_; }

    const TruncSeries& action(int i, int j) const { return action_[static_cast<size_t>(j) * rank_ + i]; }
    void set_action(int i, int j, TruncSeries s);

    ModuleVec zero_vec() const { return ModuleVec(static_cast<size_t>(rank_), TruncSeries(order_)); }
    ModuleVec basis_vec(int j) const;

    ModuleVec apply_a(const ModuleVec& v) const;
    ModuleVec apply_b(const ModuleVec& v) const;

    bool has_simple_pole() const;
    AbModule truncated(int order) const;

private:
    int rank_ = 0, order_ = 0;
    std::vector<TruncSeries> action_;
};

ModuleVec operator+(const ModuleVec& x, const ModuleVec& y);
ModuleVec operator-(const ModuleVec& x, const ModuleVec& y);
ModuleVec operator*(const TruncSeries& s, const ModuleVec& x);
ModuleVec operator*(const Rat& c, const ModuleVec& x);
bool vec_is_zero(const ModuleVec& v);
bool vec_eq(const ModuleVec& x, const ModuleVec& y);

/// Module with basis relations a(e_j) = l_j.b.e_j + S_{j-1}.e_{j-1}
/// (S_0 := 0) together with its canonical generator e_k.
std::pair<AbModule, ModuleVec> module_from_presentation(const FrescoPresentation& pres);

/// Direct sum of `copies` blocks, each of rank nlog+1 with
/// a(e_0) = l.b.e_0 and a(e_j) = l.b.e_j + b.e_{j-1}.
AbModule module_xi(const Rat& lambda, int nlog, int copies, int order);

/// Quotient by a left ideal generated by a monic operator: companion module
/// on the basis phi, a.phi, ..., a^{k-1}.phi. Returns module and generator.
std::pair<AbModule, ModuleVec> module_from_annihilator(const OreOperator& P);

/// P acting on v through the module structure.
ModuleVec apply_operator(const AbModule& E, const OreOperator& P, const ModuleVec& v);

/// Monic degree-k annihilator of phi; requires phi, a.phi, ..., a^{k-1}.phi
/// to be a basis mod b (else NotAGenerator).
OreOperator annihilator_of_generator(const AbModule& E, const ModuleVec& phi);

/// Exact kernel of (a - mu.b) on the finite model E/b^M.E.
struct KernelResult {
    int dim = 0;
    std::vector<ModuleVec> basis; // coordinates truncated at order M
};
KernelResult kernel_dim(const AbModule& E, const Rat& mu, int M);

/// delta = dim Ker(a - mu.b) for mu = l_k + k - 1 on the model of size
/// M = floor(mu - l_1) + 1, and d = k - delta + 1.
std::pair<int, int> delta_and_depth(const FrescoPresentation& pres);

/// Quotient of E by the normal a-stable line spanned by x.
/// x must not lie in b.E (NotNormal) and a.x must stay on the line (NotStable).
struct Rank1Quotient {
    AbModule quotient;
    ModuleVec line;   // x, at the parent's order
    int pivot = 0;    // coordinate eliminated in the quotient basis
    TruncSeries eigenvalue_series; // a.x = t.x
    TruncSeries pivot_inv_;        // 1 / x_pivot
    /// Coordinates of [v] in the quotient basis.
    ModuleVec project(const ModuleVec& v) const;
    /// A section of project: quotient coordinates back to parent ones
    /// (pivot coordinate zero).
    ModuleVec lift(const ModuleVec& v) const;
};
Rank1Quotient quotient_by_normal_rank1(const AbModule& E, const ModuleVec& x);

struct JordanHolderData {
    /// flag_bases[j] spans F_{j+1}: j+1 vectors in the ambient basis.
    std::vector<std::vector<ModuleVec>> flag_bases;
    std::vector<Rat> exponents; // l_1..l_k, principal order
};

/// Principal Jordan-Hoelder flag of a [lambda]-primitive fresco. Exponent
/// candidates come from the Bernstein roots computed by saturation.
JordanHolderData principal_jh(const AbModule& E);

/// Subquotient F_j/F_i of the principal flag as a rank j-i module.
AbModule jh_subquotient(const AbModule& E, const JordanHolderData& jh, int i, int j);
AbModule jh_subquotient(const AbModule& E, int i, int j);

/// Saturation by b^{-1}a inside a b^{-guard} window, the characteristic
/// polynomial of -b^{-1}a on Esharp/b.Esharp (the Bernstein polynomial for
/// frescos) and its minimal polynomial.
struct SaturationResult {
    AbModule sharp;
    QPoly bernstein;
    QPoly minimal;
    int depth = 0; // how many guard digits the saturation consumed
};
SaturationResult saturate_and_bernstein(const AbModule& E, int guard);

/// For a simple-pole module whose leading action matrix is similar to
/// l.Id + N (N the regular nilpotent lowering shift), returns the base
/// change B(b) with a(new basis) = b.(l.Id + N) exactly; column j of B holds
/// the coordinates of the new basis vector j. Throws WrongShape.
std::vector<TruncSeries> simple_pole_normalize(const AbModule& E, const Rat& lambda);

/// Largest nu with v in Phi_nu, Phi_{k.n+h} = a^h.b^n.E + b^{n+1}.E, for v
/// expressed in a Jordan-Hoelder adapted basis. nullopt encodes +infinity.
std::optional<long> phi_weight(const AbModule& E, const ModuleVec& v);

/// Searches for an invertible series matrix intertwining the two actions.
/// The linear system is solved exactly; the invertible-constant-term
/// question is decided on the projected solution space (full grid when its
/// dimension is small, seeded sampling above that).
struct IsoResult {
    bool isomorphic = false;
    std::optional<std::vector<TruncSeries>> witness; // k*k column-major
};
IsoResult modules_isomorphic(const AbModule& E, const AbModule& F);

/// Principal presentation of a monogenic module: invariants, unit series and
/// the adapted generator (a unit series multiple of the input generator).
struct PresentedFresco {
    FrescoPresentation pres;
    ModuleVec generator;
};
PresentedFresco present_fresco(const AbModule& E, const ModuleVec& phi);
/// Same, searching for a generator among basis vectors and seeded
/// combinations (NotAFresco when none works).
PresentedFresco present_fresco(const AbModule& E);

/// Generator search helper: first basis vector (then seeded combinations)
/// whose a-iterates form a basis mod b.
std::optional<ModuleVec> find_generator(const AbModule& E);

} // namespace abmod

#endif
