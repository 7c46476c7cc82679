#include "abmod/module.hpp"

#include "abmod/errors.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace abmod {

namespace {

// Deterministic tie-break generator for candidate searches.
struct SeededRng {
    explicit SeededRng(uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    // Small nonzero rational in [-5,5] with denominator in [1,3].
    Rat small_rat() {
        long num = static_cast<long>(next() % 11) - 5;
        long den = static_cast<long>(next() % 3) + 1;
        if (num == 0) num = 1;
        return rat_of(num, den);
    }
    uint64_t state;
};

int model_index(int k, int level, int coord) { return level * k + coord; }

} // namespace

std::vector<Rat> FrescoPresentation::exponents() const {
    std::vector<Rat> l{lambda1};
    for (int pj : p) l.push_back(l.back() + pj - 1);
    return l;
}

void FrescoPresentation::validate() const {
    if (order <= 0) throw ValidationError("presentation order must be positive");
    if (S.size() != p.size())
        throw ValidationError("presentation needs exactly one unit series per gap");
    for (int pj : p)
        if (pj < 0) throw ValidationError("gaps p_j must be non-negative");
    for (const auto& s : S)
        if (s[0] != 1) throw ValidationError("presentation series must have constant term 1");
}

AbModule::AbModule(int rank, int order)
    : rank_(rank), order_(order),
      action_(static_cast<size_t>(rank) * rank, TruncSeries(order)) {}

AbModule::AbModule(int rank, int order, std::vector<TruncSeries> action_col_major)
    : rank_(rank), order_(order), action_(std::move(action_col_major)) {
    assert(action_.size() == static_cast<size_t>(rank_) * rank_);
    for (auto& s : action_) s = s.truncated(order_);
}

void AbModule::set_action(int i, int j, TruncSeries s) {
    action_[static_cast<size_t>(j) * rank_ + i] = s.truncated(order_);
}

ModuleVec AbModule::basis_vec(int j) const {
    ModuleVec v = zero_vec();
    v[static_cast<size_t>(j)] = TruncSeries::one(order_);
    return v;
}

ModuleVec AbModule::apply_a(const ModuleVec& v) const {
    ModuleVec r = zero_vec();
    for (int j = 0; j < rank_; ++j) {
        if (v[static_cast<size_t>(j)].is_zero()) continue;
        for (int i = 0; i < rank_; ++i) {
            if (action(i, j).is_zero()) continue;
            r[static_cast<size_t>(i)] += action(i, j) * v[static_cast<size_t>(j)];
        }
    }
    for (int i = 0; i < rank_; ++i) r[static_cast<size_t>(i)] += v[static_cast<size_t>(i)].b2_derivative();
    return r;
}

ModuleVec AbModule::apply_b(const ModuleVec& v) const {
    ModuleVec r = v;
    for (auto& s : r) s = s.shifted(1);
    return r;
}

bool AbModule::has_simple_pole() const {
    return std::all_of(action_.begin(), action_.end(),
                       [](const TruncSeries& s) { return s[0] == 0; });
}

AbModule AbModule::truncated(int order) const {
    std::vector<TruncSeries> a;
    a.reserve(action_.size());
    for (const auto& s : action_) a.push_back(s.truncated(order));
    return AbModule(rank_, order, std::move(a));
}

ModuleVec operator+(const ModuleVec& x, const ModuleVec& y) {
    assert(x.size() == y.size());
    ModuleVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

ModuleVec operator-(const ModuleVec& x, const ModuleVec& y) {
    assert(x.size() == y.size());
    ModuleVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

ModuleVec operator*(const TruncSeries& s, const ModuleVec& x) {
    ModuleVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = s * x[i];
    return r;
}

ModuleVec operator*(const Rat& c, const ModuleVec& x) {
    ModuleVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
    return r;
}

bool vec_is_zero(const ModuleVec& v) {
    return std::all_of(v.begin(), v.end(), [](const TruncSeries& s) { return s.is_zero(); });
}

bool vec_eq(const ModuleVec& x, const ModuleVec& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) return false;
    return true;
}

std::pair<AbModule, ModuleVec> module_from_presentation(const FrescoPresentation& pres) {
    pres.validate();
    int k = pres.rank();
    AbModule E(k, pres.order);
    std::vector<Rat> l = pres.exponents();
    for (int j = 0; j < k; ++j) {
        E.set_action(j, j, TruncSeries::monomial(pres.order, 1, l[static_cast<size_t>(j)]));
        if (j > 0) E.set_action(j - 1, j, pres.S[static_cast<size_t>(j - 1)]);
    }
    return {E, E.basis_vec(k - 1)};
}

AbModule module_xi(const Rat& lambda, int nlog, int copies, int order) {
    int block = nlog + 1;
    int k = block * copies;
    AbModule E(k, order);
    for (int c = 0; c < copies; ++c)
        for (int j = 0; j < block; ++j) {
            int col = c * block + j;
            E.set_action(col, col, TruncSeries::monomial(order, 1, lambda));
            if (j > 0) E.set_action(col - 1, col, TruncSeries::monomial(order, 1, Rat(1)));
        }
    return E;
}

std::pair<AbModule, ModuleVec> module_from_annihilator(const OreOperator& P) {
    if (!P.is_monic()) throw NotMonic("annihilator must be monic in a");
    int k = P.a_degree();
    int order = P.order();
    AbModule E(k, order);
    for (int j = 0; j + 1 < k; ++j) E.set_action(j + 1, j, TruncSeries::one(order));
    for (int i = 0; i < k; ++i) E.set_action(i, k - 1, -P.coeff(i));
    return {E, E.basis_vec(0)};
}

ModuleVec apply_operator(const AbModule& E, const OreOperator& P, const ModuleVec& v) {
    ModuleVec acc = E.zero_vec();
    ModuleVec iter = v;
    for (int j = 0; j <= P.a_degree(); ++j) {
        if (j > 0) iter = E.apply_a(iter);
        TruncSeries s = P.coeff(j);
        if (s.is_zero()) continue;
        acc = acc + s * iter;
    }
    return acc;
}

OreOperator annihilator_of_generator(const AbModule& E, const ModuleVec& phi) {
    int k = E.rank();
    int order = E.order();
    std::vector<ModuleVec> it{phi};
    for (int j = 0; j < k; ++j) it.push_back(E.apply_a(it.back()));

    QMatrix B0(k, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) B0.at(i, j) = it[static_cast<size_t>(j)][static_cast<size_t>(i)][0];
    auto B0inv = B0.inverse();
    if (!B0inv) throw NotAGenerator("a-iterates are dependent mod b");

    // Solve sum_j T_j . a^j.phi = a^k.phi level by level in b.
    std::vector<std::vector<Rat>> T(static_cast<size_t>(order),
                                    std::vector<Rat>(static_cast<size_t>(k)));
    for (int n = 0; n < order; ++n) {
        std::vector<Rat> rhs(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) rhs[static_cast<size_t>(i)] = it[static_cast<size_t>(k)][static_cast<size_t>(i)][n];
        for (int m = 1; m <= n; ++m)
            for (int j = 0; j < k; ++j) {
                const Rat& t = T[static_cast<size_t>(n - m)][static_cast<size_t>(j)];
                if (t == 0) continue;
                for (int i = 0; i < k; ++i)
                    rhs[static_cast<size_t>(i)] -= it[static_cast<size_t>(j)][static_cast<size_t>(i)][m] * t;
            }
        std::vector<Rat> tn = B0inv->apply(rhs);
        T[static_cast<size_t>(n)] = std::move(tn);
    }

    std::vector<TruncSeries> coeffs(static_cast<size_t>(k) + 1, TruncSeries(order));
    for (int j = 0; j < k; ++j) {
        TruncSeries s(order);
        for (int n = 0; n < order; ++n) s.set(n, -T[static_cast<size_t>(n)][static_cast<size_t>(j)]);
        coeffs[static_cast<size_t>(j)] = s;
    }
    coeffs[static_cast<size_t>(k)] = TruncSeries::one(order);
    OreOperator P(order, std::move(coeffs));
    if (!vec_is_zero(apply_operator(E, P, phi)))
        throw Error("AnnihilatorFailure", "computed operator does not annihilate the generator");
    return P;
}

KernelResult kernel_dim(const AbModule& E, const Rat& mu, int M) {
    int k = E.rank();
    if (M > E.order()) throw InsufficientOrder("finite model larger than the working order");
    // Solve on the full working window, then project to E/b^M.E. The wide
    // window keeps truncation artifacts (which live near the top of the
    // window) away from the reported model, so the projected dimension is
    // stable in M once M exceeds mu - l_1.
    int W = E.order();
    int dim = k * W;
    QMatrix A(dim, dim);
    for (int n = 0; n < W; ++n)
        for (int j = 0; j < k; ++j) {
            int col = model_index(k, n, j);
            // (a - mu.b).(b^n e_j) = b^n.a(e_j) + (n - mu).b^{n+1}.e_j
            for (int i = 0; i < k; ++i) {
                const TruncSeries& s = E.action(i, j);
                for (int m = n; m < W; ++m) {
                    const Rat& c = s[m - n];
                    if (c != 0) A.at(model_index(k, m, i), col) += c;
                }
            }
            if (n + 1 < W) A.at(model_index(k, n + 1, j), col) += Rat(n) - mu;
        }
    auto null_basis = A.kernel();

    // Project to the M-window; RREF rows with pivots inside the window form
    // an independent basis of the projected kernel, junk near the window top
    // of the wide solve drops out.
    QMatrix proj(static_cast<int>(null_basis.size()), k * M);
    for (size_t r = 0; r < null_basis.size(); ++r)
        for (int t = 0; t < k * M; ++t)
            proj.at(static_cast<int>(r), t) = null_basis[r][static_cast<size_t>(t)];
    std::vector<int> pivcols = proj.rref();

    KernelResult res;
    res.dim = static_cast<int>(pivcols.size());
    for (int r = 0; r < res.dim; ++r) {
        ModuleVec v(static_cast<size_t>(k), TruncSeries(M));
        for (int n = 0; n < M; ++n)
            for (int i = 0; i < k; ++i) {
                TruncSeries s = v[static_cast<size_t>(i)];
                s.set(n, proj.at(r, model_index(k, n, i)));
                v[static_cast<size_t>(i)] = s;
            }
        res.basis.push_back(std::move(v));
    }
    return res;
}

std::pair<int, int> delta_and_depth(const FrescoPresentation& pres) {
    pres.validate();
    int k = pres.rank();
    std::vector<Rat> l = pres.exponents();
    Rat mu = l.back() + (k - 1);
    int M = static_cast<int>(floor_long(mu - pres.lambda1)) + 1;
    if (M > pres.order) throw InsufficientOrder("order below the kernel model bound");
    auto [E, gen] = module_from_presentation(pres);
    (void)gen;
    int delta = kernel_dim(E, mu, M).dim;
    return {delta, k - delta + 1};
}

ModuleVec Rank1Quotient::project(const ModuleVec& v) const {
    int k = static_cast<int>(line.size());
    TruncSeries c = v[static_cast<size_t>(pivot)] * pivot_inv_;
    ModuleVec r;
    r.reserve(static_cast<size_t>(k) - 1);
    for (int j = 0; j < k; ++j) {
        if (j == pivot) continue;
        r.push_back(v[static_cast<size_t>(j)] - c * line[static_cast<size_t>(j)]);
    }
    return r;
}

ModuleVec Rank1Quotient::lift(const ModuleVec& v) const {
    int k = static_cast<int>(line.size());
    ModuleVec r(static_cast<size_t>(k), TruncSeries(quotient.order()));
    int t = 0;
    for (int j = 0; j < k; ++j) {
        if (j == pivot) continue;
        r[static_cast<size_t>(j)] = v[static_cast<size_t>(t++)];
    }
    return r;
}

Rank1Quotient quotient_by_normal_rank1(const AbModule& E, const ModuleVec& x0) {
    int k = E.rank();
    int order = E.order();
    ModuleVec x(x0);
    for (auto& s : x) s = s.truncated(order);
    int pivot = -1;
    for (int j = 0; j < k; ++j)
        if (x[static_cast<size_t>(j)][0] != 0) {
            pivot = j;
            break;
        }
    if (pivot < 0) throw NotNormal();

    TruncSeries piv_inv = series_inv(x[static_cast<size_t>(pivot)]);
    ModuleVec ax = E.apply_a(x);
    TruncSeries t = ax[static_cast<size_t>(pivot)] * piv_inv;
    for (int j = 0; j < k; ++j)
        if (ax[static_cast<size_t>(j)] != t * x[static_cast<size_t>(j)]) throw NotStable();

    Rank1Quotient q;
    q.line = x;
    q.pivot = pivot;
    q.eigenvalue_series = t;
    q.pivot_inv_ = piv_inv;

    AbModule quot(k - 1, order);
    int col = 0;
    for (int j = 0; j < k; ++j) {
        if (j == pivot) continue;
        ModuleVec aej = E.zero_vec();
        for (int i = 0; i < k; ++i) aej[static_cast<size_t>(i)] = E.action(i, j);
        ModuleVec pr = q.project(aej);
        for (int i = 0; i < k - 1; ++i) quot.set_action(i, col, pr[static_cast<size_t>(i)]);
        ++col;
    }
    q.quotient = std::move(quot);
    return q;
}

// ---------------------------------------------------------------------------
// Saturation over the local ring: column basis with monomial pivots.

namespace {

struct DvrBasis {
    int k, ord;
    // One column per pivot row; pivot entry is exactly b^{v}.
    std::vector<ModuleVec> cols;
    std::vector<int> pivot_row, pivot_val;

    DvrBasis(int k_, int ord_) : k(k_), ord(ord_) {}

    static int vec_pivot(const ModuleVec& w, int& val_out) {
        int best = -1, bestval = 1 << 30;
        for (int i = 0; i < static_cast<int>(w.size()); ++i) {
            int v = w[static_cast<size_t>(i)].valuation();
            if (v < bestval) {
                bestval = v;
                best = i;
            }
        }
        val_out = bestval;
        return bestval >= static_cast<int>(w.front().order()) ? -1 : best;
    }

    void normalize(ModuleVec& w, int row, int val) const {
        // Scale by the unit inverse of (w_row / b^val) so the pivot entry
        // becomes the monomial b^val.
        TruncSeries u(ord);
        for (int n = 0; n + val < ord; ++n) u.set(n, w[static_cast<size_t>(row)][n + val]);
        TruncSeries uinv = series_inv(u);
        for (auto& s : w) s = s * uinv;
    }

    int find_col(int row) const {
        for (size_t i = 0; i < cols.size(); ++i)
            if (pivot_row[i] == row) return static_cast<int>(i);
        return -1;
    }

    // Reduces w against the basis; when record != nullptr accumulates the
    // series coefficients of the reduction there. Returns the residual.
    ModuleVec reduce(ModuleVec w, std::vector<TruncSeries>* record = nullptr) {
        for (;;) {
            int val;
            int row = vec_pivot(w, val);
            if (row < 0) return w;
            int ci = find_col(row);
            if (ci < 0 || pivot_val[static_cast<size_t>(ci)] > val) return w;
            // w_row has valuation >= pivot val: peel the b^{v} monomial.
            TruncSeries c(ord);
            int v = pivot_val[static_cast<size_t>(ci)];
            for (int n = 0; n + v < ord; ++n) c.set(n, w[static_cast<size_t>(row)][n + v]);
            if (record) (*record)[static_cast<size_t>(ci)] += c;
            w = w - c * cols[static_cast<size_t>(ci)];
            // The pivot entry of the residual vanished exactly; continue.
        }
    }

    bool insert(ModuleVec w) {
        w = reduce(std::move(w));
        int val;
        int row = vec_pivot(w, val);
        if (row < 0) return false;
        normalize(w, row, val);
        int ci = find_col(row);
        if (ci < 0) {
            cols.push_back(std::move(w));
            pivot_row.push_back(row);
            pivot_val.push_back(val);
            return true;
        }
        // Strictly smaller valuation on the same row: swap and re-insert.
        ModuleVec old = cols[static_cast<size_t>(ci)];
        cols[static_cast<size_t>(ci)] = std::move(w);
        pivot_val[static_cast<size_t>(ci)] = val;
        insert(std::move(old));
        return true;
    }

    void retruncate(int new_ord) {
        ord = new_ord;
        for (auto& c : cols)
            for (auto& s : c) s = s.truncated(new_ord);
    }
};

} // namespace

SaturationResult saturate_and_bernstein(const AbModule& E, int guard) {
    int k = E.rank();
    int N = E.order();
    if (guard < 1) throw ValidationError("guard must be positive");
    if (N < guard + k + 4) throw InsufficientOrder("order too small for the requested guard");

    // Work in coordinates of F = b^{-guard}.E: column series c represent the
    // element b^{-guard}.(c.e); the a-action matrix becomes A - guard.b.Id.
    AbModule F(k, N);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            TruncSeries s = E.action(i, j);
            if (i == j) s -= TruncSeries::monomial(N, 1, Rat(guard));
            F.set_action(i, j, s);
        }

    auto tau = [&](const ModuleVec& v) {
        ModuleVec av = F.apply_a(v);
        ModuleVec r(v.size(), TruncSeries(static_cast<int>(av.front().order())));
        for (size_t i = 0; i < v.size(); ++i) {
            if (av[i][0] != 0)
                throw InsufficientOrder("saturation drops below the guard window");
            TruncSeries s(av[i].order());
            for (int n = 0; n + 1 < av[i].order(); ++n) s.set(n, av[i][n + 1]);
            r[i] = s;
        }
        return r;
    };

    DvrBasis basis(k, N);
    for (int j = 0; j < k; ++j) {
        ModuleVec g(static_cast<size_t>(k), TruncSeries(N));
        g[static_cast<size_t>(j)] = TruncSeries::monomial(N, guard, Rat(1));
        basis.insert(std::move(g));
    }

    int max_rounds = k * (guard + 2) + 2;
    int rounds = 0;
    for (;;) {
        if (rounds++ > max_rounds) throw NotRegular();
        if (basis.ord <= k + 3) throw InsufficientOrder("saturation exhausted the working order");
        bool changed = false;
        std::vector<ModuleVec> snapshot = basis.cols;
        basis.retruncate(basis.ord - 1);
        for (const auto& c : snapshot) {
            ModuleVec w = tau(c);
            for (auto& s : w) s = s.truncated(basis.ord);
            changed |= basis.insert(std::move(w));
        }
        if (!changed) break;
    }

    int depth = 0;
    for (int v : basis.pivot_val) depth = std::max(depth, guard - v);

    // tau on the columns, expressed in the column basis; the constant terms
    // give the action of b^{-1}a on Esharp/b.Esharp.
    int kcols = static_cast<int>(basis.cols.size());
    if (kcols != k) throw NotRegular("saturation did not produce a full-rank lattice");
    QMatrix T(k, k);
    std::vector<TruncSeries> sharp_action(static_cast<size_t>(k) * k, TruncSeries(basis.ord));
    for (int j = 0; j < k; ++j) {
        ModuleVec av = F.apply_a(basis.cols[static_cast<size_t>(j)]);
        std::vector<TruncSeries> rec(static_cast<size_t>(k), TruncSeries(basis.ord));
        ModuleVec resid = basis.reduce(av, &rec);
        if (!vec_is_zero(resid))
            throw Error("SaturationFailure", "a does not stabilize the saturated lattice");
        for (int i = 0; i < k; ++i) {
            sharp_action[static_cast<size_t>(j) * k + i] = rec[static_cast<size_t>(i)];
            if (rec[static_cast<size_t>(i)][0] != 0)
                throw Error("SaturationFailure", "saturated lattice misses a simple pole");
            T.at(i, j) = rec[static_cast<size_t>(i)][1];
        }
    }
    // Bernstein polynomial: -b^{-1}a on the quotient; tau's matrix mod b is
    // the coefficient of b after dividing the action by b... handled above by
    // reading the b^1 coefficient of the action coordinates.
    QMatrix minusT(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minusT.at(i, j) = -T.at(i, j);

    int sharp_order = std::max(basis.ord - guard, 1);
    SaturationResult res;
    res.sharp = AbModule(k, sharp_order, [&] {
        std::vector<TruncSeries> a;
        a.reserve(sharp_action.size());
        for (const auto& s : sharp_action) a.push_back(s.truncated(sharp_order));
        return a;
    }());
    res.bernstein = char_poly(minusT);
    res.minimal = min_poly(minusT);
    res.depth = depth;
    return res;
}

// ---------------------------------------------------------------------------
// Principal presentation and Jordan-Hoelder descent.

namespace {

SaturationResult saturate_auto(const AbModule& E) {
    int k = E.rank();
    int g = k + 2;
    for (;;) {
        try {
            return saturate_and_bernstein(E, g);
        } catch (const InsufficientOrder&) {
            g += 4;
            if (E.order() < g + k + 4) throw;
        }
    }
}

std::vector<Rat> exponents_from_bernstein(const AbModule& E) {
    int k = E.rank();
    SaturationResult sat = saturate_auto(E);
    std::vector<Rat> roots = sat.bernstein.rational_roots();
    if (static_cast<int>(roots.size()) != k)
        throw NotAFresco("Bernstein polynomial does not split with full degree");
    // root = -(l_j + j - k), so l_j + j = k - root; sorted ascending.
    std::vector<Rat> v;
    for (const Rat& r : roots) v.push_back(Rat(k) - r);
    std::sort(v.begin(), v.end());
    std::vector<Rat> exps;
    for (int j = 1; j <= k; ++j) {
        exps.push_back(v[static_cast<size_t>(j - 1)] - j);
        if (j >= 2 && !is_integer(v[static_cast<size_t>(j - 1)] - v[static_cast<size_t>(j - 2)]))
            throw NotAFresco("exponents do not lie in a single class modulo the integers");
    }
    return exps;
}

struct PresentStep {
    std::vector<TruncSeries> S;
    TruncSeries gen_transform;
    std::vector<std::vector<ModuleVec>> flags;
};

std::vector<ModuleVec> kernel_candidates(const KernelResult& kern) {
    std::vector<ModuleVec> cand;
    for (const auto& x : kern.basis) {
        bool unitpart = false;
        for (const auto& s : x) unitpart |= (s[0] != 0);
        if (unitpart) cand.push_back(x);
    }
    if (kern.basis.size() > 1) {
        SeededRng rng(0x5eed);
        for (int t = 0; t < 6; ++t) {
            ModuleVec combo = kern.basis.front();
            for (auto& s : combo) s = rng.small_rat() * s;
            for (size_t i = 1; i < kern.basis.size(); ++i) {
                Rat c = rng.small_rat();
                combo = combo + c * kern.basis[i];
            }
            bool unitpart = false;
            for (const auto& s : combo) unitpart |= (s[0] != 0);
            if (unitpart) cand.push_back(std::move(combo));
        }
    }
    return cand;
}

PresentStep present_impl(const AbModule& E, const ModuleVec& phi, const std::vector<Rat>& exps) {
    int k = E.rank();
    int N = E.order();
    if (k == 1) {
        if (phi[0][0] == 0) throw NotAGenerator("rank-1 generator lies in b.E");
        TruncSeries t = E.apply_a(phi)[0] * series_inv(phi[0]);
        if (t[0] != 0 || t[1] != exps[0])
            throw NotAFresco("rank-1 eigenvalue does not match the expected exponent");
        // Normalize a.(S.phi) = l.b.(S.phi): b.S' + S.(t/b - l) = 0.
        TruncSeries S = TruncSeries::one(N);
        for (int n = 1; n < N; ++n) {
            Rat acc(0);
            for (int i = 1; i <= n; ++i) acc += t[i + 1] * S[n - i];
            S.set(n, -acc / n);
        }
        PresentStep step;
        step.gen_transform = S;
        step.flags = {{S * phi}};
        return step;
    }

    const Rat& l1 = exps[0];
    KernelResult kern = kernel_dim(E, l1, N);
    std::vector<Rat> sub_exps(exps.begin() + 1, exps.end());
    std::string last_error = "no eigenvector outside b.E at the first exponent";
    for (const ModuleVec& x : kernel_candidates(kern)) {
        try {
            Rank1Quotient q = quotient_by_normal_rank1(E, x);
            PresentStep sub = present_impl(q.quotient, q.project(phi), sub_exps);
            OreOperator tail = op_from_factors(N, sub_exps, sub.S);
            ModuleVec w = apply_operator(E, tail, sub.gen_transform * phi);
            TruncSeries T = w[static_cast<size_t>(q.pivot)] * q.pivot_inv_;
            if (!vec_eq(w, T * x)) throw NotAFresco("tail image left the first flag line");
            if (T[0] == 0) throw NotAFresco("tail image is not a unit multiple of the flag generator");
            TruncSeries S1 = (1 / T[0]) * T;

            PresentStep step;
            step.S.push_back(S1);
            step.S.insert(step.S.end(), sub.S.begin(), sub.S.end());
            step.gen_transform = sub.gen_transform;
            step.flags.push_back({x});
            for (const auto& subflag : sub.flags) {
                std::vector<ModuleVec> lifted{x};
                for (const auto& v : subflag) lifted.push_back(q.lift(v));
                step.flags.push_back(std::move(lifted));
            }
            return step;
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    throw NotAFresco(last_error);
}

FrescoPresentation assemble_presentation(const std::vector<Rat>& exps,
                                         std::vector<TruncSeries> S, int order) {
    FrescoPresentation pres;
    pres.lambda1 = exps[0];
    for (size_t j = 1; j < exps.size(); ++j) {
        Rat gap = exps[j] - exps[j - 1] + 1;
        if (!is_integer(gap) || gap < 0)
            throw NotAFresco("fundamental invariants have a non-integer gap");
        pres.p.push_back(static_cast<int>(floor_long(gap)));
    }
    pres.S = std::move(S);
    pres.order = order;
    pres.validate();
    return pres;
}

} // namespace

std::optional<ModuleVec> find_generator(const AbModule& E) {
    int k = E.rank();
    auto is_generator = [&](const ModuleVec& v) {
        std::vector<ModuleVec> it{v};
        for (int j = 1; j < k; ++j) it.push_back(E.apply_a(it.back()));
        QMatrix B0(k, k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i)
                B0.at(i, j) = it[static_cast<size_t>(j)][static_cast<size_t>(i)][0];
        return B0.rank() == k;
    };
    for (int j = k - 1; j >= 0; --j) {
        ModuleVec v = E.basis_vec(j);
        if (is_generator(v)) return v;
    }
    SeededRng rng(0xabcd1234);
    for (int t = 0; t < 8; ++t) {
        ModuleVec v = E.zero_vec();
        for (int j = 0; j < k; ++j)
            v[static_cast<size_t>(j)] = TruncSeries(E.order(), rng.small_rat());
        if (is_generator(v)) return v;
    }
    return std::nullopt;
}

PresentedFresco present_fresco(const AbModule& E, const ModuleVec& phi) {
    std::vector<Rat> exps = exponents_from_bernstein(E);
    PresentStep step = present_impl(E, phi, exps);
    PresentedFresco out;
    out.pres = assemble_presentation(exps, step.S, E.order());
    out.generator = step.gen_transform * phi;
    return out;
}

PresentedFresco present_fresco(const AbModule& E) {
    auto phi = find_generator(E);
    if (!phi) throw NotAFresco("no generator found at the working order");
    return present_fresco(E, *phi);
}

JordanHolderData principal_jh(const AbModule& E) {
    auto phi = find_generator(E);
    if (!phi) throw NotAFresco("no generator found at the working order");
    std::vector<Rat> exps = exponents_from_bernstein(E);
    PresentStep step = present_impl(E, *phi, exps);
    JordanHolderData jh;
    jh.flag_bases = step.flags;
    jh.exponents = exps;
    return jh;
}

AbModule jh_subquotient(const AbModule& E, const JordanHolderData& jh, int i, int j) {
    int k = E.rank();
    int N = E.order();
    if (!(0 <= i && i < j && j <= k)) throw ValidationError("need 0 <= i < j <= rank");
    const std::vector<ModuleVec>& W = jh.flag_bases[static_cast<size_t>(j - 1)];

    // Induced action on F_j: a(w_t) = sum_s M_{s,t} w_s, solved through rows
    // where the flag matrix is invertible mod b.
    QMatrix W0(k, j);
    for (int t = 0; t < j; ++t)
        for (int r = 0; r < k; ++r)
            W0.at(r, t) = W[static_cast<size_t>(t)][static_cast<size_t>(r)][0];
    QMatrix W0r = W0;
    std::vector<int> priv = W0r.transposed().rref(); // pivot rows of W0
    if (static_cast<int>(priv.size()) != j)
        throw NotAFresco("flag basis is dependent mod b");
    QMatrix B0(j, j);
    for (int t = 0; t < j; ++t)
        for (int r = 0; r < j; ++r) B0.at(r, t) = W0.at(priv[static_cast<size_t>(r)], t);
    auto B0inv = B0.inverse();
    if (!B0inv) throw NotAFresco("flag basis is dependent mod b");

    std::vector<std::vector<TruncSeries>> M(static_cast<size_t>(j),
                                            std::vector<TruncSeries>(static_cast<size_t>(j),
                                                                     TruncSeries(N)));
    for (int t = 0; t < j; ++t) {
        ModuleVec rhs = E.apply_a(W[static_cast<size_t>(t)]);
        std::vector<std::vector<Rat>> coef(static_cast<size_t>(N),
                                           std::vector<Rat>(static_cast<size_t>(j)));
        for (int n = 0; n < N; ++n) {
            std::vector<Rat> r(static_cast<size_t>(j));
            for (int rr = 0; rr < j; ++rr)
                r[static_cast<size_t>(rr)] = rhs[static_cast<size_t>(priv[static_cast<size_t>(rr)])][n];
            for (int m = 1; m <= n; ++m)
                for (int s = 0; s < j; ++s) {
                    const Rat& c = coef[static_cast<size_t>(n - m)][static_cast<size_t>(s)];
                    if (c == 0) continue;
                    for (int rr = 0; rr < j; ++rr)
                        r[static_cast<size_t>(rr)] -=
                            W[static_cast<size_t>(s)][static_cast<size_t>(priv[static_cast<size_t>(rr)])][m] * c;
                }
            coef[static_cast<size_t>(n)] = B0inv->apply(r);
        }
        for (int s = 0; s < j; ++s) {
            TruncSeries ser(N);
            for (int n = 0; n < N; ++n) ser.set(n, coef[static_cast<size_t>(n)][static_cast<size_t>(s)]);
            M[static_cast<size_t>(s)][static_cast<size_t>(t)] = ser;
        }
        // Consistency on all rows: the flag must be a-stable.
        ModuleVec rebuilt(static_cast<size_t>(k), TruncSeries(N));
        for (int s = 0; s < j; ++s)
            rebuilt = rebuilt + M[static_cast<size_t>(s)][static_cast<size_t>(t)] * W[static_cast<size_t>(s)];
        if (!vec_eq(rebuilt, rhs)) throw NotAFresco("flag is not a-stable at the working order");
    }

    AbModule sub(j - i, N);
    for (int t = i; t < j; ++t)
        for (int s = i; s < j; ++s)
            sub.set_action(s - i, t - i, M[static_cast<size_t>(s)][static_cast<size_t>(t)]);
    return sub;
}

AbModule jh_subquotient(const AbModule& E, int i, int j) {
    return jh_subquotient(E, principal_jh(E), i, j);
}

std::vector<TruncSeries> simple_pole_normalize(const AbModule& E, const Rat& lambda) {
    int k = E.rank();
    int N = E.order();
    if (!E.has_simple_pole()) throw WrongShape("module does not have a simple pole");

    QMatrix A1(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A1.at(i, j) = E.action(i, j)[1];
    QMatrix Nl = A1;
    for (int i = 0; i < k; ++i) Nl.at(i, i) -= lambda;
    QMatrix power = QMatrix::identity(k);
    for (int m = 0; m < k; ++m) power = power * Nl;
    if (!(power == QMatrix(k, k)) || Nl.rank() != k - 1)
        throw WrongShape("leading action is not a single Jordan block at the given exponent");

    // Jordan chain c_j = Nl^{k-j}.v with Nl^{k-1}.v != 0.
    QMatrix top = QMatrix::identity(k);
    for (int m = 0; m + 1 < k; ++m) top = top * Nl;
    int vcol = -1;
    for (int j = 0; j < k && vcol < 0; ++j)
        for (int i = 0; i < k; ++i)
            if (top.at(i, j) != 0) {
                vcol = j;
                break;
            }
    if (vcol < 0) throw WrongShape("nilpotent part is not regular");
    QMatrix C(k, k);
    std::vector<Rat> chain(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) chain[static_cast<size_t>(i)] = (i == vcol) ? Rat(1) : Rat(0);
    for (int j = k; j >= 1; --j) {
        for (int i = 0; i < k; ++i) C.at(i, j - 1) = chain[static_cast<size_t>(i)];
        chain = Nl.apply(chain);
    }
    auto Cinv = C.inverse();
    if (!Cinv) throw WrongShape("Jordan chain is degenerate");

    // Transformed action levels: Abar_m = C^{-1}.A_m.C.
    std::vector<QMatrix> Abar(static_cast<size_t>(N), QMatrix(k, k));
    for (int m = 0; m < N; ++m) {
        QMatrix Am(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) Am.at(i, j) = E.action(i, j)[m];
        Abar[static_cast<size_t>(m)] = (*Cinv) * Am * C;
    }

    // Level recursion N.S_v - S_v.N + v.S_v = -sum Z_j.S_{v-1-j}, Z_j = Abar_{j+2}.
    std::vector<QMatrix> S(static_cast<size_t>(N), QMatrix(k, k));
    S[0] = QMatrix::identity(k);
    for (int v = 1; v < N; ++v) {
        QMatrix rhs(k, k);
        for (int j = 0; j + 1 <= v && j + 2 < N; ++j) {
            rhs = rhs - Abar[static_cast<size_t>(j + 2)] * S[static_cast<size_t>(v - 1 - j)];
        }
        // Solve by decreasing r - s: referenced entries live one diagonal up.
        QMatrix X(k, k);
        for (int d = k - 1; d >= -(k - 1); --d)
            for (int r = 0; r < k; ++r) {
                int s = r - d;
                if (s < 0 || s >= k) continue;
                Rat val = rhs.at(r, s);
                if (r + 1 < k) val -= X.at(r + 1, s);
                if (s - 1 >= 0) val += X.at(r, s - 1);
                X.at(r, s) = val / v;
            }
        S[static_cast<size_t>(v)] = X;
    }

    std::vector<TruncSeries> B(static_cast<size_t>(k) * k, TruncSeries(N));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i) {
            TruncSeries s(N);
            for (int v = 0; v < N; ++v) {
                Rat acc(0);
                for (int t = 0; t < k; ++t) acc += C.at(i, t) * S[static_cast<size_t>(v)].at(t, j);
                s.set(v, acc);
            }
            B[static_cast<size_t>(j) * k + i] = s;
        }

    // Exact check: a(new basis column j) = l.b.(col j) + b.(col j-1).
    for (int j = 0; j < k; ++j) {
        ModuleVec col(static_cast<size_t>(k), TruncSeries(N));
        for (int i = 0; i < k; ++i) col[static_cast<size_t>(i)] = B[static_cast<size_t>(j) * k + i];
        ModuleVec want(static_cast<size_t>(k), TruncSeries(N));
        for (int i = 0; i < k; ++i) {
            TruncSeries s = (lambda * col[static_cast<size_t>(i)]).shifted(1);
            if (j > 0) s += B[static_cast<size_t>(j - 1) * k + i].shifted(1);
            want[static_cast<size_t>(i)] = s;
        }
        if (!vec_eq(E.apply_a(col), want))
            throw Error("NormalizeFailure", "normalized basis fails the simple-pole relations");
    }
    return B;
}

std::optional<long> phi_weight(const AbModule& E, const ModuleVec& v) {
    int k = E.rank();
    int nmin = v.front().order();
    for (const auto& s : v) nmin = std::min(nmin, s.valuation());
    if (nmin >= v.front().order()) return std::nullopt;
    int jmax = -1;
    for (int j = 0; j < k; ++j)
        if (v[static_cast<size_t>(j)].valuation() == nmin) jmax = j;
    int h = k - (jmax + 1);
    return static_cast<long>(k) * nmin + h;
}

IsoResult modules_isomorphic(const AbModule& E, const AbModule& F) {
    if (E.rank() != F.rank()) return {false, std::nullopt};
    int k = E.rank();
    int N = std::min(E.order(), F.order());
    AbModule Et = E.truncated(N), Ft = F.truncated(N);

    auto level = [&](const AbModule& M, int l) {
        QMatrix A(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A.at(i, j) = M.action(i, j)[l];
        return A;
    };
    std::vector<QMatrix> AE, AF;
    for (int l = 0; l < N; ++l) {
        AE.push_back(level(Et, l));
        AF.push_back(level(Ft, l));
    }

    int kk = k * k;
    int dim = kk * N;
    auto idx = [&](int n, int r, int s) { return n * kk + r * k + s; };
    // Phi.A_E - A_F.Phi - b^2.Phi' = 0, level by level.
    QMatrix sys(dim, dim);
    for (int n = 0; n < N; ++n)
        for (int r = 0; r < k; ++r)
            for (int s = 0; s < k; ++s) {
                int row = idx(n, r, s);
                for (int l = 0; l <= n; ++l) {
                    int m = n - l;
                    for (int t = 0; t < k; ++t) {
                        if (AE[static_cast<size_t>(l)].at(t, s) != 0)
                            sys.at(row, idx(m, r, t)) += AE[static_cast<size_t>(l)].at(t, s);
                        if (AF[static_cast<size_t>(l)].at(r, t) != 0)
                            sys.at(row, idx(m, t, s)) -= AF[static_cast<size_t>(l)].at(r, t);
                    }
                }
                if (n >= 1) sys.at(row, idx(n - 1, r, s)) -= Rat(n - 1);
            }
    auto null_basis = sys.kernel();
    if (null_basis.empty()) return {false, std::nullopt};

    int m = static_cast<int>(null_basis.size());
    // Row-reduce the constant-term projections, remembering the combinations.
    QMatrix proj(m, kk + m);
    for (int i = 0; i < m; ++i) {
        for (int c = 0; c < kk; ++c)
            proj.at(i, c) = null_basis[static_cast<size_t>(i)][static_cast<size_t>(c)];
        proj.at(i, kk + i) = 1;
    }
    proj.rref();
    std::vector<std::vector<Rat>> combos; // coefficients over null_basis
    for (int i = 0; i < m; ++i) {
        bool nonzero = false;
        for (int c = 0; c < kk; ++c) nonzero |= (proj.at(i, c) != 0);
        if (!nonzero) continue;
        std::vector<Rat> combo(static_cast<size_t>(m));
        for (int c = 0; c < m; ++c) combo[static_cast<size_t>(c)] = proj.at(i, kk + c);
        combos.push_back(std::move(combo));
    }
    if (combos.empty()) return {false, std::nullopt};
    int dim0 = static_cast<int>(combos.size());

    auto phi0_of = [&](const std::vector<Rat>& weights) {
        QMatrix phi0(k, k);
        for (int c = 0; c < dim0; ++c) {
            if (weights[static_cast<size_t>(c)] == 0) continue;
            for (int i = 0; i < m; ++i) {
                const Rat& w = combos[static_cast<size_t>(c)][static_cast<size_t>(i)];
                if (w == 0) continue;
                for (int r = 0; r < k; ++r)
                    for (int s = 0; s < k; ++s)
                        phi0.at(r, s) += weights[static_cast<size_t>(c)] * w *
                                         null_basis[static_cast<size_t>(i)][static_cast<size_t>(r * k + s)];
            }
        }
        return phi0;
    };

    std::vector<Rat> found;
    {
        std::vector<std::vector<Rat>> trials;
        for (int c = 0; c < dim0; ++c) {
            std::vector<Rat> w(static_cast<size_t>(dim0));
            w[static_cast<size_t>(c)] = 1;
            trials.push_back(std::move(w));
        }
        bool grid_feasible = dim0 <= 6;
        if (grid_feasible) {
            long total = 1;
            for (int c = 0; c < dim0; ++c) {
                total *= (k + 1);
                if (total > 200000) {
                    grid_feasible = false;
                    break;
                }
            }
            if (grid_feasible) {
                std::vector<int> cnt(static_cast<size_t>(dim0), 0);
                for (;;) {
                    std::vector<Rat> w(static_cast<size_t>(dim0));
                    for (int c = 0; c < dim0; ++c) w[static_cast<size_t>(c)] = cnt[static_cast<size_t>(c)];
                    trials.push_back(std::move(w));
                    int c = 0;
                    while (c < dim0 && ++cnt[static_cast<size_t>(c)] > k) cnt[static_cast<size_t>(c++)] = 0;
                    if (c == dim0) break;
                }
            }
        }
        if (!grid_feasible) {
            SeededRng rng(0x15a4e11);
            for (int t = 0; t < 1024; ++t) {
                std::vector<Rat> w(static_cast<size_t>(dim0));
                for (int c = 0; c < dim0; ++c) w[static_cast<size_t>(c)] = rng.small_rat();
                trials.push_back(std::move(w));
            }
        }
        for (const auto& w : trials) {
            if (phi0_of(w).det() != 0) {
                found = w;
                break;
            }
        }
    }
    if (found.empty()) return {false, std::nullopt};

    // Reconstruct the full series witness and verify it exactly.
    std::vector<Rat> flat(static_cast<size_t>(dim));
    for (int c = 0; c < dim0; ++c) {
        if (found[static_cast<size_t>(c)] == 0) continue;
        for (int i = 0; i < m; ++i) {
            const Rat& w = combos[static_cast<size_t>(c)][static_cast<size_t>(i)];
            if (w == 0) continue;
            for (int t = 0; t < dim; ++t)
                flat[static_cast<size_t>(t)] +=
                    found[static_cast<size_t>(c)] * w * null_basis[static_cast<size_t>(i)][static_cast<size_t>(t)];
        }
    }
    std::vector<TruncSeries> witness(static_cast<size_t>(kk), TruncSeries(N));
    for (int r = 0; r < k; ++r)
        for (int s = 0; s < k; ++s) {
            TruncSeries ser(N);
            for (int n = 0; n < N; ++n) ser.set(n, flat[static_cast<size_t>(idx(n, r, s))]);
            witness[static_cast<size_t>(s) * k + r] = ser; // column-major
        }
    // Verify Phi(a_E(v)) = a_F(Phi(v)) on basis vectors.
    for (int j = 0; j < k; ++j) {
        ModuleVec ej = Et.basis_vec(j);
        ModuleVec lhs(static_cast<size_t>(k), TruncSeries(N));
        ModuleVec aej = Et.apply_a(ej);
        for (int i = 0; i < k; ++i)
            for (int t = 0; t < k; ++t)
                lhs[static_cast<size_t>(i)] += witness[static_cast<size_t>(t) * k + i] * aej[static_cast<size_t>(t)];
        ModuleVec phiej(static_cast<size_t>(k), TruncSeries(N));
        for (int i = 0; i < k; ++i) phiej[static_cast<size_t>(i)] = witness[static_cast<size_t>(j) * k + i];
        ModuleVec rhs = Ft.apply_a(phiej);
        if (!vec_eq(lhs, rhs))
            throw Error("IsoWitnessFailure", "candidate base change fails the intertwining identity");
    }
    return {true, witness};
}

} // namespace abmod
