#include "abmod/polynomial.hpp"

#include "abmod/errors.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace abmod {

namespace {
const Rat kZero(0);

QPoly poly_gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = a.divmod(b).second;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

std::vector<mpz_class> positive_divisors(const mpz_class& n0) {
    mpz_class n = abs(n0);
    std::vector<mpz_class> divs;
    if (n == 0) return divs;
    for (mpz_class d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}
} // namespace

void QPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

QPoly QPoly::from_roots(const std::vector<Rat>& roots) {
    QPoly p({Rat(1)});
    for (const Rat& r : roots) p = p * QPoly({-r, Rat(1)});
    return p;
}

const Rat& QPoly::operator[](int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
    return c_[static_cast<size_t>(i)];
}

QPoly QPoly::operator+(const QPoly& rhs) const {
    std::vector<Rat> c(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = (*this)[static_cast<int>(i)] + rhs[static_cast<int>(i)];
    return QPoly(std::move(c));
}

QPoly QPoly::operator-(const QPoly& rhs) const {
    std::vector<Rat> c(std::max(c_.size(), rhs.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) c[i] = (*this)[static_cast<int>(i)] - rhs[static_cast<int>(i)];
    return QPoly(std::move(c));
}

QPoly QPoly::operator*(const QPoly& rhs) const {
    if (c_.empty() || rhs.c_.empty()) return QPoly();
    std::vector<Rat> c(c_.size() + rhs.c_.size() - 1);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < rhs.c_.size(); ++j) c[i + j] += c_[i] * rhs.c_[j];
    return QPoly(std::move(c));
}

Rat QPoly::eval(const Rat& z) const {
    Rat acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
    return acc;
}

QPoly QPoly::monic() const {
    if (is_zero()) return *this;
    Rat inv = 1 / c_.back();
    std::vector<Rat> c(c_);
    for (auto& q : c) q *= inv;
    return QPoly(std::move(c));
}

std::pair<QPoly, QPoly> QPoly::divmod(const QPoly& d) const {
    assert(!d.is_zero());
    std::vector<Rat> rem(c_);
    int dd = d.degree();
    Rat lead_inv = 1 / d[dd];
    std::vector<Rat> quot;
    int qd = static_cast<int>(rem.size()) - 1 - dd;
    if (qd < 0) return {QPoly(), *this};
    quot.assign(static_cast<size_t>(qd) + 1, Rat(0));
    for (int i = static_cast<int>(rem.size()) - 1; i >= dd; --i) {
        if (rem[static_cast<size_t>(i)] == 0) continue;
        Rat f = rem[static_cast<size_t>(i)] * lead_inv;
        quot[static_cast<size_t>(i - dd)] = f;
        for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(i - dd + j)] -= f * d[j];
    }
    return {QPoly(std::move(quot)), QPoly(std::move(rem))};
}

std::vector<Rat> QPoly::rational_roots() const {
    if (is_zero()) throw Error("ZeroPolynomial", "root-finding on the zero polynomial");
    // Clear denominators to a primitive integer polynomial, then use the
    // rational root bound p | trailing, q | leading, deflating as we go.
    QPoly cur = *this;
    std::vector<Rat> roots;
    while (cur.degree() > 0) {
        mpz_class den_lcm(1);
        for (int i = 0; i <= cur.degree(); ++i)
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), cur[i].get_den_mpz_t());
        std::vector<mpz_class> ic(static_cast<size_t>(cur.degree()) + 1);
        for (int i = 0; i <= cur.degree(); ++i) {
            Rat scaled = cur[i] * Rat(den_lcm);
            ic[static_cast<size_t>(i)] = scaled.get_num();
        }
        int v = 0;
        while (v <= cur.degree() && ic[static_cast<size_t>(v)] == 0) ++v;
        bool found = false;
        if (v > 0) {
            roots.insert(roots.end(), static_cast<size_t>(v), Rat(0));
            std::vector<Rat> c(static_cast<size_t>(cur.degree() - v) + 1);
            for (int i = v; i <= cur.degree(); ++i) c[static_cast<size_t>(i - v)] = cur[i];
            cur = QPoly(std::move(c));
            continue;
        }
        for (const mpz_class& p : positive_divisors(ic.front())) {
            for (const mpz_class& q : positive_divisors(ic.back())) {
                for (int sign : {1, -1}) {
                    Rat cand(sign * p, q);
                    cand.canonicalize();
                    if (cur.eval(cand) == 0) {
                        roots.push_back(cand);
                        cur = cur.divmod(QPoly({-cand, Rat(1)})).first;
                        found = true;
                    }
                    if (found) break;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found)
            throw Error("IrrationalRoots", "polynomial does not split over the rationals: " + to_string());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::string QPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        if ((*this)[i] == 0) continue;
        if (!first) out << " + ";
        out << rat_to_string((*this)[i]);
        if (i >= 1) out << "*" << var;
        if (i >= 2) out << "^" << i;
        first = false;
    }
    return out.str();
}

QPoly char_poly(const QMatrix& M) {
    assert(M.rows() == M.cols());
    int n = M.rows();
    std::vector<Rat> c(static_cast<size_t>(n) + 1);
    c[static_cast<size_t>(n)] = 1;
    QMatrix A = M;
    for (int m = 1; m <= n; ++m) {
        Rat tr(0);
        for (int i = 0; i < n; ++i) tr += A.at(i, i);
        c[static_cast<size_t>(n - m)] = -tr / m;
        if (m == n) break;
        for (int i = 0; i < n; ++i) A.at(i, i) += c[static_cast<size_t>(n - m)];
        A = M * A;
    }
    return QPoly(std::move(c));
}

QPoly min_poly(const QMatrix& M) {
    assert(M.rows() == M.cols());
    int n = M.rows();
    QPoly acc = QPoly::constant(Rat(1));
    for (int s = 0; s < n; ++s) {
        std::vector<Rat> v(static_cast<size_t>(n));
        v[static_cast<size_t>(s)] = 1;
        std::vector<std::vector<Rat>> krylov{v};
        QPoly local;
        for (int d = 1; d <= n + 1; ++d) {
            std::vector<Rat> next = M.apply(krylov.back());
            QMatrix sys(n, d);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < n; ++i) sys.at(i, j) = krylov[static_cast<size_t>(j)][static_cast<size_t>(i)];
            auto sol = sys.solve(next);
            if (sol) {
                std::vector<Rat> c(static_cast<size_t>(d) + 1);
                c[static_cast<size_t>(d)] = 1;
                for (int j = 0; j < d; ++j) c[static_cast<size_t>(j)] = -(*sol)[static_cast<size_t>(j)];
                local = QPoly(std::move(c));
                break;
            }
            krylov.push_back(std::move(next));
        }
        QPoly g = poly_gcd(acc, local);
        acc = (acc * local).divmod(g).first.monic();
    }
    return acc;
}

} // namespace abmod
