#include "abmod/series.hpp"

#include "abmod/errors.hpp"

#include <algorithm>
#include <sstream>

namespace abmod {

namespace {
const Rat kZero(0);
}

TruncSeries::TruncSeries(int order, std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
    c_.resize(static_cast<size_t>(order));
}

TruncSeries TruncSeries::monomial(int order, int n, const Rat& c) {
    TruncSeries s(order);
    if (n >= 0 && n < order) s.c_[static_cast<size_t>(n)] = c;
    return s;
}

const Rat& TruncSeries::operator[](int n) const {
    if (n < 0 || n >= order()) return kZero;
    return c_[static_cast<size_t>(n)];
}

void TruncSeries::set(int n, const Rat& v) {
    if (n >= 0 && n < order()) c_[static_cast<size_t>(n)] = v;
}

bool TruncSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rat& q) { return q == 0; });
}

int TruncSeries::valuation() const {
    for (int n = 0; n < order(); ++n)
        if (c_[static_cast<size_t>(n)] != 0) return n;
    return order();
}

TruncSeries TruncSeries::truncated(int order) const {
    TruncSeries r(order);
    int m = std::min(order, this->order());
    for (int n = 0; n < m; ++n) r.c_[static_cast<size_t>(n)] = c_[static_cast<size_t>(n)];
    return r;
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries r(*this);
    for (auto& q : r.c_) q = -q;
    return r;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& rhs) {
    *this = *this + rhs;
    return *this;
}

TruncSeries& TruncSeries::operator-=(const TruncSeries& rhs) {
    *this = *this - rhs;
    return *this;
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (int i = 0; i < n; ++i) r.c_[static_cast<size_t>(i)] = a[i] + b[i];
    return r;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (int i = 0; i < n; ++i) r.c_[static_cast<size_t>(i)] = a[i] - b[i];
    return r;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (int i = 0; i < n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; i + j < n; ++j) {
            if (b[j] == 0) continue;
            r.c_[static_cast<size_t>(i + j)] += a[i] * b[j];
        }
    }
    return r;
}

TruncSeries operator*(const Rat& c, const TruncSeries& a) {
    TruncSeries r(a);
    for (auto& q : r.c_) q *= c;
    return r;
}

bool operator==(const TruncSeries& a, const TruncSeries& b) {
    int n = std::min(a.order(), b.order());
    for (int i = 0; i < n; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

TruncSeries TruncSeries::shifted(int m) const {
    TruncSeries r(order());
    for (int n = m; n < order(); ++n) r.c_[static_cast<size_t>(n)] = (*this)[n - m];
    return r;
}

TruncSeries TruncSeries::b_derivative() const {
    TruncSeries r(order());
    for (int n = 1; n < order(); ++n) r.c_[static_cast<size_t>(n)] = Rat(n) * (*this)[n];
    return r;
}

TruncSeries TruncSeries::b2_derivative() const {
    TruncSeries r(order());
    for (int n = 1; n < order(); ++n) r.c_[static_cast<size_t>(n)] = Rat(n - 1) * (*this)[n - 1];
    return r;
}

TruncSeries TruncSeries::derivative() const {
    TruncSeries r(std::max(order() - 1, 0));
    for (int n = 0; n + 1 < order(); ++n) r.c_[static_cast<size_t>(n)] = Rat(n + 1) * (*this)[n + 1];
    return r;
}

std::string TruncSeries::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (int n = 0; n < order(); ++n) {
        if ((*this)[n] == 0) continue;
        if (!first) out << " + ";
        out << rat_to_string((*this)[n]);
        if (n >= 1) out << "*b";
        if (n >= 2) out << "^" << n;
        first = false;
    }
    if (first) out << "0";
    out << " + O(b^" << order() << ")";
    return out.str();
}

TruncSeries series_inv(const TruncSeries& x) {
    if (x.order() == 0 || x[0] == 0) throw NotAUnit("series has zero constant term");
    int n = x.order();
    TruncSeries r(n);
    Rat inv0 = 1 / x[0];
    r.set(0, inv0);
    for (int m = 1; m < n; ++m) {
        Rat acc(0);
        for (int i = 1; i <= m; ++i) acc += x[i] * r[m - i];
        r.set(m, -inv0 * acc);
    }
    return r;
}

TruncSeries series_exp(const TruncSeries& x) {
    if (x.order() == 0) return TruncSeries(0);
    if (x[0] != 0) throw NonzeroConstantTerm();
    int n = x.order();
    // exp(x)' = x'.exp(x) gives the coefficient recursion m.r_m = sum i.x_i.r_{m-i}.
    TruncSeries r(n);
    r.set(0, Rat(1));
    for (int m = 1; m < n; ++m) {
        Rat acc(0);
        for (int i = 1; i <= m; ++i) acc += Rat(i) * x[i] * r[m - i];
        r.set(m, acc / m);
    }
    return r;
}

TruncSeries solve_linear_b_ode(const Rat& c, const TruncSeries& F, const Rat& resonant_value) {
    int n = F.order();
    bool resonant = is_integer(c) && c >= 0 && c < n;
    long cn = resonant ? floor_long(c) : -1;
    if (resonant && F[static_cast<int>(cn)] != 0) throw Obstruction(cn);
    TruncSeries u(n);
    for (int m = 0; m < n; ++m) {
        if (resonant && m == cn) {
            u.set(m, resonant_value);
        } else {
            u.set(m, F[m] / (Rat(m) - c));
        }
    }
    return u;
}

} // namespace abmod
