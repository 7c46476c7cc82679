#include "abmod/linalg.hpp"

#include <cassert>

namespace abmod {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

QMatrix QMatrix::operator*(const QMatrix& rhs) const {
    assert(cols_ == rhs.rows_);
    QMatrix r(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rat& aik = at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < rhs.cols_; ++j) {
                if (rhs.at(k, j) == 0) continue;
                r.at(i, j) += aik * rhs.at(k, j);
            }
        }
    return r;
}

QMatrix QMatrix::operator+(const QMatrix& rhs) const {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    QMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + rhs.a_[i];
    return r;
}

QMatrix QMatrix::operator-(const QMatrix& rhs) const {
    assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
    QMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - rhs.a_[i];
    return r;
}

bool QMatrix::operator==(const QMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
}

std::vector<Rat> QMatrix::apply(const std::vector<Rat>& v) const {
    assert(static_cast<int>(v.size()) == cols_);
    std::vector<Rat> r(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (at(i, j) == 0 || v[static_cast<size_t>(j)] == 0) continue;
            r[static_cast<size_t>(i)] += at(i, j) * v[static_cast<size_t>(j)];
        }
    return r;
}

QMatrix QMatrix::transposed() const {
    QMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

std::vector<int> QMatrix::rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int p = -1;
        for (int i = row; i < rows_; ++i)
            if (at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(row, j));
        Rat inv = 1 / at(row, col);
        for (int j = col; j < cols_; ++j) at(row, j) *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == row || at(i, col) == 0) continue;
            Rat f = at(i, col);
            for (int j = col; j < cols_; ++j) at(i, j) -= f * at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int QMatrix::rank() const {
    QMatrix m(*this);
    return static_cast<int>(m.rref().size());
}

Rat QMatrix::det() const {
    assert(rows_ == cols_);
    QMatrix m(*this);
    Rat d(1);
    for (int col = 0; col < cols_; ++col) {
        int p = -1;
        for (int i = col; i < rows_; ++i)
            if (m.at(i, col) != 0) {
                p = i;
                break;
            }
        if (p < 0) return Rat(0);
        if (p != col) {
            for (int j = 0; j < cols_; ++j) std::swap(m.at(p, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        Rat inv = 1 / m.at(col, col);
        for (int i = col + 1; i < rows_; ++i) {
            if (m.at(i, col) == 0) continue;
            Rat f = m.at(i, col) * inv;
            for (int j = col; j < cols_; ++j) m.at(i, j) -= f * m.at(col, j);
        }
    }
    return d;
}

std::vector<std::vector<Rat>> QMatrix::kernel() const {
    QMatrix m(*this);
    std::vector<int> pivots = m.rref();
    std::vector<bool> is_pivot(static_cast<size_t>(cols_), false);
    for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<std::vector<Rat>> basis;
    for (int freecol = 0; freecol < cols_; ++freecol) {
        if (is_pivot[static_cast<size_t>(freecol)]) continue;
        std::vector<Rat> v(static_cast<size_t>(cols_));
        v[static_cast<size_t>(freecol)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<size_t>(pivots[r])] = -m.at(static_cast<int>(r), freecol);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<std::vector<Rat>> QMatrix::solve(const std::vector<Rat>& b) const {
    auto aff = solve_affine(*this, b);
    if (!aff) return std::nullopt;
    return aff->particular;
}

std::optional<QMatrix> QMatrix::inverse() const {
    assert(rows_ == cols_);
    QMatrix aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = 1;
    }
    auto pivots = aug.rref();
    if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_) return std::nullopt;
    QMatrix inv(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
    return inv;
}

std::optional<AffineSpace> solve_affine(const QMatrix& A, const std::vector<Rat>& b) {
    assert(static_cast<int>(b.size()) == A.rows());
    QMatrix aug(A.rows(), A.cols() + 1);
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols()) = b[static_cast<size_t>(i)];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == A.cols()) return std::nullopt;
    AffineSpace sp;
    sp.particular.assign(static_cast<size_t>(A.cols()), Rat(0));
    std::vector<bool> is_pivot(static_cast<size_t>(A.cols()), false);
    for (size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[static_cast<size_t>(pivots[r])] = true;
        sp.particular[static_cast<size_t>(pivots[r])] = aug.at(static_cast<int>(r), A.cols());
    }
    for (int freecol = 0; freecol < A.cols(); ++freecol) {
        if (is_pivot[static_cast<size_t>(freecol)]) continue;
        std::vector<Rat> v(static_cast<size_t>(A.cols()));
        v[static_cast<size_t>(freecol)] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[static_cast<size_t>(pivots[r])] = -aug.at(static_cast<int>(r), freecol);
        sp.kernel.push_back(std::move(v));
    }
    return sp;
}

} // namespace abmod
