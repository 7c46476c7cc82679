#ifndef ABMOD_LINALG_HPP
#define ABMOD_LINALG_HPP

#include "abmod/rational.hpp"

#include <optional>
#include <vector>

namespace abmod {

/// Dense matrix over Rat. All eliminations are exact; there is no pivoting
/// for stability, only for nonzeroness.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static QMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    QMatrix operator*(const QMatrix& rhs) const;
    QMatrix operator+(const QMatrix& rhs) const;
    QMatrix operator-(const QMatrix& rhs) const;
    bool operator==(const QMatrix& rhs) const;

    std::vector<Rat> apply(const std::vector<Rat>& v) const;

    QMatrix transposed() const;

    /// In-place reduced row echelon form; returns the pivot columns.
    std::vector<int> rref();

    int rank() const;
    Rat det() const;

    /// Basis of the right kernel (as columns of length cols()).
    std::vector<std::vector<Rat>> kernel() const;

    /// One solution of A.x = b, or nullopt when inconsistent.
    std::optional<std::vector<Rat>> solve(const std::vector<Rat>& b) const;

    /// Inverse; nullopt when singular.
    std::optional<QMatrix> inverse() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Solution space of A.x = b as a particular solution plus a kernel basis;
/// nullopt when the system is inconsistent.
struct AffineSpace {
    std::vector<Rat> particular;
    std::vector<std::vector<Rat>> kernel;
};
std::optional<AffineSpace> solve_affine(const QMatrix& A, const std::vector<Rat>& b);

} // namespace abmod

#endif
