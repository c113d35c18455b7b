#pragma once

// Dense exact linear algebra over Q. Sizes here stay in the low hundreds,
// so plain Gauss-Jordan on Rat entries is enough.

#include "dercalc/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace dercalc {

using QVector = std::vector<Rat>;

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    QMatrix(std::initializer_list<std::initializer_list<Rat>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("QMatrix: ragged initializer");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static QMatrix identity(size_t n) {
        QMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    Rat& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const Rat& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    QVector operator*(const QVector& x) const {
        if (x.size() != cols_) throw std::invalid_argument("QMatrix: dimension mismatch");
        QVector y(rows_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c)
                if (!(*this)(r, c).is_zero() && !x[c].is_zero()) y[r] += (*this)(r, c) * x[c];
        return y;
    }

    /// In-place reduced row echelon form; returns the pivot column of each
    /// nonzero row.
    std::vector<size_t> rref() {
        std::vector<size_t> pivots;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t p = r;
            while (p < rows_ && (*this)(p, c).is_zero()) ++p;
            if (p == rows_) continue;
            if (p != r)
                for (size_t k = 0; k < cols_; ++k) std::swap((*this)(p, k), (*this)(r, k));
            Rat inv = (*this)(r, c).inverse();
            for (size_t k = c; k < cols_; ++k) (*this)(r, k) *= inv;
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r || (*this)(i, c).is_zero()) continue;
                Rat f = (*this)(i, c);
                for (size_t k = c; k < cols_; ++k)
                    if (!(*this)(r, k).is_zero()) (*this)(i, k) -= f * (*this)(r, k);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

private:
    size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Solution set of A x = b: particular + span(basis).
struct AffineSpace {
    QVector particular;
    std::vector<QVector> basis;

    size_t dimension() const { return basis.size(); }
};

namespace detail {

inline std::vector<QVector> nullspace_from_rref(const QMatrix& m, const std::vector<size_t>& pivots, size_t ncols) {
    std::vector<bool> is_pivot(ncols, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        QVector v(ncols);
        v[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace detail

/// Exact solve; free variables are set to zero in the particular solution.
inline std::optional<AffineSpace> solve_affine(const QMatrix& A, const QVector& b) {
    if (b.size() != A.rows()) throw std::invalid_argument("solve_affine: dimension mismatch");
    const size_t n = A.cols();
    QMatrix aug(A.rows(), n + 1);
    for (size_t r = 0; r < A.rows(); ++r) {
        for (size_t c = 0; c < n; ++c) aug(r, c) = A(r, c);
        aug(r, n) = b[r];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;
    AffineSpace sol;
    sol.particular.assign(n, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) sol.particular[pivots[r]] = aug(r, n);
    sol.basis = detail::nullspace_from_rref(aug, pivots, n);
    return sol;
}

inline std::vector<QVector> nullspace(const QMatrix& A) {
    QMatrix m = A;
    auto pivots = m.rref();
    return detail::nullspace_from_rref(m, pivots, A.cols());
}

inline size_t rank(const QMatrix& A) {
    QMatrix m = A;
    return m.rref().size();
}

/// Row-reduce a list of vectors into a canonical basis of their span
/// (reduced echelon form, zero rows dropped).
inline std::vector<QVector> canonical_span(const std::vector<QVector>& vs, size_t dim) {
    QMatrix m(vs.size(), dim);
    for (size_t r = 0; r < vs.size(); ++r)
        for (size_t c = 0; c < dim; ++c) m(r, c) = vs[r][c];
    auto pivots = m.rref();
    std::vector<QVector> out;
    for (size_t r = 0; r < pivots.size(); ++r) {
        QVector v(dim);
        for (size_t c = 0; c < dim; ++c) v[c] = m(r, c);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace dercalc
