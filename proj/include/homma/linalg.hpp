// Small dense symmetric-matrix kernels: determinant, cofactor matrix and the
// adjugate quadratic form v' adj(M) v. Orders up to ~10; cofactors are
// computed from deleted-row/column minors so they stay correct for singular
// matrices (the interesting case here).
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "homma/errors.hpp"

namespace homma {

// Symmetric matrix with packed upper-triangle storage; symmetry is exact by
// construction because (i,j) and (j,i) share one slot.
class SymMatrix {
public:
    explicit SymMatrix(int order) : n_(order), a_(packed_size(order), 0.0) {
        if (order < 1) throw OrderError("SymMatrix order must be >= 1");
    }

    static SymMatrix identity(int order) {
        SymMatrix m(order);
        for (int i = 0; i < order; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int order() const { return n_; }

    double operator()(int i, int j) const { return a_[index(i, j)]; }
    double& at(int i, int j) { return a_[index(i, j)]; }

    double max_abs() const {
        double m = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const double v = (*this)(i, j);
                s += v * v;
            }
        return std::sqrt(s);
    }

    // H * x
    std::vector<double> apply(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n_)
            throw DimensionError("SymMatrix::apply: vector length does not match order");
        std::vector<double> y(n_, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    std::vector<double> to_dense() const {
        std::vector<double> d(static_cast<std::size_t>(n_) * n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) d[static_cast<std::size_t>(i) * n_ + j] = (*this)(i, j);
        return d;
    }

private:
    static std::size_t packed_size(int n) {
        return static_cast<std::size_t>(n) * (n + 1) / 2;
    }
    std::size_t index(int i, int j) const {
        if (i > j) std::swap(i, j);
        // row-major packed upper triangle: row i starts at i*n - i*(i-1)/2
        return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2 +
               static_cast<std::size_t>(j - i);
    }

    int n_;
    std::vector<double> a_;
};

namespace detail {

// Determinant of a dense row-major n x n matrix. Exact cofactor expansion for
// n <= 3, LU with partial pivoting above. Accumulates in long double: the
// Hessian determinant is the central quantity here and the extra mantissa
// bits keep the elimination round-off below the jet entry error.
inline double det_dense(const std::vector<double>& in, int n) {
    std::vector<long double> m(in.begin(), in.end());
    auto e = [&](int i, int j) -> long double& { return m[static_cast<std::size_t>(i) * n + j]; };
    if (n == 1) return static_cast<double>(e(0, 0));
    if (n == 2) return static_cast<double>(e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0));
    if (n == 3)
        return static_cast<double>(e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
                                   e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
                                   e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0)));
    long double det = 1.0L;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(e(i, k)) > std::abs(e(piv, k))) piv = i;
        if (e(piv, k) == 0.0L) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(e(piv, j), e(k, j));
            det = -det;
        }
        det *= e(k, k);
        for (int i = k + 1; i < n; ++i) {
            const long double f = e(i, k) / e(k, k);
            for (int j = k + 1; j < n; ++j) e(i, j) -= f * e(k, j);
        }
    }
    return static_cast<double>(det);
}

// Minor: determinant of m with row `di` and column `dj` deleted.
inline double minor_det(const SymMatrix& m, int di, int dj) {
    const int n = m.order();
    std::vector<double> sub(static_cast<std::size_t>(n - 1) * (n - 1));
    int r = 0;
    for (int i = 0; i < n; ++i) {
        if (i == di) continue;
        int c = 0;
        for (int j = 0; j < n; ++j) {
            if (j == dj) continue;
            sub[static_cast<std::size_t>(r) * (n - 1) + c] = m(i, j);
            ++c;
        }
        ++r;
    }
    return det_dense(std::move(sub), n - 1);
}

} // namespace detail

inline double determinant(const SymMatrix& m) {
    return detail::det_dense(m.to_dense(), m.order());
}

// H_ij = (-1)^{i+j} M_ij. Symmetric input gives a symmetric cofactor matrix.
inline SymMatrix cofactor_matrix(const SymMatrix& m) {
    const int n = m.order();
    if (n < 2) throw OrderError("cofactor_matrix requires order >= 2");
    SymMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            h.at(i, j) = sign * detail::minor_det(m, i, j);
        }
    return h;
}

// sum_{i,j} v_i v_j H_ij with H the cofactor matrix of m.
inline double adjugate_quadratic_form(const SymMatrix& m, std::span<const double> v) {
    if (static_cast<int>(v.size()) != m.order())
        throw DimensionError("adjugate_quadratic_form: vector length does not match order");
    const SymMatrix h = cofactor_matrix(m);
    const int n = m.order();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += v[i] * v[j] * h(i, j);
    return s;
}

// Relative comparison for the displayed identities; the 1e-300 floor guards
// the 0/0 case when both sides vanish exactly.
inline double identity_relerr(double lhs, double rhs) {
    const double denom = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / denom;
}

} // namespace homma
