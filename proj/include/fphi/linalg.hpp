#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "fphi/matrix.hpp"

namespace fphi {

template <class T>
struct KernelResult {
    std::size_t dimension = 0;
    std::vector<std::vector<T>> basis;
    // Minimum number of guaranteed digits across pivots (p-adic kind only).
    std::optional<int> precision_report;
};

// Kernel whose vectors are reshaped into matrices (Sylvester systems, Hom spaces).
template <class T>
struct MatrixKernel {
    std::size_t dimension = 0;
    std::vector<Matrix<T>> basis;
    std::optional<int> precision_report;
};

template <class T>
struct Echelon {
    Matrix<T> reduced;
    std::vector<std::size_t> pivots;  // pivot column of row k
    std::optional<int> min_pivot_digits;
};

namespace detail {

inline std::optional<int> min_opt(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

}  // namespace detail

// Scale row i by a power of p so its smallest valuation is 0. Row scaling keeps
// the row space and costs no digits; it keeps absolute precision comparable
// across equations. No-op over Q.
inline void equilibrate_row(RationalMatrix&, std::size_t) {}
void equilibrate_row(PadicMatrix& m, std::size_t i);

// Gauss-Jordan elimination to reduced row echelon form with pivots scaled to 1.
// Pivot choice follows ScalarTraits: first nonzero (rational) or minimal
// valuation with lowest-row tie break (p-adic). Columns whose only candidates
// are zero to an insufficient precision raise PrecisionExhausted.
template <class T>
Echelon<T> reduced_echelon(Matrix<T> m) {
    using Tr = ScalarTraits<T>;
    Echelon<T> out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::optional<std::size_t> best;
        bool saw_ambiguous = false;
        for (std::size_t i = r; i < m.rows(); ++i) equilibrate_row(m, i);
        for (std::size_t i = r; i < m.rows(); ++i) {
            const T& x = m(i, c);
            if (Tr::ambiguous(x)) {
                saw_ambiguous = true;
                continue;
            }
            if (Tr::negligible(x)) continue;
            if (!best || Tr::better_pivot(x, m(*best, c))) best = i;
        }
        if (!best) {
            if (saw_ambiguous) {
                throw PrecisionExhausted("pivot decision in column " + std::to_string(c) +
                                         " is ambiguous at the working precision");
            }
            continue;
        }
        if (*best != r) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(*best, j));
        }
        const T pivot = m(r, c);
        out.min_pivot_digits = detail::min_opt(out.min_pivot_digits, Tr::digits(pivot));
        const T inv = Tr::one_like(pivot) / pivot;
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        m(r, c) = Tr::one_like(pivot);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r) continue;
            const T factor = m(i, c);
            if (Tr::exact_zero(factor)) continue;
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (!Tr::exact_zero(m(r, j))) m(i, j) -= factor * m(r, j);
            }
            m(i, c) = Tr::zero_like(pivot);
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.reduced = std::move(m);
    return out;
}

template <class T>
std::vector<T> clean_negligible(std::vector<T> v) {
    for (T& x : v) {
        if (ScalarTraits<T>::negligible(x)) x = T();
    }
    return v;
}

// Canonical basis of the span of `vectors`: reduced echelon rows, leading
// coordinate 1, zero elsewhere in pivot coordinates.
template <class T>
std::vector<std::vector<T>> canonical_basis(const std::vector<std::vector<T>>& vectors) {
    if (vectors.empty()) return {};
    const std::size_t len = vectors.front().size();
    Matrix<T> m(vectors.size(), len, T());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < len; ++j) m(i, j) = vectors[i][j];
    }
    Echelon<T> e = reduced_echelon(std::move(m));
    std::vector<std::vector<T>> out;
    for (std::size_t k = 0; k < e.pivots.size(); ++k) out.push_back(clean_negligible(e.reduced.row(k)));
    return out;
}

// Right kernel from a reduced echelon form.
template <class T>
KernelResult<T> kernel_from_echelon(const Echelon<T>& e, std::size_t cols, const T& one) {
    KernelResult<T> result;
    result.precision_report = e.min_pivot_digits;
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : e.pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<T> v(cols, T());
        v[f] = one;
        for (std::size_t k = 0; k < e.pivots.size(); ++k) v[e.pivots[k]] = -e.reduced(k, f);
        result.basis.push_back(clean_negligible(std::move(v)));
    }
    result.basis = canonical_basis(result.basis);
    result.dimension = result.basis.size();
    return result;
}

// Right null space. Rational kind: fraction-free (Bareiss) elimination.
// P-adic kind: valuation pivoting with the zero threshold policy.
KernelResult<Rational> kernel(const RationalMatrix& m);
KernelResult<PadicScalar> kernel(const PadicMatrix& m);

template <class T>
std::size_t rank(const Matrix<T>& m) {
    return m.cols() - kernel(m).dimension;
}

template <class T>
T determinant(const Matrix<T>& m) {
    using Tr = ScalarTraits<T>;
    if (!m.is_square()) throw NonSquare("determinant of a non-square matrix");
    if (m.rows() == 0) return T() + Tr::one_like(T());
    Matrix<T> a = m;
    const std::size_t n = a.rows();
    T det = Tr::one_like(a(0, 0));
    for (std::size_t c = 0; c < n; ++c) {
        std::optional<std::size_t> best;
        bool saw_ambiguous = false;
        for (std::size_t i = c; i < n; ++i) {
            if (Tr::ambiguous(a(i, c))) {
                saw_ambiguous = true;
                continue;
            }
            if (Tr::negligible(a(i, c))) continue;
            if (!best || Tr::better_pivot(a(i, c), a(*best, c))) best = i;
        }
        if (!best) {
            if (saw_ambiguous) throw PrecisionExhausted("determinant is ambiguous at the working precision");
            return Tr::zero_like(a(0, 0));
        }
        if (*best != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(*best, j));
            det = -det;
        }
        det *= a(c, c);
        const T inv = Tr::one_like(a(c, c)) / a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            const T factor = a(i, c) * inv;
            if (Tr::exact_zero(factor)) continue;
            for (std::size_t j = c; j < n; ++j) a(i, j) -= factor * a(c, j);
        }
    }
    return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
    if (!m.is_square()) throw NonSquare("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return m;
    const T one = ScalarTraits<T>::one_like(m(0, 0));
    Echelon<T> e = reduced_echelon(hstack(m, Matrix<T>::identity(n, T(), one)));
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw InvalidArgument("matrix is singular");
    return submatrix(e.reduced, 0, n, n, n);
}

// Coefficients expressing `target` in the span of `basis`, if it lies there.
template <class T>
std::optional<std::vector<T>> solve_in_span(const std::vector<std::vector<T>>& basis,
                                            const std::vector<T>& target) {
    const std::size_t len = target.size();
    const std::size_t d = basis.size();
    Matrix<T> a(len, d + 1, T());
    for (std::size_t j = 0; j < d; ++j) {
        if (basis[j].size() != len) throw InvalidArgument("basis vector length mismatch");
        for (std::size_t i = 0; i < len; ++i) a(i, j) = basis[j][i];
    }
    for (std::size_t i = 0; i < len; ++i) a(i, d) = target[i];
    Echelon<T> e = reduced_echelon(std::move(a));
    std::vector<T> coeffs(d, T());
    for (std::size_t k = 0; k < e.pivots.size(); ++k) {
        if (e.pivots[k] == d) return std::nullopt;
        coeffs[e.pivots[k]] = e.reduced(k, d);
    }
    return coeffs;
}

// Vertical concatenation of constraint blocks acting on one unknown vector.
template <class T>
Matrix<T> constraint_stack(const std::vector<Matrix<T>>& blocks) {
    if (blocks.empty()) return {};
    Matrix<T> out = blocks.front();
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        if (blocks[i].cols() != out.cols()) {
            throw ColumnMismatch("constraint block " + std::to_string(i) + " has " +
                                 std::to_string(blocks[i].cols()) + " columns, expected " +
                                 std::to_string(out.cols()));
        }
        out = vstack(out, blocks[i]);
    }
    return out;
}

// {H : A H = H B} for square A (n x n), B (m x m), via the Kronecker system
// (I_m (x) A - B^T (x) I_n) vec(H) = 0 with column-major vec.
template <class T>
MatrixKernel<T> sylvester_kernel(const Matrix<T>& a, const Matrix<T>& b) {
    if (!a.is_square() || !b.is_square()) throw NonSquare("sylvester_kernel needs square matrices");
    const std::size_t n = a.rows();
    const std::size_t m = b.rows();
    MatrixKernel<T> out;
    if (n == 0 || m == 0) return out;
    const T one = ScalarTraits<T>::one_like(a(0, 0));
    const Matrix<T> system = kronecker(Matrix<T>::identity(m, T(), one), a) -
                             kronecker(transpose(b), Matrix<T>::identity(n, T(), one));
    KernelResult<T> k = kernel(system);
    out.dimension = k.dimension;
    out.precision_report = k.precision_report;
    for (const auto& v : k.basis) {
        Matrix<T> h(n, m, T());
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < n; ++i) h(i, j) = v[j * n + i];
        }
        out.basis.push_back(std::move(h));
    }
    return out;
}

// Monic characteristic polynomial det(T I - M), exact (Hessenberg reduction).
Polynomial char_poly(const RationalMatrix& m);

// Companion matrix of a monic polynomial: e_i -> e_{i+1}, last column -a_i.
RationalMatrix companion(const Polynomial& monic);

// kernel(M - lambda I).
KernelResult<PadicScalar> eigen_line(const PadicMatrix& m, const PadicScalar& lambda);

}  // namespace fphi
