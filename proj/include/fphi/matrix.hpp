#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fphi/errors.hpp"
#include "fphi/padic.hpp"

namespace fphi {

// Per-kind rank policy used by every elimination routine.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static bool negligible(const Rational& x) { return x == 0; }
    static bool exact_zero(const Rational& x) { return x == 0; }
    static bool ambiguous(const Rational&) { return false; }
    // Rational pivots: first nonzero entry wins.
    static bool better_pivot(const Rational&, const Rational&) { return false; }
    static Rational zero_like(const Rational&) { return 0; }
    static Rational one_like(const Rational&) { return 1; }
    static std::optional<int> digits(const Rational&) { return std::nullopt; }
};

template <>
struct ScalarTraits<PadicScalar> {
    static bool negligible(const PadicScalar& x) { return x.negligible(); }
    static bool exact_zero(const PadicScalar& x) { return x.is_exact_zero(); }
    static bool ambiguous(const PadicScalar& x) { return x.ambiguous(); }
    // Minimal valuation wins; ties keep the earlier row.
    static bool better_pivot(const PadicScalar& cand, const PadicScalar& best) {
        return cand.guaranteed_valuation() < best.guaranteed_valuation();
    }
    static PadicScalar zero_like(const PadicScalar& x) { return PadicScalar::zero(x.context()); }
    static PadicScalar one_like(const PadicScalar& x) { return PadicScalar::one(x.context()); }
    static std::optional<int> digits(const PadicScalar& x) { return x.digits(); }
};

// Dense row-major matrix over one scalar kind.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, const T& zero) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(r, c, zero);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw InvalidArgument("ragged matrix rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix identity(std::size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& entries() const { return data_; }

    std::vector<T> row(std::size_t i) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
        return out;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using PadicMatrix = Matrix<PadicScalar>;

// A matrix of either kind; modules and Hom bases use this where the kind
// depends on the input data.
using AnyMatrix = std::variant<RationalMatrix, PadicMatrix>;

inline bool is_padic(const AnyMatrix& m) { return std::holds_alternative<PadicMatrix>(m); }
std::size_t rows_of(const AnyMatrix& m);
std::size_t cols_of(const AnyMatrix& m);

RationalMatrix rational_matrix(std::initializer_list<std::initializer_list<long>> rows);
RationalMatrix rational_zero(std::size_t rows, std::size_t cols);
RationalMatrix rational_identity(std::size_t n);

PadicMatrix to_padic(const RationalMatrix& m, const PadicContext& ctx);
PadicMatrix to_padic(const AnyMatrix& m, const PadicContext& ctx);
PadicMatrix with_context(const PadicMatrix& m, const PadicContext& ctx);

// Vector <-> matrix helpers (row-major).
template <class T>
Matrix<T> column_matrix(const std::vector<std::vector<T>>& columns, std::size_t rows, const T& zero) {
    Matrix<T> m(rows, columns.size(), zero);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
}

template <class T>
Matrix<T> reshape_row_major(const std::vector<T>& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw InvalidArgument("reshape size mismatch");
    Matrix<T> m(rows, cols, v.empty() ? T() : v.front());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = v[i * cols + j];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Elementary algebra.

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw InvalidArgument("matrix product dimension mismatch");
    Matrix<T> c(a.rows(), b.cols(), T());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (ScalarTraits<T>::exact_zero(aik)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

template <class T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix sum shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
    }
    return a;
}

template <class T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidArgument("matrix difference shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
    }
    return a;
}

template <class T>
Matrix<T> scaled(Matrix<T> a, const T& s) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
    }
    return a;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
    if (a.empty()) return Matrix<T>(a.cols(), a.rows(), T());
    Matrix<T> t(a.cols(), a.rows(), a(0, 0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

template <class T>
Matrix<T> submatrix(const Matrix<T>& a, std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) {
    if (r0 + nr > a.rows() || c0 + nc > a.cols()) throw InvalidArgument("submatrix out of range");
    Matrix<T> s(nr, nc, T());
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) s(i, j) = a(r0 + i, c0 + j);
    }
    return s;
}

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw InvalidArgument("hstack row mismatch");
    Matrix<T> s(a.rows(), a.cols() + b.cols(), T());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) s(i, a.cols() + j) = b(i, j);
    }
    return s;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.cols()) throw ColumnMismatch("vstack column mismatch");
    Matrix<T> s(a.rows() + b.rows(), a.cols(), T());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) s(i, j) = a(i, j);
        for (std::size_t i = 0; i < b.rows(); ++i) s(a.rows() + i, j) = b(i, j);
    }
    return s;
}

template <class T>
Matrix<T> block_diagonal(const Matrix<T>& a, const Matrix<T>& b, const T& zero) {
    Matrix<T> s(a.rows() + b.rows(), a.cols() + b.cols(), zero);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(i, j);
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) s(a.rows() + i, a.cols() + j) = b(i, j);
    }
    return s;
}

template <class T>
Matrix<T> kronecker(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols(), T());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            for (std::size_t r = 0; r < b.rows(); ++r) {
                for (std::size_t s = 0; s < b.cols(); ++s) {
                    k(i * b.rows() + r, j * b.cols() + s) = a(i, j) * b(r, s);
                }
            }
        }
    }
    return k;
}

// Permute rows and columns: result(i, j) = a(perm[i], perm[j]).
template <class T>
Matrix<T> permute_square(const Matrix<T>& a, const std::vector<std::size_t>& perm) {
    Matrix<T> s(a.rows(), a.cols(), T());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(perm[i], perm[j]);
    }
    return s;
}

template <class T>
Matrix<T> permute_rows(const Matrix<T>& a, const std::vector<std::size_t>& perm) {
    Matrix<T> s(a.rows(), a.cols(), T());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(perm[i], j);
    }
    return s;
}

template <class T>
bool all_negligible(const Matrix<T>& a) {
    for (const T& x : a.entries()) {
        if (!ScalarTraits<T>::negligible(x)) return false;
    }
    return true;
}

std::string to_string(const RationalMatrix& m);
std::string to_string(const PadicMatrix& m);

}  // namespace fphi
