#include "fphi/linalg.hpp"

#include <sstream>

namespace fphi {

std::size_t rows_of(const AnyMatrix& m) {
    return std::visit([](const auto& x) { return x.rows(); }, m);
}

std::size_t cols_of(const AnyMatrix& m) {
    return std::visit([](const auto& x) { return x.cols(); }, m);
}

RationalMatrix rational_matrix(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) {
        std::vector<Rational> out;
        for (long x : row) out.emplace_back(x);
        r.push_back(std::move(out));
    }
    return RationalMatrix::from_rows(r, 0);
}

RationalMatrix rational_zero(std::size_t rows, std::size_t cols) { return {rows, cols, Rational(0)}; }

RationalMatrix rational_identity(std::size_t n) {
    return RationalMatrix::identity(n, Rational(0), Rational(1));
}

PadicMatrix to_padic(const RationalMatrix& m, const PadicContext& ctx) {
    PadicMatrix out(m.rows(), m.cols(), PadicScalar::zero(ctx));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = PadicScalar::from_rational(m(i, j), ctx);
    }
    return out;
}

PadicMatrix with_context(const PadicMatrix& m, const PadicContext& ctx) {
    PadicMatrix out(m.rows(), m.cols(), PadicScalar::zero(ctx));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).with_context(ctx);
    }
    return out;
}

PadicMatrix to_padic(const AnyMatrix& m, const PadicContext& ctx) {
    if (const auto* r = std::get_if<RationalMatrix>(&m)) return to_padic(*r, ctx);
    return with_context(std::get<PadicMatrix>(m), ctx);
}

std::string to_string(const RationalMatrix& m) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << m(i, j).get_str();
        out << "]";
    }
    out << "]";
    return out.str();
}

std::string to_string(const PadicMatrix& m) {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << m(i, j).to_string();
        out << "]";
    }
    out << "]";
    return out.str();
}

void equilibrate_row(PadicMatrix& m, std::size_t i) {
    std::optional<long> low;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const PadicScalar& x = m(i, j);
        if (x.is_nonzero()) low = low ? std::min(*low, x.guaranteed_valuation()) : x.guaranteed_valuation();
    }
    if (!low || *low == 0) return;
    PadicScalar scale;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j).is_nonzero()) {
            const PadicContext& c = m(i, j).context();
            scale = PadicScalar::from_parts(-*low, 1, c.precision(), c);
            break;
        }
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (!m(i, j).is_exact_zero()) m(i, j) *= scale;
    }
}

// ---------------------------------------------------------------------------

KernelResult<Rational> kernel(const RationalMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();

    // Clear denominators row by row.
    std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) {
            a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
        }
    }

    // Bareiss forward elimination; every division below is exact.
    std::vector<std::size_t> pivots;
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        pivots.push_back(c);
        ++r;
    }

    // Back substitution, one basis vector per free column.
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    KernelResult<Rational> result;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> x(cols, Rational(0));
        x[f] = 1;
        for (std::size_t k = pivots.size(); k-- > 0;) {
            const std::size_t pc = pivots[k];
            Rational acc = 0;
            for (std::size_t j = pc + 1; j < cols; ++j) {
                if (x[j] != 0) acc += Rational(a[k][j]) * x[j];
            }
            x[pc] = -acc / Rational(a[k][pc]);
        }
        result.basis.push_back(std::move(x));
    }
    result.basis = canonical_basis(result.basis);
    result.dimension = result.basis.size();
    return result;
}

KernelResult<PadicScalar> kernel(const PadicMatrix& m) {
    if (m.cols() == 0) return {};
    PadicScalar one;
    for (const auto& x : m.entries()) {
        if (!x.is_exact_zero()) {
            one = PadicScalar::one(x.context());
            break;
        }
    }
    if (one.is_exact_zero()) {
        // Exact zero matrix: the whole space.
        KernelResult<PadicScalar> result;
        for (std::size_t f = 0; f < m.cols(); ++f) {
            std::vector<PadicScalar> v(m.cols());
            v[f] = PadicScalar::one(m.entries().empty() ? PadicContext() : m(0, 0).context());
            result.basis.push_back(std::move(v));
        }
        result.dimension = m.cols();
        return result;
    }
    return kernel_from_echelon(reduced_echelon(m), m.cols(), one);
}

Polynomial char_poly(const RationalMatrix& m) {
    if (!m.is_square()) throw NonSquare("characteristic polynomial of a non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix h = m;

    // Similarity transform to upper Hessenberg form.
    for (std::size_t col = 0; col + 2 < n; ++col) {
        const std::size_t sub = col + 1;
        std::size_t piv = sub;
        while (piv < n && h(piv, col) == 0) ++piv;
        if (piv == n) continue;
        if (piv != sub) {
            for (std::size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(sub, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, sub));
        }
        for (std::size_t i = sub + 1; i < n; ++i) {
            if (h(i, col) == 0) continue;
            const Rational u = h(i, col) / h(sub, col);
            for (std::size_t j = 0; j < n; ++j) h(i, j) -= u * h(sub, j);
            for (std::size_t r = 0; r < n; ++r) h(r, sub) += u * h(r, i);
        }
    }

    // p_k = (T - h_kk) p_{k-1} - sum_i h_{i,k} (prod of subdiagonal) p_{i-1}.
    std::vector<Polynomial> p(n + 1);
    p[0] = Polynomial::from_ints({1});
    for (std::size_t k = 1; k <= n; ++k) {
        p[k] = Polynomial({-h(k - 1, k - 1), Rational(1)}) * p[k - 1];
        Rational t = 1;
        for (std::size_t i = k - 1; i >= 1; --i) {
            t *= h(i, i - 1);
            if (t == 0) break;
            const Rational coeff = t * h(i - 1, k - 1);
            std::vector<Rational> c = p[k].coeffs;
            const auto& lower = p[i - 1].coeffs;
            if (c.size() < lower.size()) c.resize(lower.size(), Rational(0));
            for (std::size_t d = 0; d < lower.size(); ++d) c[d] -= coeff * lower[d];
            p[k] = Polynomial(std::move(c));
        }
    }
    return p[n];
}

RationalMatrix companion(const Polynomial& monic) {
    if (!monic.is_monic()) throw InvalidArgument("companion matrix needs a monic polynomial");
    const auto n = static_cast<std::size_t>(monic.degree());
    RationalMatrix c = rational_zero(n, n);
    for (std::size_t i = 1; i < n; ++i) c(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i) c(i, n - 1) = -monic.coeffs[i];
    return c;
}

KernelResult<PadicScalar> eigen_line(const PadicMatrix& m, const PadicScalar& lambda) {
    if (!m.is_square()) throw NonSquare("eigen_line needs a square matrix");
    PadicMatrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= lambda;
    return kernel(shifted);
}

}  // namespace fphi
