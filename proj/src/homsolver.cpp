#include "fphi/homsolver.hpp"

namespace fphi {

namespace {

template <class T>
struct Kind;

template <>
struct Kind<Rational> {
    static Rational zero(const PadicContext&) { return 0; }
    static Rational one(const PadicContext&) { return 1; }
    static RationalMatrix convert(const RationalMatrix& m, const PadicContext&) { return m; }
    static RationalMatrix convert(const AnyMatrix& m, const PadicContext&) { return std::get<RationalMatrix>(m); }
};

template <>
struct Kind<PadicScalar> {
    static PadicScalar zero(const PadicContext& ctx) { return PadicScalar::zero(ctx); }
    static PadicScalar one(const PadicContext& ctx) { return PadicScalar::one(ctx); }
    static PadicMatrix convert(const RationalMatrix& m, const PadicContext& ctx) { return to_padic(m, ctx); }
    static PadicMatrix convert(const AnyMatrix& m, const PadicContext& ctx) { return to_padic(m, ctx); }
};

template <class T>
Matrix<T> identity_of(std::size_t n, const PadicContext& ctx) {
    return Matrix<T>::identity(n, Kind<T>::zero(ctx), Kind<T>::one(ctx));
}

template <class T>
MatrixKernel<T> solve_hom(const FilteredPhiModule& a, const FilteredPhiModule& b) {
    const PadicContext& ctx = a.context();
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    MatrixKernel<T> out;
    if (na == 0 || nb == 0) return out;

    const Matrix<T> phi_a = Kind<T>::convert(a.phi(), ctx);
    const Matrix<T> phi_b = Kind<T>::convert(b.phi(), ctx);
    const Matrix<T> ia = identity_of<T>(na, ctx);
    const Matrix<T> ib = identity_of<T>(nb, ctx);

    // Row-major vec: vec(X h Y) = (X (x) Y^T) vec(h).
    std::vector<Matrix<T>> blocks;
    blocks.push_back(kronecker(phi_b, ia) - kronecker(ib, transpose(phi_a)));

    const std::size_t ka = a.fil1_rank();
    const std::size_t kb = b.fil1_rank();
    if (ka > 0 && kb < nb) {
        const Matrix<T> c = Kind<T>::convert(a.fil1(), ctx);
        Matrix<T> q = ib;
        if (kb > 0) {
            const Matrix<T> fb = Kind<T>::convert(b.fil1(), ctx);
            q = Matrix<T>::from_rows(kernel(transpose(fb)).basis, Kind<T>::zero(ctx));
        }
        blocks.push_back(kronecker(q, transpose(c)));
    }

    const KernelResult<T> k = kernel(constraint_stack(blocks));
    out.dimension = k.dimension;
    out.precision_report = k.precision_report;
    for (const auto& v : k.basis) out.basis.push_back(reshape_row_major(v, nb, na));
    return out;
}

bool needs_padic(const FilteredPhiModule& a, const FilteredPhiModule& b) {
    return a.fil1_is_padic() || b.fil1_is_padic();
}

template <class T>
std::vector<std::vector<T>> flat_basis(const HomSpace& h) {
    std::vector<std::vector<T>> out;
    for (const auto& m : h.basis) out.push_back(std::get<Matrix<T>>(m).entries());
    return out;
}

template <class T>
void check_algebra(const HomSpace& h) {
    const PadicContext& ctx = h.source.context();
    const auto flat = flat_basis<T>(h);
    const std::size_t n = h.source.dim();
    if (n == 0) return;
    if (!solve_in_span(flat, identity_of<T>(n, ctx).entries())) {
        throw ClosureFailure("End does not contain the identity");
    }
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        for (std::size_t j = 0; j < h.basis.size(); ++j) {
            const Matrix<T> prod = std::get<Matrix<T>>(h.basis[i]) * std::get<Matrix<T>>(h.basis[j]);
            if (!solve_in_span(flat, prod.entries())) {
                throw ClosureFailure("End is not closed under composition (basis elements " +
                                     std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

template <class T>
std::size_t span_dimension(const std::vector<std::vector<T>>& vectors) {
    return canonical_basis(vectors).size();
}

template <class T>
EndClassification classify_impl(const FilteredPhiModule& m, const HomSpace& end) {
    const PadicContext& ctx = m.context();
    EndClassification out;
    out.total_dimension = end.dimension;
    std::vector<Matrix<T>> basis;
    for (const auto& b : end.basis) basis.push_back(std::get<Matrix<T>>(b));

    for (const auto& h : end.basis) {
        for (const auto& e : weight_block_structure(h, m, m)) {
            if (e.from_weight != e.to_weight && !e.zero) {
                throw UnclassifiedShape("End mixes weights " + std::to_string(e.from_weight) + " and " +
                                        std::to_string(e.to_weight));
            }
        }
    }

    const Matrix<T> fil = Kind<T>::convert(m.fil1(), ctx);
    std::size_t sum = 0;
    for (const auto& [block, off] : m.blocks()) {
        const std::size_t d = block.dim;
        std::vector<std::vector<T>> restricted;
        for (const auto& h : basis) restricted.push_back(submatrix(h, off, off, d, d).entries());
        const std::size_t r = span_dimension(restricted);
        sum += r;
        BlockClassification c{block.weight, d, r, BlockClass::ScalarOnly};

        auto unclassified = [&] {
            return UnclassifiedShape("weight " + std::to_string(block.weight) + " block of dimension " +
                                     std::to_string(d) + " has an End algebra of dimension " +
                                     std::to_string(r));
        };
        if (block.weight == 0 || block.weight == -2) {
            if (r != d * d) throw unclassified();
            c.tag = block.weight == 0 ? BlockClass::LatticeScalars : BlockClass::TorusScalars;
        } else {
            if (d != 2) throw unclassified();
            const Matrix<T> phi = Kind<T>::convert(submatrix(m.phi(), off, off, d, d), ctx);
            const Matrix<T> id = identity_of<T>(d, ctx);
            if (r == 1) {
                if (!solve_in_span(restricted, id.entries())) throw unclassified();
                c.tag = BlockClass::ScalarOnly;
            } else if (r == 2) {
                const bool phi_scalar = span_dimension(std::vector{phi.entries(), id.entries()}) < 2;
                if (phi_scalar || !solve_in_span(restricted, phi.entries())) throw unclassified();
                c.tag = BlockClass::PolynomialAlgebraOfPhi;
            } else if (r == 3) {
                // Upper triangular with respect to the Hodge line of the block.
                const Matrix<T> line = submatrix(fil, off, 0, d, fil.cols());
                if (fil.cols() == 0 || rank(line) != 1) throw unclassified();
                for (const auto& h : basis) {
                    const Matrix<T> hb = submatrix(h, off, off, d, d);
                    if (rank(hstack(line, hb * line)) != 1) throw unclassified();
                }
                c.tag = BlockClass::UpperTriangularFull;
            } else {
                throw unclassified();
            }
        }
        out.blocks.push_back(c);
    }
    if (sum != end.dimension) {
        throw UnclassifiedShape("block algebras have total dimension " + std::to_string(sum) +
                                " but End has dimension " + std::to_string(end.dimension));
    }
    return out;
}

}  // namespace

HomSpace hom_space(const FilteredPhiModule& a, const FilteredPhiModule& b) {
    if (a.context() != b.context()) throw ContextMismatch("hom_space between modules over different contexts");
    HomSpace out{a, b, 0, {}, std::nullopt};
    if (!needs_padic(a, b)) {
        auto k = solve_hom<Rational>(a, b);
        out.dimension = k.dimension;
        for (auto& m : k.basis) out.basis.emplace_back(std::move(m));
        return out;
    }
    auto k = solve_hom<PadicScalar>(a, b);
    const int n = a.context().precision();
    const auto again = solve_hom<PadicScalar>(a.at_precision(2 * n), b.at_precision(2 * n));
    if (again.dimension != k.dimension) {
        throw PrecisionExhausted("Hom dimension " + std::to_string(k.dimension) + " at precision " +
                                 std::to_string(n) + " but " + std::to_string(again.dimension) +
                                 " at precision " + std::to_string(2 * n));
    }
    out.dimension = k.dimension;
    out.precision_report = k.precision_report;
    for (auto& m : k.basis) out.basis.emplace_back(std::move(m));
    return out;
}

HomSpace end_algebra(const FilteredPhiModule& m) {
    HomSpace h = hom_space(m, m);
    if (m.fil1_is_padic()) {
        check_algebra<PadicScalar>(h);
    } else {
        check_algebra<Rational>(h);
    }
    return h;
}

std::string to_string(BlockClass c) {
    switch (c) {
        case BlockClass::LatticeScalars: return "lattice_scalars";
        case BlockClass::TorusScalars: return "torus_scalars";
        case BlockClass::PolynomialAlgebraOfPhi: return "polynomial_algebra_of_phi";
        case BlockClass::ScalarOnly: return "scalar_only";
        case BlockClass::UpperTriangularFull: return "upper_triangular_full";
    }
    return "";
}

std::string EndClassification::tag() const {
    std::string out;
    for (const auto& b : blocks) {
        if (!out.empty()) out += "+";
        out += to_string(b.tag);
    }
    return out.empty() ? "zero" : out;
}

std::optional<BlockClass> EndClassification::abelian_tag() const {
    std::optional<BlockClass> out;
    for (const auto& b : blocks) {
        if (b.weight != -1) continue;
        if (out) return std::nullopt;
        out = b.tag;
    }
    return out;
}

EndClassification classify_end(const FilteredPhiModule& m, const HomSpace& end) {
    if (!m.is_graded()) throw UnclassifiedShape("module has no weight grading");
    if (m.fil1_is_padic()) return classify_impl<PadicScalar>(m, end);
    return classify_impl<Rational>(m, end);
}

bool frobenius_membership(const FilteredPhiModule& m, const HomSpace& end) {
    if (m.dim() == 0) return true;
    if (m.fil1_is_padic()) {
        return solve_in_span(flat_basis<PadicScalar>(end), to_padic(m.phi(), m.context()).entries()).has_value();
    }
    return solve_in_span(flat_basis<Rational>(end), m.phi().entries()).has_value();
}

std::vector<WeightBlockEntry> weight_block_structure(const AnyMatrix& h, const FilteredPhiModule& source,
                                                     const FilteredPhiModule& target) {
    std::vector<WeightBlockEntry> out;
    if (!source.is_graded() || !target.is_graded()) return out;
    for (const auto& [tb, toff] : target.blocks()) {
        for (const auto& [sb, soff] : source.blocks()) {
            const bool zero = std::visit(
                [&](const auto& m) { return all_negligible(submatrix(m, toff, soff, tb.dim, sb.dim)); }, h);
            out.push_back({sb.weight, tb.weight, zero});
        }
    }
    return out;
}

}  // namespace fphi
