#include "fphi/crystal.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fphi {

namespace {

template <class T>
Matrix<T> canonical_columns(const Matrix<T>& gens) {
    std::vector<std::vector<T>> cols;
    for (std::size_t j = 0; j < gens.cols(); ++j) cols.push_back(gens.col(j));
    const auto basis = canonical_basis(cols);
    if (basis.empty()) return Matrix<T>(gens.rows(), 0, T());
    return column_matrix(basis, gens.rows(), T());
}

AnyMatrix canonical_fil(const AnyMatrix& fil) {
    return std::visit([](const auto& m) -> AnyMatrix { return canonical_columns(m); }, fil);
}

std::size_t any_rank(const AnyMatrix& m) {
    return std::visit([](const auto& x) -> std::size_t { return x.cols() == 0 ? 0 : rank(x); }, m);
}

AnyMatrix left_multiply(const RationalMatrix& s, const AnyMatrix& fil, const PadicContext& ctx) {
    if (const auto* r = std::get_if<RationalMatrix>(&fil)) return s * *r;
    return to_padic(s, ctx) * std::get<PadicMatrix>(fil);
}

AnyMatrix permute_rows_any(const AnyMatrix& fil, const std::vector<std::size_t>& perm) {
    return std::visit([&](const auto& m) -> AnyMatrix { return permute_rows(m, perm); }, fil);
}

AnyMatrix fil_rows(const AnyMatrix& fil, std::size_t r0, std::size_t nr) {
    return std::visit(
        [&](const auto& m) -> AnyMatrix { return submatrix(m, r0, 0, nr, m.cols()); }, fil);
}

// Block-diagonal Fil^1 generators; p-adic if either side is.
AnyMatrix fil_block_diagonal(const AnyMatrix& a, const AnyMatrix& b, const PadicContext& ctx) {
    if (!is_padic(a) && !is_padic(b)) {
        return block_diagonal(std::get<RationalMatrix>(a), std::get<RationalMatrix>(b), Rational(0));
    }
    return block_diagonal(to_padic(a, ctx), to_padic(b, ctx), PadicScalar::zero(ctx));
}

std::string join_labels(const std::vector<FilteredPhiModule>& modules) {
    std::string out;
    for (const auto& m : modules) {
        if (!out.empty()) out += " + ";
        out += m.label();
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

FilteredPhiModule::FilteredPhiModule(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                                     std::vector<WeightBlock> weights, bool graded, std::string label,
                                     Rebuilder rebuild)
    : ctx_(ctx),
      phi_(std::move(phi)),
      fil1_(std::move(fil1)),
      weights_(std::move(weights)),
      graded_(graded),
      label_(std::move(label)),
      rebuild_(std::move(rebuild)) {
    if (!phi_.is_square()) throw NonSquare("phi must be square");
    if (rows_of(fil1_) != phi_.rows()) throw InvalidArgument("Fil^1 generators have the wrong length");
    if (phi_.rows() > 0 && determinant(phi_) == 0) throw InvalidArgument("phi is not invertible");
    if (const auto* p = std::get_if<PadicMatrix>(&fil1_)) fil1_ = with_context(*p, ctx_);
    fil1_ = canonical_fil(fil1_);
}

FilteredPhiModule FilteredPhiModule::graded(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                                            std::vector<WeightBlock> weights, std::string label,
                                            Rebuilder rebuild) {
    FilteredPhiModule m(ctx, std::move(phi), std::move(fil1), {}, true, std::move(label), std::move(rebuild));
    std::size_t total = 0;
    int last = 1;
    for (const WeightBlock& b : weights) {
        if (b.weight != 0 && b.weight != -1 && b.weight != -2) {
            throw InvalidArgument("weights must be 0, -1 or -2");
        }
        if (b.weight >= last) throw InvalidArgument("weight blocks must appear in the order 0, -1, -2");
        if (b.dim == 0) throw InvalidArgument("weight blocks must be nonempty");
        last = b.weight;
        total += b.dim;
    }
    if (total != m.dim()) throw InvalidArgument("weight block dimensions do not sum to dim");
    m.weights_ = std::move(weights);

    for (const auto& [block, offset] : m.blocks()) {
        const auto slopes =
            newton_slopes(char_poly(submatrix(m.phi_, offset, offset, block.dim, block.dim)), ctx);
        for (const Rational& s : slopes) {
            const bool ok = block.weight == 0    ? s == 0
                            : block.weight == -2 ? s == 1
                                                 : (s >= 0 && s <= 1);
            if (!ok) {
                throw InvalidArgument("slope " + s.get_str() + " is not allowed in weight " +
                                      std::to_string(block.weight));
            }
        }
    }
    if (!m.weights_.empty() && m.weights_.front().weight == 0 && m.fil1_rank() > 0) {
        const std::size_t d0 = m.weights_.front().dim;
        if (any_rank(fil_rows(m.fil1_, d0, m.dim() - d0)) != m.fil1_rank()) {
            throw InvalidArgument("Fil^1 meets the weight-0 block");
        }
    }
    return m;
}

FilteredPhiModule FilteredPhiModule::ungraded(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                                              std::string label, Rebuilder rebuild) {
    return {ctx, std::move(phi), std::move(fil1), {}, false, std::move(label), std::move(rebuild)};
}

FilteredPhiModule FilteredPhiModule::zero(const PadicContext& ctx) {
    return graded(ctx, rational_zero(0, 0), rational_zero(0, 0), {}, "0",
                  [](const PadicContext& c) { return zero(c); });
}

std::vector<std::pair<WeightBlock, std::size_t>> FilteredPhiModule::blocks() const {
    std::vector<std::pair<WeightBlock, std::size_t>> out;
    std::size_t offset = 0;
    for (const WeightBlock& b : weights_) {
        out.emplace_back(b, offset);
        offset += b.dim;
    }
    return out;
}

FilteredPhiModule FilteredPhiModule::at_precision(int precision) const {
    const PadicContext target = ctx_.with_precision(precision);
    if (rebuild_) return rebuild_(target);
    FilteredPhiModule copy = *this;
    copy.ctx_ = target;
    if (const auto* p = std::get_if<PadicMatrix>(&fil1_)) copy.fil1_ = with_context(*p, target);
    return copy;
}

// ---------------------------------------------------------------------------

EllipticFilMode EllipticFilMode::parse(const std::string& text) {
    if (text == "auto") return {FilModeKind::Auto, 0};
    if (text == "generic") return {FilModeKind::Generic, 0};
    if (text == "scalar") return {FilModeKind::Scalar, 0};
    if (text == "jordan") return {FilModeKind::Jordan, 0};
    if (text.rfind("eigenline:", 0) == 0) {
        const std::string idx = text.substr(10);
        if (idx == "0" || idx == "1") return {FilModeKind::Eigenline, idx == "0" ? 0 : 1};
    }
    throw InvalidArgument("unknown Hodge line mode '" + text + "' (auto|generic|eigenline:0|eigenline:1|scalar|jordan)");
}

std::string EllipticFilMode::to_string() const {
    switch (kind) {
        case FilModeKind::Auto: return "auto";
        case FilModeKind::Generic: return "generic";
        case FilModeKind::Scalar: return "scalar";
        case FilModeKind::Jordan: return "jordan";
        case FilModeKind::Eigenline: return "eigenline:" + std::to_string(root_index);
    }
    return "auto";
}

// ---------------------------------------------------------------------------

bool is_ordinary(long trace, const PadicContext& ctx) { return trace % ctx.p() != 0; }

bool satisfies_hasse(long trace, const PadicContext& ctx) {
    return Integer(trace) * trace <= 4 * ctx.q();
}

std::optional<Rational> scalar_frobenius_analysis(long trace, const PadicContext& ctx) {
    if (Integer(trace) * trace != 4 * ctx.q()) return std::nullopt;
    Rational lambda(Integer(trace), Integer(2));
    lambda.canonicalize();
    return lambda;
}

bool frobenius_splits(long trace, const PadicContext& ctx) {
    const Rational disc = Rational(Integer(trace) * trace - 4 * ctx.q());
    return padic_sqrt(disc, ctx).has_value();
}

std::optional<std::pair<PadicScalar, PadicScalar>> frobenius_roots(long trace, const PadicContext& ctx) {
    const Integer disc = Integer(trace) * trace - 4 * ctx.q();
    if (disc == 0) return std::nullopt;
    PadicScalar r1;
    PadicScalar r2;
    if (is_ordinary(trace, ctx)) {
        const Polynomial chi({Rational(ctx.q()), Rational(-trace), Rational(1)});
        r1 = hensel_lift_root(chi, Integer(trace), ctx);
        r2 = PadicScalar::from_rational(Rational(ctx.q()), ctx) / r1;
    } else {
        const auto s = padic_sqrt(Rational(disc), ctx);
        if (!s) return std::nullopt;
        const PadicScalar t = PadicScalar::from_rational(trace, ctx);
        const PadicScalar half = PadicScalar::from_rational(Rational(1, 2), ctx);
        r1 = (t + *s) * half;
        r2 = (t - *s) * half;
    }
    if (r2.digit_order(r1) < 0) std::swap(r1, r2);
    return std::make_pair(r1, r2);
}

// ---------------------------------------------------------------------------

FilteredPhiModule realize_lattice(std::size_t rank, const PadicContext& ctx) {
    std::vector<WeightBlock> w;
    if (rank > 0) w.push_back({0, rank});
    return FilteredPhiModule::graded(ctx, rational_identity(rank), rational_zero(rank, 0), w,
                                     "lattice(" + std::to_string(rank) + ")",
                                     [rank](const PadicContext& c) { return realize_lattice(rank, c); });
}

FilteredPhiModule realize_torus(std::size_t dim, const PadicContext& ctx) {
    std::vector<WeightBlock> w;
    if (dim > 0) w.push_back({-2, dim});
    return FilteredPhiModule::graded(ctx, scaled(rational_identity(dim), Rational(ctx.q())),
                                     rational_identity(dim), w, "torus(" + std::to_string(dim) + ")",
                                     [dim](const PadicContext& c) { return realize_torus(dim, c); });
}

FilteredPhiModule realize_elliptic(long trace, EllipticFilMode mode, const PadicContext& ctx) {
    if (!satisfies_hasse(trace, ctx)) {
        throw HasseViolation("trace " + std::to_string(trace) + " violates the Hasse bound: t^2 = " +
                             Integer(Integer(trace) * trace).get_str() + " > 4q = " + Integer(4 * ctx.q()).get_str());
    }
    const bool repeated = Integer(trace) * trace == 4 * ctx.q();
    const Polynomial chi({Rational(ctx.q()), Rational(-trace), Rational(1)});
    const RationalMatrix e1 = rational_matrix({{1}, {0}});

    RationalMatrix phi = companion(chi);
    AnyMatrix fil = e1;
    std::string how = mode.to_string();

    auto eigenline = [&](const PadicScalar& lambda) -> AnyMatrix {
        const KernelResult<PadicScalar> line = eigen_line(to_padic(phi, ctx), lambda);
        if (line.dimension != 1) {
            throw PrecisionExhausted("eigenline for trace " + std::to_string(trace) + " has dimension " +
                                     std::to_string(line.dimension));
        }
        return column_matrix(line.basis, 2, PadicScalar::zero(ctx));
    };

    switch (mode.kind) {
        case FilModeKind::Scalar:
        case FilModeKind::Jordan: {
            if (!repeated) {
                throw ModeMismatch("mode " + mode.to_string() + " needs t^2 = 4q (trace " +
                                   std::to_string(trace) + ")");
            }
            const Rational lambda = *scalar_frobenius_analysis(trace, ctx);
            phi = scaled(rational_identity(2), lambda);
            if (mode.kind == FilModeKind::Jordan) phi(0, 1) = 1;
            break;
        }
        case FilModeKind::Generic:
            break;
        case FilModeKind::Eigenline: {
            const auto roots = frobenius_roots(trace, ctx);
            if (!roots) {
                throw ModeMismatch("T^2 - " + std::to_string(trace) + "T + q has no two distinct roots in Q_p");
            }
            fil = eigenline(mode.root_index == 0 ? roots->first : roots->second);
            break;
        }
        case FilModeKind::Auto: {
            if (repeated) {
                how = "auto:generic";
            } else if (is_ordinary(trace, ctx)) {
                // Hodge line = slope-1 line, eigenvalue q/u for the unit root u.
                const PadicScalar u = hensel_lift_root(chi, Integer(trace), ctx);
                fil = eigenline(PadicScalar::from_rational(Rational(ctx.q()), ctx) / u);
                how = "auto:ordinary";
            } else if (const auto roots = frobenius_roots(trace, ctx)) {
                fil = eigenline(roots->first);
                how = "auto:eigenline:0";
            } else {
                how = "auto:generic";
            }
            break;
        }
    }
    return FilteredPhiModule::graded(
        ctx, std::move(phi), std::move(fil), {{-1, 2}},
        "elliptic(t=" + std::to_string(trace) + "," + how + ")",
        [trace, mode](const PadicContext& c) { return realize_elliptic(trace, mode, c); });
}

FilteredPhiModule realize_abelian(const AbelianBlock& block, const PadicContext& ctx) {
    std::vector<WeightBlock> w;
    if (block.phi.rows() > 0) w.push_back({-1, block.phi.rows()});
    return FilteredPhiModule::graded(ctx, block.phi, block.fil1, w, "abelian(dim=" + std::to_string(block.phi.rows()) + ")");
}

FilteredPhiModule realize_one_motive(const OneMotiveSpec& spec, const PadicContext& ctx) {
    for (long t : spec.elliptic_traces) {
        if (!satisfies_hasse(t, ctx)) {
            throw HasseViolation("trace " + std::to_string(t) + " violates the Hasse bound: t^2 = " +
                                 Integer(Integer(t) * t).get_str() + " > 4q = " + Integer(4 * ctx.q()).get_str());
        }
    }
    if (spec.kummer_lambda) {
        if (spec.lattice_rank != 1 || spec.torus_dim != 1 || !spec.elliptic_traces.empty() ||
            !spec.abelian_explicit.empty()) {
            throw InvalidArgument("an extension scalar needs exactly lattice rank 1 and torus dimension 1");
        }
        return extension_module(*spec.kummer_lambda, ctx);
    }
    std::vector<FilteredPhiModule> parts;
    if (spec.lattice_rank > 0) parts.push_back(realize_lattice(spec.lattice_rank, ctx));
    for (long t : spec.elliptic_traces) parts.push_back(realize_elliptic(t, spec.fil_mode, ctx));
    for (const auto& a : spec.abelian_explicit) parts.push_back(realize_abelian(a, ctx));
    if (spec.torus_dim > 0) parts.push_back(realize_torus(spec.torus_dim, ctx));
    if (parts.empty()) return FilteredPhiModule::zero(ctx);
    return direct_sum(parts);
}

FilteredPhiModule direct_sum(const std::vector<FilteredPhiModule>& modules) {
    if (modules.empty()) throw InvalidArgument("direct sum of an empty list");
    const PadicContext& ctx = modules.front().context();
    for (const auto& m : modules) {
        if (m.context() != ctx) throw ContextMismatch("direct sum of modules over different contexts");
    }
    if (modules.size() == 1) return modules.front();

    RationalMatrix phi = modules.front().phi();
    AnyMatrix fil = modules.front().fil1();
    bool graded = modules.front().is_graded();
    for (std::size_t i = 1; i < modules.size(); ++i) {
        phi = block_diagonal(phi, modules[i].phi(), Rational(0));
        fil = fil_block_diagonal(fil, modules[i].fil1(), ctx);
        graded = graded && modules[i].is_graded();
    }

    const bool all_recipes = std::all_of(modules.begin(), modules.end(),
                                         [](const FilteredPhiModule& m) { return m.has_recipe(); });
    FilteredPhiModule::Rebuilder rebuild;
    if (all_recipes) {
        rebuild = [modules](const PadicContext& c) {
            std::vector<FilteredPhiModule> again;
            for (const auto& m : modules) again.push_back(m.at_precision(c.precision()));
            return direct_sum(again);
        };
    }
    const std::string label = join_labels(modules);
    if (!graded) return FilteredPhiModule::ungraded(ctx, std::move(phi), std::move(fil), label, rebuild);

    // Regroup the basis by weight, stable within each weight.
    std::vector<std::size_t> perm;
    std::vector<WeightBlock> weights;
    for (int w : {0, -1, -2}) {
        std::size_t offset = 0;
        std::size_t count = 0;
        for (const auto& m : modules) {
            for (const auto& [block, off] : m.blocks()) {
                if (block.weight != w) continue;
                for (std::size_t k = 0; k < block.dim; ++k) perm.push_back(offset + off + k);
                count += block.dim;
            }
            offset += m.dim();
        }
        if (count > 0) weights.push_back({w, count});
    }
    return FilteredPhiModule::graded(ctx, permute_square(phi, perm), permute_rows_any(fil, perm),
                                     std::move(weights), label, rebuild);
}

FilteredPhiModule dual(const FilteredPhiModule& m) {
    const PadicContext& ctx = m.context();
    const std::size_t n = m.dim();
    if (n == 0) return m;
    RationalMatrix phi = scaled(transpose(inverse(m.phi())), Rational(ctx.q()));

    // Annihilator of Fil^1 in the dual space.
    AnyMatrix fil = rational_identity(n);
    if (m.fil1_rank() > 0) {
        fil = std::visit(
            [n](const auto& f) -> AnyMatrix {
                using T = std::decay_t<decltype(f(0, 0))>;
                const auto k = kernel(transpose(f));
                if (k.basis.empty()) return Matrix<T>(n, 0, T());
                return column_matrix(k.basis, n, T());
            },
            m.fil1());
    }

    FilteredPhiModule::Rebuilder rebuild;
    if (m.has_recipe()) {
        rebuild = [m](const PadicContext& c) { return dual(m.at_precision(c.precision())); };
    }
    const std::string label = "dual(" + m.label() + ")";
    if (!m.is_graded()) return FilteredPhiModule::ungraded(ctx, std::move(phi), std::move(fil), label, rebuild);

    // Weight w becomes -2 - w; reversing the blocks restores the 0, -1, -2 order.
    std::vector<std::size_t> perm;
    std::vector<WeightBlock> weights;
    const auto blocks = m.blocks();
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        for (std::size_t k = 0; k < it->first.dim; ++k) perm.push_back(it->second + k);
        weights.push_back({-2 - it->first.weight, it->first.dim});
    }
    return FilteredPhiModule::graded(ctx, permute_square(phi, perm), permute_rows_any(fil, perm),
                                     std::move(weights), label, rebuild);
}

FilteredPhiModule extension_module(const Rational& lambda, const PadicContext& ctx) {
    RationalMatrix phi = rational_zero(2, 2);
    phi(0, 0) = 1;
    phi(0, 1) = lambda;
    phi(1, 1) = Rational(ctx.q());
    return FilteredPhiModule::ungraded(ctx, std::move(phi), rational_matrix({{0}, {1}}),
                                       "extension(lambda=" + lambda.get_str() + ")",
                                       [lambda](const PadicContext& c) { return extension_module(lambda, c); });
}

SplitExtension split_extension(const FilteredPhiModule& m, std::size_t upper_dim) {
    const std::size_t n = m.dim();
    if (upper_dim == 0 || upper_dim >= n) throw InvalidArgument("split_extension needs two nonempty blocks");
    const std::size_t k = upper_dim;
    const std::size_t l = n - k;
    const RationalMatrix& phi = m.phi();
    if (!all_negligible(submatrix(phi, k, 0, l, k))) {
        throw InvalidArgument("phi is not block upper triangular for the given split");
    }
    const RationalMatrix a = submatrix(phi, 0, 0, k, k);
    const RationalMatrix b = submatrix(phi, k, k, l, l);
    const RationalMatrix corner = submatrix(phi, 0, k, k, l);

    // A C - C B = corner, unknown C in row-major order.
    const RationalMatrix system =
        kronecker(a, rational_identity(l)) - kronecker(rational_identity(k), transpose(b));
    std::vector<std::vector<Rational>> columns;
    for (std::size_t j = 0; j < system.cols(); ++j) columns.push_back(system.col(j));
    const auto solution = solve_in_span(columns, corner.entries());
    if (!solution) {
        throw NonSplitExtension("the extension class lies outside the image of X -> AX - XB; spectra of the blocks meet");
    }
    const RationalMatrix c = reshape_row_major(*solution, k, l);

    RationalMatrix s = rational_identity(n);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < l; ++j) s(i, k + j) = c(i, j);
    }
    RationalMatrix new_phi = s * phi * inverse(s);
    if (!all_negligible(submatrix(new_phi, 0, k, k, l))) {
        throw NonSplitExtension("conjugation failed to clear the off-diagonal block");
    }
    AnyMatrix new_fil = left_multiply(s, m.fil1(), m.context());

    // Assign each block a weight from its slopes, then order the basis 0, -1, -2.
    auto weight_of = [&](const RationalMatrix& block) {
        const auto slopes = newton_slopes(char_poly(block), m.context());
        if (std::all_of(slopes.begin(), slopes.end(), [](const Rational& x) { return x == 0; })) return 0;
        if (std::all_of(slopes.begin(), slopes.end(), [](const Rational& x) { return x == 1; })) return -2;
        return -1;
    };
    std::vector<int> basis_weight(n);
    const int wa = weight_of(a);
    const int wb = weight_of(b);
    for (std::size_t i = 0; i < n; ++i) basis_weight[i] = i < k ? wa : wb;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t x, std::size_t y) { return basis_weight[x] > basis_weight[y]; });
    std::vector<WeightBlock> weights;
    for (std::size_t idx : perm) {
        const int w = basis_weight[idx];
        if (weights.empty() || weights.back().weight != w) weights.push_back({w, 0});
        ++weights.back().dim;
    }
    RationalMatrix p = rational_zero(n, n);
    for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = 1;

    FilteredPhiModule::Rebuilder rebuild;
    if (m.has_recipe()) {
        rebuild = [m, upper_dim](const PadicContext& ctx) {
            return split_extension(m.at_precision(ctx.precision()), upper_dim).module;
        };
    }
    FilteredPhiModule graded = FilteredPhiModule::graded(
        m.context(), permute_square(new_phi, perm), permute_rows_any(new_fil, perm), std::move(weights),
        "split(" + m.label() + ")", rebuild);
    return {std::move(graded), p * s};
}

// ---------------------------------------------------------------------------

std::vector<Rational> newton_slopes_of(const FilteredPhiModule& m) {
    if (m.dim() == 0) return {};
    return newton_slopes(char_poly(m.phi()), m.context());
}

HodgeNewton hodge_newton_numbers(const FilteredPhiModule& m) {
    HodgeNewton out;
    out.hodge = static_cast<long>(m.fil1_rank());
    if (m.dim() == 0) return out;
    const Rational det = determinant(m.phi());
    out.newton = Rational(*valuation(det, m.context().p()), m.context().f());
    out.newton.canonicalize();
    return out;
}

bool check_filtration_stability(const FilteredPhiModule& m) {
    const std::size_t k = m.fil1_rank();
    if (k == 0 || k == m.dim()) return true;
    return std::visit(
        [&](const auto& fil) {
            using T = std::decay_t<decltype(fil(0, 0))>;
            Matrix<T> phi;
            if constexpr (std::is_same_v<T, Rational>) {
                phi = m.phi();
            } else {
                phi = to_padic(m.phi(), m.context());
            }
            return rank(hstack(fil, phi * fil)) == k;
        },
        m.fil1());
}

}  // namespace fphi
