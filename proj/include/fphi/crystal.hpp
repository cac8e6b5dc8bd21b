#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fphi/linalg.hpp"

namespace fphi {

// One summand of the weight grading; blocks are stored in the order 0, -1, -2
// and aligned with the basis.
struct WeightBlock {
    int weight = 0;
    std::size_t dim = 0;
    bool operator==(const WeightBlock&) const = default;
};

// A finite-dimensional K0-space with a K0-linear Frobenius phi = F^f, an
// optional weight grading, and a Hodge subspace Fil^1 given by column
// generators. The Verschiebung is q * phi^-1 and is never stored.
class FilteredPhiModule {
public:
    using Rebuilder = std::function<FilteredPhiModule(const PadicContext&)>;

    // Validates: phi invertible; weights ordered 0, -1, -2 and summing to dim;
    // slope supports {0}, [0,1], {1} per weight; Fil^1 meets the weight-0 block
    // trivially. Fil^1 generators are replaced by a canonical basis of their span.
    static FilteredPhiModule graded(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                                    std::vector<WeightBlock> weights, std::string label,
                                    Rebuilder rebuild = {});
    // Weights left unresolved (extensions, raw test data).
    static FilteredPhiModule ungraded(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                                      std::string label, Rebuilder rebuild = {});
    static FilteredPhiModule zero(const PadicContext& ctx);

    const PadicContext& context() const { return ctx_; }
    std::size_t dim() const { return phi_.rows(); }
    const RationalMatrix& phi() const { return phi_; }
    const AnyMatrix& fil1() const { return fil1_; }
    std::size_t fil1_rank() const { return cols_of(fil1_); }
    bool fil1_is_padic() const { return is_padic(fil1_); }
    const std::vector<WeightBlock>& weights() const { return weights_; }
    bool is_graded() const { return graded_; }
    const std::string& label() const { return label_; }

    // Offset of each weight block in the basis, in storage order.
    std::vector<std::pair<WeightBlock, std::size_t>> blocks() const;

    // The same module re-derived at another working precision. Rational data is
    // precision independent; p-adic Hodge lines are recomputed when the module
    // knows how it was built.
    FilteredPhiModule at_precision(int precision) const;
    bool has_recipe() const { return static_cast<bool>(rebuild_); }

private:
    FilteredPhiModule(const PadicContext& ctx, RationalMatrix phi, AnyMatrix fil1,
                      std::vector<WeightBlock> weights, bool graded, std::string label,
                      Rebuilder rebuild);

    PadicContext ctx_;
    RationalMatrix phi_;
    AnyMatrix fil1_;
    std::vector<WeightBlock> weights_;
    bool graded_ = false;
    std::string label_;
    Rebuilder rebuild_;
};

enum class FilModeKind { Auto, Eigenline, Generic, Scalar, Jordan };

// How the Hodge line of an elliptic block is chosen.
struct EllipticFilMode {
    FilModeKind kind = FilModeKind::Auto;
    int root_index = 0;  // Eigenline only

    static EllipticFilMode parse(const std::string& text);
    std::string to_string() const;
    bool operator==(const EllipticFilMode&) const = default;
};

struct AbelianBlock {
    RationalMatrix phi;
    AnyMatrix fil1;
};

// Symbolic 1-motive up to isogeny: lattice rank, torus dimension, elliptic
// factors by Frobenius trace, explicit abelian blocks.
struct OneMotiveSpec {
    std::size_t lattice_rank = 0;
    std::size_t torus_dim = 0;
    std::vector<long> elliptic_traces;
    std::vector<AbelianBlock> abelian_explicit;
    std::optional<Rational> kummer_lambda;
    EllipticFilMode fil_mode;
};

FilteredPhiModule realize_lattice(std::size_t rank, const PadicContext& ctx);
FilteredPhiModule realize_torus(std::size_t dim, const PadicContext& ctx);
FilteredPhiModule realize_elliptic(long trace, EllipticFilMode mode, const PadicContext& ctx);
FilteredPhiModule realize_abelian(const AbelianBlock& block, const PadicContext& ctx);
FilteredPhiModule realize_one_motive(const OneMotiveSpec& spec, const PadicContext& ctx);

FilteredPhiModule direct_sum(const std::vector<FilteredPhiModule>& modules);
FilteredPhiModule dual(const FilteredPhiModule& m);

// phi = [[1, lambda], [0, q]], Fil^1 = span(e2), weights unresolved.
FilteredPhiModule extension_module(const Rational& lambda, const PadicContext& ctx);

struct SplitExtension {
    FilteredPhiModule module;
    // S with new phi = S * phi * S^-1 and new Fil^1 = S * Fil^1.
    RationalMatrix base_change;
};

// Block-diagonalize phi = [[A, L], [0, B]] (A of size upper_dim) by the
// unipotent change of basis [[I, C], [0, I]] where A C - C B = L. Raises
// NonSplitExtension when L is outside the image of the Sylvester operator.
SplitExtension split_extension(const FilteredPhiModule& m, std::size_t upper_dim);

std::vector<Rational> newton_slopes_of(const FilteredPhiModule& m);

struct HodgeNewton {
    long hodge = 0;      // rank Fil^1
    Rational newton = 0;  // v_p(det phi) / f
};
HodgeNewton hodge_newton_numbers(const FilteredPhiModule& m);

bool is_ordinary(long trace, const PadicContext& ctx);
bool satisfies_hasse(long trace, const PadicContext& ctx);
// lambda = t/2 when t^2 = 4q, otherwise nothing.
std::optional<Rational> scalar_frobenius_analysis(long trace, const PadicContext& ctx);
// Does T^2 - tT + q split over Q_p (discriminant a square)?
bool frobenius_splits(long trace, const PadicContext& ctx);
// The two roots of T^2 - tT + q in Q_p when they are distinct, in digit order
// (so the unit root comes first for ordinary traces).
std::optional<std::pair<PadicScalar, PadicScalar>> frobenius_roots(long trace, const PadicContext& ctx);

bool check_filtration_stability(const FilteredPhiModule& m);

}  // namespace fphi
