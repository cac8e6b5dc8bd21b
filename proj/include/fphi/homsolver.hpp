#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fphi/crystal.hpp"

namespace fphi {

// Maps source -> target in the filtered phi-module category. Basis elements are
// (target.dim x source.dim) matrices in canonical order (reduced echelon over
// the row-major enumeration of entries).
struct HomSpace {
    FilteredPhiModule source;
    FilteredPhiModule target;
    std::size_t dimension = 0;
    std::vector<AnyMatrix> basis;
    std::optional<int> precision_report;

    bool is_padic() const { return !basis.empty() && fphi::is_padic(basis.front()); }
};

// Solves  phi_B h - h phi_A = 0  and  Q h C = 0  (C = Fil^1(A) generators, rows
// of Q cut out Fil^1(B)) for h : A -> B. P-adic systems are solved at the
// working precision N and again at 2N; differing dimensions raise
// PrecisionExhausted.
HomSpace hom_space(const FilteredPhiModule& a, const FilteredPhiModule& b);

// hom_space(M, M) after checking that the span contains I and is closed under
// composition (ClosureFailure otherwise).
HomSpace end_algebra(const FilteredPhiModule& m);

enum class BlockClass { LatticeScalars, TorusScalars, PolynomialAlgebraOfPhi, ScalarOnly, UpperTriangularFull };
std::string to_string(BlockClass c);

struct BlockClassification {
    int weight = 0;
    std::size_t block_dim = 0;
    std::size_t algebra_dim = 0;
    BlockClass tag = BlockClass::ScalarOnly;
};

struct EndClassification {
    std::vector<BlockClassification> blocks;
    std::size_t total_dimension = 0;

    // "lattice_scalars+polynomial_algebra_of_phi" style summary.
    std::string tag() const;
    // Tag of the weight -1 block, if there is exactly one.
    std::optional<BlockClass> abelian_tag() const;
};

// Matches each weight block of End(M) against the known shapes. The basis must
// be block diagonal and the block algebras must account for the whole
// dimension; anything else raises UnclassifiedShape.
EndClassification classify_end(const FilteredPhiModule& m, const HomSpace& end);

// Is phi_M in the span of the End basis?
bool frobenius_membership(const FilteredPhiModule& m, const HomSpace& end);

struct WeightBlockEntry {
    int from_weight = 0;
    int to_weight = 0;
    bool zero = true;
};

// Zero / nonzero pattern of h between the weight blocks of source and target.
// Empty when either module is ungraded.
std::vector<WeightBlockEntry> weight_block_structure(const AnyMatrix& h, const FilteredPhiModule& source,
                                                     const FilteredPhiModule& target);

}  // namespace fphi
