#pragma once

#include <string>
#include <vector>

#include "fphi/homsolver.hpp"

namespace fphi {

struct Summand {
    FilteredPhiModule module;
    int degree = 0;
};

// Formal finite sum of shifted modules. No differentials: bounded complexes in
// the semisimple image are sums of their shifted cohomology.
class MotivicComplex {
public:
    MotivicComplex() = default;
    explicit MotivicComplex(std::vector<Summand> summands);

    const std::vector<Summand>& summands() const { return summands_; }
    bool empty() const { return summands_.empty(); }

    MotivicComplex shifted(int n) const;
    // Concatenated summand lists.
    MotivicComplex operator+(const MotivicComplex& other) const;

private:
    std::vector<Summand> summands_;  // sorted by (degree, label)
};

MotivicComplex shift(const MotivicComplex& x, int n);

struct DegreeHom {
    int degree = 0;
    std::size_t source_index = 0;
    std::size_t target_index = 0;
    HomSpace hom;
};

struct HomComplexResult {
    std::size_t dimension = 0;
    std::vector<DegreeHom> parts;
};

// Maps X -> Y: sum over same-degree summand pairs of hom_space; pairs in
// different degrees contribute nothing.
HomComplexResult hom_complex(const MotivicComplex& x, const MotivicComplex& y);

// The motive's module in degree 0; empty complex for the zero module.
MotivicComplex realize_motive(const OneMotiveSpec& spec, const PadicContext& ctx);

}  // namespace fphi
