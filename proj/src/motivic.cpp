#include "fphi/motivic.hpp"

#include <algorithm>

namespace fphi {

MotivicComplex::MotivicComplex(std::vector<Summand> summands) : summands_(std::move(summands)) {
    for (std::size_t i = 1; i < summands_.size(); ++i) {
        if (summands_[i].module.context() != summands_.front().module.context()) {
            throw ContextMismatch("complex summands live over different contexts");
        }
    }
    std::stable_sort(summands_.begin(), summands_.end(), [](const Summand& a, const Summand& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.module.label() < b.module.label();
    });
}

MotivicComplex MotivicComplex::shifted(int n) const {
    std::vector<Summand> out = summands_;
    for (Summand& s : out) s.degree += n;
    return MotivicComplex(std::move(out));
}

MotivicComplex MotivicComplex::operator+(const MotivicComplex& other) const {
    std::vector<Summand> out = summands_;
    out.insert(out.end(), other.summands_.begin(), other.summands_.end());
    return MotivicComplex(std::move(out));
}

MotivicComplex shift(const MotivicComplex& x, int n) { return x.shifted(n); }

HomComplexResult hom_complex(const MotivicComplex& x, const MotivicComplex& y) {
    if (!x.empty() && !y.empty() && x.summands().front().module.context() != y.summands().front().module.context()) {
        throw ContextMismatch("hom_complex between complexes over different contexts");
    }
    HomComplexResult out;
    for (std::size_t i = 0; i < x.summands().size(); ++i) {
        for (std::size_t j = 0; j < y.summands().size(); ++j) {
            const Summand& a = x.summands()[i];
            const Summand& b = y.summands()[j];
            if (a.degree != b.degree) continue;
            HomSpace h = hom_space(a.module, b.module);
            out.dimension += h.dimension;
            out.parts.push_back({a.degree, i, j, std::move(h)});
        }
    }
    return out;
}

MotivicComplex realize_motive(const OneMotiveSpec& spec, const PadicContext& ctx) {
    FilteredPhiModule m = realize_one_motive(spec, ctx);
    if (m.dim() == 0) return {};
    return MotivicComplex({{std::move(m), 0}});
}

}  // namespace fphi
