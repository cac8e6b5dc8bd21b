#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fphi/motivic.hpp"

namespace fphi {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& x);
Rational rational_from_json(const Json& j);

// {"v": int | "inf", "unit": "decimal"}; "digits" only when it differs from the
// working precision. O(p^a) is written as v = a, unit "0", digits 0.
Json to_json(const PadicScalar& x);
PadicScalar padic_from_json(const Json& j, const PadicContext& ctx);

// {"rows", "cols", "entries"} with row-major entries; rationals as "num/den".
Json to_json(const RationalMatrix& m);
Json to_json(const PadicMatrix& m);
Json to_json(const AnyMatrix& m);
// Entry strings give a rational matrix, entry objects a p-adic one.
AnyMatrix matrix_from_json(const Json& j, const PadicContext& ctx);

Json to_json(const PadicContext& ctx);
PadicContext context_from_json(const Json& j);

// "weights" is null for a module without a weight grading.
Json to_json(const FilteredPhiModule& m);
FilteredPhiModule module_from_json(const Json& j);

Json to_json(const HomSpace& h, const std::optional<std::string>& classification = std::nullopt);
Json to_json(const MotivicComplex& x);

// {"lattice_rank", "torus_dim", "elliptic_traces", "abelian": [{"phi", "fil1"}],
//  "kummer_lambda", "fil_mode"}; every key optional.
OneMotiveSpec spec_from_json(const Json& j, const PadicContext& ctx);

}  // namespace fphi
