#include "fphi/serialize.hpp"

namespace fphi {

Json to_json(const Rational& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
    if (!j.is_string()) throw InvalidArgument("expected a rational string, got " + j.dump());
    Rational r;
    if (r.set_str(j.get<std::string>(), 10) != 0 || r.get_den() == 0) {
        throw InvalidArgument("malformed rational '" + j.get<std::string>() + "'");
    }
    r.canonicalize();
    return r;
}

Json to_json(const PadicScalar& x) {
    Json j;
    if (x.is_exact_zero()) {
        j["v"] = "inf";
        j["unit"] = "0";
        return j;
    }
    if (x.is_inexact_zero()) {
        j["v"] = x.absolute_precision();
        j["unit"] = "0";
        j["digits"] = 0;
        return j;
    }
    j["v"] = x.guaranteed_valuation();
    j["unit"] = x.unit().get_str();
    if (x.digits() != x.context().precision()) j["digits"] = x.digits();
    return j;
}

PadicScalar padic_from_json(const Json& j, const PadicContext& ctx) {
    if (!j.is_object() || !j.contains("v") || !j.contains("unit")) {
        throw InvalidArgument("p-adic scalar needs keys v and unit: " + j.dump());
    }
    if (j["v"].is_string()) {
        if (j["v"].get<std::string>() != "inf") throw InvalidArgument("v must be an integer or \"inf\"");
        return PadicScalar::zero(ctx);
    }
    const long v = j["v"].get<long>();
    const Integer unit(j["unit"].get<std::string>());
    const int digits = j.contains("digits") ? j["digits"].get<int>() : ctx.precision();
    if (unit == 0) {
        if (digits != 0) throw InvalidArgument("a finite valuation needs a nonzero unit");
        return PadicScalar::inexact_zero(v, ctx);
    }
    return PadicScalar::from_parts(v, unit, digits, ctx);
}

namespace {

template <class M>
Json matrix_json(const M& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    Json entries = Json::array();
    for (const auto& x : m.entries()) entries.push_back(to_json(x));
    j["entries"] = entries;
    return j;
}

}  // namespace

Json to_json(const RationalMatrix& m) { return matrix_json(m); }
Json to_json(const PadicMatrix& m) { return matrix_json(m); }
Json to_json(const AnyMatrix& m) {
    return std::visit([](const auto& x) { return to_json(x); }, m);
}

AnyMatrix matrix_from_json(const Json& j, const PadicContext& ctx) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
        throw InvalidArgument("matrix needs keys rows, cols, entries");
    }
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    const Json& e = j["entries"];
    if (!e.is_array() || e.size() != rows * cols) throw InvalidArgument("matrix entry count does not match shape");
    const bool padic = !e.empty() && e.front().is_object();
    if (!padic) {
        RationalMatrix m(rows, cols, Rational(0));
        for (std::size_t k = 0; k < e.size(); ++k) m(k / cols, k % cols) = rational_from_json(e[k]);
        return m;
    }
    PadicMatrix m(rows, cols, PadicScalar::zero(ctx));
    for (std::size_t k = 0; k < e.size(); ++k) m(k / cols, k % cols) = padic_from_json(e[k], ctx);
    return m;
}

Json to_json(const PadicContext& ctx) {
    Json j;
    j["p"] = ctx.p();
    j["f"] = ctx.f();
    j["precision"] = ctx.precision();
    return j;
}

PadicContext context_from_json(const Json& j) {
    return {j.at("p").get<long>(), j.at("f").get<int>(), j.value("precision", kDefaultPrecision)};
}

Json to_json(const FilteredPhiModule& m) {
    Json j;
    j["ctx"] = to_json(m.context());
    j["dim"] = m.dim();
    j["phi"] = to_json(m.phi());
    if (m.is_graded()) {
        Json w = Json::array();
        for (const auto& b : m.weights()) w.push_back(Json::array({b.weight, b.dim}));
        j["weights"] = w;
    } else {
        j["weights"] = nullptr;
    }
    j["fil1"] = to_json(m.fil1());
    j["label"] = m.label();
    return j;
}

FilteredPhiModule module_from_json(const Json& j) {
    const PadicContext ctx = context_from_json(j.at("ctx"));
    const AnyMatrix phi = matrix_from_json(j.at("phi"), ctx);
    if (is_padic(phi)) throw InvalidArgument("phi must have rational entries");
    AnyMatrix fil = matrix_from_json(j.at("fil1"), ctx);
    const std::string label = j.value("label", "");
    const auto& w = j.at("weights");
    if (w.is_null()) return FilteredPhiModule::ungraded(ctx, std::get<RationalMatrix>(phi), std::move(fil), label);
    std::vector<WeightBlock> weights;
    for (const auto& b : w) weights.push_back({b.at(0).get<int>(), b.at(1).get<std::size_t>()});
    return FilteredPhiModule::graded(ctx, std::get<RationalMatrix>(phi), std::move(fil), std::move(weights), label);
}

Json to_json(const HomSpace& h, const std::optional<std::string>& classification) {
    Json j;
    j["dimension"] = h.dimension;
    Json basis = Json::array();
    for (const auto& b : h.basis) basis.push_back(to_json(b));
    j["basis"] = basis;
    j["classification"] = classification ? Json(*classification) : Json(nullptr);
    j["precision_report"] = h.precision_report ? Json(*h.precision_report) : Json(nullptr);
    return j;
}

Json to_json(const MotivicComplex& x) {
    Json summands = Json::array();
    for (const auto& s : x.summands()) {
        Json e;
        e["degree"] = s.degree;
        e["module"] = to_json(s.module);
        summands.push_back(e);
    }
    Json j;
    j["summands"] = summands;
    return j;
}

OneMotiveSpec spec_from_json(const Json& j, const PadicContext& ctx) {
    if (!j.is_object()) throw InvalidArgument("spec must be a JSON object");
    OneMotiveSpec spec;
    const long lattice = j.value("lattice_rank", 0L);
    const long torus = j.value("torus_dim", 0L);
    if (lattice < 0 || torus < 0) throw InvalidArgument("lattice_rank and torus_dim must be non-negative");
    spec.lattice_rank = static_cast<std::size_t>(lattice);
    spec.torus_dim = static_cast<std::size_t>(torus);
    if (j.contains("elliptic_traces")) spec.elliptic_traces = j["elliptic_traces"].get<std::vector<long>>();
    if (j.contains("abelian")) {
        for (const auto& a : j["abelian"]) {
            const AnyMatrix phi = matrix_from_json(a.at("phi"), ctx);
            if (is_padic(phi)) throw InvalidArgument("abelian phi must have rational entries");
            spec.abelian_explicit.push_back({std::get<RationalMatrix>(phi), matrix_from_json(a.at("fil1"), ctx)});
        }
    }
    if (j.contains("kummer_lambda") && !j["kummer_lambda"].is_null()) {
        spec.kummer_lambda = rational_from_json(j["kummer_lambda"]);
    }
    if (j.contains("fil_mode")) spec.fil_mode = EllipticFilMode::parse(j["fil_mode"].get<std::string>());
    return spec;
}

}  // namespace fphi
