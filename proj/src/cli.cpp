#include "fphi/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

namespace fphi {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

long parse_long(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument(what + " '" + s + "' is not an integer");
    }
    if (used != s.size()) throw InvalidArgument(what + " '" + s + "' is not an integer");
    return v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
    const long v = parse_long(s, what);
    if (v < 0) throw InvalidArgument(what + " must be non-negative");
    return static_cast<std::size_t>(v);
}

std::string slopes_string(const std::vector<Rational>& slopes) {
    std::string out = "{";
    for (std::size_t i = 0; i < slopes.size(); ++i) out += (i ? "," : "") + slopes[i].get_str();
    return out + "}";
}

std::string weights_string(const FilteredPhiModule& m) {
    if (!m.is_graded()) return "ungraded";
    std::string out;
    for (const auto& b : m.weights()) out += (out.empty() ? "" : " ") + std::to_string(b.weight) + ":" + std::to_string(b.dim);
    return out.empty() ? "-" : out;
}

std::string matrix_string(const AnyMatrix& m) {
    return std::visit([](const auto& x) { return to_string(x); }, m);
}

std::optional<std::string> classification_of(const FilteredPhiModule& m, const HomSpace& end) {
    try {
        return classify_end(m, end).tag();
    } catch (const UnclassifiedShape&) {
        return "unclassified";
    }
}

struct Common {
    long p = 0;
    int f = 1;
    int prec = kDefaultPrecision;
    std::string format;

    PadicContext context() const { return {p, f, prec}; }
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
    c.format = default_format;
    cmd->add_option("--p", c.p, "prime p")->required();
    cmd->add_option("--f", c.f, "q = p^f")->capture_default_str();
    cmd->add_option("--prec", c.prec, "p-adic working precision N (structural answers are re-checked at 2N)")
        ->capture_default_str();
    cmd->add_option("--format", c.format, "json or table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();
}

struct InlineMotive {
    std::size_t lattice = 0;
    std::size_t torus = 0;
    std::string elliptic;
    std::string lambda;
    std::string fil_mode = "auto";
    std::string spec_file;
};

void add_motive(CLI::App* cmd, InlineMotive& m) {
    cmd->add_option("--lattice", m.lattice, "lattice rank");
    cmd->add_option("--torus", m.torus, "torus dimension");
    cmd->add_option("--elliptic", m.elliptic, "elliptic Frobenius traces, comma separated");
    cmd->add_option("--lambda", m.lambda, "extension scalar (needs --lattice 1 --torus 1)");
    cmd->add_option("--fil-mode", m.fil_mode, "auto|generic|eigenline:0|eigenline:1|scalar|jordan")
        ->capture_default_str();
    cmd->add_option("--spec", m.spec_file, "JSON spec file (overrides inline flags)");
}

OneMotiveSpec motive_spec(const InlineMotive& m, const PadicContext& ctx) {
    const EllipticFilMode mode = EllipticFilMode::parse(m.fil_mode);
    if (!m.spec_file.empty()) {
        std::ifstream in(m.spec_file);
        if (!in) throw InvalidArgument("cannot read spec file " + m.spec_file);
        Json j;
        try {
            j = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw InvalidArgument("spec file is not valid JSON: " + std::string(e.what()));
        }
        OneMotiveSpec spec = spec_from_json(j, ctx);
        if (!j.contains("fil_mode")) spec.fil_mode = mode;
        return spec;
    }
    OneMotiveSpec spec;
    spec.lattice_rank = m.lattice;
    spec.torus_dim = m.torus;
    spec.fil_mode = mode;
    if (!m.elliptic.empty()) {
        for (const auto& t : split(m.elliptic, ',')) spec.elliptic_traces.push_back(parse_long(t, "trace"));
    }
    if (!m.lambda.empty()) spec.kummer_lambda = rational_from_json(Json(m.lambda));
    return spec;
}

// "SPEC@DEG;SPEC@DEG"
MotivicComplex parse_complex(const std::vector<std::string>& parts, EllipticFilMode mode, const PadicContext& ctx) {
    MotivicComplex out;
    for (const auto& part : parts) {
        const auto at = part.rfind('@');
        const std::string spec = at == std::string::npos ? part : part.substr(0, at);
        const int degree = at == std::string::npos ? 0 : static_cast<int>(parse_long(part.substr(at + 1), "degree"));
        out = out + realize_motive(parse_inline_spec(spec, mode), ctx).shifted(degree);
    }
    return out;
}

void print_module(const FilteredPhiModule& m, const Common& c, std::ostream& out) {
    if (c.format == "json") {
        out << to_json(m).dump(2) << "\n";
        return;
    }
    out << "label    " << m.label() << "\n"
        << "dim      " << m.dim() << "\n"
        << "weights  " << weights_string(m) << "\n"
        << "phi      " << to_string(m.phi()) << "\n"
        << "fil1     " << matrix_string(m.fil1()) << "\n"
        << "slopes   " << slopes_string(newton_slopes_of(m)) << "\n";
}

void print_hom(const HomSpace& h, const std::optional<std::string>& cls, const Common& c, std::ostream& out) {
    if (c.format == "json") {
        out << to_json(h, cls).dump(2) << "\n";
        return;
    }
    out << "dimension       " << h.dimension << "\n";
    if (cls) out << "classification  " << *cls << "\n";
    out << "precision       " << (h.precision_report ? std::to_string(*h.precision_report) : "exact") << "\n";
    for (std::size_t i = 0; i < h.basis.size(); ++i) out << "basis[" << i << "]  " << matrix_string(h.basis[i]) << "\n";
}

}  // namespace

OneMotiveSpec parse_inline_spec(const std::string& text, EllipticFilMode mode) {
    OneMotiveSpec spec;
    spec.fil_mode = mode;
    if (text.empty() || text == "0") return spec;
    for (const auto& token : split(text, '+')) {
        const auto colon = token.find(':');
        if (colon == std::string::npos) throw InvalidArgument("spec token '" + token + "' needs the form kind:value");
        const std::string kind = token.substr(0, colon);
        const std::string value = token.substr(colon + 1);
        if (kind == "lattice") {
            spec.lattice_rank += parse_count(value, "lattice rank");
        } else if (kind == "torus") {
            spec.torus_dim += parse_count(value, "torus dimension");
        } else if (kind == "elliptic") {
            for (const auto& t : split(value, ',')) spec.elliptic_traces.push_back(parse_long(t, "trace"));
        } else if (kind == "kummer") {
            spec.kummer_lambda = rational_from_json(Json(value));
        } else {
            throw InvalidArgument("unknown spec kind '" + kind + "' (lattice|torus|elliptic|kummer)");
        }
    }
    return spec;
}

std::vector<SurveyRow> survey(const PadicContext& ctx) {
    Integer bound;
    const Integer four_q = 4 * ctx.q();
    mpz_sqrt(bound.get_mpz_t(), four_q.get_mpz_t());
    const long tmax = bound.get_si();

    std::vector<SurveyRow> rows;
    for (long t = -tmax; t <= tmax; ++t) {
        std::vector<EllipticFilMode> modes{{FilModeKind::Auto, 0}};
        if (Integer(t) * t == four_q) {
            modes.push_back({FilModeKind::Scalar, 0});
            modes.push_back({FilModeKind::Jordan, 0});
        }
        for (const auto& mode : modes) {
            SurveyRow row;
            row.q = ctx.q();
            row.t = t;
            row.mode = mode.to_string();
            row.ordinary = is_ordinary(t, ctx);
            const FilteredPhiModule e = realize_elliptic(t, mode, ctx);
            row.slopes = newton_slopes_of(e);
            const FilteredPhiModule m = direct_sum({realize_lattice(1, ctx), e});
            const HomSpace end = end_algebra(m);
            row.end_dim = end.dimension;
            row.classification = "unclassified";
            try {
                if (const auto tag = classify_end(m, end).abelian_tag()) row.classification = to_string(*tag);
            } catch (const UnclassifiedShape&) {
            }
            row.frobenius_member = frobenius_membership(m, end);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string survey_table(const std::vector<SurveyRow>& rows) {
    std::vector<std::vector<std::string>> cells{{"q", "t", "mode", "ordinary", "slopes", "end_dim", "class", "frob_member"}};
    for (const auto& r : rows) {
        cells.push_back({r.q.get_str(), std::to_string(r.t), r.mode, r.ordinary ? "true" : "false",
                         slopes_string(r.slopes), std::to_string(r.end_dim), r.classification,
                         r.frobenius_member ? "true" : "false"});
    }
    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& row : cells) {
        for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
    }
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t k = 0; k < row.size(); ++k) {
            line += row[k];
            if (k + 1 < row.size()) line += std::string(width[k] - row[k].size() + 2, ' ');
        }
        out += line + "\n";
    }
    return out;
}

Json to_json(const SurveyRow& row) {
    Json j;
    j["q"] = row.q.get_si();
    j["t"] = row.t;
    j["mode"] = row.mode;
    j["ordinary"] = row.ordinary;
    Json s = Json::array();
    for (const auto& x : row.slopes) s.push_back(x.get_str());
    j["slopes"] = s;
    j["end_dim"] = row.end_dim;
    j["class"] = row.classification;
    j["frob_member"] = row.frobenius_member;
    return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Filtered phi-module realizations of 1-motives over F_q and their Hom spaces", "fphi"};
    app.require_subcommand(1);

    Common c_realize, c_end, c_hom, c_survey, c_mhom;
    InlineMotive m_realize, m_end;

    auto* realize = app.add_subcommand("realize", "print the filtered phi-module of a 1-motive");
    add_common(realize, c_realize, "json");
    add_motive(realize, m_realize);

    auto* end = app.add_subcommand("end", "End algebra of the realization, with its classification");
    add_common(end, c_end, "json");
    add_motive(end, m_end);

    std::string spec_a, spec_b, hom_mode = "auto";
    auto* hom = app.add_subcommand(
        "hom",
        "Hom of motives A -> B. Realization is contravariant, so this computes maps "
        "realize(B) -> realize(A) of filtered phi-modules.");
    add_common(hom, c_hom, "json");
    hom->add_option("--a", spec_a, "source motive, e.g. lattice:1+elliptic:1")->required();
    hom->add_option("--b", spec_b, "target motive")->required();
    hom->add_option("--fil-mode", hom_mode, "Hodge line mode for elliptic factors")->capture_default_str();

    auto* surv = app.add_subcommand("survey", "End of [Z -> E] for every trace allowed by the Hasse bound");
    add_common(surv, c_survey, "table");

    std::vector<std::string> cx, cy;
    std::string mhom_mode = "auto";
    auto* mhom = app.add_subcommand(
        "motivic-hom",
        "Hom between formal sums of shifted motives, SPEC@DEG (repeatable). Same contravariant "
        "flip as hom; summands in different degrees contribute nothing.");
    add_common(mhom, c_mhom, "json");
    mhom->add_option("--x", cx, "source summands SPEC@DEG");
    mhom->add_option("--y", cy, "target summands SPEC@DEG");
    mhom->add_option("--fil-mode", mhom_mode, "Hodge line mode for elliptic factors")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (realize->parsed()) {
            const PadicContext ctx = c_realize.context();
            print_module(realize_one_motive(motive_spec(m_realize, ctx), ctx), c_realize, out);
        } else if (end->parsed()) {
            const PadicContext ctx = c_end.context();
            const FilteredPhiModule m = realize_one_motive(motive_spec(m_end, ctx), ctx);
            const HomSpace h = end_algebra(m);
            print_hom(h, classification_of(m, h), c_end, out);
        } else if (hom->parsed()) {
            const PadicContext ctx = c_hom.context();
            const EllipticFilMode mode = EllipticFilMode::parse(hom_mode);
            const FilteredPhiModule a = realize_one_motive(parse_inline_spec(spec_a, mode), ctx);
            const FilteredPhiModule b = realize_one_motive(parse_inline_spec(spec_b, mode), ctx);
            print_hom(hom_space(b, a), std::nullopt, c_hom, out);
        } else if (surv->parsed()) {
            const auto rows = survey(c_survey.context());
            if (c_survey.format == "table") {
                out << survey_table(rows);
            } else {
                for (const auto& r : rows) out << to_json(r).dump() << "\n";
            }
        } else if (mhom->parsed()) {
            const PadicContext ctx = c_mhom.context();
            const EllipticFilMode mode = EllipticFilMode::parse(mhom_mode);
            const MotivicComplex x = parse_complex(cx, mode, ctx);
            const MotivicComplex y = parse_complex(cy, mode, ctx);
            const HomComplexResult r = hom_complex(y, x);
            if (c_mhom.format == "json") {
                Json j;
                j["dimension"] = r.dimension;
                Json parts = Json::array();
                for (const auto& p : r.parts) {
                    Json e;
                    e["degree"] = p.degree;
                    e["source"] = y.summands()[p.source_index].module.label();
                    e["target"] = x.summands()[p.target_index].module.label();
                    e["dimension"] = p.hom.dimension;
                    parts.push_back(e);
                }
                j["parts"] = parts;
                out << j.dump(2) << "\n";
            } else {
                out << "dimension  " << r.dimension << "\n";
                for (const auto& p : r.parts) {
                    out << "degree " << p.degree << "  " << y.summands()[p.source_index].module.label() << " -> "
                        << x.summands()[p.target_index].module.label() << "  " << p.hom.dimension << "\n";
                }
            }
        }
    } catch (const PrecisionExhausted& e) {
        err << "precision exhausted: " << e.what() << "\nrerun with a larger --prec\n";
        return kExitPrecision;
    } catch (const ClosureFailure& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const Json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}

}  // namespace fphi
