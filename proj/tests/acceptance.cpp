// One line per acceptance criterion: "criterion N: PASS|FAIL  detail".
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fphi/cli.hpp"
#include "support.hpp"

using namespace fphi;
using support::kummer;
using support::small_fields;
using support::z_to_e;

namespace {

const EllipticFilMode kAuto{FilModeKind::Auto, 0};
const EllipticFilMode kScalar{FilModeKind::Scalar, 0};
const EllipticFilMode kJordan{FilModeKind::Jordan, 0};

class Criterion {
public:
    explicit Criterion(int n) : n_(n) {}

    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) {
            ++failures_;
            if (examples_.size() < 12) examples_.push_back(what);
        }
    }
    void note(const std::string& s) { notes_.push_back(s); }

    bool report(std::ostream& out) const {
        const bool pass = failures_ == 0 && checks_ > 0;
        out << "criterion " << n_ << ": " << (pass ? "PASS" : "FAIL") << "  " << checks_ - failures_ << "/" << checks_
            << " checks";
        if (!examples_.empty()) {
            out << "; failing:";
            for (const auto& e : examples_) out << " [" << e << "]";
            if (failures_ > examples_.size()) out << " ...";
        }
        out << "\n";
        for (const auto& s : notes_) out << "    " << s << "\n";
        return pass;
    }

private:
    int n_;
    std::size_t checks_ = 0;
    std::size_t failures_ = 0;
    std::vector<std::string> examples_;
    std::vector<std::string> notes_;
};

std::string qt(const PadicContext& ctx, long t) {
    return "q=" + ctx.q().get_str() + " t=" + std::to_string(t);
}

std::string slopes_str(const std::vector<Rational>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i].get_str();
    return out + "}";
}

Rational rat(long n, long d = 1) {
    Rational r(n, static_cast<unsigned long>(d));
    r.canonicalize();
    return r;
}

long vp(long x, long p) {
    long v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// Newton polygon of T^2 - tT + q by hand: vertices (0, f), (1, v_p(t)), (2, 0).
std::vector<Rational> elliptic_slopes_oracle(long t, const PadicContext& ctx) {
    const long f = ctx.f();
    if (t != 0 && 2 * vp(t, ctx.p()) < f) {
        const long v = vp(t, ctx.p());
        return {rat(v, f), rat(f - v, f)};
    }
    return {rat(1, 2), rat(1, 2)};
}

bool is_diagonal(const RationalMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && m(i, j) != 0) return false;
    return true;
}

bool off_diagonal_blocks_zero(const HomSpace& h, const FilteredPhiModule& m) {
    for (const auto& x : h.basis) {
        for (const auto& b : weight_block_structure(x, m, m)) {
            if (b.from_weight != b.to_weight && !b.zero) return false;
        }
    }
    return true;
}

// Span equality of two Hodge generator matrices, over the kind of either.
bool same_span(const AnyMatrix& a, const AnyMatrix& b, const PadicContext& ctx) {
    if (cols_of(a) != cols_of(b)) return false;
    if (cols_of(a) == 0) return true;
    if (!is_padic(a) && !is_padic(b)) {
        const auto& x = std::get<RationalMatrix>(a);
        const auto& y = std::get<RationalMatrix>(b);
        return oracle::rank(support::dense(hstack(x, y))) == x.cols();
    }
    const PadicMatrix x = to_padic(a, ctx);
    const PadicMatrix y = to_padic(b, ctx);
    return rank(hstack(x, y)) == x.cols() && rank(x) == x.cols();
}

std::vector<FilteredPhiModule> elliptic_family(const PadicContext& ctx) {
    std::vector<FilteredPhiModule> out;
    for (long t : support::hasse_traces(ctx)) {
        out.push_back(z_to_e(t, kAuto, ctx));
        if (t * t == 4 * ctx.q()) {
            out.push_back(z_to_e(t, kScalar, ctx));
            out.push_back(z_to_e(t, kJordan, ctx));
        }
    }
    return out;
}

Criterion c1() {
    Criterion c(1);
    for (long q : {2L, 3L, 4L, 5L, 7L, 8L, 9L, 16L, 25L, 27L, 49L}) {
        const PadicContext* ctx = nullptr;
        const auto fields = small_fields();
        for (const auto& f : fields) {
            if (f.q() == q) ctx = &f;
        }
        if (!ctx) {
            c.check(false, "no field q=" + std::to_string(q));
            continue;
        }
        const auto e = end_algebra(kummer(*ctx));
        bool diag = !e.is_padic() && !e.precision_report;
        for (const auto& b : e.basis) diag = diag && !is_padic(b) && is_diagonal(std::get<RationalMatrix>(b));
        const bool basis_ok = e.basis.size() == 2 && std::get<RationalMatrix>(e.basis[0]) == rational_matrix({{1, 0}, {0, 0}}) &&
                              std::get<RationalMatrix>(e.basis[1]) == rational_matrix({{0, 0}, {0, 1}});
        c.check(e.dimension == 2 && diag && basis_ok, "q=" + std::to_string(q) + " dim " + std::to_string(e.dimension));
    }
    return c;
}

Criterion c2() {
    Criterion c(2);
    const PadicContext ctx(5, 1, 40);
    const auto m = z_to_e(1, kAuto, ctx);
    const auto e = end_algebra(m);
    c.check(e.dimension == 3, "dim " + std::to_string(e.dimension));
    c.check(classify_end(m, e).abelian_tag() == BlockClass::PolynomialAlgebraOfPhi, "elliptic block tag");
    c.check(off_diagonal_blocks_zero(e, m), "lattice/elliptic blocks");
    c.check(frobenius_membership(m, e), "frobenius membership");
    c.check(end_algebra(m.at_precision(80)).dimension == 3, "dim at precision 80");
    return c;
}

Criterion c3() {
    Criterion c(3);
    const PadicContext ctx(5, 1, 40);
    const auto m = z_to_e(0, kAuto, ctx);
    const auto e = end_algebra(m);
    c.check(e.dimension == 2, "dim " + std::to_string(e.dimension));
    c.check(classify_end(m, e).abelian_tag() == BlockClass::ScalarOnly, "elliptic block tag");
    c.check(end_algebra(m.at_precision(80)).dimension == 2, "dim at precision 80");
    return c;
}

Criterion c4() {
    Criterion c(4);
    const PadicContext ctx(5, 2);
    const auto m = z_to_e(10, kScalar, ctx);
    const auto e = end_algebra(m);
    c.check(e.dimension == 4, "dim " + std::to_string(e.dimension));
    c.check(classify_end(m, e).abelian_tag() == BlockClass::UpperTriangularFull, "elliptic block tag");
    const auto lambda = scalar_frobenius_analysis(10, ctx);
    c.check(lambda && *lambda == 5, "lambda");
    return c;
}

Criterion c5() {
    Criterion c(5);
    const auto start = std::chrono::steady_clock::now();
    std::size_t instances = 0;
    for (const auto& ctx : small_fields()) {
        const auto torus = realize_torus(1, ctx);
        for (long t : support::hasse_traces(ctx)) {
            std::vector<EllipticFilMode> modes{kAuto};
            if (t * t == 4 * ctx.q()) {
                modes.push_back(kScalar);
                modes.push_back(kJordan);
            }
            for (const auto& mode : modes) {
                const auto h = hom_space(torus, realize_elliptic(t, mode, ctx));
                c.check(h.dimension == 0, qt(ctx, t) + " " + mode.to_string());
                ++instances;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.check(secs < 10.0, "total time " + std::to_string(secs) + " s");
    std::ostringstream s;
    s << instances << " instances in " << secs << " s";
    c.note(s.str());
    return c;
}

Criterion c6() {
    Criterion c(6);
    std::vector<std::string> counter;
    std::size_t realizable = 0, realizable_ok = 0;
    for (const auto& ctx : small_fields()) {
        const long q = ctx.q().get_si();
        for (long t : support::hasse_traces(ctx)) {
            const auto slopes = newton_slopes_of(realize_elliptic(t, kAuto, ctx));
            const bool coprime = t % ctx.p() != 0;
            // Literal statement.
            const std::vector<Rational> literal = coprime ? std::vector<Rational>{0, 1} : std::vector<Rational>{rat(1, 2), rat(1, 2)};
            const bool ok = slopes == literal;
            c.check(ok, qt(ctx, t) + " slopes " + slopes_str(slopes));
            if (!ok) counter.push_back(qt(ctx, t));
            // Independent Newton polygon.
            c.check(slopes == elliptic_slopes_oracle(t, ctx), qt(ctx, t) + " disagrees with hand polygon");
            c.check(is_ordinary(t, ctx) == (slopes == std::vector<Rational>{0, 1}), qt(ctx, t) + " ordinary flag");
            // Traces of actual supersingular curves have t^2 in {0, q, 2q, 3q, 4q}.
            if (!coprime && (t * t) % q == 0 && (t * t) / q <= 4) {
                ++realizable;
                if (slopes == std::vector<Rational>{rat(1, 2), rat(1, 2)}) ++realizable_ok;
            }
        }
        c.check(newton_slopes_of(kummer(ctx)) == std::vector<Rational>{0, 1}, "kummer " + ctx.q().get_str());
        c.check(newton_slopes_of(realize_lattice(2, ctx)) == std::vector<Rational>{0, 0}, "lattice");
        c.check(newton_slopes_of(realize_torus(2, ctx)) == std::vector<Rational>{1, 1}, "torus");
    }
    if (!counter.empty()) {
        std::string s = "p | t without slopes {1/2,1/2} (" + std::to_string(counter.size()) + " traces):";
        for (const auto& x : counter) s += " " + x + ";";
        c.note(s);
        c.note("the Newton polygon of T^2 - tT + q has slopes {v/f, 1 - v/f} whenever 0 < v = v_p(t) < f/2");
    }
    c.note("p | t and t^2 in {0,q,2q,3q,4q}: " + std::to_string(realizable_ok) + "/" + std::to_string(realizable) +
           " have slopes {1/2,1/2}");
    return c;
}

Criterion c7() {
    Criterion c(7);
    std::size_t modules = 0;
    for (const auto& ctx : small_fields()) {
        std::vector<FilteredPhiModule> family = elliptic_family(ctx);
        family.push_back(kummer(ctx));
        family.push_back(realize_lattice(2, ctx));
        family.push_back(realize_torus(2, ctx));
        family.push_back(z_to_e(0, kAuto, ctx));
        for (const auto& m : family) {
            ++modules;
            const std::string tag = "q=" + ctx.q().get_str() + " " + m.label();
            const auto hn = hodge_newton_numbers(m);
            c.check(Rational(hn.hodge) == hn.newton, tag + " t_H != t_N");

            const auto d = dual(m);
            const auto dd = dual(d);
            // The identity intertwines M and its double dual.
            const RationalMatrix id = rational_identity(m.dim());
            c.check(dd.phi() * id == id * m.phi(), tag + " phi of double dual");
            c.check(same_span(dd.fil1(), m.fil1(), ctx), tag + " Fil of double dual");
            c.check(dd.weights() == m.weights(), tag + " weights of double dual");

            std::vector<Rational> reflected;
            for (const auto& s : newton_slopes_of(m)) reflected.push_back(1 - s);
            std::sort(reflected.begin(), reflected.end());
            c.check(newton_slopes_of(d) == reflected, tag + " slope reflection");
        }
    }
    c.note(std::to_string(modules) + " modules");
    return c;
}

Criterion c8() {
    Criterion c(8);
    std::mt19937 rng(20240607);
    std::size_t compared = 0;
    const std::vector<PadicContext> fields{PadicContext(2, 1), PadicContext(3, 1), PadicContext(5, 1), PadicContext(7, 1)};
    std::size_t nonzero = 0;
    while (compared < 240) {
        const auto& ctx = fields[compared % fields.size()];
        const auto a = support::random_graded(rng, ctx);
        const auto b = support::random_graded(rng, ctx);
        if (!a || !b) continue;
        const std::size_t mine = hom_space(*a, *b).dimension;
        const std::size_t theirs = support::oracle_hom_dimension(*a, *b);
        c.check(mine == theirs, "p=" + std::to_string(ctx.p()) + " " + std::to_string(mine) + " vs " + std::to_string(theirs));
        if (mine > 0) ++nonzero;
        ++compared;
    }
    c.note(std::to_string(compared) + " pairs, " + std::to_string(nonzero) + " with nonzero Hom");
    return c;
}

Criterion c9() {
    Criterion c(9);
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 20);
    for (const auto& ctx : {PadicContext(2, 1), PadicContext(5, 1), PadicContext(3, 2)}) {
        const Rational q(ctx.q());
        for (int k = 0; k < 50; ++k) {
            const Rational lambda = rat(num(rng), den(rng));
            const auto m = extension_module(lambda, ctx);
            const auto s = split_extension(m, 1);
            const std::string tag = "q=" + ctx.q().get_str() + " lambda=" + lambda.get_str();
            c.check(s.base_change * m.phi() * inverse(s.base_change) == s.module.phi(), tag + " conjugation");
            c.check(s.module.phi() == rational_matrix({{1, 0}, {0, 0}}) + scaled(rational_matrix({{0, 0}, {0, 1}}), q),
                    tag + " split phi");
            if (lambda != 0) {
                const RationalMatrix stuck = rational_matrix({{1, 0}, {0, 1}}) + scaled(rational_matrix({{0, 1}, {0, 0}}), lambda);
                bool raised = false;
                try {
                    split_extension(FilteredPhiModule::ungraded(ctx, stuck, rational_zero(2, 0), "stuck"), 1);
                } catch (const NonSplitExtension&) {
                    raised = true;
                }
                c.check(raised, tag + " coincident spectrum");
            }
        }
    }
    bool raised = false;
    try {
        split_extension(FilteredPhiModule::ungraded(PadicContext(5, 1), rational_matrix({{1, 1}, {0, 1}}), rational_zero(2, 0), "x"), 1);
    } catch (const NonSplitExtension&) {
        raised = true;
    }
    c.check(raised, "[[1,1],[0,1]]");
    return c;
}

// v_p of P(r) for rational r, computed with plain integers.
long value_valuation(const std::vector<long>& coeffs, const Rational& r, long p) {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
    if (acc == 0) return 1L << 30;
    long v = 0;
    Integer n = acc.get_num(), d = acc.get_den();
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    while (d % p == 0) {
        d /= p;
        --v;
    }
    return v;
}

long eval_mod(const std::vector<long>& coeffs, long x, long p) {
    long acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = ((acc * x + *it) % p + p) % p;
    return acc;
}

Criterion c10() {
    Criterion c(10);
    std::mt19937 rng(10);
    std::uniform_int_distribution<long> coef(-20, 20);
    std::uniform_int_distribution<int> degree(2, 4);
    std::size_t lifted = 0, singular = 0;
    auto try_one = [&](const std::vector<long>& coeffs, long r0, long p) {
        std::vector<long> deriv;
        for (std::size_t i = 1; i < coeffs.size(); ++i) deriv.push_back(static_cast<long>(i) * coeffs[i]);
        const bool expect_singular = eval_mod(deriv, r0, p) == 0;
        for (int n : {40, 80}) {
            const PadicContext ctx(p, 1, n);
            std::string tag = "p=" + std::to_string(p) + " N=" + std::to_string(n) + " P=";
            for (long x : coeffs) tag += std::to_string(x) + ",";
            tag += " r0=" + std::to_string(r0);
            try {
                const PadicScalar r = hensel_lift_root(Polynomial(std::vector<Rational>(coeffs.begin(), coeffs.end())), r0, ctx);
                c.check(!expect_singular, tag + " lifted a singular root");
                c.check(value_valuation(coeffs, r.lift(), p) >= n, tag + " residual");
                ++lifted;
            } catch (const NonSimpleRoot&) {
                c.check(expect_singular, tag + " refused a simple root");
                ++singular;
            }
        }
    };
    try_one({5, 0, 1}, 0, 5);
    try_one({5, -1, 1}, 1, 5);
    for (long p : {2L, 3L, 5L, 7L, 11L}) {
        for (int k = 0; k < 40; ++k) {
            std::vector<long> coeffs;
            const int deg = degree(rng);
            for (int i = 0; i < deg; ++i) coeffs.push_back(coef(rng));
            coeffs.push_back(1);
            for (long r0 = 0; r0 < p; ++r0) {
                if (eval_mod(coeffs, r0, p) == 0) try_one(coeffs, r0, p);
            }
        }
    }
    c.note(std::to_string(lifted) + " lifts, " + std::to_string(singular) + " NonSimpleRoot");
    return c;
}

MotivicComplex at(const FilteredPhiModule& m, int degree) { return MotivicComplex({{m, degree}}); }

Criterion c11() {
    Criterion c(11);
    for (const auto& ctx : {PadicContext(5, 1), PadicContext(5, 2), PadicContext(2, 1)}) {
        std::vector<FilteredPhiModule> examples{kummer(ctx), realize_lattice(1, ctx), realize_torus(1, ctx)};
        for (auto& m : elliptic_family(ctx)) examples.push_back(std::move(m));
        for (const auto& m : examples) {
            for (int n : {-2, -1, 1, 2}) {
                c.check(hom_complex(at(m, 0), at(m, n)).dimension == 0,
                        "q=" + ctx.q().get_str() + " " + m.label() + " shift " + std::to_string(n));
            }
        }
    }
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> deg(-1, 1);
    const PadicContext ctx(5, 1);
    int trials = 0;
    while (trials < 40) {
        std::vector<Summand> xs, ys;
        while (xs.size() < 3) {
            if (auto a = support::random_graded(rng, ctx)) xs.push_back({*a, deg(rng)});
        }
        while (ys.size() < 3) {
            if (auto b = support::random_graded(rng, ctx)) ys.push_back({*b, deg(rng)});
        }
        std::size_t oracle_sum = 0;
        for (const auto& s : xs)
            for (const auto& t : ys)
                if (s.degree == t.degree) oracle_sum += support::oracle_hom_dimension(s.module, t.module);
        const MotivicComplex x(xs), y(ys);
        const std::size_t whole = hom_complex(x, y).dimension;
        c.check(whole == oracle_sum, "random complex vs oracle");
        std::size_t by_source = 0, by_target = 0;
        for (const auto& s : xs) by_source += hom_complex(MotivicComplex({s}), y).dimension;
        for (const auto& t : ys) by_target += hom_complex(x, MotivicComplex({t})).dimension;
        c.check(whole == by_source && whole == by_target, "additivity");
        ++trials;
    }
    return c;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Criterion c12() {
    Criterion c(12);
    for (const std::string f : {"1", "2"}) {
        const std::string golden = slurp(std::string(FPHI_GOLDEN_DIR) + "/survey_p5_f" + f + ".txt");
        std::ostringstream out, err;
        const int code = run_cli({"survey", "--p", "5", "--f", f}, out, err);
        c.check(code == 0 && !golden.empty() && out.str() == golden, "survey --p 5 --f " + f);
    }
    for (const auto& row : survey(PadicContext(5, 1))) {
        c.check(row.end_dim == (row.t == 0 ? 2u : 3u), "q=5 t=" + std::to_string(row.t));
    }
    return c;
}

}  // namespace

int main() {
    bool all = true;
    const std::vector<Criterion (*)()> suites{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    for (std::size_t k = 0; k < suites.size(); ++k) {
        const auto run = suites[k];
        Criterion c(static_cast<int>(k) + 1);
        try {
            c = run();
        } catch (const std::exception& e) {
            c.check(false, std::string("exception: ") + e.what());
        }
        all = c.report(std::cout) && all;
        std::cout.flush();
    }
    return all ? 0 : 1;
}
