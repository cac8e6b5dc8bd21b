#include <doctest.h>

#include "support.hpp"

using namespace fphi;
using support::kummer;
using support::z_to_e;

namespace {

const EllipticFilMode kAuto{FilModeKind::Auto, 0};

template <class T>
void check_basis_invariants(const HomSpace& h) {
    const PadicContext& ctx = h.source.context();
    Matrix<T> phi_a, phi_b, fil_a, fil_b;
    if constexpr (std::is_same_v<T, Rational>) {
        phi_a = h.source.phi();
        phi_b = h.target.phi();
        fil_a = std::get<RationalMatrix>(h.source.fil1());
        fil_b = std::get<RationalMatrix>(h.target.fil1());
    } else {
        phi_a = to_padic(h.source.phi(), ctx);
        phi_b = to_padic(h.target.phi(), ctx);
        fil_a = to_padic(h.source.fil1(), ctx);
        fil_b = to_padic(h.target.fil1(), ctx);
    }
    std::vector<std::vector<T>> flat;
    for (const auto& any : h.basis) {
        const Matrix<T>& m = std::get<Matrix<T>>(any);
        CHECK(all_negligible(phi_b * m - m * phi_a));
        if (fil_a.cols() > 0) {
            const std::size_t kb = fil_b.cols() == 0 ? 0 : rank(fil_b);
            const Matrix<T> image = m * fil_a;
            const std::size_t joint = fil_b.cols() == 0 ? (all_negligible(image) ? 0 : rank(image)) : rank(hstack(fil_b, image));
            CHECK(joint == kb);
        }
        flat.push_back(m.entries());
    }
    CHECK(canonical_basis(flat).size() == h.dimension);
}

void check_invariants(const HomSpace& h) {
    if (h.source.fil1_is_padic() || h.target.fil1_is_padic()) {
        check_basis_invariants<PadicScalar>(h);
    } else {
        check_basis_invariants<Rational>(h);
    }
}

}  // namespace

TEST_CASE("hom examples") {
    const PadicContext ctx(5, 1);
    CHECK(hom_space(realize_lattice(1, ctx), realize_lattice(1, ctx)).dimension == 1);
    for (long t = -4; t <= 4; ++t) {
        const auto h = hom_space(realize_torus(1, ctx), realize_elliptic(t, kAuto, ctx));
        CHECK(h.dimension == 0);
    }
    CHECK(hom_space(realize_lattice(1, ctx), realize_torus(1, ctx)).dimension == 0);
    // Torus -> lattice: phi condition 1*h = h*5 forces zero as well.
    CHECK(hom_space(realize_torus(1, ctx), realize_lattice(1, ctx)).dimension == 0);
    // Fil^1 must map into Fil^1: elliptic -> itself shifted, lattice(2) -> lattice(2) all maps.
    CHECK(hom_space(realize_lattice(2, ctx), realize_lattice(2, ctx)).dimension == 4);
    CHECK(hom_space(realize_lattice(1, ctx), FilteredPhiModule::zero(ctx)).dimension == 0);
    CHECK_THROWS_AS(hom_space(realize_lattice(1, ctx), realize_lattice(1, PadicContext(3, 1))), ContextMismatch);
}

TEST_CASE("end algebras of the worked examples") {
    const PadicContext ctx(5, 1);
    const auto k = end_algebra(kummer(ctx));
    REQUIRE(k.dimension == 2);
    CHECK(std::get<RationalMatrix>(k.basis[0]) == rational_matrix({{1, 0}, {0, 0}}));
    CHECK(std::get<RationalMatrix>(k.basis[1]) == rational_matrix({{0, 0}, {0, 1}}));
    CHECK_FALSE(k.precision_report);

    const auto m1 = z_to_e(1, kAuto, ctx);
    const auto e1 = end_algebra(m1);
    CHECK(e1.dimension == 3);
    CHECK(e1.precision_report);
    const auto c1 = classify_end(m1, e1);
    CHECK(c1.tag() == "lattice_scalars+polynomial_algebra_of_phi");
    CHECK(c1.abelian_tag() == BlockClass::PolynomialAlgebraOfPhi);
    CHECK(frobenius_membership(m1, e1));

    const auto m0 = z_to_e(0, kAuto, ctx);
    const auto e0 = end_algebra(m0);
    CHECK(e0.dimension == 2);
    CHECK(classify_end(m0, e0).abelian_tag() == BlockClass::ScalarOnly);
    CHECK_FALSE(frobenius_membership(m0, e0));

    const PadicContext q25(5, 2);
    const auto ms = z_to_e(10, {FilModeKind::Scalar, 0}, q25);
    const auto es = end_algebra(ms);
    CHECK(es.dimension == 4);
    CHECK(classify_end(ms, es).abelian_tag() == BlockClass::UpperTriangularFull);
    CHECK(frobenius_membership(ms, es));

    const auto mj = z_to_e(10, {FilModeKind::Jordan, 0}, q25);
    const auto ej = end_algebra(mj);
    CHECK(ej.dimension == 3);
    CHECK(classify_end(mj, ej).abelian_tag() == BlockClass::PolynomialAlgebraOfPhi);

    CHECK(frobenius_membership(kummer(ctx), k));
}

TEST_CASE("basis invariants hold") {
    for (const auto& ctx : {PadicContext(5, 1), PadicContext(2, 2), PadicContext(3, 3)}) {
        for (long t : support::hasse_traces(ctx)) {
            const auto m = z_to_e(t, kAuto, ctx);
            const auto e = end_algebra(m);
            check_invariants(e);
            check_invariants(hom_space(realize_lattice(1, ctx), m));
            check_invariants(hom_space(m, realize_torus(1, ctx)));
        }
    }
}

TEST_CASE("classification failures are reported") {
    const PadicContext ctx(5, 1);
    const auto ext = extension_module(3, ctx);
    CHECK_THROWS_AS(classify_end(ext, end_algebra(ext)), UnclassifiedShape);
    // Two copies of one curve: End mixes the two blocks.
    const auto ee = direct_sum({realize_elliptic(1, kAuto, ctx), realize_elliptic(1, kAuto, ctx)});
    const auto e = end_algebra(ee);
    CHECK(e.dimension == 8);
    CHECK_THROWS_AS(classify_end(ee, e), UnclassifiedShape);
}

TEST_CASE("weight block structure") {
    const PadicContext ctx(5, 1);
    const auto k = kummer(ctx);
    for (const auto& h : end_algebra(k).basis) {
        for (const auto& b : weight_block_structure(h, k, k)) {
            if (b.from_weight != b.to_weight) CHECK(b.zero);
        }
    }
    const auto m = z_to_e(1, kAuto, ctx);
    for (const auto& h : end_algebra(m).basis) {
        for (const auto& b : weight_block_structure(h, m, m)) {
            if (b.from_weight != b.to_weight) CHECK(b.zero);
        }
    }
    const auto id = weight_block_structure(AnyMatrix(rational_identity(3)), m, m);
    REQUIRE(id.size() == 4);
    for (const auto& b : id) CHECK(b.zero == (b.from_weight != b.to_weight));
    CHECK(weight_block_structure(AnyMatrix(rational_identity(2)), extension_module(1, ctx), extension_module(1, ctx)).empty());
}

TEST_CASE("weight blocks never mix for realized one-motives") {
    std::mt19937 rng(31);
    for (const auto& ctx : {PadicContext(2, 1), PadicContext(5, 1), PadicContext(3, 2)}) {
        const auto traces = support::hasse_traces(ctx);
        std::uniform_int_distribution<std::size_t> pick(0, traces.size() - 1);
        std::uniform_int_distribution<int> small(0, 2);
        for (int trial = 0; trial < 20; ++trial) {
            OneMotiveSpec a, b;
            a.lattice_rank = small(rng);
            a.torus_dim = small(rng);
            b.lattice_rank = small(rng);
            b.torus_dim = small(rng);
            for (int i = small(rng); i > 0; --i) a.elliptic_traces.push_back(traces[pick(rng)]);
            for (int i = small(rng); i > 0; --i) b.elliptic_traces.push_back(traces[pick(rng)]);
            const auto ma = realize_one_motive(a, ctx);
            const auto mb = realize_one_motive(b, ctx);
            const auto h = hom_space(ma, mb);
            for (const auto& x : h.basis) {
                for (const auto& blk : weight_block_structure(x, ma, mb)) {
                    if (blk.from_weight != blk.to_weight) CHECK(blk.zero);
                }
            }
        }
    }
}

TEST_CASE("End contains I and is closed") {
    for (const auto& ctx : support::small_fields()) {
        CHECK(end_algebra(kummer(ctx)).dimension == 2);
        for (long t : support::hasse_traces(ctx)) {
            CHECK_NOTHROW(end_algebra(z_to_e(t, kAuto, ctx)));
        }
    }
}

TEST_CASE("random graded modules agree with the brute-force oracle") {
    std::mt19937 rng(8);
    int compared = 0;
    for (const long p : {2L, 3L, 5L}) {
        const PadicContext ctx(p, 1);
        while (compared < 100 * (p == 2 ? 1 : p == 3 ? 2 : 3)) {
            const auto a = support::random_graded(rng, ctx);
            const auto b = support::random_graded(rng, ctx);
            if (!a || !b) continue;
            CHECK(hom_space(*a, *b).dimension == support::oracle_hom_dimension(*a, *b));
            CHECK(end_algebra(*a).dimension == support::oracle_hom_dimension(*a, *a));
            ++compared;
        }
    }
}

TEST_CASE("duality reverses Hom") {
    std::mt19937 rng(12);
    const PadicContext ctx(3, 1);
    int n = 0;
    while (n < 100) {
        const auto a = support::random_graded(rng, ctx);
        const auto b = support::random_graded(rng, ctx);
        if (!a || !b) continue;
        CHECK(hom_space(*a, *b).dimension == hom_space(dual(*b), dual(*a)).dimension);
        ++n;
    }
    const PadicContext q5(5, 1);
    for (long t = -4; t <= 4; ++t) {
        const auto m = z_to_e(t, kAuto, q5);
        CHECK(hom_space(m, kummer(q5)).dimension == hom_space(dual(kummer(q5)), dual(m)).dimension);
        CHECK(end_algebra(m).dimension == end_algebra(dual(m)).dimension);
    }
}

TEST_CASE("dimensions are stable under precision doubling") {
    for (const auto& ctx : {PadicContext(5, 1), PadicContext(5, 2), PadicContext(7, 1)}) {
        for (long t : support::hasse_traces(ctx)) {
            const auto m = z_to_e(t, kAuto, ctx);
            CHECK(end_algebra(m).dimension == end_algebra(m.at_precision(2 * ctx.precision())).dimension);
        }
    }
}
