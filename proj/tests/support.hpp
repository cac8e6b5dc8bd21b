#pragma once

#include <random>

#include "fphi/homsolver.hpp"
#include "oracles.hpp"

namespace support {

using namespace fphi;

inline oracle::Dense dense(const RationalMatrix& m) {
    oracle::Dense d(m.rows(), std::vector<oracle::Q>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
    return d;
}

inline RationalMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    RationalMatrix m(rows, cols, Rational(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = d(rng);
    return m;
}

// q-prime powers up to 49.
inline std::vector<PadicContext> small_fields(int precision = kDefaultPrecision) {
    std::vector<PadicContext> out;
    for (long q = 2; q <= 49; ++q) {
        for (long p = 2; p <= q; ++p) {
            if (!is_prime(p)) continue;
            long x = q;
            int f = 0;
            while (x % p == 0) {
                x /= p;
                ++f;
            }
            if (x == 1) out.emplace_back(p, f, precision);
            if (q % p == 0) break;
        }
    }
    return out;
}

inline std::vector<long> hasse_traces(const PadicContext& ctx) {
    std::vector<long> out;
    const long q = ctx.q().get_si();
    for (long t = -2 * q; t <= 2 * q; ++t) {
        if (t * t <= 4 * q) out.push_back(t);
    }
    return out;
}

inline FilteredPhiModule z_to_e(long t, EllipticFilMode mode, const PadicContext& ctx) {
    return direct_sum({realize_lattice(1, ctx), realize_elliptic(t, mode, ctx)});
}

inline FilteredPhiModule kummer(const PadicContext& ctx) {
    return direct_sum({realize_lattice(1, ctx), realize_torus(1, ctx)});
}

// Graded module of total dimension <= 3 with small integer phi: one to three
// random blocks, each assigned the weight its slopes allow, random rational
// Hodge generators in weight -1.
inline std::optional<FilteredPhiModule> random_graded(std::mt19937& rng, const PadicContext& ctx) {
    std::uniform_int_distribution<int> total_d(1, 3);
    const int total = total_d(rng);
    std::vector<FilteredPhiModule> parts;
    int used = 0;
    while (used < total) {
        std::uniform_int_distribution<int> bd(1, std::min(2, total - used));
        const int d = bd(rng);
        used += d;
        const RationalMatrix phi = random_matrix(rng, d, d, -5, 5);
        if (determinant(phi) == 0) return std::nullopt;
        const auto slopes = newton_slopes(char_poly(phi), ctx);
        int w = -1;
        bool all0 = true, all1 = true, inside = true;
        for (const auto& s : slopes) {
            all0 = all0 && s == 0;
            all1 = all1 && s == 1;
            inside = inside && s >= 0 && s <= 1;
        }
        if (all0) {
            w = 0;
        } else if (all1) {
            w = -2;
        } else if (!inside) {
            return std::nullopt;
        }
        // Weight -2 blocks carry all of Fil^1 (torus-like) so duals stay graded.
        std::uniform_int_distribution<int> kd(0, d);
        const int k = w == 0 ? 0 : w == -2 ? d : kd(rng);
        const RationalMatrix fil = w == -2 ? rational_identity(d) : random_matrix(rng, d, k, -3, 3);
        parts.push_back(FilteredPhiModule::graded(ctx, phi, fil, {{w, static_cast<std::size_t>(d)}}, "random"));
    }
    return direct_sum(parts);
}

inline std::size_t oracle_hom_dimension(const FilteredPhiModule& a, const FilteredPhiModule& b) {
    const auto& fa = std::get<RationalMatrix>(a.fil1());
    const auto& fb = std::get<RationalMatrix>(b.fil1());
    return oracle::hom_dimension(dense(a.phi()), dense(fa), fa.cols(), dense(b.phi()), dense(fb), fb.cols());
}

}  // namespace support
