#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fphi/errors.hpp"

namespace fphi {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr int kDefaultPrecision = 40;
// Digits below the working precision that a scalar must clear before rank
// decisions treat it as zero.
inline constexpr int kZeroMargin = 8;

bool is_prime(long n);

// v_p of a nonzero integer / rational.
long valuation(const Integer& x, long p);
std::optional<long> valuation(const Rational& x, long p);

// The arithmetic world: F_q with q = p^f, and N significant p-adic digits.
class PadicContext {
public:
    // Placeholder context (p = 2, f = 1); real contexts always name their prime.
    PadicContext() : PadicContext(2, 1) {}
    PadicContext(long p, int f, int precision = kDefaultPrecision);

    long p() const { return p_; }
    int f() const { return f_; }
    const Integer& q() const { return q_; }
    int precision() const { return precision_; }

    PadicContext with_precision(int precision) const { return {p_, f_, precision}; }
    Integer p_power(long k) const;

    // Guaranteed valuations strictly above this are treated as zero.
    long zero_threshold() const { return precision_ - kZeroMargin; }

    bool operator==(const PadicContext&) const = default;

private:
    long p_;
    int f_;
    int precision_;
    Integer q_;
};

// An element of Q_p known to finitely many digits. Three states:
//   exact zero;
//   zero to known precision O(p^a);
//   unit * p^v + O(p^(v + digits)), with p not dividing unit and 0 <= unit < p^digits.
class PadicScalar {
public:
    // Exact zero in the placeholder context; absorbs into any context under +.
    PadicScalar() = default;
    static PadicScalar zero(const PadicContext& ctx) { return PadicScalar(ctx); }
    static PadicScalar one(const PadicContext& ctx) { return from_rational(1, ctx); }
    static PadicScalar from_rational(const Rational& x, const PadicContext& ctx);
    // x is known modulo p^absolute_precision.
    static PadicScalar from_integer_mod(const Integer& x, long absolute_precision,
                                        const PadicContext& ctx);
    static PadicScalar inexact_zero(long absolute_precision, const PadicContext& ctx);
    // Throws InvalidArgument unless the parts satisfy the representation invariants.
    static PadicScalar from_parts(long valuation, const Integer& unit, int digits,
                                  const PadicContext& ctx);

    const PadicContext& context() const { return ctx_; }

    bool is_exact_zero() const { return state_ == State::ExactZero; }
    bool is_inexact_zero() const { return state_ == State::InexactZero; }
    bool is_nonzero() const { return state_ == State::Nonzero; }

    // Valuation of a nonzero value; for O(p^a) this is a, for exact zero it is max().
    long guaranteed_valuation() const;
    long absolute_precision() const;
    int digits() const { return digits_; }
    const Integer& unit() const { return unit_; }

    // Rank policy. Negligible: exact zero, or guaranteed valuation above the
    // zero threshold. Ambiguous: zero to a precision at or below the threshold.
    bool negligible() const;
    bool ambiguous() const;

    // A rational representative unit * p^v (0 for either zero state).
    Rational lift() const;

    PadicScalar with_context(const PadicContext& ctx) const;
    PadicScalar inverse() const;

    PadicScalar operator-() const;
    friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }
    friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b);
    friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
        return a * b.inverse();
    }
    PadicScalar& operator+=(const PadicScalar& o) { return *this = *this + o; }
    PadicScalar& operator-=(const PadicScalar& o) { return *this = *this - o; }
    PadicScalar& operator*=(const PadicScalar& o) { return *this = *this * o; }

    // Structural equality: same state, valuation, digits and unit.
    bool operator==(const PadicScalar& o) const;

    // Digits of the unit expansion compared lowest first, after valuation.
    // Only meaningful for nonzero values; used for deterministic root order.
    std::strong_ordering digit_order(const PadicScalar& o) const;

    std::string to_string() const;

private:
    enum class State { ExactZero, InexactZero, Nonzero };

    explicit PadicScalar(const PadicContext& ctx) : ctx_(ctx) {}

    PadicContext ctx_;
    State state_ = State::ExactZero;
    long val_ = 0;  // valuation (Nonzero) or absolute precision (InexactZero)
    int digits_ = 0;
    Integer unit_ = 0;
};

enum class ArithOp { Add, Sub, Mul, Div };
PadicScalar arith(ArithOp op, const PadicScalar& a, const PadicScalar& b);

// Dense polynomial with rational coefficients, lowest degree first.
struct Polynomial {
    std::vector<Rational> coeffs;

    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> c);
    static Polynomial from_ints(std::initializer_list<long> ascending);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }  // -1 for zero
    bool is_zero() const { return coeffs.empty(); }
    bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }
    bool has_integer_coeffs() const;
    Rational operator()(const Rational& x) const;
    Integer eval_integer(const Integer& x) const;
    Polynomial derivative() const;

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    bool operator==(const Polynomial&) const = default;

    std::string to_string() const;
};

// Lift a simple root r0 (mod p) of a monic integer polynomial to precision N.
PadicScalar hensel_lift_root(const Polynomial& poly, const Integer& r0, const PadicContext& ctx);

// Root valuations (with multiplicity, ascending) divided by f, read off the
// lower convex hull of the points (i, v_p(a_i)).
std::vector<Rational> newton_slopes(const Polynomial& poly, const PadicContext& ctx);

// Square root in Q_p of a rational, if one exists; result carries N digits
// (N - 1 for p = 2).
std::optional<PadicScalar> padic_sqrt(const Rational& x, const PadicContext& ctx);

}  // namespace fphi
