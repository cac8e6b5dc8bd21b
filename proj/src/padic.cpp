#include "fphi/padic.hpp"

#include <algorithm>
#include <sstream>

namespace fphi {

namespace {

Integer ipow(long p, long k) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw DivisionByZero("element is not invertible modulo " + m.get_str());
    }
    return r;
}

// Strip the p-part of a nonzero integer: returns (v_p(x), x / p^v).
std::pair<long, Integer> split_p(const Integer& x, long p) {
    Integer rest = x;
    long v = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(p)) != 0) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return {v, rest};
}

void require_same_prime(const PadicContext& a, const PadicContext& b) {
    if (a != b) {
        throw ContextMismatch("p-adic operands live in different contexts");
    }
}

}  // namespace

bool is_prime(long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

long valuation(const Integer& x, long p) {
    if (x == 0) throw InvalidArgument("valuation of zero");
    return split_p(x, p).first;
}

std::optional<long> valuation(const Rational& x, long p) {
    if (x == 0) return std::nullopt;
    return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

// ---------------------------------------------------------------------------

PadicContext::PadicContext(long p, int f, int precision) : p_(p), f_(f), precision_(precision) {
    if (!is_prime(p)) throw InvalidArgument("p = " + std::to_string(p) + " is not prime");
    if (f < 1) throw InvalidArgument("f must be >= 1");
    if (precision < 4) throw InvalidArgument("precision must be >= 4");
    q_ = ipow(p, f);
}

Integer PadicContext::p_power(long k) const { return ipow(p_, k); }

// ---------------------------------------------------------------------------

PadicScalar PadicScalar::from_rational(const Rational& x, const PadicContext& ctx) {
    PadicScalar r(ctx);
    if (x == 0) return r;
    auto [vn, num] = split_p(Integer(x.get_num()), ctx.p());
    auto [vd, den] = split_p(Integer(x.get_den()), ctx.p());
    const Integer modulus = ctx.p_power(ctx.precision());
    r.state_ = State::Nonzero;
    r.val_ = vn - vd;
    r.digits_ = ctx.precision();
    r.unit_ = mod_floor(num * mod_inverse(den, modulus), modulus);
    return r;
}

PadicScalar PadicScalar::from_integer_mod(const Integer& x, long absolute_precision,
                                          const PadicContext& ctx) {
    const Integer modulus = ctx.p_power(absolute_precision);
    const Integer reduced = mod_floor(x, modulus);
    if (reduced == 0) return inexact_zero(absolute_precision, ctx);
    auto [v, rest] = split_p(reduced, ctx.p());
    PadicScalar r(ctx);
    r.state_ = State::Nonzero;
    r.val_ = v;
    r.digits_ = static_cast<int>(std::min<long>(absolute_precision - v, ctx.precision()));
    r.unit_ = mod_floor(rest, ctx.p_power(r.digits_));
    return r;
}

PadicScalar PadicScalar::inexact_zero(long absolute_precision, const PadicContext& ctx) {
    PadicScalar r(ctx);
    r.state_ = State::InexactZero;
    r.val_ = absolute_precision;
    return r;
}

PadicScalar PadicScalar::from_parts(long valuation, const Integer& unit, int digits,
                                    const PadicContext& ctx) {
    if (digits < 1 || digits > ctx.precision()) {
        throw InvalidArgument("digits out of range [1, N]");
    }
    if (unit < 0 || unit >= ctx.p_power(digits) ||
        mpz_divisible_ui_p(unit.get_mpz_t(), static_cast<unsigned long>(ctx.p())) != 0) {
        throw InvalidArgument("unit must lie in [0, p^digits) and be prime to p");
    }
    PadicScalar r(ctx);
    r.state_ = State::Nonzero;
    r.val_ = valuation;
    r.digits_ = digits;
    r.unit_ = unit;
    return r;
}

long PadicScalar::guaranteed_valuation() const {
    return is_exact_zero() ? std::numeric_limits<long>::max() : val_;
}

long PadicScalar::absolute_precision() const {
    switch (state_) {
        case State::ExactZero: return std::numeric_limits<long>::max();
        case State::InexactZero: return val_;
        case State::Nonzero: break;
    }
    return val_ + digits_;
}

bool PadicScalar::negligible() const {
    return is_exact_zero() || guaranteed_valuation() > ctx_.zero_threshold();
}

bool PadicScalar::ambiguous() const { return is_inexact_zero() && !negligible(); }

Rational PadicScalar::lift() const {
    if (!is_nonzero()) return 0;
    Rational r(unit_);
    if (val_ >= 0) {
        r *= ctx_.p_power(val_);
    } else {
        r /= ctx_.p_power(-val_);
    }
    r.canonicalize();
    return r;
}

PadicScalar PadicScalar::with_context(const PadicContext& ctx) const {
    if (is_exact_zero()) return zero(ctx);
    if (ctx.p() != ctx_.p()) throw ContextMismatch("cannot change the prime of a p-adic scalar");
    PadicScalar r = *this;
    r.ctx_ = ctx;
    if (is_nonzero() && digits_ > ctx.precision()) {
        r.digits_ = ctx.precision();
        r.unit_ = mod_floor(unit_, ctx.p_power(r.digits_));
    }
    return r;
}

PadicScalar PadicScalar::inverse() const {
    if (is_exact_zero()) throw DivisionByZero("division by exact zero");
    if (is_inexact_zero()) {
        throw PrecisionExhausted("division by a value that is zero to working precision");
    }
    PadicScalar r = *this;
    r.val_ = -val_;
    r.unit_ = mod_inverse(unit_, ctx_.p_power(digits_));
    return r;
}

PadicScalar PadicScalar::operator-() const {
    if (!is_nonzero()) return *this;
    PadicScalar r = *this;
    r.unit_ = mod_floor(-unit_, ctx_.p_power(digits_));
    return r;
}

PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    require_same_prime(a.ctx_, b.ctx_);
    const PadicContext& ctx = a.ctx_;
    const long abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
    if (!a.is_nonzero() && !b.is_nonzero()) return PadicScalar::inexact_zero(abs_prec, ctx);

    long v0 = std::numeric_limits<long>::max();
    for (const PadicScalar* s : {&a, &b}) {
        if (s->is_nonzero()) v0 = std::min(v0, s->val_);
    }
    if (abs_prec <= v0) return PadicScalar::inexact_zero(abs_prec, ctx);

    const Integer modulus = ctx.p_power(abs_prec - v0);
    Integer sum = 0;
    for (const PadicScalar* s : {&a, &b}) {
        if (s->is_nonzero() && s->val_ < abs_prec) sum += s->unit_ * ctx.p_power(s->val_ - v0);
    }
    return PadicScalar::from_integer_mod(sum, abs_prec - v0, ctx) *
           (v0 >= 0 ? PadicScalar::from_rational(Rational(ctx.p_power(v0)), ctx)
                    : PadicScalar::from_rational(Rational(1, 1) / Rational(ctx.p_power(-v0)), ctx));
}

PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    if (a.is_exact_zero()) return a;
    if (b.is_exact_zero()) return b;
    require_same_prime(a.ctx_, b.ctx_);
    if (a.is_inexact_zero() || b.is_inexact_zero()) {
        return PadicScalar::inexact_zero(a.guaranteed_valuation() + b.guaranteed_valuation(), a.ctx_);
    }
    PadicScalar r(a.ctx_);
    r.state_ = PadicScalar::State::Nonzero;
    r.val_ = a.val_ + b.val_;
    r.digits_ = std::min(a.digits_, b.digits_);
    r.unit_ = mod_floor(a.unit_ * b.unit_, a.ctx_.p_power(r.digits_));
    return r;
}

bool PadicScalar::operator==(const PadicScalar& o) const {
    if (is_exact_zero() && o.is_exact_zero()) return true;
    if (ctx_ != o.ctx_ || state_ != o.state_) return false;
    switch (state_) {
        case State::ExactZero: return true;
        case State::InexactZero: return val_ == o.val_;
        case State::Nonzero: break;
    }
    return val_ == o.val_ && digits_ == o.digits_ && unit_ == o.unit_;
}

std::strong_ordering PadicScalar::digit_order(const PadicScalar& o) const {
    if (auto c = guaranteed_valuation() <=> o.guaranteed_valuation(); c != 0) return c;
    Integer x = unit_;
    Integer y = o.unit_;
    const int n = std::min(digits_, o.digits_);
    for (int i = 0; i < n; ++i) {
        const unsigned long dx = mpz_fdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), ctx_.p());
        const unsigned long dy = mpz_fdiv_q_ui(y.get_mpz_t(), y.get_mpz_t(), ctx_.p());
        if (dx != dy) return dx <=> dy;
    }
    return std::strong_ordering::equal;
}

std::string PadicScalar::to_string() const {
    std::ostringstream out;
    switch (state_) {
        case State::ExactZero: return "0";
        case State::InexactZero: out << "O(" << ctx_.p() << "^" << val_ << ")"; return out.str();
        case State::Nonzero: break;
    }
    out << unit_.get_str() << "*" << ctx_.p() << "^" << val_ << " + O(" << ctx_.p() << "^"
        << val_ + digits_ << ")";
    return out.str();
}

PadicScalar arith(ArithOp op, const PadicScalar& a, const PadicScalar& b) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    throw InvalidArgument("unknown arithmetic operation");
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<Rational> c) : coeffs(std::move(c)) {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Polynomial Polynomial::from_ints(std::initializer_list<long> ascending) {
    std::vector<Rational> c;
    for (long x : ascending) c.emplace_back(x);
    return Polynomial(std::move(c));
}

bool Polynomial::has_integer_coeffs() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c.get_den() == 1; });
}

Rational Polynomial::operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Integer Polynomial::eval_integer(const Integer& x) const {
    Integer acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + Integer(it->get_num());
    return acc;
}

Polynomial Polynomial::derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * static_cast<long>(i));
    return Polynomial(std::move(d));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs.size() + b.coeffs.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return Polynomial(std::move(c));
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        Rational mag = abs(c);
        out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        if (mag != 1 || i == 0) out << mag.get_str();
        if (i > 0) out << "T";
        if (i > 1) out << "^" << i;
        first = false;
    }
    return out.str();
}

// ---------------------------------------------------------------------------

PadicScalar hensel_lift_root(const Polynomial& poly, const Integer& r0, const PadicContext& ctx) {
    if (poly.is_zero()) throw ZeroPolynomial("cannot lift a root of the zero polynomial");
    if (!poly.has_integer_coeffs()) throw InvalidArgument("Hensel lifting needs integer coefficients");
    const Integer p = ctx.p();
    const Polynomial deriv = poly.derivative();
    Integer r = mod_floor(r0, p);
    if (mod_floor(poly.eval_integer(r), p) != 0) {
        throw InvalidArgument("r0 is not a root modulo p of " + poly.to_string());
    }
    if (mod_floor(deriv.eval_integer(r), p) == 0) {
        throw NonSimpleRoot("derivative of " + poly.to_string() + " vanishes at r0 mod p");
    }
    long prec = 1;
    while (prec < ctx.precision()) {
        prec = std::min<long>(2 * prec, ctx.precision());
        const Integer m = ctx.p_power(prec);
        r = mod_floor(r - poly.eval_integer(r) * mod_inverse(deriv.eval_integer(r), m), m);
    }
    return PadicScalar::from_integer_mod(r, ctx.precision(), ctx);
}

std::vector<Rational> newton_slopes(const Polynomial& poly, const PadicContext& ctx) {
    if (poly.is_zero()) throw ZeroPolynomial("Newton polygon of the zero polynomial");
    if (poly.coeffs.front() == 0) {
        throw InvalidArgument("polynomial has 0 as a root; its slope is infinite");
    }
    struct Point {
        long x;
        long y;
    };
    std::vector<Point> hull;
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
        const auto v = valuation(poly.coeffs[i], ctx.p());
        if (!v) continue;
        const Point pt{static_cast<long>(i), *v};
        while (hull.size() >= 2) {
            const Point& a = hull[hull.size() - 2];
            const Point& b = hull.back();
            const long cross = (b.x - a.x) * (pt.y - a.y) - (b.y - a.y) * (pt.x - a.x);
            if (cross > 0) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    std::vector<Rational> slopes;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        const long dx = hull[i].x - hull[i - 1].x;
        Rational root_val(-(hull[i].y - hull[i - 1].y), dx * ctx.f());
        root_val.canonicalize();
        slopes.insert(slopes.end(), static_cast<std::size_t>(dx), root_val);
    }
    std::sort(slopes.begin(), slopes.end());
    return slopes;
}

std::optional<PadicScalar> padic_sqrt(const Rational& x, const PadicContext& ctx) {
    if (x == 0) return PadicScalar::zero(ctx);
    const long v = *valuation(x, ctx.p());
    if (v % 2 != 0) return std::nullopt;
    const long p = ctx.p();
    const int n = ctx.precision();

    Rational w = x;
    if (v >= 0) {
        w /= Rational(ctx.p_power(v));
    } else {
        w *= Rational(ctx.p_power(-v));
    }
    w.canonicalize();
    // One guard digit for p = 2, where x^2 = w mod 2^(k+1) fixes x only mod 2^k.
    const int work = p == 2 ? n + 1 : n;
    const Integer modulus = ctx.p_power(work);
    const Integer w_int =
        mod_floor(Integer(w.get_num()) * mod_inverse(Integer(w.get_den()), modulus), modulus);

    Integer root;
    if (p == 2) {
        if (mod_floor(w_int, 8) != 1) return std::nullopt;
        root = 1;
        for (int k = 3; k < work; ++k) {
            if (mod_floor(root * root - w_int, ctx.p_power(k + 1)) != 0) root += ctx.p_power(k - 1);
        }
        root = mod_floor(root, ctx.p_power(n));
    } else {
        std::optional<Integer> r0;
        const Integer w_mod_p = mod_floor(w_int, p);
        for (long r = 1; r < p; ++r) {
            if (mod_floor(Integer(r) * r - w_mod_p, p) == 0) {
                r0 = r;
                break;
            }
        }
        if (!r0) return std::nullopt;
        Polynomial poly({Rational(-w_int), Rational(0), Rational(1)});
        root = hensel_lift_root(poly, *r0, ctx).lift().get_num();
    }
    PadicScalar unit_root = PadicScalar::from_integer_mod(root, n, ctx);
    Rational scale = v >= 0 ? Rational(ctx.p_power(v / 2)) : Rational(1) / Rational(ctx.p_power(-v / 2));
    return unit_root * PadicScalar::from_rational(scale, ctx);
}

}  // namespace fphi
