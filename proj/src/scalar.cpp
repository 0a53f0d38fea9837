#include "robba/scalar.hpp"

#include <stdexcept>

namespace robba {

namespace {

// Strips all p factors: raw = p^j * rest with rest coprime to p.
long strip_p(long p, Integer &raw) {
    long j = 0;
    while (mpz_divisible_ui_p(raw.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(raw.get_mpz_t(), raw.get_mpz_t(),
                        static_cast<unsigned long>(p));
        ++j;
    }
    return j;
}

} // namespace

PAdicScalar PAdicScalar::canonical(const RingContext &ctx, long vexp, Integer raw) {
    if (raw == 0)
        return PAdicScalar();
    vexp += strip_p(ctx.p(), raw);
    if (vexp >= ctx.precision())
        return PAdicScalar();
    // Mantissas are kept with guard digits beyond the visible precision so
    // exact values survive division by p-powers; the visible canonical form
    // is mantissa mod p^(N_abs - vexp).
    const Integer &mod = ctx.pow_p(ctx.precision() - vexp + ctx.guard_digits());
    if (mpz_cmpabs(raw.get_mpz_t(), mod.get_mpz_t()) >= 0) {
        Integer m;
        mpz_mod(m.get_mpz_t(), raw.get_mpz_t(), mod.get_mpz_t());
        return PAdicScalar(vexp, std::move(m));
    }
    return PAdicScalar(vexp, std::move(raw));
}

PAdicScalar PAdicScalar::from_integer(const RingContext &ctx, const Integer &n) {
    return canonical(ctx, 0, n);
}

PAdicScalar PAdicScalar::from_long(const RingContext &ctx, long n) {
    return canonical(ctx, 0, Integer(n));
}

PAdicScalar PAdicScalar::from_p_fraction(const RingContext &ctx,
                                         const Integer &num, long pden) {
    return canonical(ctx, -pden, num);
}

long PAdicScalar::vexp() const {
    if (is_zero())
        throw InvariantViolation("vexp of zero-at-precision scalar");
    return vexp_;
}

const Integer &PAdicScalar::mantissa() const {
    if (is_zero())
        throw InvariantViolation("mantissa of zero-at-precision scalar");
    return *mantissa_;
}

PAdicScalar PAdicScalar::add(const RingContext &ctx, const PAdicScalar &other) const {
    if (is_zero())
        return other;
    if (other.is_zero())
        return *this;
    long v = std::min(vexp_, other.vexp_);
    Integer raw = *mantissa_ * ctx.pow_p(vexp_ - v) +
                  *other.mantissa_ * ctx.pow_p(other.vexp_ - v);
    return canonical(ctx, v, std::move(raw));
}

PAdicScalar PAdicScalar::sub(const RingContext &ctx, const PAdicScalar &other) const {
    return add(ctx, other.negate(ctx));
}

PAdicScalar PAdicScalar::negate(const RingContext &ctx) const {
    if (is_zero())
        return *this;
    return canonical(ctx, vexp_, -*mantissa_);
}

PAdicScalar PAdicScalar::mul(const RingContext &ctx, const PAdicScalar &other) const {
    if (is_zero() || other.is_zero())
        return PAdicScalar();
    return canonical(ctx, vexp_ + other.vexp_, *mantissa_ * *other.mantissa_);
}

PAdicScalar PAdicScalar::shift(const RingContext &ctx, long k) const {
    if (is_zero())
        return *this;
    return canonical(ctx, vexp_ + k, *mantissa_);
}

PAdicScalar PAdicScalar::invert(const RingContext &ctx) const {
    if (is_zero())
        throw ZeroDivisor("inverting a zero-at-precision scalar");
    long v = -vexp_;
    if (v >= ctx.precision())
        throw PrecisionExhausted(
            "scalar inverse collapses to zero at precision (vexp too small)");
    const Integer &mod = ctx.pow_p(ctx.precision() - v + ctx.guard_digits());
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), mantissa_->get_mpz_t(), mod.get_mpz_t()) == 0)
        throw InvariantViolation("mantissa not invertible modulo p^k");
    return PAdicScalar(v, std::move(inv));
}

Integer PAdicScalar::visible_mantissa(const RingContext &ctx) const {
    if (is_zero())
        throw InvariantViolation("visible_mantissa of zero-at-precision scalar");
    Integer m;
    mpz_mod(m.get_mpz_t(), mantissa_->get_mpz_t(),
            ctx.pow_p(ctx.precision() - vexp_).get_mpz_t());
    return m;
}

bool PAdicScalar::equals(const RingContext &ctx, const PAdicScalar &other) const {
    if (is_zero() || other.is_zero())
        return is_zero() == other.is_zero();
    return vexp_ == other.vexp_ &&
           visible_mantissa(ctx) == other.visible_mantissa(ctx);
}

long PAdicScalar::digit(const RingContext &ctx, long j) const {
    if (is_zero() || j < 0 || j >= ctx.precision() - vexp_)
        return 0;
    Integer t = visible_mantissa(ctx);
    mpz_fdiv_q(t.get_mpz_t(), t.get_mpz_t(), ctx.pow_p(j).get_mpz_t());
    mpz_fdiv_r_ui(t.get_mpz_t(), t.get_mpz_t(),
                  static_cast<unsigned long>(ctx.p()));
    return t.get_si();
}

Rational PAdicScalar::to_rational(const RingContext &ctx) const {
    if (is_zero())
        return Rational(0);
    Rational r(visible_mantissa(ctx));
    if (vexp_ >= 0)
        r *= Rational(ctx.pow_p(vexp_));
    else
        r /= Rational(ctx.pow_p(-vexp_));
    r.canonicalize();
    return r;
}

std::string PAdicScalar::to_string(const RingContext &ctx) const {
    if (is_zero())
        return "0";
    if (vexp_ >= 0)
        return Integer(visible_mantissa(ctx) * ctx.pow_p(vexp_)).get_str();
    return visible_mantissa(ctx).get_str() + "/p^" + std::to_string(-vexp_);
}

} // namespace robba
