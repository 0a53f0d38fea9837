#ifndef ROBBA_SCALAR_HPP
#define ROBBA_SCALAR_HPP

#include <optional>
#include <string>

#include "robba/context.hpp"

namespace robba {

// A coefficient-field element m * p^v known modulo p^N_abs, stored in the
// canonical form (v, m) with m in [1, p^(N_abs - v)) coprime to p.
// v may be negative (p-denominators); v >= N_abs collapses to the
// zero-at-precision value, which has no mantissa.
class PAdicScalar {
  public:
    PAdicScalar() = default; // zero at precision

    static PAdicScalar zero() { return PAdicScalar(); }
    static PAdicScalar from_integer(const RingContext &ctx, const Integer &n);
    static PAdicScalar from_long(const RingContext &ctx, long n);
    // value = num * p^(-pden)
    static PAdicScalar from_p_fraction(const RingContext &ctx, const Integer &num,
                                       long pden);
    static PAdicScalar one(const RingContext &ctx) { return from_long(ctx, 1); }

    bool is_zero() const { return !mantissa_.has_value(); }
    // p-adic valuation; only meaningful on nonzero values.
    long vexp() const;
    // Stored mantissa (may carry guard digits beyond the visible precision
    // and a sign); prefer visible_mantissa for canonical-form access.
    const Integer &mantissa() const;
    // Canonical representative in [1, p^(N_abs - vexp)).
    Integer visible_mantissa(const RingContext &ctx) const;

    PAdicScalar add(const RingContext &ctx, const PAdicScalar &other) const;
    PAdicScalar sub(const RingContext &ctx, const PAdicScalar &other) const;
    PAdicScalar mul(const RingContext &ctx, const PAdicScalar &other) const;
    PAdicScalar negate(const RingContext &ctx) const;
    // Multiplies by p^k (exact shift of the valuation).
    PAdicScalar shift(const RingContext &ctx, long k) const;
    // Multiplicative inverse; errors if zero at precision or if the inverse
    // itself collapses to zero at precision.
    PAdicScalar invert(const RingContext &ctx) const;

    // Equality of the visible values (modulo p^N_abs).
    bool equals(const RingContext &ctx, const PAdicScalar &other) const;

    // The digit d_j of the base-p expansion mantissa = sum d_j p^j,
    // 0 <= d_j < p, for j in [0, N_abs - vexp).
    long digit(const RingContext &ctx, long j) const;

    // Exact value as a rational number a / p^k (for printing).
    Rational to_rational(const RingContext &ctx) const;
    std::string to_string(const RingContext &ctx) const;

  private:
    PAdicScalar(long vexp, Integer mantissa)
        : vexp_(vexp), mantissa_(std::move(mantissa)) {}
    static PAdicScalar canonical(const RingContext &ctx, long vexp, Integer raw);

    long vexp_ = 0;
    std::optional<Integer> mantissa_;
};

} // namespace robba

#endif
