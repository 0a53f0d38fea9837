#ifndef ROBBA_CONTEXT_HPP
#define ROBBA_CONTEXT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "robba/errors.hpp"

namespace robba {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Fixed arithmetic environment: the prime p, the Frobenius power q = p^s
// (u maps to u^q), the absolute p-adic precision N_abs (coefficients live
// modulo p^N_abs), the retained u-exponent window, and the outer radius r0.
// Every scalar and Laurent element is tied to one context; mixing contexts
// is an error.
class RingContext {
  public:
    RingContext(long p, long q, int n_abs, long lo_cap, long hi_cap, Rational r0);

    long p() const { return p_; }
    long q() const { return q_; }
    int frobenius_exponent() const { return s_; } // q = p^s
    int precision() const { return n_abs_; }
    long lo_cap() const { return lo_cap_; }
    long hi_cap() const { return hi_cap_; }
    const Rational &r0() const { return r0_; }

    bool in_window(long e) const { return e >= lo_cap_ && e <= hi_cap_; }

    // Mantissas are stored with this many digits of slack beyond the
    // visible precision, so that exact values survive later division by
    // p-powers (up to the guard depth) without fabricated digits.
    long guard_digits() const { return guard_digits_; }

    // p^k for k >= 0 (cached for the common range).
    const Integer &pow_p(long k) const;

    bool compatible(const RingContext &other) const {
        return p_ == other.p_ && q_ == other.q_ && n_abs_ == other.n_abs_ &&
               lo_cap_ == other.lo_cap_ && hi_cap_ == other.hi_cap_ &&
               r0_ == other.r0_;
    }

  private:
    long p_;
    long q_;
    int s_;
    int n_abs_;
    long lo_cap_;
    long hi_cap_;
    Rational r0_;
    long guard_digits_;
    mutable std::vector<Integer> pow_cache_;
};

using ContextPtr = std::shared_ptr<const RingContext>;

ContextPtr make_context(long p, long q, int n_abs, long lo_cap, long hi_cap,
                        Rational r0);

// CLI/test defaults: p = q = 5, N_abs = 24, window [-64, 256], r0 = 1.
ContextPtr default_context();

void require_same_context(const ContextPtr &a, const ContextPtr &b);

} // namespace robba

#endif
