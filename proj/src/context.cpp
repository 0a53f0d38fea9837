#include "robba/context.hpp"

#include <string>

namespace robba {

namespace {

bool is_prime(long n) {
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// Returns s >= 1 with q = p^s, or 0 if q is not a positive power of p.
int power_of(long p, long q) {
    int s = 0;
    while (q > 1 && q % p == 0) {
        q /= p;
        ++s;
    }
    return q == 1 ? s : 0;
}

} // namespace

RingContext::RingContext(long p, long q, int n_abs, long lo_cap, long hi_cap,
                         Rational r0)
    : p_(p), q_(q), s_(power_of(p, q)), n_abs_(n_abs), lo_cap_(lo_cap),
      hi_cap_(hi_cap), r0_(std::move(r0)),
      guard_digits_((hi_cap - lo_cap) + 2L * n_abs + 32) {
    if (!is_prime(p_))
        throw InvariantViolation("context: p = " + std::to_string(p_) +
                                 " is not prime");
    if (s_ < 1)
        throw InvariantViolation("context: q = " + std::to_string(q_) +
                                 " is not a positive power of p");
    if (n_abs_ < 1)
        throw InvariantViolation("context: N_abs must be >= 1");
    if (lo_cap_ >= hi_cap_)
        throw InvariantViolation("context: window lo_cap must be < hi_cap");
    if (r0_ <= 0)
        throw InvariantViolation("context: r0 must be positive");
    pow_cache_.reserve(static_cast<size_t>(n_abs_) + 2);
    Integer v = 1;
    for (int k = 0; k <= n_abs_ + 1; ++k) {
        pow_cache_.push_back(v);
        v *= p_;
    }
}

const Integer &RingContext::pow_p(long k) const {
    if (k < 0)
        throw InvariantViolation("pow_p: negative exponent");
    while (static_cast<size_t>(k) >= pow_cache_.size())
        pow_cache_.push_back(pow_cache_.back() * p_);
    return pow_cache_[static_cast<size_t>(k)];
}

ContextPtr make_context(long p, long q, int n_abs, long lo_cap, long hi_cap,
                        Rational r0) {
    return std::make_shared<const RingContext>(p, q, n_abs, lo_cap, hi_cap,
                                               std::move(r0));
}

ContextPtr default_context() {
    return make_context(5, 5, 24, -64, 256, Rational(1));
}

void require_same_context(const ContextPtr &a, const ContextPtr &b) {
    if (!a || !b || (a.get() != b.get() && !a->compatible(*b)))
        throw ContextMismatch("operands belong to different ring contexts");
}

} // namespace robba
