#ifndef ROBBA_ELEMENT_HPP
#define ROBBA_ELEMENT_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "robba/context.hpp"
#include "robba/scalar.hpp"

namespace robba {

// Finite-support Laurent polynomial sum c_i u^i over PAdicScalar, the
// computational stand-in for elements of Gamma_r[p^-1] (finite sums are
// dense there). Exponents are clamped to the context window; anything an
// operation pushes outside is dropped and recorded in sticky truncation
// flags. Values are immutable after construction.
class LaurentElement {
  public:
    using TermMap = std::map<long, PAdicScalar>;

    explicit LaurentElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    LaurentElement(ContextPtr ctx, TermMap terms, bool trunc_lo = false,
                   bool trunc_hi = false);

    static LaurentElement zero(ContextPtr ctx) { return LaurentElement(std::move(ctx)); }
    static LaurentElement one(const ContextPtr &ctx);
    static LaurentElement monomial(const ContextPtr &ctx, long exp,
                                   const PAdicScalar &c);
    static LaurentElement monomial(const ContextPtr &ctx, long exp, long c);
    // Convenience: sum of (exp, integer coefficient) pairs.
    static LaurentElement from_terms(const ContextPtr &ctx,
                                     const std::vector<std::pair<long, long>> &terms);

    const ContextPtr &context() const { return ctx_; }
    const RingContext &ctx() const { return *ctx_; }
    const TermMap &terms() const { return terms_; }
    bool truncated_lo() const { return trunc_lo_; }
    bool truncated_hi() const { return trunc_hi_; }
    bool truncated() const { return trunc_lo_ || trunc_hi_; }
    LaurentElement with_flags(bool lo, bool hi) const;

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    long min_exponent() const; // errors on zero
    long max_exponent() const;
    // Smallest coefficient valuation (the p-adic valuation w); errors on zero.
    long min_vexp() const;
    // Largest coefficient valuation among stored terms.
    long max_vexp() const;
    bool is_integral() const; // all coefficient valuations >= 0
    PAdicScalar coeff(long exp) const;
    // Coefficient of u^0 (the specialization at u = 0).
    PAdicScalar constant_coeff() const { return coeff(0); }

    LaurentElement add(const LaurentElement &other) const;
    LaurentElement sub(const LaurentElement &other) const;
    LaurentElement negate() const;
    LaurentElement mul(const LaurentElement &other) const;
    LaurentElement scalar_mul(const PAdicScalar &c) const;
    LaurentElement shift_p(long k) const; // multiply by p^k
    LaurentElement shift_u(long k) const; // multiply by u^k
    // Standard Frobenius lift iterated: exponents scaled by q^iterations,
    // coefficients fixed.
    LaurentElement frobenius(int iterations = 1) const;

    // Equality at precision on the shared window; flags are ignored.
    bool equals(const LaurentElement &other) const;

    // Base-p digit expansion: x = sum_i p^i d_i with each d_i a Laurent
    // polynomial with integer coefficients in [0, p-1]; pairs are returned
    // with i ascending, zero digits omitted. Nonzero digits are digit-lifts
    // of nonzero residue series, hence units (semiunit presentation).
    std::vector<std::pair<long, LaurentElement>> digit_decompose() const;
    // The single digit at level i of the expansion above.
    LaurentElement digit(long i) const;
    // Sum of p^i d_i over digits with i in [lo, hi] (inclusive bounds).
    LaurentElement digit_range(long lo, long hi) const;

    std::string to_string() const;

  private:
    void insert_term(long exp, const PAdicScalar &c);

    ContextPtr ctx_;
    TermMap terms_;
    bool trunc_lo_ = false;
    bool trunc_hi_ = false;
};

} // namespace robba

#endif
