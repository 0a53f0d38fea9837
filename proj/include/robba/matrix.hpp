#ifndef ROBBA_MATRIX_HPP
#define ROBBA_MATRIX_HPP

#include <functional>
#include <optional>
#include <vector>

#include "robba/valuation.hpp"

namespace robba {

// Dense square matrix of Laurent elements.
class ElemMatrix {
  public:
    ElemMatrix(ContextPtr ctx, size_t n);
    static ElemMatrix identity(const ContextPtr &ctx, size_t n);

    size_t dim() const { return n_; }
    const ContextPtr &context() const { return ctx_; }
    const LaurentElement &at(size_t i, size_t j) const { return a_[i * n_ + j]; }
    LaurentElement &at(size_t i, size_t j) { return a_[i * n_ + j]; }

    ElemMatrix add(const ElemMatrix &other) const;
    ElemMatrix sub(const ElemMatrix &other) const;
    ElemMatrix mul(const ElemMatrix &other) const;
    ElemMatrix negate() const;
    ElemMatrix scale(const LaurentElement &c) const;
    ElemMatrix scale_p(long k) const;
    ElemMatrix transpose() const;
    ElemMatrix frobenius(int iterations = 1) const;
    ElemMatrix map(const std::function<LaurentElement(const LaurentElement &)> &f) const;

    bool is_zero() const;
    bool equals(const ElemMatrix &other) const;
    bool any_truncated() const;

    std::vector<LaurentElement> apply(const std::vector<LaurentElement> &v) const;

    // Minimum of w_r over entries (nullopt = +infinity, all entries zero).
    std::optional<Rational> weighted_valuation(const Rational &r) const;
    // Determinant by cofactor expansion (exact; fine at the ranks we use).
    LaurentElement det() const;
    // Minor matrix with row i and column j removed.
    ElemMatrix minor_matrix(size_t i, size_t j) const;
    // Inverse via adjugate and a positioned inverse of the determinant;
    // throws SingularAtPrecision when det vanishes at precision. The result
    // is certified by a residual check against the identity.
    ElemMatrix inverse(const Rational &r) const;
    // Neumann series inverse for M = I + E with E small (dies by precision
    // or window escape).
    ElemMatrix neumann_inverse(long max_iterations = 0) const;

    std::string to_string() const;

  private:
    ContextPtr ctx_;
    size_t n_;
    std::vector<LaurentElement> a_;
};

// True when (M - I) * candidates vanish: used to certify inverses at
// precision on the window interior (entrywise zero check).
bool matrix_identity_certified(const ElemMatrix &prod);

} // namespace robba

#endif
