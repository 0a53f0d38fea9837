#ifndef ROBBA_DIVIDE_HPP
#define ROBBA_DIVIDE_HPP

#include <string>
#include <vector>

#include "robba/matrix.hpp"
#include "robba/valuation.hpp"

namespace robba {

// One quantitative postcondition: at `radius`, the value `achieved` (nullopt
// = +infinity) must be >= `bound` (or > when `strict`).
struct ResidualEntry {
    std::string label;
    Rational radius;
    Rational bound;
    std::optional<Rational> achieved;
    bool strict = false;

    bool holds() const {
        if (!achieved)
            return true;
        return strict ? (*achieved > bound) : (*achieved >= bound);
    }
};

// Carries the quantitative postconditions of the division and factorization
// lemmas; self-validating (achieved >= bound on every line, or the producing
// operation has thrown).
struct FactorizationCertificate {
    std::vector<ResidualEntry> residual_valuations;
    long iterations_used = 0;
    bool truncated = false;

    void require_all(const std::string &op) const;
    void add(std::string label, Rational radius, Rational bound,
             std::optional<Rational> achieved, bool strict = false);
};

struct DivRemResult {
    LaurentElement z;
    LaurentElement q;
    FactorizationCertificate cert;
};

// Division algorithm in Gamma_r: finds z, q with y = z + q x (at residual
// p-valuation >= target), height(z, r) < height(x, r) or z = 0, and
// w_r(z) >= w_r(y). Deterministic.
DivRemResult div_rem(const LaurentElement &y, const LaurentElement &x,
                     const Rational &r, long target, long max_iterations = 64);

struct FactorUnitResult {
    LaurentElement unit; // u
    LaurentElement g;    // u * x, integral with slopes in [s, r]
    FactorizationCertificate cert;
};

// Unit factorization across radii: u a unit on [s, r] with g = u x integral
// and all slopes of g in [0, r] lying in [s, r].
FactorUnitResult factor_unit(const LaurentElement &x, const Rational &s,
                             const Rational &r, long target,
                             long max_iterations = 64);

struct MatrixFactorResult {
    ElemMatrix u;
    ElemMatrix v;
    FactorizationCertificate cert;
};

// Two-annulus factorization M = U V for w_s(M - I) > 0 on [c, b]:
// U invertible over the small-radius side [a, b], V over [c, d], residual
// doubling per pass.
MatrixFactorResult matrix_factor(const ElemMatrix &m, const Rational &a,
                                 const Rational &b, const Rational &c,
                                 const Rational &d, long target,
                                 long max_iterations = 64);

struct MatrixApproximateResult {
    ElemMatrix u;
    FactorizationCertificate cert;
};

// Approximate-inverse normalization: U with finite entries such that
// w_s(M U - I) > 0 at the endpoints of [a, b]; optionally det(U) = 1 at
// precision when w_s(det M - 1) > 0.
MatrixApproximateResult matrix_approximate(const ElemMatrix &m, const Rational &a,
                                           const Rational &b, const Rational &r,
                                           bool unimodular);

} // namespace robba

#endif
