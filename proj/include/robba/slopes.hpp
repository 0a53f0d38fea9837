#ifndef ROBBA_SLOPES_HPP
#define ROBBA_SLOPES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robba/divide.hpp"
#include "robba/sigma_module.hpp"

namespace robba {

// Monic twisted polynomial x^n + a_{n-1} x^{n-1} + ... + a_0 annihilating a
// cyclic vector (x acting as F).
struct TwistedPoly {
    std::vector<LaurentElement> coeffs; // a_0 .. a_{n-1}
};

enum class Comparison { equal, special_above, violation, not_computed };

std::string to_string(Comparison c);

struct SlopeReport {
    NewtonPolygon generic;
    std::optional<NewtonPolygon> special;
    Comparison comparison = Comparison::not_computed;
    std::vector<FactorizationCertificate> certificates;
    std::vector<LaurentElement> cyclic_vector_used;
    std::string note;
};

// Coordinates of F applied to a coordinate vector: A * sigma^a(v).
std::vector<LaurentElement> apply_frobenius(const SigmaModule &m,
                                            const std::vector<LaurentElement> &v);

// Searches standard basis vectors, then e_1 + p^j e_i, then seeded
// pseudo-random small combinations, for a vector whose F-iterates form a
// basis at precision.
std::vector<LaurentElement> cyclic_vector(const SigmaModule &m,
                                          long max_attempts = 64,
                                          uint64_t seed = 0x5eed);

// Solves F^n v + a_{n-1} F^{n-1} v + ... + a_0 v = 0 for the a_i by Gaussian
// elimination pivoting on entries of minimal w; the residual is re-checked
// at p-valuation >= target (default N_abs - 4).
TwistedPoly twisted_char_poly(const SigmaModule &m,
                              const std::vector<LaurentElement> &v,
                              long target = -1);

// Generic HN polygon: lower hull of (i, w(a_i)) for the twisted
// characteristic polynomial of a cyclic vector.
NewtonPolygon generic_hn_polygon(const SigmaModule &m);
NewtonPolygon generic_hn_polygon(const SigmaModule &m,
                                 std::vector<LaurentElement> *vector_used);

// Special polygon via Dwork specialization at u = 0; requires nonnegative
// u-support and an invertible specialization.
NewtonPolygon special_hn_polygon_dwork(const SigmaModule &m);

SlopeReport compare_polygons(const SigmaModule &m);

struct ReductionResult {
    ElemMatrix u;
    ElemMatrix b; // U^{-1} A sigma(U)
    FactorizationCertificate cert;
    std::vector<Rational> pass_gains; // per-pass residual levels
};

// Quantitative triangularization: for A with w(A D^{-1} - I) > 0 and
// w_r(A D^{-1} - I) > 0, D = diag(p^{d_1}, ..., p^{d_n}) with d_1 >= ... >=
// d_n, produces U with B D^{-1} - I upper triangular nilpotent at residual
// >= target (at w and w_r).
ReductionResult triangularize(const ElemMatrix &a, int frob_iterations,
                              const std::vector<long> &d_exponents,
                              const Rational &r, long target,
                              long max_iterations = 64);
ReductionResult triangularize(const SigmaModule &m,
                              const std::vector<long> &d_exponents,
                              const Rational &r, long target,
                              long max_iterations = 64);

// Good-model turnover: for w_r(A D^{-1} - I) > h/(q-1) with
// h = -w_r(D) - w_r(D^{-1}), produces U with B D^{-1} - I integral (all
// digits at p-power >= 1) and w_r(B D^{-1} - I) > 0.
ReductionResult good_model_turnover(const ElemMatrix &a, int frob_iterations,
                                    const std::vector<long> &d_exponents,
                                    const Rational &r, long target,
                                    long max_iterations = 64);

// Truncated y = sum_m p^{nm} sigma^m(x) solving x = y - p^n sigma(y) at
// residual >= target on the retained support.
LaurentElement solve_h1_rank1(long n, const LaurentElement &x, long target);

struct H0Description {
    enum class Kind { constants, empty, unsupported } kind;
    std::string note;
};

// Solution space of p^n sigma(x) = x in rank 1: constants for n = 0, zero
// for n > 0, unsupported marker for n < 0 (needs perfect residue field).
H0Description solve_h0_rank1(long n);

struct LatticeVerdict {
    bool min_slope_nonnegative = false;
    bool all_slopes_zero = false;
    bool f_isomorphism = false; // w(det A) = 0
    bool consistent = false;    // all_slopes_zero <=> f_isomorphism
    NewtonPolygon polygon;
};

// Integral-matrix slope check: generic slopes nonnegative, all zero exactly
// when F is an isomorphism on the lattice.
LatticeVerdict lattice_slope_check(const SigmaModule &m);

// Shared exact linear algebra over Laurent elements (min-w pivoting,
// positioned inverses). Solves K x = rhs; throws SingularAtPrecision.
std::vector<LaurentElement> solve_linear(const ElemMatrix &k,
                                         const std::vector<LaurentElement> &rhs,
                                         const Rational &r);
bool nonsingular_at_precision(const ElemMatrix &k, const Rational &r);

} // namespace robba

#endif
