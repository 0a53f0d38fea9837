#ifndef ROBBA_SIGMA_MODULE_HPP
#define ROBBA_SIGMA_MODULE_HPP

#include <string>

#include "robba/matrix.hpp"

namespace robba {

// Free module of rank n over the element ring with a sigma^a-semilinear
// Frobenius F given on a basis by F e_j = sum_i A_ij e_i. Construction
// certifies that det(A) is p^c times a unit on (0, radius] and that A is
// invertible after inverting p.
class SigmaModule {
  public:
    // Certifying constructor (parsed or hand-built matrices).
    SigmaModule(ElemMatrix matrix, int frob_power, Rational radius);

    size_t rank() const { return matrix_.dim(); }
    int frob_power() const { return frob_power_; }
    const ElemMatrix &matrix() const { return matrix_; }
    const Rational &radius() const { return radius_; }
    const ContextPtr &context() const { return matrix_.context(); }
    const LaurentElement &det() const { return det_; }

    // Valuation of the unit through which F acts on the top exterior power.
    long degree() const;
    Rational slope() const;

    std::string to_string() const;

  private:
    friend SigmaModule standard_module(const ContextPtr &, long, long);
    friend SigmaModule twist(const SigmaModule &, long);
    friend SigmaModule dual(const SigmaModule &);
    friend SigmaModule tensor(const SigmaModule &, const SigmaModule &);
    friend SigmaModule wedge(const SigmaModule &, long);
    friend SigmaModule pushforward(const SigmaModule &, int);
    friend SigmaModule pullback(const SigmaModule &, int);

    // Functor path: determinant already known from the factors, skips the
    // cofactor determinant of possibly large matrices.
    SigmaModule(ElemMatrix matrix, int frob_power, Rational radius,
                LaurentElement det, bool certify);

    void certify_det();

    ElemMatrix matrix_;
    int frob_power_;
    Rational radius_;
    LaurentElement det_;
};

// M_{c,d} = [d]^* (R(c)): companion matrix with subdiagonal ones and p^c in
// the top-right corner; requires gcd(c, d) = 1.
SigmaModule standard_module(const ContextPtr &ctx, long c, long d);

SigmaModule twist(const SigmaModule &m, long c);
SigmaModule dual(const SigmaModule &m);
SigmaModule tensor(const SigmaModule &m, const SigmaModule &n);
SigmaModule wedge(const SigmaModule &m, long k);
// Restriction along sigma -> sigma^a: same rank, matrix A sigma(A) ...
// sigma^{a-1}(A), Frobenius power multiplied by a.
SigmaModule pushforward(const SigmaModule &m, int a);
// Extension of scalars along sigma^a -> sigma: rank multiplied by a,
// block-companion matrix; requires a | frob_power.
SigmaModule pullback(const SigmaModule &n, int a);

// Multiset union of module polygons.
NewtonPolygon polygon_sum(const std::vector<NewtonPolygon> &parts);

enum class LiesAboveReason { ok, endpoint_mismatch, vertex_below };

struct LiesAboveVerdict {
    bool above = false;
    LiesAboveReason reason = LiesAboveReason::ok;
    std::string detail;
};

// True when p1 and p2 share the endpoint and no vertex of p1 lies below p2.
LiesAboveVerdict polygon_lies_above(const NewtonPolygon &p1,
                                    const NewtonPolygon &p2);

struct FiltrationVerdict {
    bool holds = false;
    NewtonPolygon parts_sum;
    LiesAboveVerdict detail;
};

// Checks that `whole` lies above the sum of the parts; endpoint totals must
// match or EndpointMismatch is thrown.
FiltrationVerdict filtration_check(const NewtonPolygon &whole,
                                   const std::vector<NewtonPolygon> &parts);

} // namespace robba

#endif
