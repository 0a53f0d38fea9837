#ifndef ROBBA_VALUATION_HPP
#define ROBBA_VALUATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "robba/element.hpp"

namespace robba {

// Half-open radius interval (lo, hi] with 0 <= lo < hi; element Newton
// polygons keep exactly the slopes falling inside it.
struct RadiusInterval {
    Rational lo;
    Rational hi;

    RadiusInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo < 0 || hi <= lo)
            throw InvariantViolation("interval: need 0 <= lo < hi");
    }
    bool contains(const Rational &s) const { return s > lo && s <= hi; }
};

// Convex slope data shared by element polygons (vertical, p-power
// multiplicities) and module HN polygons (horizontal, rank multiplicities).
class NewtonPolygon {
  public:
    enum class Kind { element, module };

    struct Segment {
        Rational slope;
        long multiplicity;
    };

    NewtonPolygon() = default; // empty module polygon
    NewtonPolygon(Kind kind, std::vector<Segment> slopes, long anchor_v,
                  long anchor_n, std::optional<RadiusInterval> interval,
                  bool precision_limited);

    static NewtonPolygon module_polygon(std::vector<Segment> slopes,
                                        bool precision_limited = false);

    Kind kind() const { return kind_; }
    const std::vector<Segment> &slopes() const { return slopes_; }
    bool empty() const { return slopes_.empty(); }
    long total_multiplicity() const;
    // Pair (anchor_v, anchor_n): the hull's starting vertex for element
    // polygons, (0, 0) for module polygons.
    long anchor_v() const { return anchor_v_; }
    long anchor_n() const { return anchor_n_; }
    const std::optional<RadiusInterval> &interval() const { return interval_; }
    bool precision_limited() const { return precision_limited_; }

    // Module polygons: endpoint (total rank, total degree) of the graph
    // anchored at the origin with ascending slopes.
    std::pair<long, Rational> endpoint() const;
    // Module polygons: vertices (x, y) of the graph, origin included.
    std::vector<std::pair<long, Rational>> vertices() const;
    // Value of the piecewise-linear graph at integer x in [0, rank].
    Rational value_at(long x) const;

    bool same_slopes(const NewtonPolygon &other) const;
    std::string to_string() const;

  private:
    Kind kind_ = Kind::module;
    std::vector<Segment> slopes_; // strictly increasing slopes
    long anchor_v_ = 0;
    long anchor_n_ = 0;
    std::optional<RadiusInterval> interval_;
    bool precision_limited_ = false;
};

// Naive partial valuation v_n: least u-exponent whose coefficient has
// p-adic valuation <= n (infinity when none). For the standard Frobenius
// lift these coincide with the true partial valuations. Exact on stored
// terms for n < N_abs; results for n >= N_abs are precision-limited.
std::optional<long> partial_valuation(const LaurentElement &x, long n);

// w_r(x) = min_n { r v_n(x) + n }, the sup-norm valuation on |u| = |p|^r;
// r = 0 gives the p-adic valuation w. Returns nullopt for x = 0.
std::optional<Rational> weighted_valuation(const LaurentElement &x,
                                           const Rational &r);
// v_{n,r}(x) = r v_n(x) + n.
std::optional<Rational> vnr(const LaurentElement &x, long n, const Rational &r);

NewtonPolygon newton_polygon(const LaurentElement &x, const RadiusInterval &I);

bool is_unit(const LaurentElement &x, const RadiusInterval &I);

// Largest n achieving w_r(x) = v_{n,r}(x); equals w(x) plus the total
// multiplicity of the slopes in (0, r].
long height(const LaurentElement &x, const Rational &r);

// Semiunit presentation x = sum p^i u_i with every nonzero u_i a unit
// digit-lift; the base-p digit expansion re-validated.
std::vector<std::pair<long, LaurentElement>>
semiunit_presentation(const LaurentElement &x);

// x = y + z with y the nonpositive-p-power digits and z the positive ones.
std::pair<LaurentElement, LaurentElement> split_at_zero(const LaurentElement &x);

// Least digit prefix y = sum_{0<=i<=m} p^i u_i with
// w_s(x - y) >= min_{n<0} v_{n,s}(x) at both endpoints of I.
LaurentElement bounded_approx(const LaurentElement &x, const Rational &r,
                              const Rational &s_lo, const Rational &s_hi);

struct Positioning {
    LaurentElement unit; // u
    long shift;          // i
    LaurentElement positioned; // y = u * p^i * x
};

// Finds a unit u and integer i with y = u p^i x satisfying w_r(y) = 0,
// v_0(y-1) > 0, and v_{n,r}(y) > 0 for n < 0; i is the largest integer
// minimizing v_{-i,r}(x).
Positioning position(const LaurentElement &x, const Rational &r);

// Inverse of a unit of Gamma_r[p^-1]: requires an empty, certain slope
// multiset on (0, r]; postcondition x * result == 1 at precision on the
// guaranteed window interior.
LaurentElement invert_unit(const LaurentElement &x, const Rational &r,
                           long max_iterations = 0);

// Inverse of any element nonzero at precision, via positioning followed by
// a window-truncating geometric series. Used by the linear algebra; the
// result is only certified on the window interior determined by x.
LaurentElement invert_positioned(const LaurentElement &x, const Rational &r,
                                 long max_iterations = 0);

// Residual of a claimed inverse: true when x*y - 1 vanishes at precision on
// the window interior that single-product support analysis can certify.
bool inverse_certified(const LaurentElement &x, const LaurentElement &y);

} // namespace robba

#endif
