#include "robba/valuation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace robba {

NewtonPolygon::NewtonPolygon(Kind kind, std::vector<Segment> slopes, long anchor_v,
                             long anchor_n, std::optional<RadiusInterval> interval,
                             bool precision_limited)
    : kind_(kind), slopes_(std::move(slopes)), anchor_v_(anchor_v),
      anchor_n_(anchor_n), interval_(std::move(interval)),
      precision_limited_(precision_limited) {
    for (size_t k = 0; k < slopes_.size(); ++k) {
        if (slopes_[k].multiplicity < 1)
            throw InvariantViolation("polygon: multiplicity must be >= 1");
        if (k > 0 && !(slopes_[k - 1].slope < slopes_[k].slope))
            throw InvariantViolation("polygon: slopes must be strictly increasing");
    }
}

NewtonPolygon NewtonPolygon::module_polygon(std::vector<Segment> slopes,
                                            bool precision_limited) {
    return NewtonPolygon(Kind::module, std::move(slopes), 0, 0, std::nullopt,
                         precision_limited);
}

long NewtonPolygon::total_multiplicity() const {
    long t = 0;
    for (auto &s : slopes_)
        t += s.multiplicity;
    return t;
}

std::pair<long, Rational> NewtonPolygon::endpoint() const {
    long x = 0;
    Rational y(0);
    for (auto &s : slopes_) {
        x += s.multiplicity;
        y += s.slope * s.multiplicity;
    }
    return {x, y};
}

std::vector<std::pair<long, Rational>> NewtonPolygon::vertices() const {
    std::vector<std::pair<long, Rational>> vs;
    long x = 0;
    Rational y(0);
    vs.emplace_back(x, y);
    for (auto &s : slopes_) {
        x += s.multiplicity;
        y += s.slope * s.multiplicity;
        vs.emplace_back(x, y);
    }
    return vs;
}

Rational NewtonPolygon::value_at(long x) const {
    if (x < 0)
        throw InvariantViolation("polygon value_at: negative abscissa");
    Rational y(0);
    long pos = 0;
    for (auto &s : slopes_) {
        long step = std::min<long>(s.multiplicity, x - pos);
        if (step <= 0)
            break;
        y += s.slope * step;
        pos += step;
    }
    if (pos < x)
        throw InvariantViolation("polygon value_at: abscissa beyond endpoint");
    return y;
}

bool NewtonPolygon::same_slopes(const NewtonPolygon &other) const {
    if (slopes_.size() != other.slopes_.size())
        return false;
    for (size_t k = 0; k < slopes_.size(); ++k)
        if (slopes_[k].slope != other.slopes_[k].slope ||
            slopes_[k].multiplicity != other.slopes_[k].multiplicity)
            return false;
    return true;
}

std::string NewtonPolygon::to_string() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto &s : slopes_) {
        if (!first)
            os << ", ";
        first = false;
        os << s.slope.get_str() << " x" << s.multiplicity;
    }
    os << "}";
    if (precision_limited_)
        os << " [prec-limited]";
    return os.str();
}

std::optional<long> partial_valuation(const LaurentElement &x, long n) {
    std::optional<long> best;
    for (auto &[e, c] : x.terms())
        if (c.vexp() <= n) {
            best = e;
            break; // terms are exponent-sorted
        }
    return best;
}

std::optional<Rational> vnr(const LaurentElement &x, long n, const Rational &r) {
    auto v = partial_valuation(x, n);
    if (!v)
        return std::nullopt;
    return Rational(r * *v + n);
}

namespace {

// Distinct coefficient valuations in ascending order.
std::vector<long> distinct_valuations(const LaurentElement &x) {
    std::set<long> s;
    for (auto &[e, c] : x.terms())
        s.insert(c.vexp());
    return {s.begin(), s.end()};
}

// Staircase points (v_n, n) at the n where v_n can change, deduplicated to
// strictly decreasing v with the smallest n kept. Exactly the candidate
// vertices of the element Newton polygon for n in [min_vexp, N_abs).
std::vector<std::pair<long, long>> staircase(const LaurentElement &x) {
    std::vector<std::pair<long, long>> pts; // (v, n)
    long best_v = 0;
    bool have = false;
    for (long n : distinct_valuations(x)) {
        auto v = partial_valuation(x, n);
        if (!v)
            continue;
        if (!have || *v < best_v) {
            pts.emplace_back(*v, n);
            best_v = *v;
            have = true;
        }
    }
    return pts;
}

} // namespace

std::optional<Rational> weighted_valuation(const LaurentElement &x,
                                           const Rational &r) {
    if (x.is_zero())
        return std::nullopt;
    if (r < 0)
        throw InvariantViolation("weighted_valuation: r must be >= 0");
    if (r == 0)
        return Rational(x.min_vexp());
    std::optional<Rational> best;
    for (auto &[v, n] : staircase(x)) {
        Rational val = r * v + n;
        if (!best || val < *best)
            best = val;
    }
    return best;
}

NewtonPolygon newton_polygon(const LaurentElement &x, const RadiusInterval &I) {
    if (x.is_zero())
        throw ZeroElement("newton polygon of zero element");
    auto pts = staircase(x); // v strictly decreasing, n increasing
    // Lower convex hull walked from the bottom-right anchor. Stack slopes
    // (as element slopes, negated) must come out strictly increasing.
    std::vector<std::pair<long, long>> hull;
    for (auto &p : pts) {
        while (hull.size() >= 2) {
            auto &a = hull[hull.size() - 2];
            auto &b = hull[hull.size() - 1];
            // Keep b only if (a->b->p) makes a convex lower chain:
            // slope(a,b) < slope(b,p) in element orientation, i.e.
            // (b.n - a.n) * (b.v - p.v) < (p.n - b.n) * (a.v - b.v).
            Integer lhs = Integer(b.second - a.second) * Integer(b.first - p.first);
            Integer rhs = Integer(p.second - b.second) * Integer(a.first - b.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    const long ceiling = x.ctx().precision() - 1;
    bool limited = hull.back().second >= ceiling;
    std::vector<NewtonPolygon::Segment> segs;
    for (size_t k = 1; k < hull.size(); ++k) {
        long dv = hull[k - 1].first - hull[k].first; // > 0
        long dn = hull[k].second - hull[k - 1].second; // > 0
        Rational slope(dn, dv);
        slope.canonicalize();
        if (I.contains(slope))
            segs.push_back({slope, dn});
    }
    return NewtonPolygon(NewtonPolygon::Kind::element, std::move(segs),
                         hull.front().first, hull.front().second, I, limited);
}

bool is_unit(const LaurentElement &x, const RadiusInterval &I) {
    if (x.is_zero())
        return false;
    auto poly = newton_polygon(x, I);
    return poly.empty() && !poly.precision_limited();
}

long height(const LaurentElement &x, const Rational &r) {
    if (x.is_zero())
        throw ZeroElement("height of zero element");
    if (r <= 0 || r > x.ctx().r0())
        throw InvariantViolation("height: need r in (0, r0]");
    std::optional<Rational> best;
    long argmax = 0;
    for (auto &[v, n] : staircase(x)) {
        Rational val = r * v + n;
        if (!best || val < *best) {
            best = val;
            argmax = n;
        }
        // Ties within the staircase pick the larger n automatically only if
        // we scan ascending and accept equality:
        if (best && val == *best)
            argmax = n;
    }
    // Cross-check: height = w(x) + total multiplicity of slopes in (0, r].
    auto poly = newton_polygon(x, RadiusInterval(Rational(0), r));
    if (!poly.precision_limited()) {
        long alt = x.min_vexp() + poly.total_multiplicity();
        if (alt != argmax)
            throw InvariantViolation("height cross-check failed: direct " +
                                     std::to_string(argmax) + " vs polygon " +
                                     std::to_string(alt));
    }
    return argmax;
}

std::vector<std::pair<long, LaurentElement>>
semiunit_presentation(const LaurentElement &x) {
    auto digits = x.digit_decompose();
    for (auto &[i, d] : digits) {
        if (d.is_zero())
            continue;
        // Digit-lifts carry coefficients in [1, p-1]; each is a unit.
        if (d.min_vexp() != 0 || d.max_vexp() != 0)
            throw InvariantViolation("semiunit digit is not a digit-lift");
    }
    return digits;
}

std::pair<LaurentElement, LaurentElement> split_at_zero(const LaurentElement &x) {
    LaurentElement y = LaurentElement::zero(x.context());
    LaurentElement z = LaurentElement::zero(x.context());
    y = y.with_flags(x.truncated_lo(), x.truncated_hi());
    z = z.with_flags(x.truncated_lo(), x.truncated_hi());
    for (auto &[i, d] : x.digit_decompose()) {
        if (i <= 0)
            y = y.add(d.shift_p(i));
        else
            z = z.add(d.shift_p(i));
    }
    return {y, z};
}

namespace {

// min_{n<0} v_{n,s}(x), or nullopt (= +infinity) when x has no terms of
// negative coefficient valuation.
std::optional<Rational> negative_bound(const LaurentElement &x, const Rational &s) {
    if (x.is_zero())
        return std::nullopt;
    std::optional<Rational> best;
    for (auto &[v, n] : staircase(x)) {
        if (n >= 0)
            break;
        Rational val = s * v + n;
        if (!best || val < *best)
            best = val;
    }
    return best;
}

bool ge_bound(const std::optional<Rational> &value,
              const std::optional<Rational> &bound) {
    if (!bound)
        return !value ? true : false; // bound infinite: need value infinite
    if (!value)
        return true;
    return *value >= *bound;
}

} // namespace

LaurentElement bounded_approx(const LaurentElement &x, const Rational &r,
                              const Rational &s_lo, const Rational &s_hi) {
    if (s_lo < 0 || s_hi < s_lo || s_hi > r || r >= x.ctx().r0())
        throw InvariantViolation("bounded_approx: need I subset [0, r], r < r0");
    if (x.is_zero())
        return x;
    auto digits = x.digit_decompose();
    auto b_lo = negative_bound(x, s_lo);
    auto b_hi = negative_bound(x, s_hi);
    long max_digit = digits.empty() ? 0 : digits.back().first;
    for (long m = 0; m <= std::max<long>(max_digit, 0); ++m) {
        LaurentElement y = x.digit_range(0, m);
        LaurentElement diff = x.sub(y);
        bool ok_lo, ok_hi;
        if (diff.is_zero()) {
            ok_lo = ok_hi = true;
        } else {
            ok_lo = ge_bound(weighted_valuation(diff, s_lo), b_lo);
            ok_hi = ge_bound(weighted_valuation(diff, s_hi), b_hi);
        }
        if (ok_lo && ok_hi)
            return y;
    }
    throw PrecisionExhausted("bounded_approx: no digit prefix meets the bound");
}

namespace {

// Conservative interior of the window on which x*y == 1 can be certified
// from a single product: tail terms of the true inverse beyond the window
// can only pollute exponents past these margins.
std::pair<long, long> certified_interior(const LaurentElement &x) {
    const auto &c = x.ctx();
    long lo = c.lo_cap() + std::max<long>(x.max_exponent(), 0);
    long hi = c.hi_cap() + std::min<long>(x.min_exponent(), 0);
    return {lo, hi};
}

} // namespace

bool inverse_certified(const LaurentElement &x, const LaurentElement &y) {
    if (x.is_zero() || y.is_zero())
        return false;
    auto [lo, hi] = certified_interior(x);
    if (lo > hi)
        return false;
    LaurentElement res = x.mul(y).sub(LaurentElement::one(x.context()));
    for (auto &[e, c] : res.terms())
        if (e >= lo && e <= hi)
            return false;
    return true;
}

LaurentElement invert_unit(const LaurentElement &x, const Rational &r,
                           long max_iterations) {
    const auto &ctx = x.context();
    if (x.is_zero())
        throw NotAUnit("invert_unit: zero element");
    if (r <= 0 || r > ctx->r0())
        throw InvariantViolation("invert_unit: need r in (0, r0]");
    {
        auto poly = newton_polygon(x, RadiusInterval(Rational(0), r));
        if (!poly.empty())
            throw NotAUnit("invert_unit: element has slopes in (0, r]: " +
                           poly.to_string());
        if (poly.precision_limited())
            throw NotAUnit("invert_unit: unit certificate is precision-limited");
    }
    long w = x.min_vexp();
    LaurentElement x0 = x.shift_p(-w);
    // Monomial fast path.
    if (x0.term_count() == 1) {
        long e = x0.min_exponent();
        PAdicScalar inv = x0.coeff(e).invert(*ctx);
        return LaurentElement::monomial(ctx, -e, inv).shift_p(-w);
    }
    // Unit digit-lift head: x0 = c u^m (1 + f) + p(...) with f supported on
    // positive exponents and unit coefficients.
    LaurentElement d0 = x0.digit(0);
    long m = d0.min_exponent();
    PAdicScalar c = d0.coeff(m);
    PAdicScalar cinv = c.invert(*ctx);
    LaurentElement f =
        d0.scalar_mul(cinv).shift_u(-m).sub(LaurentElement::one(ctx));
    long span = ctx->hi_cap() - ctx->lo_cap();
    if (max_iterations <= 0)
        max_iterations = span + ctx->precision() + 8;
    // Geometric series for (1 + f)^{-1}: powers of f die by window escape.
    LaurentElement sum = LaurentElement::one(ctx);
    LaurentElement pw = LaurentElement::one(ctx);
    long it = 0;
    while (true) {
        pw = pw.mul(f.negate());
        if (pw.is_zero())
            break;
        if (++it > max_iterations)
            throw PrecisionExhausted("invert_unit: digit series did not terminate");
        sum = sum.add(pw);
    }
    LaurentElement y = sum.scalar_mul(cinv).shift_u(-m); // inverse of d0
    // Hensel refinement to full precision: e = 1 - x0 y has w >= 1 on the
    // interior and doubles each pass.
    const LaurentElement one = LaurentElement::one(ctx);
    for (int pass = 0; pass < 12; ++pass) {
        if (inverse_certified(x0, y))
            break;
        y = y.mul(one.add(one).sub(x0.mul(y)));
    }
    y = y.shift_p(-w);
    if (!inverse_certified(x, y))
        throw PrecisionExhausted(
            "invert_unit: residual not certified on the window interior");
    return y;
}

LaurentElement invert_positioned(const LaurentElement &x, const Rational &r,
                                 long max_iterations) {
    const auto &ctx = x.context();
    if (x.is_zero())
        throw ZeroDivisor("invert_positioned: zero element");
    // Fast paths: monomials and certified units.
    if (x.term_count() == 1) {
        long e = x.min_exponent();
        PAdicScalar cf = x.coeff(e);
        long w = cf.vexp();
        return LaurentElement::monomial(ctx, -e, cf.shift(*ctx, -w).invert(*ctx))
            .shift_p(-w);
    }
    Positioning pos = position(x, r);
    LaurentElement z = pos.positioned.sub(LaurentElement::one(ctx));
    long neg = 0;
    if (!z.is_zero() && z.min_exponent() < 0)
        neg = -z.min_exponent();
    long span = ctx->hi_cap() - ctx->lo_cap();
    if (max_iterations <= 0)
        max_iterations =
            span + ctx->precision() * (1 + neg) + 16;
    LaurentElement sum = LaurentElement::one(ctx);
    LaurentElement pw = LaurentElement::one(ctx);
    long it = 0;
    while (true) {
        pw = pw.mul(z.negate());
        if (pw.is_zero())
            break;
        if (++it > max_iterations)
            throw PrecisionExhausted(
                "invert_positioned: geometric series did not terminate");
        sum = sum.add(pw);
    }
    // x^{-1} = (1+z)^{-1} u p^i.
    LaurentElement inv = sum.mul(pos.unit).shift_p(pos.shift);
    if (!inverse_certified(x, inv))
        throw PrecisionExhausted(
            "invert_positioned: residual not certified on the window interior");
    return inv;
}

Positioning position(const LaurentElement &x, const Rational &r) {
    const auto &ctx = x.context();
    if (x.is_zero())
        throw ZeroElement("position: zero element");
    if (r <= 0 || r > ctx->r0())
        throw InvariantViolation("position: need r in (0, r0]");
    // Smallest n achieving min v_{n,r}(x); i = -n is then the largest
    // integer minimizing v_{-i,r}(x).
    std::optional<Rational> best;
    long nstar = 0;
    for (auto &[v, n] : staircase(x)) {
        Rational val = r * v + n;
        if (!best || val < *best) {
            best = val;
            nstar = n;
        }
    }
    long i = -nstar;
    LaurentElement xs = x.shift_p(i);
    LaurentElement d0 = xs.digit(0);
    if (d0.is_zero())
        throw PrecisionExhausted("position: shifted element has no unit digit");
    LaurentElement u = invert_unit(d0, r);
    LaurentElement y = u.mul(xs);
    // Certify (a) w_r(y) = 0, (b) v_0(y-1) > 0, (c) v_{n,r}(y) > 0 for n < 0.
    auto wr = weighted_valuation(y, r);
    if (!wr || *wr != 0)
        throw PrecisionExhausted("position: w_r(y) != 0 after normalization");
    LaurentElement ym1 = y.sub(LaurentElement::one(ctx));
    if (!ym1.is_zero()) {
        auto v0 = partial_valuation(ym1, 0);
        if (v0 && *v0 <= 0)
            throw PrecisionExhausted("position: v_0(y - 1) <= 0");
    }
    for (auto &[v, n] : staircase(y)) {
        if (n >= 0)
            break;
        if (Rational(r * v + n) <= 0)
            throw PrecisionExhausted("position: v_{n,r}(y) <= 0 for negative n");
    }
    return Positioning{u, i, y};
}

} // namespace robba
