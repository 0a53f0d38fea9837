#include "robba/divide.hpp"

#include <sstream>

namespace robba {

void FactorizationCertificate::require_all(const std::string &op) const {
    for (auto &e : residual_valuations)
        if (!e.holds()) {
            std::ostringstream os;
            os << op << ": certificate line '" << e.label << "' at radius "
               << e.radius.get_str() << " achieved "
               << (e.achieved ? e.achieved->get_str() : "inf") << ", bound "
               << (e.strict ? "> " : ">= ") << e.bound.get_str();
            throw PrecisionExhausted(os.str());
        }
}

void FactorizationCertificate::add(std::string label, Rational radius,
                                   Rational bound, std::optional<Rational> achieved,
                                   bool strict) {
    residual_valuations.push_back(
        {std::move(label), std::move(radius), std::move(bound), std::move(achieved),
         strict});
}

namespace {

LaurentElement nonpositive_digits(const LaurentElement &x) {
    if (x.is_zero())
        return x;
    return x.digit_range(x.min_vexp(), 0);
}

LaurentElement positive_digits(const LaurentElement &x) {
    if (x.is_zero())
        return x;
    return x.digit_range(1, x.ctx().precision() - 1);
}

LaurentElement nonnegative_digits(const LaurentElement &x) {
    if (x.is_zero())
        return x;
    return x.digit_range(0, x.ctx().precision() - 1);
}

// Terms of res on the window interior that one product against x can
// certify: out-of-window tails of the other factor only pollute exponents
// past these margins.
LaurentElement interior_part(const LaurentElement &res, const LaurentElement &x) {
    if (res.is_zero() || x.is_zero())
        return res;
    const auto &ctx = x.ctx();
    long lo = ctx.lo_cap() + std::max<long>(x.max_exponent(), 0);
    long hi = ctx.hi_cap() + std::min<long>(x.min_exponent(), 0);
    LaurentElement::TermMap keep;
    for (auto &[e, c] : res.terms())
        if (e >= lo && e <= hi)
            keep[e] = c;
    return LaurentElement(res.context(), keep, res.truncated_lo(),
                          res.truncated_hi());
}

} // namespace

DivRemResult div_rem(const LaurentElement &y, const LaurentElement &x,
                     const Rational &r, long target, long max_iterations) {
    const auto &ctx = x.context();
    require_same_context(ctx, y.context());
    if (x.is_zero())
        throw ZeroDivisor("div_rem: x is zero at precision");
    if (!x.is_integral() || !y.is_integral())
        throw InvariantViolation("div_rem: inputs must be integral");
    if (r <= 0 || r >= ctx->r0())
        throw InvariantViolation("div_rem: need r in (0, r0)");
    if (target > ctx->precision())
        throw InvariantViolation("div_rem: target exceeds N_abs");

    const long m = height(x, r);
    // Unit-times-p^m head of x: the digits from level m up.
    LaurentElement head = x.digit_range(m, ctx->precision() - 1).shift_p(-m);
    LaurentElement inv = LaurentElement::zero(ctx);
    try {
        inv = invert_unit(head, r);
    } catch (const NotAUnit &e) {
        throw PrecisionExhausted(std::string("div_rem: head not invertible: ") +
                                 e.what());
    }

    LaurentElement z = LaurentElement::zero(ctx);
    LaurentElement q = LaurentElement::zero(ctx);
    LaurentElement yl = y;
    long used = 0;
    bool done = false;
    for (long l = 0; l <= max_iterations; ++l) {
        used = l;
        if (yl.is_zero()) {
            z = yl;
            done = true;
            break;
        }
        if (height(yl, r) < m) {
            z = yl;
            done = true;
            break;
        }
        if (yl.min_vexp() >= target) {
            z = LaurentElement::zero(ctx);
            done = true;
            break;
        }
        LaurentElement zl = nonnegative_digits(yl.shift_p(-m));
        LaurentElement qinc = zl.mul(inv);
        q = q.add(qinc);
        yl = yl.sub(qinc.mul(x));
    }
    if (!done)
        throw PrecisionExhausted("div_rem: iteration cap reached before the "
                                 "height or the residual target");

    FactorizationCertificate cert;
    cert.iterations_used = used;
    cert.truncated = z.truncated() || q.truncated();
    LaurentElement res = y.sub(z).sub(q.mul(x));
    cert.add("w(y - z - q*x) >= target", Rational(0), Rational(target),
             res.is_zero() ? std::nullopt
                           : std::optional<Rational>(Rational(res.min_vexp())));
    auto wr_y = weighted_valuation(y, r);
    auto wr_z = weighted_valuation(z, r);
    cert.add("w_r(z) >= w_r(y)", r, wr_y ? *wr_y : Rational(0), wr_z);
    if (!z.is_zero()) {
        long hz = height(z, r);
        cert.add("height(x) - height(z) >= 1", r, Rational(1),
                 Rational(m - hz));
    }
    cert.require_all("div_rem");
    return {z, q, cert};
}

FactorUnitResult factor_unit(const LaurentElement &x, const Rational &s,
                             const Rational &r, long target,
                             long max_iterations) {
    const auto &ctx = x.context();
    if (x.is_zero())
        throw ZeroElement("factor_unit: x is zero at precision");
    if (!(0 < s && s < r && r < ctx->r0()))
        throw InvariantViolation("factor_unit: need 0 < s < r < r0");

    // Normalize so that w_s = 0, v_0(y-1) > 0, v_{n,s}(y) > 0 for n < 0;
    // afterwards every nonpositive digit of y has positive u-exponents and
    // the correction factors (1 - eps) square the defect away.
    Positioning pos = position(x, s);
    LaurentElement u = pos.unit.shift_p(pos.shift);
    LaurentElement y = pos.positioned;
    long used = 0;
    for (long l = 0; l <= max_iterations; ++l) {
        used = l;
        // Negative-digit defect; positioning put its u-support at exponents
        // >= 1, so each corrective factor (1 - eps) pushes it to the right
        // and the defect squares away.
        LaurentElement defect = y.sub(nonnegative_digits(y));
        if (defect.is_zero())
            break;
        LaurentElement factor = LaurentElement::one(ctx).sub(defect);
        u = u.mul(factor);
        y = y.mul(factor);
    }
    LaurentElement defect_final = y.sub(nonnegative_digits(y));
    if (!defect_final.is_zero())
        throw PrecisionExhausted(
            "factor_unit: nonpositive-digit defect did not clear within the "
            "iteration cap");
    // Positioning divided out p^{n*}; give the p-power part back to g so
    // that p-power inputs keep their valuation (slopes are unaffected).
    long restore = std::max<long>(0, -pos.shift);
    LaurentElement g = y.shift_p(restore);
    u = u.shift_p(restore);

    FactorizationCertificate cert;
    cert.iterations_used = used;
    cert.truncated = u.truncated() || g.truncated();
    // Residual of the factorization u*x = g on the certifiable window
    // interior, at the three sampled radii of [s, r].
    LaurentElement res = interior_part(u.mul(x).sub(g), x);
    for (const Rational &sr : {s, Rational((s + r) / 2), r}) {
        cert.add("w_s(u*x - g) >= target", sr, Rational(target),
                 res.is_zero() ? std::nullopt : weighted_valuation(res, sr));
    }
    if (!g.is_integral())
        throw PrecisionExhausted("factor_unit: g has negative digits");
    // All slopes of g in (0, r] lie in [s, r].
    auto poly = newton_polygon(g, RadiusInterval(Rational(0), r));
    for (auto &seg : poly.slopes())
        if (seg.slope < s)
            throw PrecisionExhausted("factor_unit: g kept a slope below s: " +
                                     poly.to_string());
    // u is a unit on [s, r]: no slopes of u fall in [s, r].
    auto upoly = newton_polygon(u, RadiusInterval(Rational(0), r));
    for (auto &seg : upoly.slopes())
        if (seg.slope >= s)
            throw PrecisionExhausted("factor_unit: u has a slope in [s, r]: " +
                                     upoly.to_string());
    cert.require_all("factor_unit");
    return {u, g, cert};
}

MatrixFactorResult matrix_factor(const ElemMatrix &m, const Rational &a,
                                 const Rational &b, const Rational &c,
                                 const Rational &d, long target,
                                 long max_iterations) {
    const auto &ctx = m.context();
    if (!(0 < a && a <= c && c <= b && b <= d && d < ctx->r0()))
        throw BadOverlap("matrix_factor: need 0 < a <= c <= b <= d < r0");
    const size_t n = m.dim();
    ElemMatrix eye = ElemMatrix::identity(ctx, n);
    ElemMatrix e0 = m.sub(eye);
    // Hypothesis w_s(M - I) > 0 on [c, b]; s -> w_s is concave piecewise
    // linear, so the endpoint checks are exact for the whole interval.
    for (const Rational &s : {c, b}) {
        auto w = e0.weighted_valuation(s);
        if (w && *w <= 0)
            throw BadOverlap("matrix_factor: w_s(M - I) <= 0 at s = " +
                             s.get_str());
    }

    ElemMatrix u = eye, v = eye, ui = eye, vi = eye;
    long used = 0;
    std::vector<Rational> overlap = {c, Rational((c + b) / 2), b};
    bool done = false;
    for (long l = 0; l <= max_iterations; ++l) {
        used = l;
        ElemMatrix res = m.sub(u.mul(v));
        bool ok = true;
        for (auto &s : overlap) {
            auto w = res.weighted_valuation(s);
            if (w && *w < target)
                ok = false;
        }
        if (ok) {
            done = true;
            break;
        }
        ElemMatrix ml = ui.mul(m).mul(vi);
        ElemMatrix el = ml.sub(eye);
        // Positive digits converge on the small-radius side (U), nonpositive
        // digits on the large-radius side (V).
        ElemMatrix y = el.map(positive_digits);
        ElemMatrix z = el.map(nonpositive_digits);
        ElemMatrix iy = eye.add(y);
        ElemMatrix iz = eye.add(z);
        u = u.mul(iy);
        v = iz.mul(v);
        ui = iy.neumann_inverse().mul(ui);
        vi = vi.mul(iz.neumann_inverse());
    }
    if (!done)
        throw PrecisionExhausted("matrix_factor: residual target not reached "
                                 "within the iteration cap");

    FactorizationCertificate cert;
    cert.iterations_used = used;
    cert.truncated = u.any_truncated() || v.any_truncated();
    ElemMatrix res = m.sub(u.mul(v));
    for (auto &s : overlap)
        cert.add("w_s(M - UV) >= target", s, Rational(target),
                 res.is_zero() ? std::nullopt : res.weighted_valuation(s));
    ElemMatrix umi = u.sub(eye), vmi = v.sub(eye);
    auto wc0 = e0.weighted_valuation(c);
    auto wb0 = e0.weighted_valuation(b);
    for (const Rational &s : {a, c})
        cert.add("w_s(U - I) >= (s/c) w_c(M - I)", s,
                 wc0 ? Rational(*wc0 * s / c) : Rational(0),
                 umi.is_zero() ? std::nullopt : umi.weighted_valuation(s));
    for (const Rational &s : {b, d})
        cert.add("w_s(V - I) >= (s/b) w_b(M - I)", s,
                 wb0 ? Rational(*wb0 * s / b) : Rational(0),
                 vmi.is_zero() ? std::nullopt : vmi.weighted_valuation(s));
    for (auto &s : overlap) {
        auto w0 = e0.weighted_valuation(s);
        Rational bound = w0 ? *w0 : Rational(0);
        cert.add("w_s(U - I) >= w_s(M - I)", s, bound,
                 umi.is_zero() ? std::nullopt : umi.weighted_valuation(s));
        cert.add("w_s(V - I) >= w_s(M - I)", s, bound,
                 vmi.is_zero() ? std::nullopt : vmi.weighted_valuation(s));
    }
    // Invertibility certificates: determinants without slopes on the
    // respective intervals.
    LaurentElement du = u.det(), dv = v.det();
    for (auto &seg : newton_polygon(du, RadiusInterval(Rational(0), b)).slopes())
        if (seg.slope >= a)
            throw PrecisionExhausted("matrix_factor: det U has a slope in [a, b]");
    for (auto &seg : newton_polygon(dv, RadiusInterval(Rational(0), d)).slopes())
        if (seg.slope >= c)
            throw PrecisionExhausted("matrix_factor: det V has a slope in [c, d]");
    cert.require_all("matrix_factor");
    return {u, v, cert};
}

MatrixApproximateResult matrix_approximate(const ElemMatrix &m, const Rational &a,
                                           const Rational &b, const Rational &r,
                                           bool unimodular) {
    const auto &ctx = m.context();
    if (!(0 <= a && a <= b && b > 0 && b <= r && r < ctx->r0()))
        throw InvariantViolation("matrix_approximate: need I subset [0, r], "
                                 "b > 0, r < r0");
    LaurentElement det = m.det();
    if (det.is_zero())
        throw SingularAtPrecision("matrix_approximate: det(M) zero at precision");
    // Invertibility over Gamma_I requires no slopes of det inside [a, b].
    for (auto &seg : newton_polygon(det, RadiusInterval(Rational(0), b)).slopes())
        if (seg.slope >= a && seg.slope <= b)
            throw SingularAtPrecision(
                "matrix_approximate: det(M) has a slope inside [a, b]");

    ElemMatrix u = m.inverse(b);
    FactorizationCertificate cert;
    cert.truncated = u.any_truncated();
    ElemMatrix res = m.mul(u).sub(ElemMatrix::identity(ctx, m.dim()));
    for (const Rational &s : {a, Rational((a + b) / 2), b})
        cert.add("w_s(M U - I) > 0", s, Rational(0),
                 res.is_zero() ? std::nullopt : res.weighted_valuation(s), true);

    if (unimodular) {
        LaurentElement dm1 = det.sub(LaurentElement::one(ctx));
        bool det_close = dm1.is_zero();
        if (!det_close) {
            det_close = true;
            for (const Rational &s : {a, b}) {
                auto w = weighted_valuation(dm1, s);
                if (w && *w <= 0)
                    det_close = false;
            }
        }
        if (det_close) {
            LaurentElement du = u.det();
            LaurentElement dui = invert_positioned(du, b);
            for (size_t i = 0; i < u.dim(); ++i)
                u.at(i, 0) = u.at(i, 0).mul(dui);
            LaurentElement check = u.det();
            if (!check.equals(LaurentElement::one(ctx)))
                throw PrecisionExhausted(
                    "matrix_approximate: could not normalize det(U) to 1");
            res = m.mul(u).sub(ElemMatrix::identity(ctx, m.dim()));
            cert.residual_valuations.clear();
            for (const Rational &s : {a, Rational((a + b) / 2), b})
                cert.add("w_s(M U - I) > 0", s, Rational(0),
                         res.is_zero() ? std::nullopt : res.weighted_valuation(s),
                         true);
            cert.add("det(U) = 1 at precision", Rational(0),
                     Rational(ctx->precision()), std::nullopt);
        }
    }
    cert.require_all("matrix_approximate");
    return {u, cert};
}

} // namespace robba
