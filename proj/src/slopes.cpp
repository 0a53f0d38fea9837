#include "robba/slopes.hpp"

#include <random>
#include <set>
#include <sstream>

namespace robba {

std::string to_string(Comparison c) {
    switch (c) {
    case Comparison::equal:
        return "equal";
    case Comparison::special_above:
        return "special_above";
    case Comparison::violation:
        return "violation";
    default:
        return "not_computed";
    }
}

namespace {

long pivot_weight(const LaurentElement &e) { return e.min_vexp(); }

} // namespace

std::vector<LaurentElement> solve_linear(const ElemMatrix &k,
                                         const std::vector<LaurentElement> &rhs,
                                         const Rational &r) {
    const size_t n = k.dim();
    ElemMatrix a = k;
    std::vector<LaurentElement> b = rhs;
    for (size_t j = 0; j < n; ++j) {
        // Pivot on the entry of minimal w (maximal p-adic size).
        std::optional<size_t> pivot;
        for (size_t i = j; i < n; ++i) {
            if (a.at(i, j).is_zero())
                continue;
            if (!pivot || pivot_weight(a.at(i, j)) < pivot_weight(a.at(*pivot, j)))
                pivot = i;
        }
        if (!pivot)
            throw SingularAtPrecision("solve_linear: no pivot in column " +
                                      std::to_string(j));
        if (*pivot != j) {
            for (size_t c = 0; c < n; ++c)
                std::swap(a.at(j, c), a.at(*pivot, c));
            std::swap(b[j], b[*pivot]);
        }
        LaurentElement pinv = invert_positioned(a.at(j, j), r);
        for (size_t c = 0; c < n; ++c)
            a.at(j, c) = a.at(j, c).mul(pinv);
        b[j] = b[j].mul(pinv);
        for (size_t i = 0; i < n; ++i) {
            if (i == j || a.at(i, j).is_zero())
                continue;
            LaurentElement f = a.at(i, j);
            for (size_t c = 0; c < n; ++c)
                a.at(i, c) = a.at(i, c).sub(f.mul(a.at(j, c)));
            b[i] = b[i].sub(f.mul(b[j]));
        }
    }
    return b;
}

bool nonsingular_at_precision(const ElemMatrix &k, const Rational &r) {
    const size_t n = k.dim();
    ElemMatrix a = k;
    for (size_t j = 0; j < n; ++j) {
        std::optional<size_t> pivot;
        for (size_t i = j; i < n; ++i) {
            if (a.at(i, j).is_zero())
                continue;
            if (!pivot || pivot_weight(a.at(i, j)) < pivot_weight(a.at(*pivot, j)))
                pivot = i;
        }
        if (!pivot)
            return false;
        if (*pivot != j)
            for (size_t c = 0; c < n; ++c)
                std::swap(a.at(j, c), a.at(*pivot, c));
        LaurentElement pinv = LaurentElement::zero(k.context());
        try {
            pinv = invert_positioned(a.at(j, j), r);
        } catch (const Error &) {
            return false;
        }
        for (size_t c = 0; c < n; ++c)
            a.at(j, c) = a.at(j, c).mul(pinv);
        for (size_t i = j + 1; i < n; ++i) {
            if (a.at(i, j).is_zero())
                continue;
            LaurentElement f = a.at(i, j);
            for (size_t c = 0; c < n; ++c)
                a.at(i, c) = a.at(i, c).sub(f.mul(a.at(j, c)));
        }
    }
    return true;
}

std::vector<LaurentElement> apply_frobenius(const SigmaModule &m,
                                            const std::vector<LaurentElement> &v) {
    std::vector<LaurentElement> tw;
    tw.reserve(v.size());
    for (auto &x : v)
        tw.push_back(x.is_zero() ? x : x.frobenius(m.frob_power()));
    return m.matrix().apply(tw);
}

namespace {

ElemMatrix iterate_matrix(const SigmaModule &m,
                          const std::vector<LaurentElement> &v) {
    const size_t n = m.rank();
    ElemMatrix k(m.context(), n);
    std::vector<LaurentElement> w = v;
    for (size_t c = 0; c < n; ++c) {
        for (size_t i = 0; i < n; ++i)
            k.at(i, c) = w[i];
        if (c + 1 < n)
            w = apply_frobenius(m, w);
    }
    return k;
}

std::vector<std::vector<LaurentElement>> cyclic_candidates(const SigmaModule &m,
                                                           long max_attempts,
                                                           uint64_t seed) {
    const auto &ctx = m.context();
    const size_t n = m.rank();
    std::vector<std::vector<LaurentElement>> out;
    auto basis = [&](size_t i) {
        std::vector<LaurentElement> v(n, LaurentElement::zero(ctx));
        v[i] = LaurentElement::one(ctx);
        return v;
    };
    for (size_t i = 0; i < n && static_cast<long>(out.size()) < max_attempts; ++i)
        out.push_back(basis(i));
    for (long j = 0; j <= 2; ++j)
        for (size_t i = 1; i < n; ++i) {
            if (static_cast<long>(out.size()) >= max_attempts)
                return out;
            auto v = basis(0);
            v[i] = LaurentElement::monomial(ctx, 0, 1).shift_p(j);
            out.push_back(v);
        }
    std::mt19937_64 gen(seed);
    while (static_cast<long>(out.size()) < max_attempts) {
        std::vector<LaurentElement> v(n, LaurentElement::zero(ctx));
        bool nonzero = false;
        for (size_t i = 0; i < n; ++i) {
            long c = static_cast<long>(gen() % static_cast<uint64_t>(ctx->p()));
            long e = static_cast<long>(gen() % 2);
            if (c != 0) {
                v[i] = LaurentElement::monomial(ctx, e, c);
                nonzero = true;
            }
        }
        if (nonzero)
            out.push_back(v);
    }
    return out;
}

} // namespace

std::vector<LaurentElement> cyclic_vector(const SigmaModule &m, long max_attempts,
                                          uint64_t seed) {
    for (auto &v : cyclic_candidates(m, max_attempts, seed))
        if (nonsingular_at_precision(iterate_matrix(m, v), m.radius()))
            return v;
    throw NoCyclicVectorFound("cyclic_vector: no candidate worked in " +
                              std::to_string(max_attempts) + " attempts");
}

TwistedPoly twisted_char_poly(const SigmaModule &m,
                              const std::vector<LaurentElement> &v, long target) {
    const auto &ctx = m.context();
    if (target < 0)
        target = std::max<long>(1, ctx->precision() - 4);
    const size_t n = m.rank();
    ElemMatrix k = iterate_matrix(m, v);
    std::vector<LaurentElement> w = v;
    for (size_t c = 0; c + 1 < n; ++c)
        w = apply_frobenius(m, w);
    std::vector<LaurentElement> fn = apply_frobenius(m, w); // F^n v
    std::vector<LaurentElement> rhs;
    rhs.reserve(n);
    for (auto &x : fn)
        rhs.push_back(x.negate());
    std::vector<LaurentElement> a = solve_linear(k, rhs, m.radius());
    // Residual F^n v + sum a_i F^i v must vanish at the target precision.
    std::vector<LaurentElement> res = fn;
    for (size_t c = 0; c < n; ++c)
        for (size_t i = 0; i < n; ++i)
            res[c] = res[c].add(a[i].mul(k.at(c, i)));
    for (auto &x : res)
        if (!x.is_zero() && x.min_vexp() < target)
            throw PrecisionExhausted(
                "twisted_char_poly: residual above target (w = " +
                std::to_string(x.min_vexp()) + " < " + std::to_string(target) +
                ")");
    return TwistedPoly{std::move(a)};
}

namespace {

// Lower hull of (i, w(a_i)) in classical polynomial orientation; module
// slopes are the negated segment slopes, ascending, with horizontal
// multiplicities.
NewtonPolygon char_poly_polygon(const SigmaModule &m, const TwistedPoly &poly) {
    const long n = static_cast<long>(m.rank());
    const long nabs = m.context()->precision();
    std::vector<std::pair<long, long>> pts;
    std::vector<long> omitted; // a_i zero at precision: true w >= N_abs
    for (long i = 0; i < n; ++i) {
        const LaurentElement &ai = poly.coeffs[static_cast<size_t>(i)];
        if (ai.is_zero())
            omitted.push_back(i);
        else
            pts.emplace_back(i, ai.min_vexp());
    }
    pts.emplace_back(n, 0); // monic
    std::vector<std::pair<long, long>> hull;
    for (auto &p : pts) {
        while (hull.size() >= 2) {
            auto &a = hull[hull.size() - 2];
            auto &b = hull[hull.size() - 1];
            // keep b iff slope(a,b) < slope(b,p)
            Integer lhs = Integer(b.second - a.second) * Integer(p.first - b.first);
            Integer rhs = Integer(p.second - b.second) * Integer(b.first - a.first);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    bool limited = false;
    for (auto &h : hull)
        if (h.second >= nabs - 1)
            limited = true;
    // An invisible coefficient (w >= N_abs) can dip below the hull only
    // where the hull itself reaches N_abs.
    for (long i : omitted)
        for (size_t s = 1; s < hull.size(); ++s)
            if (hull[s - 1].first <= i && i <= hull[s].first) {
                Rational y = Rational(hull[s - 1].second) +
                             Rational(hull[s].second - hull[s - 1].second) *
                                 Rational(i - hull[s - 1].first,
                                          hull[s].first - hull[s - 1].first);
                if (y >= nabs)
                    limited = true;
            }
    std::vector<NewtonPolygon::Segment> segs;
    for (size_t s = 1; s < hull.size(); ++s) {
        long dx = hull[s].first - hull[s - 1].first;
        long dy = hull[s].second - hull[s - 1].second;
        Rational slope(-dy, dx);
        slope.canonicalize();
        segs.push_back({slope, dx});
    }
    std::reverse(segs.begin(), segs.end()); // ascending slopes
    return NewtonPolygon::module_polygon(std::move(segs), limited);
}

} // namespace

NewtonPolygon generic_hn_polygon(const SigmaModule &m,
                                 std::vector<LaurentElement> *vector_used) {
    std::string last_error = "no cyclic candidate";
    for (auto &v : cyclic_candidates(m, 64, 0x5eed)) {
        if (!nonsingular_at_precision(iterate_matrix(m, v), m.radius()))
            continue;
        try {
            TwistedPoly poly = twisted_char_poly(m, v);
            if (vector_used)
                *vector_used = v;
            return char_poly_polygon(m, poly);
        } catch (const Error &e) {
            last_error = e.what();
        }
    }
    throw NoCyclicVectorFound("generic_hn_polygon: " + last_error);
}

NewtonPolygon generic_hn_polygon(const SigmaModule &m) {
    return generic_hn_polygon(m, nullptr);
}

NewtonPolygon special_hn_polygon_dwork(const SigmaModule &m) {
    const auto &ctx = m.context();
    const size_t n = m.rank();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const LaurentElement &e = m.matrix().at(i, j);
            if (!e.is_zero() && e.min_exponent() < 0)
                throw NegativeSupport(
                    "special polygon: matrix entry (" + std::to_string(i) + "," +
                    std::to_string(j) + ") has negative u-support");
        }
    ElemMatrix a0(ctx, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            a0.at(i, j) = LaurentElement::monomial(
                ctx, 0, m.matrix().at(i, j).constant_coeff());
    if (a0.det().is_zero())
        throw SingularSpecialization(
            "special polygon: A(0) is singular at precision");
    SigmaModule m0(std::move(a0), m.frob_power(), m.radius());
    return generic_hn_polygon(m0);
}

SlopeReport compare_polygons(const SigmaModule &m) {
    SlopeReport report;
    report.generic = generic_hn_polygon(m, &report.cyclic_vector_used);
    try {
        report.special = special_hn_polygon_dwork(m);
    } catch (const NegativeSupport &e) {
        report.note = e.what();
        return report;
    } catch (const SingularSpecialization &e) {
        report.note = e.what();
        return report;
    }
    if (report.generic.same_slopes(*report.special)) {
        report.comparison = Comparison::equal;
        return report;
    }
    auto verdict = polygon_lies_above(*report.special, report.generic);
    if (verdict.above) {
        report.comparison = Comparison::special_above;
    } else if (verdict.reason == LiesAboveReason::endpoint_mismatch) {
        // Degree and rank are basis invariants: a mismatch is a bug in the
        // computation, not a comparison outcome.
        throw InvariantViolation("compare_polygons: " + verdict.detail);
    } else {
        report.comparison = Comparison::violation;
        report.note = verdict.detail;
    }
    return report;
}

namespace {

// Exact coefficientwise solve of x - p^k sigma^a(x) = c along q^a-power
// chains of u-exponents. The u^0 coefficient is obstructed when k = 0
// (sigma fixes constants); chains leaving the window truncate with flags.
LaurentElement solve_shift_equation(const LaurentElement &c, long k,
                                    int frob_iterations) {
    const auto &ctx = c.context();
    if (c.is_zero())
        return c;
    const long span =
        std::max(std::labs(ctx->lo_cap()), std::labs(ctx->hi_cap()));
    long bigq = 1;
    bool huge = false;
    for (int i = 0; i < frob_iterations; ++i) {
        bigq *= ctx->q();
        if (bigq > 2 * span + 2) {
            huge = true;
            break;
        }
    }
    LaurentElement::TermMap xc;
    PAdicScalar c0 = c.coeff(0);
    if (!c0.is_zero()) {
        if (k == 0)
            throw PrecisionExhausted(
                "sigma-shift solve: u^0 coefficient obstruction at equal "
                "p-powers (Artin-Schreier closure unavailable)");
        // x_0 (1 - p^k) = c_0
        PAdicScalar denom = PAdicScalar::one(*ctx).sub(
            *ctx, PAdicScalar::one(*ctx).shift(*ctx, k));
        xc[0] = c0.mul(*ctx, denom.invert(*ctx));
    }
    std::set<long> roots;
    for (auto &[e, cc] : c.terms()) {
        if (e == 0)
            continue;
        long g = e;
        if (!huge)
            while (g % bigq == 0)
                g /= bigq;
        roots.insert(g);
    }
    bool trunc_hi = false, trunc_lo = false;
    for (long root : roots) {
        PAdicScalar prev;
        long g = root;
        while (true) {
            PAdicScalar cg = c.coeff(g);
            PAdicScalar xg = prev.is_zero() ? cg : cg.add(*ctx, prev.shift(*ctx, k));
            if (!xg.is_zero())
                xc[g] = xg;
            prev = xg;
            if (huge || std::labs(g) > span / bigq)
                break; // sigma pushes the next chain element out of window
            g *= bigq;
            if (!ctx->in_window(g)) {
                (g > 0 ? trunc_hi : trunc_lo) = true;
                break;
            }
        }
    }
    LaurentElement x(c.context(), xc, c.truncated_lo() || trunc_lo,
                     c.truncated_hi() || trunc_hi);
    return x;
}

ElemMatrix scale_right_by_dinv(const ElemMatrix &a, const std::vector<long> &d) {
    ElemMatrix r = a;
    for (size_t i = 0; i < a.dim(); ++i)
        for (size_t j = 0; j < a.dim(); ++j)
            r.at(i, j) = a.at(i, j).shift_p(-d[j]);
    return r;
}

ElemMatrix conjugate_by_d(const ElemMatrix &a, const std::vector<long> &d) {
    ElemMatrix r = a;
    for (size_t i = 0; i < a.dim(); ++i)
        for (size_t j = 0; j < a.dim(); ++j)
            r.at(i, j) = a.at(i, j).shift_p(d[i] - d[j]);
    return r;
}

// min over entries of min_{n <= 0} v_{n,r}; nullopt = +infinity (no digits
// at nonpositive levels).
std::optional<Rational> nonpositive_level_bound(const ElemMatrix &m,
                                                const Rational &r) {
    std::optional<Rational> best;
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t j = 0; j < m.dim(); ++j) {
            const LaurentElement &e = m.at(i, j);
            if (e.is_zero())
                continue;
            for (long n = e.min_vexp(); n <= 0; ++n) {
                auto v = partial_valuation(e, n);
                if (!v)
                    continue;
                Rational val = r * *v + n;
                if (!best || val < *best)
                    best = val;
            }
        }
    return best;
}

std::optional<Rational> matrix_w(const ElemMatrix &m) {
    std::optional<Rational> best;
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t j = 0; j < m.dim(); ++j)
            if (!m.at(i, j).is_zero()) {
                Rational v(m.at(i, j).min_vexp());
                if (!best || v < *best)
                    best = v;
            }
    return best;
}

void check_sorted_descending(const std::vector<long> &d) {
    for (size_t i = 1; i < d.size(); ++i)
        if (d[i - 1] < d[i])
            throw InvariantViolation(
                "diagonal p-powers must be sorted by descending valuation");
}

} // namespace

ReductionResult triangularize(const ElemMatrix &a, int frob_iterations,
                              const std::vector<long> &d, const Rational &r,
                              long target, long max_iterations) {
    const auto &ctx = a.context();
    const size_t n = a.dim();
    if (d.size() != n)
        throw InvariantViolation("triangularize: diagonal size mismatch");
    check_sorted_descending(d);
    if (r <= 0 || r >= ctx->r0())
        throw InvariantViolation("triangularize: need r in (0, r0)");
    ElemMatrix eye = ElemMatrix::identity(ctx, n);
    ElemMatrix e0 = scale_right_by_dinv(a, d).sub(eye);
    {
        auto w = matrix_w(e0);
        if (w && *w <= 0)
            throw HypothesisFailed("triangularize: w(A D^{-1} - I) = " +
                                   w->get_str() + " <= 0");
        auto wr = e0.weighted_valuation(r);
        if (wr && *wr <= 0)
            throw HypothesisFailed("triangularize: w_r(A D^{-1} - I) = " +
                                   wr->get_str() + " <= 0");
    }

    ElemMatrix u = eye, b = a;
    std::vector<Rational> gains;
    bool done = false;
    long used = 0;
    for (long l = 0; l <= max_iterations; ++l) {
        used = l;
        ElemMatrix el = scale_right_by_dinv(b, d).sub(eye);
        ElemMatrix c(ctx, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j <= i; ++j)
                c.at(i, j) = el.at(i, j);
        if (c.is_zero()) {
            done = true;
            break;
        }
        auto wc = matrix_w(c);
        auto wrc = c.weighted_valuation(r);
        gains.push_back(wrc ? *wrc : Rational(target));
        if (wc && *wc >= target && wrc && *wrc >= target) {
            done = true;
            break;
        }
        ElemMatrix x(ctx, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j <= i; ++j)
                if (!c.at(i, j).is_zero())
                    x.at(i, j) = solve_shift_equation(c.at(i, j), d[i] - d[j],
                                                      frob_iterations);
        ElemMatrix ix = eye.add(x);
        u = u.mul(ix);
        b = ix.neumann_inverse().mul(b).mul(eye.add(x.frobenius(frob_iterations)));
    }
    if (!done)
        throw PrecisionExhausted(
            "triangularize: lower residual did not reach the target within "
            "the iteration cap");

    ReductionResult out{u, b, {}, gains};
    out.cert.iterations_used = used;
    out.cert.truncated = u.any_truncated() || b.any_truncated();
    ElemMatrix ef = scale_right_by_dinv(b, d).sub(eye);
    ElemMatrix cf(ctx, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j <= i; ++j)
            cf.at(i, j) = ef.at(i, j);
    out.cert.add("w(lower of B D^{-1} - I) >= target", Rational(0),
                 Rational(target), matrix_w(cf));
    out.cert.add("w_r(lower of B D^{-1} - I) >= target", r, Rational(target),
                 cf.weighted_valuation(r));
    // Proposition bounds on U and D sigma(U) D^{-1}.
    ElemMatrix umi = u.sub(eye);
    ElemMatrix dsud = conjugate_by_d(u.frobenius(frob_iterations), d).sub(eye);
    out.cert.add("w(U - I) > 0", Rational(0), Rational(0), matrix_w(umi), true);
    out.cert.add("w_r(U - I) > 0", r, Rational(0), umi.weighted_valuation(r),
                 true);
    out.cert.add("w(D sigma(U) D^{-1} - I) > 0", Rational(0), Rational(0),
                 matrix_w(dsud), true);
    out.cert.add("w_r(D sigma(U) D^{-1} - I) > 0", r, Rational(0),
                 dsud.weighted_valuation(r), true);
    // Consistency of the maintained factorization: A sigma(U) = U B.
    ElemMatrix cons = a.mul(u.frobenius(frob_iterations)).sub(u.mul(b));
    out.cert.add("w(A sigma(U) - U B) >= target", Rational(0), Rational(target),
                 matrix_w(cons));
    out.cert.require_all("triangularize");
    return out;
}

ReductionResult triangularize(const SigmaModule &m, const std::vector<long> &d,
                              const Rational &r, long target,
                              long max_iterations) {
    return triangularize(m.matrix(), m.frob_power(), d, r, target,
                         max_iterations);
}

ReductionResult good_model_turnover(const ElemMatrix &a, int frob_iterations,
                                    const std::vector<long> &d, const Rational &r,
                                    long target, long max_iterations) {
    const auto &ctx = a.context();
    const size_t n = a.dim();
    if (d.size() != n)
        throw InvariantViolation("good_model_turnover: diagonal size mismatch");
    if (r <= 0)
        throw InvariantViolation("good_model_turnover: r must be positive");
    // U lives on [r, q^a r]: require r0 > q^a r.
    Rational qr = r;
    for (int i = 0; i < frob_iterations; ++i)
        qr *= ctx->q();
    if (!(ctx->r0() > qr))
        throw HypothesisFailed("good_model_turnover: need r0 > q^a r");
    long dmax = d[0], dmin = d[0];
    for (long x : d) {
        dmax = std::max(dmax, x);
        dmin = std::min(dmin, x);
    }
    const Rational h(dmax - dmin);
    long qpow = 1;
    for (int i = 0; i < frob_iterations; ++i)
        qpow *= ctx->q();
    const Rational barrier = h / (qpow - 1);
    ElemMatrix eye = ElemMatrix::identity(ctx, n);
    {
        ElemMatrix e0 = scale_right_by_dinv(a, d).sub(eye);
        auto wr = e0.weighted_valuation(r);
        if (wr && !(*wr > barrier))
            throw HypothesisFailed("good_model_turnover: w_r(A D^{-1} - I) = " +
                                   wr->get_str() + " <= h/(q-1) = " +
                                   barrier.get_str());
    }

    ElemMatrix u = eye, b = a;
    std::vector<Rational> gains;
    bool done = false;
    long used = 0;
    for (long l = 0; l <= max_iterations; ++l) {
        used = l;
        ElemMatrix el = scale_right_by_dinv(b, d).sub(eye);
        ElemMatrix x = el.map([](const LaurentElement &e) {
            if (e.is_zero() || e.min_vexp() > 0)
                return LaurentElement::zero(e.context());
            return e.digit_range(e.min_vexp(), 0);
        });
        if (x.is_zero()) {
            done = true;
            break;
        }
        auto cl = nonpositive_level_bound(el, r);
        gains.push_back(cl ? *cl - barrier : Rational(target));
        ElemMatrix ix = eye.add(x);
        u = u.mul(ix);
        b = ix.neumann_inverse().mul(b).mul(eye.add(x.frobenius(frob_iterations)));
    }
    if (!done)
        throw PrecisionExhausted("good_model_turnover: nonpositive digits did "
                                 "not clear within the iteration cap");

    ReductionResult out{u, b, {}, gains};
    out.cert.iterations_used = used;
    out.cert.truncated = u.any_truncated() || b.any_truncated();
    ElemMatrix ef = scale_right_by_dinv(b, d).sub(eye);
    // Integrality: every entry of B D^{-1} - I has digits at p-power >= 1.
    out.cert.add("w(B D^{-1} - I) >= 1 (integrality)", Rational(0), Rational(1),
                 matrix_w(ef));
    out.cert.add("w_r(B D^{-1} - I) > 0", r, Rational(0),
                 ef.weighted_valuation(r), true);
    ElemMatrix cons = a.mul(u.frobenius(frob_iterations)).sub(u.mul(b));
    out.cert.add("w(A sigma(U) - U B) >= target", Rational(0), Rational(target),
                 matrix_w(cons));
    out.cert.require_all("good_model_turnover");
    return out;
}

LaurentElement solve_h1_rank1(long n, const LaurentElement &x, long target) {
    const auto &ctx = x.context();
    if (n < 1)
        throw InvariantViolation("solve_h1_rank1: n must be >= 1");
    if (x.is_zero())
        return x;
    long wx = x.min_vexp();
    // Terms p^{nm} sigma^m(x); stop once n(m+1) + w(x) >= target.
    long mmax = 0;
    while (n * (mmax + 1) + wx < target)
        ++mmax;
    LaurentElement y = LaurentElement::zero(ctx);
    for (long m = 0; m <= mmax; ++m) {
        LaurentElement term = (m == 0) ? x : x.frobenius(static_cast<int>(m));
        y = y.add(term.shift_p(n * m));
    }
    // Self-check on the retained support.
    LaurentElement res = y.sub(y.frobenius().shift_p(n)).sub(x);
    if (!res.is_zero() && res.min_vexp() < target)
        throw PrecisionExhausted("solve_h1_rank1: residual w = " +
                                 std::to_string(res.min_vexp()) + " < target");
    return y;
}

H0Description solve_h0_rank1(long n) {
    if (n == 0)
        return {H0Description::Kind::constants,
                "constants: the sigma-fixed field Q_p (sigma acts trivially "
                "on coefficients)"};
    if (n > 0)
        return {H0Description::Kind::empty, "no nonzero solutions of p^n "
                                            "sigma(x) = x"};
    return {H0Description::Kind::unsupported,
            "n < 0 needs a perfect residue field; out of scope"};
}

LatticeVerdict lattice_slope_check(const SigmaModule &m) {
    for (size_t i = 0; i < m.rank(); ++i)
        for (size_t j = 0; j < m.rank(); ++j)
            if (!m.matrix().at(i, j).is_zero() &&
                !m.matrix().at(i, j).is_integral())
                throw NonIntegralMatrix("lattice_slope_check: entry (" +
                                        std::to_string(i) + "," +
                                        std::to_string(j) +
                                        ") has p-denominators");
    LatticeVerdict v{false, false, false, false, generic_hn_polygon(m)};
    v.min_slope_nonnegative =
        v.polygon.empty() || v.polygon.slopes().front().slope >= 0;
    v.all_slopes_zero = !v.polygon.empty() &&
                        v.polygon.slopes().size() == 1 &&
                        v.polygon.slopes().front().slope == 0;
    v.f_isomorphism = m.det().min_vexp() == 0;
    v.consistent = v.min_slope_nonnegative && (v.all_slopes_zero == v.f_isomorphism);
    return v;
}

} // namespace robba
