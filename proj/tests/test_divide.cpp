#include <doctest.h>

#include <random>

#include "robba/divide.hpp"

using namespace robba;

namespace {

LaurentElement random_integral(const ContextPtr &ctx, std::mt19937_64 &gen,
                               long max_terms = 5, long exp_hi = 10,
                               long val_hi = 8) {
    LaurentElement x = LaurentElement::zero(ctx);
    long terms = 1 + static_cast<long>(gen() % max_terms);
    for (long t = 0; t < terms; ++t) {
        long e = static_cast<long>(gen() % (exp_hi + 1));
        long v = static_cast<long>(gen() % val_hi);
        long m = 1 + static_cast<long>(gen() % 9);
        x = x.add(LaurentElement::monomial(
            ctx, e, PAdicScalar::from_long(*ctx, m).shift(*ctx, v)));
    }
    return x;
}

} // namespace

TEST_CASE("div_rem trivial and unit divisor cases") {
    auto ctx = default_context();
    std::mt19937_64 gen(5);
    // x = 1: z = 0, q = y
    auto y = random_integral(ctx, gen);
    auto r1 = div_rem(y, LaurentElement::one(ctx), Rational(1, 2), 16);
    CHECK(r1.z.is_zero());
    CHECK(r1.q.equals(y));
    // y = 1, x = p + u (unit in Gamma_{1/2}): z = 0
    auto x = LaurentElement::from_terms(ctx, {{0, 5}, {1, 1}});
    auto r2 = div_rem(LaurentElement::one(ctx), x, Rational(1, 2), 16);
    CHECK(r2.z.is_zero());
    auto res = LaurentElement::one(ctx).sub(r2.q.mul(x));
    CHECK((res.is_zero() || res.min_vexp() >= 16));
}

TEST_CASE("div_rem height-dropping case") {
    auto ctx = default_context();
    // y = p, x = u^5 + p at r = 1/2: height(x) = 1
    auto x = LaurentElement::from_terms(ctx, {{5, 1}, {0, 5}});
    auto y = LaurentElement::from_terms(ctx, {{0, 5}});
    auto out = div_rem(y, x, Rational(1, 2), 16);
    // contract: z = 0 or height(z) < height(x); w_r(z) >= w_r(y); residual
    if (!out.z.is_zero())
        CHECK(height(out.z, Rational(1, 2)) < height(x, Rational(1, 2)));
    auto res = y.sub(out.z).sub(out.q.mul(x));
    CHECK((res.is_zero() || res.min_vexp() >= 16));
    if (!out.z.is_zero())
        CHECK(*weighted_valuation(out.z, Rational(1, 2)) >=
              *weighted_valuation(y, Rational(1, 2)));
}

TEST_CASE("div_rem is deterministic") {
    auto ctx = default_context();
    std::mt19937_64 gen(17);
    auto x = random_integral(ctx, gen);
    auto y = random_integral(ctx, gen);
    auto a = div_rem(y, x, Rational(1, 2), 16);
    auto b = div_rem(y, x, Rational(1, 2), 16);
    CHECK(a.z.equals(b.z));
    CHECK(a.q.equals(b.q));
    CHECK(a.cert.iterations_used == b.cert.iterations_used);
}

TEST_CASE("div_rem contract sweep") {
    auto ctx = default_context();
    std::mt19937_64 gen(2024);
    int done = 0;
    for (int i = 0; i < 40; ++i) {
        auto x = random_integral(ctx, gen, 4, 8, 6);
        auto y = random_integral(ctx, gen, 4, 8, 6);
        DivRemResult out = div_rem(y, x, Rational(1, 2), 16, 128);
        auto res = y.sub(out.z).sub(out.q.mul(x));
        CHECK((res.is_zero() || res.min_vexp() >= 16));
        if (!out.z.is_zero()) {
            CHECK(height(out.z, Rational(1, 2)) < height(x, Rational(1, 2)));
            CHECK(*weighted_valuation(out.z, Rational(1, 2)) >=
                  *weighted_valuation(y, Rational(1, 2)));
        }
        out.cert.require_all("test");
        ++done;
    }
    CHECK(done == 40);
}

TEST_CASE("div_rem rejects zero divisor and denominators") {
    auto ctx = default_context();
    CHECK_THROWS_AS((void)div_rem(LaurentElement::one(ctx),
                                  LaurentElement::zero(ctx), Rational(1, 2), 8),
                    ZeroDivisor);
    auto frac = LaurentElement::one(ctx).shift_p(-1);
    CHECK_THROWS_AS(
        (void)div_rem(frac, LaurentElement::one(ctx), Rational(1, 2), 8),
        InvariantViolation);
}

TEST_CASE("factor_unit examples") {
    auto ctx = default_context();
    // already integral with slopes in [s, r]
    auto x = LaurentElement::from_terms(ctx, {{5, 1}, {0, 5}}); // slope 1/5
    auto out = factor_unit(x, Rational(1, 10), Rational(1, 2), 16);
    CHECK(out.g.is_integral());
    auto poly = newton_polygon(out.g, RadiusInterval(Rational(0), Rational(1, 2)));
    REQUIRE(poly.slopes().size() == 1);
    CHECK(poly.slopes()[0].slope == Rational(1, 5));
    // x = u^-1 + p: unit, positioning absorbs everything
    auto x2 = LaurentElement::monomial(ctx, -1, 1)
                  .add(LaurentElement::from_terms(ctx, {{0, 5}}));
    auto out2 = factor_unit(x2, Rational(1, 10), Rational(1, 2), 16);
    CHECK(out2.g.is_integral());
    CHECK(newton_polygon(out2.g, RadiusInterval(Rational(0), Rational(1, 2)))
              .empty());
    // x = p^3 * unit: g = p^3 modulo a unit
    auto x3 = LaurentElement::from_terms(ctx, {{0, 1}, {1, 5}})
                  .shift_p(3); // p^3 (1 + p u)
    auto out3 = factor_unit(x3, Rational(1, 10), Rational(1, 2), 16);
    CHECK(out3.g.is_integral());
    CHECK(newton_polygon(out3.g, RadiusInterval(Rational(0), Rational(1, 2)))
              .empty());
    CHECK(*weighted_valuation(out3.g, Rational(0)) == 3);
}

TEST_CASE("factor_unit clears slopes below s") {
    auto ctx = default_context();
    // x = 1 + p u^-5: slope 1/5; with s > 1/5 the slope must leave g
    auto x = LaurentElement::one(ctx).add(
        LaurentElement::monomial(ctx, -5, 1).shift_p(1));
    {
        auto poly = newton_polygon(x, RadiusInterval(Rational(0), Rational(1, 2)));
        REQUIRE(poly.slopes().size() == 1);
        CHECK(poly.slopes()[0].slope == Rational(1, 5));
    }
    auto out = factor_unit(x, Rational(1, 4), Rational(1, 2), 16, 128);
    CHECK(out.g.is_integral());
    for (auto &seg :
         newton_polygon(out.g, RadiusInterval(Rational(0), Rational(1, 2))).slopes())
        CHECK(seg.slope >= Rational(1, 4));
    // slope multiplicities in [s, r] conserved (here: none in [1/4, 1/2])
    CHECK(newton_polygon(out.g, RadiusInterval(Rational(1, 4), Rational(1, 2)))
              .empty());
}

TEST_CASE("factor_unit conserves slope multiplicities in [s, r]") {
    auto ctx = default_context();
    // x = (u^3 + p)(1 + p u^-40): slope 1/3 in [1/4, 1/2], slope 1/40 below s
    auto a = LaurentElement::from_terms(ctx, {{3, 1}, {0, 5}});
    auto b = LaurentElement::one(ctx).add(
        LaurentElement::monomial(ctx, -40, 1).shift_p(1));
    auto x = a.mul(b);
    auto out = factor_unit(x, Rational(1, 4), Rational(1, 2), 16, 128);
    auto gx = newton_polygon(out.g, RadiusInterval(Rational(1, 4), Rational(1, 2)));
    auto px = newton_polygon(x, RadiusInterval(Rational(1, 4), Rational(1, 2)));
    CHECK(gx.same_slopes(px));
    REQUIRE(gx.slopes().size() == 1);
    CHECK(gx.slopes()[0].slope == Rational(1, 3));
}

TEST_CASE("matrix_factor identity and nilpotent example") {
    auto ctx = default_context();
    ElemMatrix eye = ElemMatrix::identity(ctx, 2);
    auto out = matrix_factor(eye, Rational(1, 8), Rational(1, 2), Rational(1, 4),
                             Rational(3, 4), 16);
    CHECK(out.u.equals(eye));
    CHECK(out.v.equals(eye));
    // M = I + p E12
    ElemMatrix m = eye;
    m.at(0, 1) = LaurentElement::one(ctx).shift_p(1);
    auto out2 = matrix_factor(m, Rational(1, 8), Rational(1, 2), Rational(1, 4),
                              Rational(3, 4), 16);
    CHECK(out2.cert.iterations_used <= 5);
    auto res = m.sub(out2.u.mul(out2.v));
    CHECK((res.is_zero() || *res.weighted_valuation(Rational(1, 2)) >= 16));
}

TEST_CASE("matrix_factor on a mixing perturbation") {
    auto ctx = default_context();
    ElemMatrix m = ElemMatrix::identity(ctx, 2);
    m.at(0, 1) = LaurentElement::one(ctx).shift_p(1);          // p
    m.at(1, 0) = LaurentElement::monomial(ctx, 3, 1);          // u^3
    m.at(0, 0) = m.at(0, 0).add(LaurentElement::monomial(ctx, 2, 1).shift_p(2));
    auto out = matrix_factor(m, Rational(1, 8), Rational(1, 2), Rational(1, 4),
                             Rational(3, 4), 14, 64);
    auto res = m.sub(out.u.mul(out.v));
    for (const Rational &s : {Rational(1, 4), Rational(1, 2)})
        if (!res.is_zero())
            CHECK(*res.weighted_valuation(s) >= 14);
    out.cert.require_all("test");
}

TEST_CASE("matrix_factor rejects bad hypothesis") {
    auto ctx = default_context();
    ElemMatrix m = ElemMatrix::identity(ctx, 2);
    m.at(0, 1) = LaurentElement::one(ctx); // w_s(M - I) = 0
    CHECK_THROWS_AS((void)matrix_factor(m, Rational(1, 8), Rational(1, 2),
                                        Rational(1, 4), Rational(3, 4), 8),
                    BadOverlap);
}

TEST_CASE("matrix_approximate") {
    auto ctx = default_context();
    // identity
    ElemMatrix eye = ElemMatrix::identity(ctx, 2);
    auto out = matrix_approximate(eye, Rational(1, 4), Rational(1, 2),
                                  Rational(3, 4), false);
    CHECK(out.u.equals(eye));
    // diag(p, p^-1) (I + small)
    ElemMatrix m(ctx, 2);
    m.at(0, 0) = LaurentElement::one(ctx).shift_p(1);
    m.at(1, 1) = LaurentElement::one(ctx).shift_p(-1);
    m.at(0, 1) = LaurentElement::monomial(ctx, 2, 1).shift_p(1);
    auto out2 = matrix_approximate(m, Rational(1, 4), Rational(1, 2),
                                   Rational(3, 4), false);
    auto res = m.mul(out2.u).sub(eye);
    for (const Rational &s : {Rational(1, 4), Rational(1, 2)})
        if (!res.is_zero())
            CHECK(*res.weighted_valuation(s) > 0);
    // 1x1 unit
    ElemMatrix one(ctx, 1);
    one.at(0, 0) = LaurentElement::from_terms(ctx, {{0, 1}, {1, 5}});
    auto out3 = matrix_approximate(one, Rational(1, 4), Rational(1, 2),
                                   Rational(3, 4), false);
    auto res3 = one.mul(out3.u).sub(ElemMatrix::identity(ctx, 1));
    CHECK((res3.is_zero() || *res3.weighted_valuation(Rational(1, 2)) > 0));
    // unimodular normalization when det is close to 1
    ElemMatrix um = ElemMatrix::identity(ctx, 2);
    um.at(0, 1) = LaurentElement::monomial(ctx, 1, 1).shift_p(1);
    um.at(1, 0) = LaurentElement::monomial(ctx, 2, 1).shift_p(2);
    auto out4 = matrix_approximate(um, Rational(1, 4), Rational(1, 2),
                                   Rational(3, 4), true);
    CHECK(out4.u.det().equals(LaurentElement::one(ctx)));
}

TEST_CASE("certificates are self-validating") {
    auto ctx = default_context();
    std::mt19937_64 gen(31337);
    auto x = random_integral(ctx, gen, 3, 6, 5);
    auto y = random_integral(ctx, gen, 3, 6, 5);
    auto out = div_rem(y, x, Rational(1, 2), 12, 128);
    // Re-evaluate the residual line from the returned data.
    auto res = y.sub(out.z).sub(out.q.mul(x));
    auto &line = out.cert.residual_valuations.at(0);
    if (res.is_zero())
        CHECK(!line.achieved.has_value());
    else
        CHECK(*line.achieved == Rational(res.min_vexp()));
}
