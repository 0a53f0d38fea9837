#include <doctest.h>

#include "robba/scalar.hpp"

using namespace robba;

TEST_CASE("scalar canonical form") {
    auto ctx = default_context();
    auto a = PAdicScalar::from_long(*ctx, 50); // 2 * 5^2
    CHECK(a.vexp() == 2);
    CHECK(a.visible_mantissa(*ctx) == 2);
    auto z = PAdicScalar::from_integer(*ctx, Integer(0));
    CHECK(z.is_zero());
    // p^N collapses to zero at precision
    auto big = PAdicScalar::from_integer(*ctx, ctx->pow_p(24));
    CHECK(big.is_zero());
    auto almost = PAdicScalar::from_integer(*ctx, ctx->pow_p(23));
    CHECK(!almost.is_zero());
    CHECK(almost.vexp() == 23);
}

TEST_CASE("scalar arithmetic") {
    auto ctx = default_context();
    auto a = PAdicScalar::from_long(*ctx, 7);
    auto b = PAdicScalar::from_long(*ctx, -7);
    CHECK(a.add(*ctx, b).is_zero());
    auto c = a.mul(*ctx, PAdicScalar::from_long(*ctx, 5));
    CHECK(c.vexp() == 1);
    CHECK(c.visible_mantissa(*ctx) == 7);
    // inverse
    auto inv = a.invert(*ctx);
    CHECK(a.mul(*ctx, inv).equals(*ctx, PAdicScalar::one(*ctx)));
    // denominators
    auto frac = PAdicScalar::from_p_fraction(*ctx, Integer(3), 4); // 3 p^-4
    CHECK(frac.vexp() == -4);
    auto prod = frac.mul(*ctx, PAdicScalar::from_long(*ctx, 625));
    CHECK(prod.vexp() == 0);
    CHECK(prod.visible_mantissa(*ctx) == 3);
}

TEST_CASE("precision ceiling addition (p = 2)") {
    auto ctx = make_context(2, 2, 8, -16, 16, Rational(1));
    auto x = PAdicScalar::from_integer(*ctx, ctx->pow_p(7));
    auto s = x.add(*ctx, x); // 2^8 == 0 at precision
    CHECK(s.is_zero());
}

TEST_CASE("digits") {
    auto ctx = default_context();
    auto a = PAdicScalar::from_long(*ctx, 7); // 7 = 2 + 1*5
    CHECK(a.digit(*ctx, 0) == 2);
    CHECK(a.digit(*ctx, 1) == 1);
    CHECK(a.digit(*ctx, 2) == 0);
}

TEST_CASE("inverse of deep power fails honestly") {
    auto ctx = default_context();
    auto deep = PAdicScalar::from_p_fraction(*ctx, Integer(1), -30); // p^30: zero
    CHECK(deep.is_zero());
    auto nearly = PAdicScalar::one(*ctx).shift(*ctx, -30); // p^-30
    CHECK_THROWS_AS((void)nearly.invert(*ctx), PrecisionExhausted);
}
