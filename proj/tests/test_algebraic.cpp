#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nonpv/algebraic.hpp"

using namespace nonpv;

namespace {

ZLambda random_zl(std::mt19937_64& rng, long long bound)
{
    std::uniform_int_distribution<long long> d(-bound, bound);
    return ZLambda(d(rng), d(rng));
}

QLambda random_ql(std::mt19937_64& rng)
{
    std::uniform_int_distribution<long long> n(-1000, 1000), m(1, 97);
    return QLambda(Rational(Integer(n(rng)), Integer(m(rng))), Rational(Integer(n(rng)), Integer(m(rng))));
}

}  // namespace

TEST_CASE("zl_mul follows lambda^2 = lambda + 3")
{
    ZLambda l = ZLambda::lambda();
    CHECK(zl_mul(l, l) == ZLambda(3, 1));
    CHECK(zl_mul(ZLambda(1, 0), ZLambda(-7, 11)) == ZLambda(-7, 11));
    CHECK(zl_mul(zl_mul(l, l), l) == ZLambda(3, 4));
    auto [a3, b3] = lambda_power_coeffs(3);
    CHECK(ZLambda(b3.num(), a3.num()) == ZLambda(3, 4));
}

TEST_CASE("lambda_power_coeffs")
{
    CHECK(lambda_power_coeffs(0) == std::pair(Rational(0), Rational(1)));
    CHECK(lambda_power_coeffs(2) == std::pair(Rational(1), Rational(3)));
    CHECK(lambda_power_coeffs(3) == std::pair(Rational(4), Rational(3)));
    CHECK(lambda_power_coeffs(-1) == std::pair(Rational(1, 3), Rational(-1, 3)));

    for (int m = 0; m <= 30; ++m) {
        for (int n = 0; n <= 30; ++n) {
            auto [am, bm] = lambda_power_coeffs(m);
            auto [an, bn] = lambda_power_coeffs(n);
            auto [amn, bmn] = lambda_power_coeffs(m + n);
            ZLambda prod = zl_mul(ZLambda(bm.num(), am.num()), ZLambda(bn.num(), an.num()));
            REQUIRE(prod == ZLambda(bmn.num(), amn.num()));
        }
    }
    for (int n = -20; n <= 20; ++n) CHECK(QLambda::lambda_pow(n) * QLambda::lambda_pow(-n) == QLambda(1));
    CHECK(QLambda::lambda_pow(-1) == (QLambda::lambda() - QLambda(1)) * QLambda(Rational(1, 3)));
}

TEST_CASE("ring axioms hold exactly, including past 64 bits")
{
    std::mt19937_64 rng(20240611);
    for (int it = 0; it < 2000; ++it) {
        long long bound = it % 2 ? (1ll << 20) : (1ll << 62);
        ZLambda x = random_zl(rng, bound), y = random_zl(rng, bound), z = random_zl(rng, bound);
        REQUIRE(zl_mul(zl_mul(x, y), z) == zl_mul(x, zl_mul(y, z)));
        REQUIRE(zl_mul(x, y) == zl_mul(y, x));
        REQUIRE(zl_mul(x, y + z) == zl_mul(x, y) + zl_mul(x, z));
        REQUIRE(x.norm() * y.norm() == zl_mul(x, y).norm());
    }
}

TEST_CASE("float embedding matches for components below 2^30")
{
    std::mt19937_64 rng(7);
    for (int it = 0; it < 5000; ++it) {
        ZLambda x = random_zl(rng, 1ll << 30), y = random_zl(rng, 1ll << 30);
        if (x.is_zero() || y.is_zero()) continue;
        double lhs = zl_mul(x, y).to_double();
        double rhs = x.to_double() * y.to_double();
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("exact order agrees with the real embedding")
{
    std::mt19937_64 rng(99);
    for (int it = 0; it < 5000; ++it) {
        ZLambda x = random_zl(rng, 1000), y = random_zl(rng, 1000);
        double dx = x.to_double(), dy = y.to_double();
        if (dx < dy) REQUIRE(x < y);
        if (dx > dy) REQUIRE(x > y);
        if (x == y) REQUIRE(dx == dy);
    }
    // powers of the unit lambda - 2 shrink while their coefficients explode
    ZLambda u(-2, 1), p(1, 0);
    long double expect = 1.0L;
    for (int n = 1; n <= 80; ++n) {
        p *= u;
        expect *= (kLambdaL - 2.0L);
        REQUIRE(p.sign() == 1);
        REQUIRE((-p).sign() == -1);
        REQUIRE(std::abs(p.to_long_double() / expect - 1.0L) < 1e-15L);
    }
    CHECK_FALSE(p.a().is_small());
}

TEST_CASE("QLambda field operations")
{
    std::mt19937_64 rng(31337);
    int checked = 0;
    while (checked < 1000) {
        QLambda x = random_ql(rng), y = random_ql(rng);
        if (x.is_zero()) continue;
        REQUIRE(x * x.inverse() == QLambda(1));
        REQUIRE((x * y).norm() == x.norm() * y.norm());
        ++checked;
    }
    QLambda l = QLambda::lambda();
    CHECK(l.inverse() == QLambda(Rational(-1, 3), Rational(1, 3)));
    CHECK(l.norm() == Rational(-3));
    CHECK_THROWS_AS(QLambda(0).inverse(), std::domain_error);
}

TEST_CASE("exact division in Z[lambda]")
{
    ZLambda x(5, -7), y(2, 3);
    auto q = divide(x * y, y);
    REQUIRE(q);
    CHECK(*q == x);
    CHECK_FALSE(divide(ZLambda(1, 0), ZLambda(0, 1)));  // 1/lambda = (lambda-1)/3
    CHECK(divide(ZLambda(3, 0), ZLambda(0, 1)) == ZLambda(-1, 1));
}

TEST_CASE("pf_data")
{
    const auto& pf = pf_data();
    CHECK(pf.lambda == doctest::Approx(2.302776).epsilon(1e-6));
    CHECK(std::abs(pf.lambda - 2.302776) < 1e-6);
    CHECK(std::abs(pf.right_pf[0] - 0.434) < 1e-3);
    CHECK(std::abs(pf.right_pf[1] - 0.566) < 1e-3);
    CHECK(std::abs(pf.density - 0.638675) < 1e-6);
    CHECK(pf.right_pf_exact[0] + pf.right_pf_exact[1] == QLambda(1));
    CHECK(std::abs(pf.lambda_conj - (1.0 - pf.lambda)) < 1e-15);

    const auto& M = pf.subst_matrix;
    const auto& v = pf.right_pf_exact;
    for (int i = 0; i < 2; ++i) {
        QLambda mv = QLambda(M[i][0]) * v[0] + QLambda(M[i][1]) * v[1];
        CHECK(mv == QLambda::lambda() * v[i]);
        double mvf = M[i][0] * pf.right_pf[0] + M[i][1] * pf.right_pf[1];
        CHECK(std::abs(mvf - pf.lambda * pf.right_pf[i]) < 1e-12);
    }
    for (int j = 0; j < 2; ++j) {
        double lm = pf.left_pf[0] * M[0][j] + pf.left_pf[1] * M[1][j];
        CHECK(std::abs(lm - pf.lambda * pf.left_pf[j]) < 1e-12);
    }
    // eigenvalues of M are roots of x^2 - x - 3
    for (double e : {pf.lambda, pf.lambda_conj}) CHECK(std::abs(e * e - e - 3.0) < 1e-12);
}

TEST_CASE("gcd facts")
{
    CHECK(gcd(Integer(0), Integer(3)) == Integer(3));
    CHECK(gcd(Integer(-6), Integer(4)) == Integer(2));
    auto r2 = gcd_facts_check(2);
    CHECK(r2.ok);
    auto r40 = gcd_facts_check(40);
    CHECK(r40.ok);
    CHECK_FALSE(r40.violation);
    CHECK_FALSE(gcd_facts_check(0).ok);
    auto [a1, b1] = lambda_power_coeffs(1);
    auto [a2, b2] = lambda_power_coeffs(2);
    CHECK(a1 == Rational(1));
    CHECK(a2 == Rational(1));
    CHECK(gcd(b1.num(), b2.num()) == Integer(3));
    CHECK(gcd_facts_check(120).ok);
}

TEST_CASE("bignum promotion threshold does not change results")
{
    auto reference = lambda_power_coeffs(90);
    auto ref_report = gcd_facts_check(60);
    Integer::set_small_bits(8);
    auto small = lambda_power_coeffs(90);
    auto small_report = gcd_facts_check(60);
    ZLambda x(200, -150), y(-77, 300);
    ZLambda prod = x * y;
    bool promoted = !prod.a().is_small() || !prod.b().is_small();
    Integer::set_small_bits(63);
    CHECK(small == reference);
    CHECK(small_report.ok == ref_report.ok);
    CHECK(promoted);
    CHECK(prod == ZLambda(200, -150) * ZLambda(-77, 300));
    CHECK_THROWS(Integer::set_small_bits(0));
}

TEST_CASE("Integer arithmetic across the word boundary")
{
    Integer big = Integer::parse("123456789012345678901234567890");
    CHECK_FALSE(big.is_small());
    CHECK((big - big).is_small());
    CHECK((big * Integer(0)).is_zero());
    Integer m(INT64_MAX);
    CHECK((m + Integer(1)).str() == "9223372036854775808");
    CHECK(((m + Integer(1)) - Integer(1)) == m);
    CHECK(mod(Integer(-7), Integer(3)) == Integer(2));
    CHECK(exact_div(big * Integer(7), Integer(7)) == big);
    CHECK_THROWS_AS(exact_div(Integer(7), Integer(2)), std::domain_error);
    CHECK(Rational(Integer(6), Integer(-4)) == Rational(Integer(-3), Integer(2)));
    CHECK(Rational::parse("-3/6").str() == "-1/2");
}

TEST_CASE("ZLambda json")
{
    nlohmann::json j = ZLambda(3, -4);
    CHECK(j.dump() == R"({"a":3,"b":-4})");
    ZLambda big(Integer::parse("9007199254740993"), Integer(1));
    nlohmann::json jb = big;
    CHECK(jb["a"].is_string());
    CHECK(jb["b"].is_number_integer());
    CHECK(jb.get<ZLambda>() == big);
    CHECK(j.get<ZLambda>() == ZLambda(3, -4));
}

TEST_CASE("sqrt(13) digits agree with lambda")
{
    long double s = std::strtold(kSqrt13Digits, nullptr);
    CHECK(std::abs((1.0L + s) / 2.0L - kLambdaL) < 1e-18L);
    CHECK(static_cast<double>(kLambdaL) == kLambda);
}
