#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rotkit/boundary.hpp"
#include "rotkit/pam.hpp"
#include "support/oracles.hpp"

using namespace rotkit;
using R = Rational;

namespace {
R q_(std::int64_t n, std::int64_t d) { return num::ratio(n, d); }
const double kSqrt2m1 = 0.41421356237309510;  // nearest double to sqrt(2) - 1
}

TEST(AOfRho, SqrtTwo) {
    const auto q = validate_quad<double>(0.8, 0.9, 0.9, 0.1);
    const double a = a_of_rho(q, RhoValue<double>::approx(kSqrt2m1), 1e-10);
    EXPECT_NEAR(a, 0.43557, 5e-5);
    // High-precision reference 0.43557272342222270501...
    EXPECT_NEAR(a, 0.4355727234222227, 1e-12);
}

TEST(AOfRho, WorkedExampleExact) {
    const auto q = validate_quad<R>(q_(1, 2), R(1), R(1), R(0));
    EXPECT_EQ(a_of_rho(q, RhoValue<R>::exact(1, 2)), q_(5, 6));
    EXPECT_EQ(delta_of_rho(q_(1, 2), R(1), RhoValue<R>::exact(1, 2)), q_(5, 6));
    // Cross-check with the orbit: at a = 5/6 the rotation number is 1/2.
    const auto p = validate_params<R>(q_(1, 2), R(1), q_(5, 6), R(1), R(0));
    EXPECT_NEAR(rotation_estimate(p, R(0), 2000), 0.5, 1.0 / 2000);
}

TEST(AOfRho, JustAboveRightEnd) {
    // The double nearest 5/6 lies 3.7e-17 above the right end of the 1/2
    // plateau. Past a right end rho grows like 1/log(1/(a - a_hi)), so this
    // already lands on 27/53; solver and orbit agree.
    const auto p = validate_params<double>(0.5, 1.0, 5.0 / 6.0, 1.0, 0.0);
    const auto res = rho_of_a(p);
    ASSERT_TRUE(res.is_exact());
    EXPECT_EQ(res.rho.fraction().p, 27);
    EXPECT_EQ(res.rho.fraction().q, 53);
    EXPECT_NEAR(rotation_estimate(p, 0.0, 100000), 27.0 / 53.0, 1e-5);
}

TEST(AOfRho, RangeLimits) {
    const auto q = validate_quad<double>(2.0 / 3.0, 0.5, 0.75, 0.25);
    // a - 1/4 is of order lambda^(1/rho), so in double the strict
    // inequality survives only for small 1/rho.
    double prev = 0.25;
    for (int n : {10, 100, 1000, 10000}) {
        const double lo = a_of_rho(q, RhoValue<double>::approx(1.0 / n), 1e-12);
        EXPECT_GE(lo, 0.25);
        EXPECT_LT(lo, 0.25 + 2.0 / n);
    }
    EXPECT_GT(a_of_rho(q, RhoValue<double>::approx(0.1), 1e-12), 0.25);
    EXPECT_NEAR(a_of_rho(q, RhoValue<double>::approx(1e-4), 1e-12), 0.25, 1e-6);
    EXPECT_NEAR(a_of_rho(q, RhoValue<double>::approx(1 - 1e-4), 1e-12), 7.0 / 12.0, 1e-6);
    for (int n = 2; n <= 40; ++n) {
        const double v = a_of_rho(q, RhoValue<double>::approx(1.0 - 1.0 / n), 1e-12);
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 7.0 / 12.0);
        prev = v;
    }
}

TEST(AOfRho, RangeStrictInExactMode) {
    const auto q = validate_quad<R>(q_(2, 3), q_(1, 2), q_(3, 4), q_(1, 4));
    for (const Fraction f : {Fraction{1, 10000}, Fraction{9999, 10000}, Fraction{1, 2}, Fraction{1, 3}}) {
        const R a = a_of_rho(q, RhoValue<R>::exact(f));
        EXPECT_GT(a, q_(1, 4));
        EXPECT_LT(a, q_(7, 12));
    }
}

TEST(AOfRho, RejectsOutOfRange) {
    const auto q = validate_quad<double>(0.8, 2.0, 1.0, 0.0);
    EXPECT_THROW(a_of_rho(q, RhoValue<double>::approx(0.4)), DomainError);
    EXPECT_THROW(a_of_rho(q, RhoValue<double>::exact(1, 2)), DomainError);
    EXPECT_THROW(plateau(q, 1, 2), DomainError);
    EXPECT_NO_THROW(plateau(q, 1, 4));
}

TEST(DeltaOfRho, RelationToA) {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> U(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        const auto q = oracle::random_quad(gen, oracle::Regime::any);
        const auto rho = RhoValue<double>::approx(U(gen) * r_bound(q.lambda(), q.mu()));
        const double a = a_of_rho(q, rho, 1e-13);
        const double d = delta_of_rho(q.lambda(), q.mu(), rho, 1e-13);
        EXPECT_NEAR(a, d * (q.b() - q.c()) + q.c() * (1 - q.lambda()), 1e-12);
        const auto q0 = validate_quad<double>(q.lambda(), q.mu(), 1.0, 0.0);
        EXPECT_NEAR(a_of_rho(q0, rho, 1e-13), d, 1e-12);
    }
}

TEST(Plateau, WorkedExample) {
    const auto q = validate_quad<R>(q_(1, 2), R(1), R(1), R(0));
    const auto pl = plateau(q, 1, 2);
    EXPECT_EQ(pl.a_lo, q_(2, 3));
    EXPECT_EQ(pl.a_hi, q_(5, 6));
    // Orbit oracle at both sides.
    auto rho_at = [](double a) {
        return rotation_estimate(validate_params<double>(0.5, 1.0, a, 1.0, 0.0), 0.0, 100000);
    };
    EXPECT_NEAR(rho_at(0.70), 0.5, 1e-5);
    EXPECT_NEAR(rho_at(0.80), 0.5, 1e-5);
    EXPECT_LT(rho_at(0.66), 0.5 - 1e-3);
    EXPECT_GT(rho_at(0.84), 0.5 + 1e-3);
}

TEST(Plateau, OrderedAndInsideInterval) {
    std::mt19937_64 gen(42);
    for (int i = 0; i < 20; ++i) {
        const auto q = oracle::random_quad_exact(gen, oracle::Regime::any);
        for (const Fraction f : oracle::farey(8)) {
            if (!below_r(q.lambda(), q.mu(), f)) continue;
            const auto pl = plateau(q, f.p, f.q);
            EXPECT_LT(pl.a_lo, pl.a_hi);
            EXPECT_GT(pl.a_lo, q.b() - q.b() * q.lambda());
            EXPECT_LT(pl.a_hi, d_bound(q));
        }
    }
}

TEST(Plateau, LeftEndIsLimitFromBelow) {
    const auto q = validate_quad<double>(0.6, 1.3, 0.9, 0.2);
    const auto pl = plateau(q, 2, 5);
    const double below = a_of_rho(q, RhoValue<double>::approx(0.4 - 1e-9), 1e-14);
    EXPECT_NEAR(below, pl.a_lo, 1e-8);
    EXPECT_EQ(a_of_rho_left(q, Fraction{2, 5}), pl.a_lo);
    EXPECT_NEAR(a_of_rho(q, RhoValue<double>::approx(0.4), 1e-14), pl.a_hi, 1e-13);
}

TEST(RhoOfA, WorkedExample) {
    const auto p = validate_params<R>(q_(1, 2), R(1), q_(3, 4), R(1), R(0));
    const auto res = rho_of_a(p);
    ASSERT_TRUE(res.is_exact());
    EXPECT_EQ(res.rho.fraction().p, 1);
    EXPECT_EQ(res.rho.fraction().q, 2);
    EXPECT_EQ(res.plateau().a_lo, q_(2, 3));
    EXPECT_EQ(res.plateau().a_hi, q_(5, 6));
    EXPECT_FALSE(res.right_endpoint);

    const auto end = rho_of_a(validate_params<R>(q_(1, 2), R(1), q_(5, 6), R(1), R(0)));
    EXPECT_TRUE(end.right_endpoint);
    const auto start = rho_of_a(validate_params<R>(q_(1, 2), R(1), q_(2, 3), R(1), R(0)));
    EXPECT_EQ(start.rho.fraction().q, 2);
    EXPECT_FALSE(start.right_endpoint);
}

TEST(RhoOfA, Monotone) {
    auto solve = [](double a) { return rho_of_a(validate_params<double>(0.5, 1.0, a, 1.0, 0.0)); };
    for (double a : {0.68, 0.82}) {
        const auto r = solve(a);
        ASSERT_TRUE(r.is_exact());
        EXPECT_EQ(r.rho.fraction().q, 2);
    }
    EXPECT_LT(solve(0.60).rho.point(), 0.5);
    EXPECT_GT(solve(0.90).rho.point(), 0.5);
    double prev = 0;
    for (int k = 1; k < 200; ++k) {
        const double rho = solve(0.5 + 0.5 * k / 200.0).rho.point();
        EXPECT_GE(rho, prev);
        prev = rho;
    }
}

TEST(RhoOfA, FiveDigitA) {
    // a(sqrt(2) - 1) rounded to five digits sits inside the 12/29 plateau.
    const auto p = validate_params<double>(0.8, 0.9, 0.43557, 0.9, 0.1);
    const auto res = rho_of_a(p, 500);
    ASSERT_TRUE(res.is_exact());
    EXPECT_EQ(res.rho.fraction().p, 12);
    EXPECT_EQ(res.rho.fraction().q, 29);
    EXPECT_NEAR(res.rho.point(), kSqrt2m1, 1e-3);
    // The same answer in exact arithmetic.
    const auto pe = validate_params<R>(q_(4, 5), q_(9, 10), q_(43557, 100000), q_(9, 10), q_(1, 10));
    const auto re = rho_of_a(pe, 500);
    ASSERT_TRUE(re.is_exact());
    EXPECT_EQ(re.rho.fraction().q, 29);
}

TEST(RhoOfA, EnclosureWhenDenominatorCapped) {
    const auto p = validate_params<double>(0.8, 0.9, 0.4355727234222227, 0.9, 0.1);
    const auto res = rho_of_a(p, 50);
    ASSERT_FALSE(res.is_exact());
    const Enclosure e = res.enclosure();
    EXPECT_TRUE(fraction_less(e.lo, e.hi));
    EXPECT_LT(double(e.lo.p) / e.lo.q, kSqrt2m1);
    EXPECT_GT(double(e.hi.p) / e.hi.q, kSqrt2m1);
    EXPECT_NEAR(res.rho.point(), kSqrt2m1, 1e-3);
    EXPECT_LE(res.rho.radius(), e.width());
    EXPECT_THROW(rho_of_a(p, 1), DomainError);
}

TEST(RhoOfA, ExpandingRegimeStaysBelowR) {
    // r(0.8, 2) = 0.3219...: a near the top of the interval gives rho near r.
    const auto q = validate_quad<double>(0.8, 2.0, 1.0, 0.0);
    const double lo = 0.2, hi = d_bound(q);
    for (int k = 1; k < 50; ++k) {
        const auto p = validate_params<double>(0.8, 2.0, lo + (hi - lo) * k / 50.0, 1.0, 0.0);
        const auto res = rho_of_a(p, 200);
        EXPECT_LT(res.rho.point(), r_bound(0.8, 2.0) + 1e-12);
        const double est = rotation_estimate(p, p.c(), 100000);
        const double width = res.is_exact() ? 0.0 : res.enclosure().width();
        EXPECT_LE(std::abs(res.rho.point() - est), 1e-5 + width);
    }
}

TEST(RhoOfA, ExactRecheckNearPlateauEnd) {
    // a a few ulps above the right end of the 1/3 plateau: the float
    // comparison alone cannot decide, the exact recheck can.
    const auto q = validate_quad<double>(0.5, 1.0, 1.0, 0.0);
    const auto pl = plateau(q, 1, 3);
    const double a_hi = pl.a_hi;
    const auto qe = validate_quad<R>(num::to_rational(0.5), R(1), R(1), R(0));
    const R exact_hi = plateau(qe, 1, 3).a_hi;
    for (double a = std::nextafter(a_hi, 0.0); a <= std::nextafter(a_hi, 1.0); a = std::nextafter(a, 1.0)) {
        const auto res = rho_of_a(validate_params<double>(0.5, 1.0, a, 1.0, 0.0));
        const bool inside = num::to_rational(a) <= exact_hi;
        EXPECT_EQ(res.is_exact() && res.rho.fraction().q == 3, inside) << num::format(a);
    }
}
