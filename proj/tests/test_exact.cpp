#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "randprod/exact.hpp"
#include "randprod/scenarios.hpp"

using namespace randprod;

TEST_CASE("rational construction normalizes") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(1, 3).to_string() == "1/3");
    CHECK(Rational(-5).to_string() == "-5");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic") {
    const Rational a(1, 2), b(1, 3);
    CHECK(a + b == Rational(5, 6));
    CHECK(a - b == Rational(1, 6));
    CHECK(a * b == Rational(1, 6));
    CHECK(a / b == Rational(3, 2));
    CHECK((-a) == Rational(-1, 2));
    CHECK(Rational(-7, 3).abs() == Rational(7, 3));
    CHECK(a > b);
    CHECK(b < a);
    CHECK(a.value() == 0.5);
}

TEST_CASE("rational overflow is detected") {
    const Rational huge(INT64_MAX / 2, 1);
    CHECK_THROWS_AS((void)(huge * Rational(8)), std::overflow_error);
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("1/3") == Rational(1, 3));
    CHECK(Rational::parse("-2/6") == Rational(-1, 3));
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse("-1.25") == Rational(-5, 4));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse(" 3/4 ") == Rational(3, 4));
    CHECK_THROWS_AS((void)Rational::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS((void)Rational::parse("1.2e3"), std::invalid_argument);
    CHECK_THROWS_AS((void)Rational::parse(""), std::invalid_argument);
}

TEST_CASE("exact application of the example1 generators") {
    const Example1Exact e = example1_exact();
    const RatVec out = rat_apply(e.ops[0], {Rational(0), Rational(1)});
    CHECK(out[0] == Rational(1, 2));
    CHECK(out[1] == Rational(0));

    const RatVec out2 = rat_apply(e.ops[1], {Rational(0), Rational(1)});
    CHECK(out2[0] == Rational(1, 3));
    CHECK(out2[1] == Rational(0));
}

TEST_CASE("exact iteration pins the scripted limits") {
    const Example1Exact e = example1_exact();

    std::vector<int> first_one = {1, 1, 2, 1, 2};
    const ExactTrace t1 = exact_iterate(e.ops, ExactNorm::l1, first_one, e.default_x0, 2);
    CHECK(t1.converged);
    CHECK(t1.final_x[0] == Rational(1, 2));
    CHECK(t1.final_x[1] == Rational(0));
    CHECK(t1.steps[0].norm == Rational(1, 2));
    CHECK(t1.steps[0].increment == Rational(3, 2));
    CHECK(exact_monotonicity_audit(t1) == Rational(0));

    std::vector<int> first_two = {2, 2, 1, 2, 1};
    const ExactTrace t2 = exact_iterate(e.ops, ExactNorm::l1, first_two, e.default_x0, 2);
    CHECK(t2.final_x[0] == Rational(1, 3));
    CHECK(t2.final_x[1] == Rational(0));
}

TEST_CASE("exact order sensitivity separates the limits by exactly 1/6") {
    const Example1Exact e = example1_exact();
    const ExactOrderReport r =
        exact_order_sensitivity(e.ops, ExactNorm::l1, e.default_x0, 12, 7, 50);
    CHECK(r.all_converged);
    CHECK(r.diameter == Rational(1, 6));
    for (const RatVec& limit : r.limits) {
        CHECK(limit[1] == Rational(0));  // every limit lies on the e1 axis
        CHECK((limit[0] == Rational(1, 2) || limit[0] == Rational(1, 3)));
    }
}

TEST_CASE("exact linf norm") {
    const RatVec v = {Rational(1, 2), Rational(-2, 3)};
    CHECK(rat_norm(v, ExactNorm::linf) == Rational(2, 3));
    CHECK(rat_norm(v, ExactNorm::l1) == Rational(7, 6));
}
