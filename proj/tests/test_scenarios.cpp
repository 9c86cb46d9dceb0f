#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "randprod/conditions.hpp"
#include "randprod/engine.hpp"
#include "randprod/scenarios.hpp"

using namespace randprod;

TEST_CASE("every catalog scenario ships certified contractions") {
    for (const Scenario& s : catalog()) {
        CAPTURE(s.name);
        CHECK(!s.ops.empty());
        CHECK(static_cast<int>(s.default_x0.size()) == s.space.dim);
        for (const LinearOperator& t : s.ops) {
            const ContractionVerdict v = is_contraction(t);
            CHECK(v.kind == ContractionKind::yes);
            if (t.space.p == 1.0 || t.space.p == 2.0 || t.space.is_inf())
                CHECK(v.bracket.upper - v.bracket.lower <= 1e-10);
        }
        if (s.expected.fixed_space_dim)
            CHECK(common_fixed_space(s.ops).dim() == *s.expected.fixed_space_dim);
    }
}

TEST_CASE("catalog expectations match the checkers") {
    for (const Scenario& s : catalog()) {
        CAPTURE(s.name);
        if (s.expected.w_prime_all_holds) {
            bool all = true;
            for (const LinearOperator& t : s.ops)
                all = all && check_w_prime(t).status == WStatus::holds;
            CHECK(all == *s.expected.w_prime_all_holds);
        }
        if (s.expected.adjoint_w_prime_all_holds) {
            bool all = true;
            for (const LinearOperator& t : s.ops)
                all = all && check_w_prime(adjoint(t)).status == WStatus::holds;
            CHECK(all == *s.expected.adjoint_w_prime_all_holds);
        }
    }
}

TEST_CASE("example1 generators hold while their adjoints fail") {
    const Scenario s = make_scenario("example1");
    for (const LinearOperator& t : s.ops) {
        CHECK(check_w_prime(t).status == WStatus::holds);
        CHECK(check_w_prime(adjoint(t)).status == WStatus::fails);
    }
}

TEST_CASE("example1 paper values and idempotence") {
    const Scenario s = make_scenario("example1");
    CHECK(apply(s.ops[0], {0.0, 1.0}) == Vec{0.5, 0.0});
    const Vec w = apply(s.ops[1], {0.0, 1.0});
    CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-16));

    // Both generators are projections onto the common fixed axis: T^2 = T
    // exactly, in doubles and in rationals.
    for (const LinearOperator& t : s.ops)
        CHECK(matmul(t.matrix, t.matrix) == t.matrix);
    const Example1Exact e = example1_exact();
    for (const RatMat& t : e.ops) CHECK(rat_mat_equal(rat_matmul(t, t), t));

    // They do not commute with each other, consistent with the certificate.
    CHECK_FALSE(matmul(s.ops[0].matrix, s.ops[1].matrix) ==
                matmul(s.ops[1].matrix, s.ops[0].matrix));
}

TEST_CASE("rotation scenario fails the rigidity check") {
    const Scenario s = make_scenario("rotation");
    CHECK(check_w_prime(s.ops[0]).status == WStatus::fails);
    CHECK(common_fixed_space(s.ops).dim() == 0);
}

TEST_CASE("von_neumann_2proj intersects as constructed") {
    const Scenario s = make_scenario("von_neumann_2proj", {.dim = 12, .seed = 5});
    REQUIRE(s.ops.size() == 2);
    const Subspace common = common_fixed_space(s.ops);
    CHECK(common.dim() == *s.expected.fixed_space_dim);

    // each projection fixes the common subspace pointwise
    for (const Vec& y : common.basis)
        for (const LinearOperator& p : s.ops)
            CHECK(norm2(vec_sub(matvec(p.matrix, y), y)) <= 1e-10);

    // projections are symmetric idempotents
    for (const LinearOperator& p : s.ops) {
        CHECK(frobenius(sub(matmul(p.matrix, p.matrix), p.matrix)) <= 1e-12);
        CHECK(frobenius(sub(transpose(p.matrix), p.matrix)) <= 1e-12);
    }
}

TEST_CASE("expected_limit_oracle projects onto the intersection") {
    const Scenario s = make_scenario("von_neumann_2proj", {.dim = 10, .seed = 9});
    const Vec x0 = s.default_x0;
    const std::optional<Vec> limit = expected_limit_oracle(s, x0);
    REQUIRE(limit.has_value());

    // independent optimality checks: the oracle point is fixed by both
    // projections and the residual is orthogonal to the intersection
    for (const LinearOperator& p : s.ops)
        CHECK(norm2(vec_sub(matvec(p.matrix, *limit), *limit)) <= 1e-9);
    const Subspace common = common_fixed_space(s.ops);
    const Vec residual = vec_sub(x0, *limit);
    for (const Vec& b : common.basis) CHECK(std::fabs(dot(b, residual)) <= 1e-9);

    CHECK_FALSE(expected_limit_oracle(make_scenario("example1"), {0.0, 1.0}).has_value());
    CHECK_FALSE(expected_limit_oracle(make_scenario("rotation"), {1.0, 0.0}).has_value());
}

TEST_CASE("alternating projections land on the oracle") {
    const Scenario s = make_scenario("von_neumann_2proj", {.dim = 10, .seed = 2});
    StopCriteria stop;
    stop.max_iters = 10000;
    stop.cauchy_tol = 1e-13;
    stop.cauchy_window = 20;
    const Trace t = iterate(s.ops, {SchedulePolicy::round_robin(), 2}, s.default_x0, stop);
    const std::optional<Vec> oracle = expected_limit_oracle(s, s.default_x0);
    REQUIRE(oracle.has_value());
    CHECK(norm2(vec_sub(t.final_x, *oracle)) <= 1e-8);
}

TEST_CASE("a commuting projection exists exactly where the adjoints keep rigidity") {
    // Positive side of the certificate story: when every adjoint passes the
    // norm-rigidity check, the orthogonal projection onto the common fixed
    // space commutes with every generator. example1 is the scenario where
    // that adjoint condition fails and the exact certificate shows no
    // commuting contraction projection exists at all.
    for (const std::string& name : {"von_neumann_2proj", "random_projections", "diagonal_l2"}) {
        const Scenario s = make_scenario(name);
        REQUIRE(s.expected.adjoint_w_prime_all_holds.value_or(false));
        const Mat q = common_fixed_space(s.ops).projector(s.space.dim);
        for (const LinearOperator& t : s.ops) {
            const Mat qt = matmul(q, t.matrix);
            const Mat tq = matmul(t.matrix, q);
            CHECK(frobenius(sub(qt, tq)) <= 1e-10);
        }
        const LinearOperator qop = LinearOperator::make(q, s.space);
        CHECK(is_contraction(qop).kind == ContractionKind::yes);
        CHECK(frobenius(sub(matmul(q, q), q)) <= 1e-10);
    }

    // example1: the canonical projection onto span{e1} does not commute
    const Scenario ex1 = make_scenario("example1");
    const Mat q1 = common_fixed_space(ex1.ops).projector(2);
    bool commutes_with_all = true;
    for (const LinearOperator& t : ex1.ops)
        commutes_with_all =
            commutes_with_all && frobenius(sub(matmul(q1, t.matrix), matmul(t.matrix, q1))) <= 1e-10;
    CHECK_FALSE(commutes_with_all);
}

TEST_CASE("impossibility certificate is exact and inconsistent") {
    const ImpossibilityCertificate cert = example1_no_commuting_projection();
    REQUIRE(cert.constraints.size() == 2);
    CHECK(cert.constraints[0].generator == "T1");
    CHECK(cert.constraints[0].beta == Rational(1, 2));
    CHECK(cert.constraints[1].generator == "T2");
    CHECK(cert.constraints[1].beta == Rational(1, 3));
    CHECK(cert.contraction_bound == Rational(1));
    CHECK_FALSE(cert.consistent);
    CHECK(!cert.explanation.empty());
}

TEST_CASE("candidate projections actually are idempotent contractions") {
    // sanity behind the certificate parameterization: Q(beta) = [[1, b],[0,0]]
    // is idempotent for every beta and an l1 contraction iff |beta| <= 1
    for (double beta : {-1.0, -0.5, 0.0, 1.0 / 3.0, 0.5, 1.0}) {
        Mat q(2);
        q(0, 0) = 1.0;
        q(0, 1) = beta;
        CHECK(matmul(q, q) == q);
        const LinearOperator op = LinearOperator::make(q, NormSpec::l1(2));
        CHECK(is_contraction(op).kind == ContractionKind::yes);
    }
    Mat too_big(2);
    too_big(0, 0) = 1.0;
    too_big(0, 1) = 1.5;
    CHECK(is_contraction(LinearOperator::make(too_big, NormSpec::l1(2))).kind ==
          ContractionKind::no);
}

TEST_CASE("unknown scenario names are rejected") {
    CHECK_THROWS_AS((void)make_scenario("nope"), std::invalid_argument);
    CHECK(is_builtin_scenario("example1"));
    CHECK_FALSE(is_builtin_scenario("nope"));
}

TEST_CASE("scenario determinism per seed") {
    const Scenario a = make_scenario("random_projections", {.dim = 10, .seed = 5});
    const Scenario b = make_scenario("random_projections", {.dim = 10, .seed = 5});
    REQUIRE(a.ops.size() == b.ops.size());
    for (std::size_t i = 0; i < a.ops.size(); ++i) CHECK(a.ops[i].matrix == b.ops[i].matrix);
    CHECK(a.default_x0 == b.default_x0);

    const Scenario c = make_scenario("random_projections", {.dim = 10, .seed = 6});
    CHECK_FALSE(a.ops[0].matrix == c.ops[0].matrix);
}
