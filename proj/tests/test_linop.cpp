#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "randprod/kernels.hpp"
#include "randprod/linop.hpp"
#include "randprod/rng.hpp"

using namespace randprod;

namespace {

Mat example1_t1() {
    Mat m(2);
    m(0, 0) = 1.0;
    m(0, 1) = 0.5;
    return m;
}

Mat example1_t2() {
    Mat m(2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0 / 3.0;
    return m;
}

Mat rotation90() {
    Mat m(2);
    m(0, 1) = -1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat random_matrix(int n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 eng = make_engine(seed, 9);
    std::normal_distribution<double> gauss(0.0, scale);
    Mat m(n);
    for (double& x : m.a) x = gauss(eng);
    return m;
}

LinearOperator random_contraction(int n, double p, std::uint64_t seed, double target = 0.9) {
    const Mat raw = random_matrix(n, seed);
    const LinearOperator probe = LinearOperator::make(raw, NormSpec::lp(n, p));
    Mat scaled = raw;
    const double factor = target / std::max(probe.norm_bracket.upper, 1e-12);
    for (double& x : scaled.a) x *= factor;
    return LinearOperator::make(scaled, NormSpec::lp(n, p));
}

// test-side l1 / linf norms, summed directly
double oracle_l1_norm(const Mat& m) {
    double best = 0.0;
    for (int j = 0; j < m.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.n; ++i) s += std::fabs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double oracle_linf_norm(const Mat& m) {
    double best = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += std::fabs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// independent spectral route: Jacobi eigendecomposition of T^T T
double oracle_l2_norm(const Mat& m) {
    const EigenSym e = jacobi_eigh(gram(m));
    return std::sqrt(std::max(e.values.front(), 0.0));
}

}  // namespace

TEST_CASE("apply reproduces the example1 actions") {
    const NormSpec s = NormSpec::l1(2);
    const LinearOperator t1 = LinearOperator::make(example1_t1(), s);
    const LinearOperator t2 = LinearOperator::make(example1_t2(), s);

    CHECK(apply(t1, {0.0, 1.0}) == Vec{0.5, 0.0});
    const Vec w = apply(t2, {0.0, 1.0});
    CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
    CHECK(w[1] == 0.0);

    const LinearOperator id = LinearOperator::make(Mat::identity(3), NormSpec::l2(3));
    CHECK(apply(id, {1.0, -2.0, 0.5}) == Vec{1.0, -2.0, 0.5});
}

TEST_CASE("adjoint transposes onto the dual space") {
    const LinearOperator t1 = LinearOperator::make(example1_t1(), NormSpec::l1(2));
    const LinearOperator t1a = adjoint(t1);
    CHECK(t1a.space == NormSpec::linf(2));
    CHECK(t1a.matrix == Mat(2, {1.0, 0.0, 0.5, 0.0}));

    const LinearOperator back = adjoint(t1a);
    CHECK(back.matrix == t1.matrix);
    CHECK(back.space == t1.space);

    Mat sym(2, {2.0, 1.0, 1.0, 3.0});
    const LinearOperator s2 = LinearOperator::make(sym, NormSpec::l2(2));
    CHECK(adjoint(s2).matrix == sym);
}

TEST_CASE("adjoint pairing identity on random triples") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const double exps[] = {1.0, 1.5, 2.0, 3.0, NormSpec::inf};
        const NormSpec s = NormSpec::lp(n, exps[seed % 5]);
        const LinearOperator t = LinearOperator::make(random_matrix(n, seed), s);
        const LinearOperator ta = adjoint(t);

        std::mt19937_64 eng = make_engine(seed, 4);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        Vec v(n), f(n);
        for (int i = 0; i < n; ++i) {
            v[i] = u(eng);
            f[i] = u(eng);
        }
        const double lhs = pair(Functional{matvec(ta.matrix, f), s.conjugate()}, v);
        const double rhs = pair(Functional{f, s.conjugate()}, matvec(t.matrix, v));
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * (1.0 + std::fabs(rhs)));
    }
}

TEST_CASE("operator_norm pinned examples") {
    // example1 T1 on l1: column sums {1, 1/2}
    const LinearOperator t1 = LinearOperator::make(example1_t1(), NormSpec::l1(2));
    CHECK(t1.norm_bracket.lower == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t1.norm_bracket.upper == doctest::Approx(1.0).epsilon(1e-15));

    const LinearOperator rot = LinearOperator::make(rotation90(), NormSpec::l2(2));
    CHECK(rot.norm_bracket.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rot.norm_bracket.upper == doctest::Approx(1.0).epsilon(1e-12));

    Mat diag(2);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.25;
    for (double p : {1.0, 2.0, 3.0, NormSpec::inf}) {
        const LinearOperator d = LinearOperator::make(diag, NormSpec::lp(2, p));
        CHECK(d.norm_bracket.lower == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.norm_bracket.upper == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("operator_norm brackets versus closed forms and sampling") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const Mat m = random_matrix(n, seed);

        const LinearOperator t1 = LinearOperator::make(m, NormSpec::l1(n));
        CHECK(std::fabs(t1.norm_bracket.lower - oracle_l1_norm(m)) < 1e-12);
        CHECK(t1.norm_bracket.upper - t1.norm_bracket.lower <= 1e-10);

        const LinearOperator ti = LinearOperator::make(m, NormSpec::linf(n));
        CHECK(std::fabs(ti.norm_bracket.lower - oracle_linf_norm(m)) < 1e-12);
        CHECK(ti.norm_bracket.upper - ti.norm_bracket.lower <= 1e-10);

        const LinearOperator t2 = LinearOperator::make(m, NormSpec::l2(n));
        CHECK(std::fabs(t2.norm_bracket.lower - oracle_l2_norm(m)) < 1e-9);
        CHECK(t2.norm_bracket.upper - t2.norm_bracket.lower <= 1e-10);

        for (double p : {1.0, 2.0, NormSpec::inf}) {
            const LinearOperator t = LinearOperator::make(m, NormSpec::lp(n, p));
            const SphereMax sm = sphere_sample_max(m, t.space, 10000, seed);
            CHECK(sm.value <= t.norm_bracket.upper + 1e-12);
            CHECK(t.norm_bracket.lower >= sm.value - 1e-9);
        }

        const LinearOperator tp = LinearOperator::make(m, NormSpec::lp(n, 2.5));
        const SphereMax smp = sphere_sample_max(m, tp.space, 10000, seed);
        CHECK(smp.value <= tp.norm_bracket.upper + 1e-12);
        CHECK(tp.norm_bracket.lower <= tp.norm_bracket.upper + 1e-15);
        CHECK(tp.norm_bracket.lower >= smp.value - 1e-6);
    }
}

TEST_CASE("adjoint brackets agree with the originals (norm duality)") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 2 + static_cast<int>(seed % 6);
        const Mat m = random_matrix(n, seed);
        for (double p : {1.0, 2.0, NormSpec::inf}) {
            const LinearOperator t = LinearOperator::make(m, NormSpec::lp(n, p));
            const LinearOperator ta = adjoint(t);
            CHECK(std::fabs(t.norm_bracket.lower - ta.norm_bracket.lower) <= 1e-10);
        }
        // general exponent: the honest brackets must overlap
        const LinearOperator t = LinearOperator::make(m, NormSpec::lp(n, 3.0));
        const LinearOperator ta = adjoint(t);
        CHECK(t.norm_bracket.lower <= ta.norm_bracket.upper + 1e-12);
        CHECK(ta.norm_bracket.lower <= t.norm_bracket.upper + 1e-12);
    }
}

TEST_CASE("is_contraction verdicts") {
    const LinearOperator t1 = LinearOperator::make(example1_t1(), NormSpec::l1(2));
    CHECK(is_contraction(t1).kind == ContractionKind::yes);

    Mat two_id = Mat::identity(2);
    for (double& x : two_id.a) x *= 2.0;
    const LinearOperator big = LinearOperator::make(two_id, NormSpec::l2(2));
    const ContractionVerdict v = is_contraction(big);
    CHECK(v.kind == ContractionKind::no);
    REQUIRE(v.witness.has_value());
    const Vec& w = *v.witness;
    CHECK(std::fabs(norm(w, big.space) - 1.0) < 1e-12);
    CHECK(norm(matvec(big.matrix, w), big.space) > 1.0 + 1e-9);

    CHECK(is_contraction(LinearOperator::make(Mat::identity(2), NormSpec::l2(2))).kind ==
          ContractionKind::yes);
}

TEST_CASE("is_contraction admits an honest unknown on straddling brackets") {
    // Scaled 45-degree rotation on l3: the ascent lower bound sits below 1
    // while the interpolation upper bound stays above it.
    const double c = std::cos(0.25 * 3.14159265358979323846);
    Mat r(2, {c, -c, c, c});
    const LinearOperator probe = LinearOperator::make(r, NormSpec::lp(2, 3.0));
    Mat scaled = r;
    for (double& x : scaled.a) x *= 0.99 / probe.norm_bracket.lower;
    const LinearOperator t = LinearOperator::make(scaled, NormSpec::lp(2, 3.0));
    REQUIRE(t.norm_bracket.lower <= 1.0 + 1e-9);
    REQUIRE(t.norm_bracket.upper > 1.0 + 1e-9);
    CHECK(is_contraction(t).kind == ContractionKind::unknown);
}

TEST_CASE("products of contractions stay contractions") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const double exps[] = {1.0, 2.0, NormSpec::inf};
        const double p = exps[seed % 3];
        const int n = 3 + static_cast<int>(seed % 4);
        const LinearOperator a = random_contraction(n, p, seed * 2 + 1);
        const LinearOperator b = random_contraction(n, p, seed * 2 + 2);
        const LinearOperator ab = LinearOperator::make(matmul(a.matrix, b.matrix), a.space);
        CHECK(ab.norm_bracket.upper <= 1.0 + 1e-10);
    }
}

TEST_CASE("fixed_space pinned examples") {
    const LinearOperator t1 = LinearOperator::make(example1_t1(), NormSpec::l1(2));
    const Subspace f = fixed_space(t1);
    REQUIRE(f.dim() == 1);
    // span{e1}: the projector is diag(1, 0)
    const Mat p = f.projector(2);
    CHECK(std::fabs(p(0, 0) - 1.0) < 1e-12);
    CHECK(std::fabs(p(1, 1)) < 1e-12);
    CHECK(std::fabs(p(0, 1)) < 1e-12);

    CHECK(fixed_space(LinearOperator::make(Mat::identity(4), NormSpec::l2(4))).dim() == 4);
    CHECK(fixed_space(LinearOperator::make(rotation90(), NormSpec::l2(2))).dim() == 0);
}

TEST_CASE("fixed_space residual property") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 4);
        // build an operator fixing a known subspace: P + 0.5 (I - P)
        const LinearOperator probe = random_contraction(n, 2.0, seed);
        const Subspace any = fixed_space(probe);
        (void)any;
        Mat m(n);
        std::mt19937_64 eng = make_engine(seed, 6);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec dir(n);
        for (double& x : dir) x = gauss(eng);
        const double nn = norm2(dir);
        for (double& x : dir) x /= nn;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = 0.5 * ((i == j ? 1.0 : 0.0) + dir[i] * dir[j]);

        const LinearOperator t = LinearOperator::make(m, NormSpec::l2(n));
        const Subspace f = fixed_space(t);
        REQUIRE(f.dim() == 1);
        for (const Vec& v : f.basis)
            CHECK(norm2(vec_sub(matvec(t.matrix, v), v)) <= 1e-10 * norm2(v));
    }
}

TEST_CASE("common_fixed_space of the example1 pair is the e1 axis") {
    const NormSpec s = NormSpec::l1(2);
    std::vector<LinearOperator> ops;
    ops.push_back(LinearOperator::make(example1_t1(), s));
    ops.push_back(LinearOperator::make(example1_t2(), s));
    const Subspace y = common_fixed_space(ops);
    REQUIRE(y.dim() == 1);
    CHECK(std::fabs(std::fabs(y.basis[0][0]) - 1.0) < 1e-12);
    CHECK(std::fabs(y.basis[0][1]) < 1e-12);

    CHECK_THROWS_AS((void)common_fixed_space(std::span<const LinearOperator>{}),
                    std::invalid_argument);

    std::vector<LinearOperator> ids;
    ids.push_back(LinearOperator::make(Mat::identity(3), NormSpec::l2(3)));
    CHECK(common_fixed_space(ids).dim() == 3);
}
