#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "randprod/linalg.hpp"
#include "randprod/rng.hpp"

using namespace randprod;

namespace {

Mat random_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 eng = make_engine(seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double v = gauss(eng);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

Mat random_general(int n, std::uint64_t seed) {
    std::mt19937_64 eng = make_engine(seed, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat m(n);
    for (double& x : m.a) x = gauss(eng);
    return m;
}

}  // namespace

TEST_CASE("matvec and matmul basics") {
    Mat m(2, {1.0, 2.0, 3.0, 4.0});
    const Vec v = matvec(m, {1.0, 1.0});
    CHECK(v == Vec{3.0, 7.0});

    const Mat mm = matmul(m, Mat::identity(2));
    CHECK(mm == m);

    const Mat t = transpose(m);
    CHECK(t(0, 1) == 3.0);
    CHECK(t(1, 0) == 2.0);

    CHECK_THROWS_AS((void)matvec(m, Vec{1.0}), std::invalid_argument);
}

TEST_CASE("jacobi_eigh diagonalizes a known matrix") {
    // A = Q diag(5, 2) Q^T for a rotation Q
    const double c = std::cos(0.3), s = std::sin(0.3);
    Mat q(2, {c, -s, s, c});
    Mat d(2, {5.0, 0.0, 0.0, 2.0});
    const Mat a = matmul(q, matmul(d, transpose(q)));

    const EigenSym e = jacobi_eigh(a);
    CHECK(e.values[0] == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-13));

    for (int j = 0; j < 2; ++j) {
        const Vec v = eig_column(e, j);
        const Vec av = matvec(a, v);
        CHECK(norm2(vec_sub(av, vec_scale(e.values[j], v))) < 1e-12);
    }
}

TEST_CASE("jacobi_eigh invariants on random symmetric matrices") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const Mat a = random_symmetric(n, seed);
        const EigenSym e = jacobi_eigh(a);

        double trace = 0.0, eigsum = 0.0, sq = 0.0, eigsq = 0.0;
        for (int i = 0; i < n; ++i) trace += a(i, i);
        for (double v : e.values) {
            eigsum += v;
            eigsq += v * v;
        }
        for (double x : a.a) sq += x * x;
        CHECK(std::fabs(trace - eigsum) < 1e-10 * (1.0 + std::fabs(trace)));
        CHECK(std::fabs(sq - eigsq) < 1e-9 * (1.0 + sq));

        for (int i = 0; i < n; ++i) {
            const Vec vi = eig_column(e, i);
            CHECK(std::fabs(norm2(vi) - 1.0) < 1e-12);
            const Vec avi = matvec(a, vi);
            CHECK(norm2(vec_sub(avi, vec_scale(e.values[i], vi))) < 1e-10);
            for (int j = i + 1; j < n; ++j)
                CHECK(std::fabs(dot(vi, eig_column(e, j))) < 1e-11);
        }
        for (int i = 0; i + 1 < n; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
}

TEST_CASE("shifted_psd separates eigenvalue bounds") {
    const Mat a = random_symmetric(5, 77);
    const EigenSym e = jacobi_eigh(a);
    const double lam_max = e.values.front();
    CHECK(shifted_psd(a, lam_max + 1e-9));
    CHECK_FALSE(shifted_psd(a, lam_max - 1e-6));

    // exactly singular PSD matrix
    Mat g = gram(Mat(3, {1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 0.0}));
    CHECK(shifted_psd(g, sym_eig_upper_bound(g)));
    const EigenSym ge = jacobi_eigh(g);
    CHECK(ge.values.back() < 1e-12);
}

TEST_CASE("gram_schmidt orthonormalizes and drops dependents") {
    std::vector<Vec> vs = {{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}, {0.0, 1.0, 1.0}};
    const std::vector<Vec> basis = gram_schmidt(vs);
    REQUIRE(basis.size() == 2);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        CHECK(std::fabs(norm2(basis[i]) - 1.0) < 1e-12);
        for (std::size_t j = i + 1; j < basis.size(); ++j)
            CHECK(std::fabs(dot(basis[i], basis[j])) < 1e-12);
    }
}

TEST_CASE("norm bounds agree with direct sums") {
    const Mat m = random_general(6, 5);
    double col = 0.0;
    for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int i = 0; i < 6; ++i) s += std::fabs(m(i, j));
        col = std::max(col, s);
    }
    CHECK(max_abs_col_sum(m) == doctest::Approx(col).epsilon(1e-15));
    CHECK(max_abs_row_sum(transpose(m)) == doctest::Approx(col).epsilon(1e-15));
}
