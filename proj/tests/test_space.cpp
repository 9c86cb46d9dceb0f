#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "randprod/rng.hpp"
#include "randprod/space.hpp"

using namespace randprod;

namespace {

const double kExponents[] = {1.0, 1.5, 2.0, 3.0, NormSpec::inf};

Vec random_vec(int dim, std::uint64_t seed, bool allow_zeros) {
    std::mt19937_64 eng = make_engine(seed, 3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::bernoulli_distribution zero(0.3);
    Vec v(dim);
    bool nonzero = false;
    for (double& x : v) {
        x = (allow_zeros && zero(eng)) ? 0.0 : u(eng);
        nonzero = nonzero || x != 0.0;
    }
    if (!nonzero) v[0] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("norm on pinned examples") {
    CHECK(norm({3.0, 4.0}, NormSpec::l2(2)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(norm({1.0, -2.0}, NormSpec::l1(2)) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(norm({1.0, -2.0}, NormSpec::linf(2)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(norm({0.0, 0.0}, NormSpec::lp(2, 3.0)) == 0.0);
}

TEST_CASE("norm input contract") {
    CHECK_THROWS_AS((void)norm({1.0}, NormSpec::l2(2)), std::invalid_argument);
    CHECK_THROWS_AS((void)norm({1.0, std::nan("")}, NormSpec::l2(2)), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::lp(2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(NormSpec::lp(0, 2.0), std::invalid_argument);
}

TEST_CASE("conjugate exponents") {
    CHECK(NormSpec::l1(2).conjugate() == NormSpec::inf);
    CHECK(NormSpec::linf(2).conjugate() == 1.0);
    CHECK(NormSpec::l2(2).conjugate() == 2.0);
    CHECK(NormSpec::lp(2, 3.0).conjugate() == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("pair on pinned examples") {
    CHECK(pair(Functional{{1.0, -1.0}, NormSpec::inf}, {1.0, -2.0}) ==
          doctest::Approx(3.0).epsilon(1e-15));
    CHECK(pair(Functional{{0.0, 0.0}, 2.0}, {5.0, -7.0}) == 0.0);
    CHECK(pair(Functional{{0.6, 0.8}, 2.0}, {3.0, 4.0}) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)pair(Functional{{1.0}, 2.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("norm properties: homogeneity and triangle inequality") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 6);
        const NormSpec s = NormSpec::lp(dim, kExponents[seed % 5]);
        const Vec a = random_vec(dim, seed * 2 + 1, false);
        const Vec b = random_vec(dim, seed * 2 + 2, false);

        Vec scaled(dim), sum(dim);
        for (int i = 0; i < dim; ++i) {
            scaled[i] = -1.7 * a[i];
            sum[i] = a[i] + b[i];
        }
        CHECK(std::fabs(norm(scaled, s) - 1.7 * norm(a, s)) < 1e-12 * (1.0 + norm(a, s)));
        CHECK(norm(sum, s) <= norm(a, s) + norm(b, s) + 1e-12);
    }
}

TEST_CASE("support_face singleton for smooth exponents") {
    const SupportFace face = support_face({3.0, 4.0}, NormSpec::l2(2));
    CHECK(face.kind == FaceKind::singleton);
    CHECK(face.dimension() == 0);
    CHECK(face.base.coords[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(face.base.coords[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(face_contains(face, Functional{{0.6, 0.8}, 2.0}, 1e-12));
}

TEST_CASE("support_face box face on l1") {
    // J(e1) in l1^2: first coordinate pinned to 1, second free in [-1, 1].
    // Oracle: coordinate enumeration over a grid of candidate functionals.
    const NormSpec s = NormSpec::l1(2);
    const Vec v = {1.0, 0.0};
    const SupportFace face = support_face(v, s);
    CHECK(face.kind == FaceKind::box);
    CHECK(face.dimension() == 1);
    CHECK(face.free_indices == std::vector<int>{1});
    CHECK(face.base.coords == Vec{1.0, 0.0});

    const std::vector<Functional> verts = face.vertices();
    REQUIRE(verts.size() == 2);

    int grid_members = 0;
    for (double f0 = -1.0; f0 <= 1.0 + 1e-9; f0 += 0.125) {
        for (double f1 = -1.0; f1 <= 1.0 + 1e-9; f1 += 0.125) {
            const Functional f{{f0, f1}, s.conjugate()};
            const bool defining = std::fabs(dual_norm(f, s) - 1.0) <= 1e-9 &&
                                  std::fabs(pair(f, v) - norm(v, s)) <= 1e-9;
            CHECK(face_contains(face, f, 1e-9) == defining);
            grid_members += defining;
        }
    }
    CHECK(grid_members == 17);  // the whole segment {(1, t)} on the 0.125 grid

    CHECK(face_contains(face, Functional{{1.0, 0.5}, s.conjugate()}, 1e-12));
    CHECK_FALSE(face_contains(face, Functional{{1.0, 2.0}, s.conjugate()}, 1e-12));
}

TEST_CASE("support_face simplex face on l_inf") {
    // J((2,2)) in linf^2: the segment {(t, 1-t) : t in [0,1]} in the l1 dual.
    // Oracle: sign enumeration reduces membership to f1 + f2 = 1, f >= 0.
    const NormSpec s = NormSpec::linf(2);
    const Vec v = {2.0, 2.0};
    const SupportFace face = support_face(v, s);
    CHECK(face.kind == FaceKind::simplex);
    CHECK(face.dimension() == 1);
    CHECK(face.support == std::vector<int>{0, 1});
    CHECK(face.base.coords == Vec{0.5, 0.5});

    for (double t = 0.0; t <= 1.0 + 1e-12; t += 0.2)
        CHECK(face_contains(face, Functional{{t, 1.0 - t}, 1.0}, 1e-12));
    CHECK_FALSE(face_contains(face, Functional{{0.7, 0.7}, 1.0}, 1e-9));
    CHECK_FALSE(face_contains(face, Functional{{1.2, -0.2}, 1.0}, 1e-9));

    const std::vector<Functional> verts = face.vertices();
    REQUIRE(verts.size() == 2);
    CHECK(verts[0].coords == Vec{1.0, 0.0});
    CHECK(verts[1].coords == Vec{0.0, 1.0});
}

TEST_CASE("support_face rejects the zero vector") {
    CHECK_THROWS_AS((void)support_face({0.0, 0.0}, NormSpec::l2(2)), std::domain_error);
}

TEST_CASE("duality properties across random vectors and exponents") {
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        const int dim = 2 + static_cast<int>(seed % 7);
        const NormSpec s = NormSpec::lp(dim, kExponents[seed % 5]);
        Vec v = random_vec(dim, seed, s.p == 1.0);
        if (s.is_inf() && seed % 2 == 0 && dim >= 2) v[1] = -v[0];  // exact tie
        if (norm(v, s) == 0.0) v[0] = 1.0;

        const SupportFace face = support_face(v, s);
        std::vector<Functional> members = face.vertices();
        members.push_back(face.base);
        if (members.size() >= 2) {
            Functional mid = members[0];
            for (int i = 0; i < dim; ++i)
                mid.coords[i] = 0.5 * (members[0].coords[i] + members[1].coords[i]);
            members.push_back(mid);
        }

        for (const Functional& f : members) {
            CHECK(std::fabs(dual_norm(f, s) - 1.0) <= 1e-12);
            CHECK(std::fabs(pair(f, v) - norm(v, s)) <= 1e-12 * (1.0 + norm(v, s)));
            CHECK(std::fabs(pair(f, v)) <= dual_norm(f, s) * norm(v, s) + 1e-12);
            CHECK(face_contains(face, f, 1e-10));
        }

        if (s.p > 1.0 && !s.is_inf()) {
            CHECK(face.kind == FaceKind::singleton);
        } else {
            bool positive_dim_expected = false;
            if (s.p == 1.0)
                for (double x : v) positive_dim_expected |= x == 0.0;
            if (s.is_inf()) {
                int ties = 0;
                double m = norm(v, s);
                for (double x : v) ties += std::fabs(x) == m;
                positive_dim_expected = ties > 1;
            }
            CHECK((face.dimension() > 0) == positive_dim_expected);
        }
    }
}
