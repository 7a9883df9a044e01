#include <doctest.h>

#include "stokesim/geometry.hpp"
#include "stokesim/rng.hpp"

using namespace stokesim;

TEST_CASE("traceless symmetric outer product") {
    const Vec3 e1{1, 0, 0}, e2{0, 1, 0};

    SUBCASE("aligned vectors") {
        const Mat3 m = traceless_sym_outer(e1, e1);
        CHECK(m(0, 0) == doctest::Approx(2.0 / 3.0));
        CHECK(m(1, 1) == doctest::Approx(-1.0 / 3.0));
        CHECK(m(2, 2) == doctest::Approx(-1.0 / 3.0));
        CHECK(m(0, 1) == 0.0);
    }
    SUBCASE("orthogonal vectors") {
        const Mat3 m = traceless_sym_outer(e1, e2);
        CHECK(m(0, 1) == 0.5);
        CHECK(m(1, 0) == 0.5);
        CHECK(m.trace() == 0.0);
        CHECK(m(0, 0) == 0.0);
    }
    SUBCASE("trace removed exactly by construction") {
        const Mat3 m = traceless_sym_outer(Vec3{1, 1, 0}, Vec3{1, -1, 0});
        CHECK(m.trace() == 0.0);
    }
    SUBCASE("always symmetric and trace-free on random input") {
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            const Vec3 a{rng.normal(), rng.normal(), rng.normal()};
            const Vec3 b{rng.normal(), rng.normal(), rng.normal()};
            const Mat3 m = traceless_sym_outer(a, b);
            CHECK((m - m.transpose()).frobenius_norm() == 0.0);
            CHECK(std::abs(m.trace()) < 1e-14 * (1.0 + m.frobenius_norm()));
        }
    }
}

TEST_CASE("traceless outer and cross matrix") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const Vec3 a{rng.normal(), rng.normal(), rng.normal()};
        const Vec3 b{rng.normal(), rng.normal(), rng.normal()};
        CHECK(std::abs(traceless_outer(a, b).trace()) < 1e-14 * (1.0 + std::abs(dot(a, b))));
        const Mat3 c = cross_matrix(a, b);
        CHECK((c + c.transpose()).frobenius_norm() == 0.0);
        CHECK(c(0, 1) == a.x * b.y - a.y * b.x);
    }
}

TEST_CASE("matrix decompositions") {
    Rng rng(3);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = rng.normal();
    CHECK((m.symmetric_part() + m.skew_part() - m).frobenius_norm() < 1e-15);
    CHECK(std::abs(m.deviatoric().trace()) < 1e-15);
    CHECK(std::abs(m.deviatoric_symmetric().trace()) < 1e-15);
    CHECK((m.deviatoric_symmetric() - m.deviatoric_symmetric().transpose()).frobenius_norm() == 0.0);
    CHECK(Mat3::double_dot(m, Mat3::identity()) == doctest::Approx(m.trace()));
}

TEST_CASE("rank-3 contraction conventions") {
    Rng rng(5);
    Grad3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                g.t[i][j][k] = rng.normal();
    Mat3 T;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            T(i, j) = rng.normal();
    const Vec3 f{rng.normal(), rng.normal(), rng.normal()};

    // v_i = t_ijk T_jk against explicit sums
    const Vec3 v = g.contract(T);
    double expect0 = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            expect0 += g.t[0][j][k] * T(j, k);
    CHECK(v.x == doctest::Approx(expect0).epsilon(1e-14));

    // M_ik = t_ijk f_j
    const Mat3 M = g.contract(f);
    double expect12 = 0.0;
    for (int j = 0; j < 3; ++j)
        expect12 += g.t[1][j][2] * (j == 0 ? f.x : j == 1 ? f.y : f.z);
    CHECK(M(1, 2) == doctest::Approx(expect12).epsilon(1e-14));
}
