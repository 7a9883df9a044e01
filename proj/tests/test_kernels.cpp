#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stokesim/geometry.hpp"
#include "stokesim/kernels.hpp"
#include "stokesim/rng.hpp"

using namespace stokesim;

namespace {
Vec3 random_point(Rng &rng) {
    Vec3 x{rng.normal(), rng.normal(), rng.normal()};
    while (x.norm() < 0.1)
        x = Vec3{rng.normal(), rng.normal(), rng.normal()};
    return x;
}
} // namespace

TEST_CASE("stokeslet closed form on the axis") {
    const Mat3 g = stokeslet(Vec3{1, 0, 0});
    CHECK(g(0, 0) == doctest::Approx(1.0 / (4.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(g(1, 1) == doctest::Approx(1.0 / (8.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(g(2, 2) == doctest::Approx(1.0 / (8.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(g(0, 0) == doctest::Approx(0.0795775).epsilon(1e-5));
    CHECK(g(0, 1) == 0.0);

    // homogeneity of degree -1: exact at a power-of-two rescaling
    const Mat3 g2 = stokeslet(Vec3{2, 0, 0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(g2(i, j) == 0.5 * g(i, j));

    // evenness
    const Mat3 gp = stokeslet(Vec3{0, 1, 0});
    const Mat3 gm = stokeslet(Vec3{0, -1, 0});
    CHECK((gp - gm).frobenius_norm() == 0.0);
}

TEST_CASE("stokeslet throws at the origin") {
    CHECK_THROWS_AS(stokeslet(Vec3{}), std::domain_error);
    CHECK_THROWS_AS(stokeslet_gradient(Vec3{}), std::domain_error);
    CHECK_THROWS_AS(stokeslet_gradient_apply(Vec3{}, Mat3::identity()), std::domain_error);
}

TEST_CASE("stokeslet symmetry, positivity, homogeneity on random points") {
    Rng rng(101);
    for (int i = 0; i < 200; ++i) {
        const Vec3 x = random_point(rng);
        const Mat3 g = stokeslet(x);
        CHECK((g - g.transpose()).frobenius_norm() == 0.0);
        CHECK((stokeslet(-x) - g).frobenius_norm() == 0.0);
        const Vec3 v{rng.normal(), rng.normal(), rng.normal()};
        CHECK(dot(v, g * v) >= 0.0);
        const double s = 1.0 + 3.0 * rng.uniform();
        const Mat3 gs = stokeslet(x * s);
        CHECK((gs - g * (1.0 / s)).frobenius_norm() < 1e-15 / x.norm());
        const Grad3 dgs = stokeslet_gradient(x * s);
        const Grad3 dg = stokeslet_gradient(x);
        CHECK((dgs - dg * (1.0 / (s * s))).frobenius_norm() < 1e-13 / x.norm2());
    }
}

TEST_CASE("stokeslet decay bounds with explicit constants") {
    Rng rng(55);
    const double bound = std::sqrt(3.0) / (4.0 * std::numbers::pi);
    for (int i = 0; i < 500; ++i) {
        const Vec3 x = random_point(rng);
        CHECK(stokeslet(x).frobenius_norm() * x.norm() <= bound);
        CHECK(stokeslet_gradient(x).frobenius_norm() * x.norm2() <= bound);
    }
}

TEST_CASE("stokeslet columns are divergence-free (finite differences)") {
    Rng rng(202);
    const double h = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x = random_point(rng);
        for (int j = 0; j < 3; ++j) {
            double div = 0.0;
            // d_i G_ij by central differences
            div += (stokeslet(x + Vec3{h, 0, 0})(0, j) - stokeslet(x - Vec3{h, 0, 0})(0, j)) / (2 * h);
            div += (stokeslet(x + Vec3{0, h, 0})(1, j) - stokeslet(x - Vec3{0, h, 0})(1, j)) / (2 * h);
            div += (stokeslet(x + Vec3{0, 0, h})(2, j) - stokeslet(x - Vec3{0, 0, h})(2, j)) / (2 * h);
            const double scale = stokeslet(x).frobenius_norm() / x.norm();
            CHECK(std::abs(div) < 1e-6 * scale * x.norm2());
        }
    }
}

TEST_CASE("stokeslet gradient matches finite differences") {
    Rng rng(303);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x = random_point(rng);
        const Grad3 g = stokeslet_gradient(x);
        for (int k = 0; k < 3; ++k) {
            const Vec3 dk = k == 0 ? Vec3{h, 0, 0} : k == 1 ? Vec3{0, h, 0} : Vec3{0, 0, h};
            const Mat3 fd = (stokeslet(x + dk) - stokeslet(x - dk)) * (1.0 / (2 * h));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(g.t[i][j][k] == doctest::Approx(fd(i, j)).epsilon(1e-6));
        }
    }
}

TEST_CASE("gradient contraction: trace annihilation and homogeneity") {
    SUBCASE("pure trace input gives the zero vector") {
        const Vec3 v = stokeslet_gradient_apply(Vec3{1, 0, 0}, Mat3::identity() * 3.7);
        CHECK(v.norm() == 0.0);
    }
    SUBCASE("trace part of a general input is annihilated") {
        Rng rng(17);
        for (int i = 0; i < 100; ++i) {
            const Vec3 x = random_point(rng);
            Mat3 t;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    t(a, b) = rng.normal();
            const Vec3 full = stokeslet_gradient_apply(x, t);
            const Vec3 dev = stokeslet_gradient_apply(x, t.deviatoric());
            CHECK((full - dev).norm() < 1e-13 * (1.0 + dev.norm()));
        }
    }
    SUBCASE("degree -2 homogeneity, exact at doubling") {
        const Mat3 t = traceless_sym_outer(Vec3{1, 0, 0}, Vec3{1, 0, 0});
        const Vec3 v1 = stokeslet_gradient_apply(Vec3{1, 0, 0}, t);
        const Vec3 v2 = stokeslet_gradient_apply(Vec3{2, 0, 0}, t);
        CHECK(v2.x == 0.25 * v1.x);
        CHECK(v2.y == 0.25 * v1.y);
        CHECK(v2.z == 0.25 * v1.z);
    }
    SUBCASE("finite-difference oracle at x = e1, T = e1 (x)s° e1") {
        const Vec3 x{1, 0, 0};
        const Mat3 t = traceless_sym_outer(Vec3{1, 0, 0}, Vec3{1, 0, 0});
        const double h = 1e-5;
        Vec3 fd{};
        for (int k = 0; k < 3; ++k) {
            const Vec3 dk = k == 0 ? Vec3{h, 0, 0} : k == 1 ? Vec3{0, h, 0} : Vec3{0, 0, h};
            const Mat3 diff = (stokeslet(x + dk) - stokeslet(x - dk)) * (1.0 / (2 * h));
            // accumulate (d_k G_ij) T_jk
            for (int i = 0; i < 3; ++i) {
                const double add = diff(i, 0) * t(0, k) + diff(i, 1) * t(1, k) + diff(i, 2) * t(2, k);
                if (i == 0)
                    fd.x += add;
                else if (i == 1)
                    fd.y += add;
                else
                    fd.z += add;
            }
        }
        const Vec3 v = stokeslet_gradient_apply(x, t);
        CHECK((v - fd).norm() < 1e-6 * v.norm());
        // closed-form value: -3/(8 pi) x (x.Tx) = -1/(4 pi) e1
        CHECK(v.x == doctest::Approx(-1.0 / (4.0 * std::numbers::pi)).epsilon(1e-14));
    }
    SUBCASE("matches the full rank-3 tensor contraction") {
        Rng rng(23);
        for (int i = 0; i < 50; ++i) {
            const Vec3 x = random_point(rng);
            Mat3 t;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    t(a, b) = rng.normal();
            const Vec3 direct = stokeslet_gradient_apply(x, t);
            const Vec3 tensor = stokeslet_gradient(x).contract(t);
            CHECK((direct - tensor).norm() < 1e-13 * (1.0 + direct.norm()));
        }
    }
}
