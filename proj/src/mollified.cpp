#include "stokesim/mollified.hpp"

#include <numbers>

namespace stokesim {

namespace {
constexpr double k8pi_inv = 1.0 / (8.0 * std::numbers::pi);
}

Mat3 mollified_stokeslet(const Vec3 &x, double eta) {
    const double s2 = x.norm2() + eta * eta;
    const double sinv = 1.0 / std::sqrt(s2);
    const double sinv3 = sinv / s2;
    Mat3 g = outer(x, x) * (k8pi_inv * sinv3);
    const double d = k8pi_inv * sinv;
    g(0, 0) += d;
    g(1, 1) += d;
    g(2, 2) += d;
    return g;
}

Grad3 mollified_stokeslet_gradient(const Vec3 &x, double eta) {
    const double s2 = x.norm2() + eta * eta;
    const double sinv = 1.0 / std::sqrt(s2);
    const double sinv3 = sinv / s2;
    const double sinv5 = sinv3 / s2;
    const double v[3] = {x.x, x.y, x.z};
    Grad3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = -3.0 * v[i] * v[j] * v[k] * sinv5;
                if (i == j)
                    s -= v[k] * sinv3;
                if (i == k)
                    s += v[j] * sinv3;
                if (j == k)
                    s += v[i] * sinv3;
                g.t[i][j][k] = k8pi_inv * s;
            }
    return g;
}

Vec3 mollified_stresslet_velocity(const Vec3 &x, double eta, const Mat3 &T) {
    double u[3] = {};
    accumulate_mollified(x.x, x.y, x.z, eta * eta, 0.0, 0.0, 0.0, T(0, 0), T(0, 1), T(0, 2), T(1, 1), T(1, 2), T(2, 2),
                         false, u, nullptr);
    return {u[0], u[1], u[2]};
}

Mat3 mollified_stresslet_velocity_gradient(const Vec3 &x, double eta, const Mat3 &T) {
    double u[3] = {};
    double g[9] = {};
    accumulate_mollified(x.x, x.y, x.z, eta * eta, 0.0, 0.0, 0.0, T(0, 0), T(0, 1), T(0, 2), T(1, 1), T(1, 2), T(2, 2),
                         true, u, g);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            m(i, k) = g[3 * i + k];
    return m;
}

} // namespace stokesim
