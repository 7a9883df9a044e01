#include "stokesim/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stokesim {

namespace {
constexpr double k8pi_inv = 1.0 / (8.0 * std::numbers::pi);

void require_nonzero(const Vec3 &x) {
    if (x.x == 0.0 && x.y == 0.0 && x.z == 0.0)
        throw std::domain_error("stokeslet kernel evaluated at the origin");
}
} // namespace

Mat3 stokeslet(const Vec3 &x) {
    require_nonzero(x);
    const double r2 = x.norm2();
    const double rinv = 1.0 / std::sqrt(r2);
    const double rinv3 = rinv / r2;
    Mat3 g = outer(x, x) * (k8pi_inv * rinv3);
    const double d = k8pi_inv * rinv;
    g(0, 0) += d;
    g(1, 1) += d;
    g(2, 2) += d;
    return g;
}

Grad3 stokeslet_gradient(const Vec3 &x) {
    require_nonzero(x);
    const double r2 = x.norm2();
    const double rinv = 1.0 / std::sqrt(r2);
    const double rinv3 = rinv / r2;
    const double rinv5 = rinv3 / r2;
    const double v[3] = {x.x, x.y, x.z};
    Grad3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double s = -3.0 * v[i] * v[j] * v[k] * rinv5;
                if (i == j)
                    s -= v[k] * rinv3;
                if (i == k)
                    s += v[j] * rinv3;
                if (j == k)
                    s += v[i] * rinv3;
                g.t[i][j][k] = k8pi_inv * s;
            }
    return g;
}

Vec3 stokeslet_gradient_apply(const Vec3 &x, const Mat3 &T) {
    require_nonzero(x);
    const double r2 = x.norm2();
    const double rinv = 1.0 / std::sqrt(r2);
    const double rinv3 = rinv / r2;
    const double rinv5 = rinv3 / r2;
    // (d_k G_ij) T_jk = 1/(8 pi) [ (T'x - Tx + tr(T) x)/r^3 - 3 x (x.Tx)/r^5 ];
    // the trace part cancels between the Id and the x(x)x contributions.
    const Vec3 tx = T * x;
    const Vec3 ttx = T.transpose() * x;
    const double q = dot(x, tx);
    Vec3 v = (ttx - tx + x * T.trace()) * rinv3 - x * (3.0 * q * rinv5);
    return v * k8pi_inv;
}

} // namespace stokesim
