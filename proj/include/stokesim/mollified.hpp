#pragma once

#include <cmath>

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Smoothed Stokes kernels used by the sample-sum convolutions of the
/// kinetic solver: the substitution |x| -> sqrt(|x|^2 + eta^2) applied to
/// the Stokeslet and its derivatives.  Smooth everywhere, converge to the
/// singular kernels pointwise as eta -> 0.

Mat3 mollified_stokeslet(const Vec3 &x, double eta);
Grad3 mollified_stokeslet_gradient(const Vec3 &x, double eta);

/// v_i = (d_k G_eta,ij)(x) T_jk for symmetric trace-free T.
Vec3 mollified_stresslet_velocity(const Vec3 &x, double eta, const Mat3 &T);

/// Spatial gradient of the above (the smoothed second derivative of the
/// Stokeslet contracted with T); needed for grad u of the effective field.
Mat3 mollified_stresslet_velocity_gradient(const Vec3 &x, double eta, const Mat3 &T);

/// Fused per-source accumulation of the effective field and its gradient:
///   u[0..2]    += G_eta(d) a + grad G_eta(d) : B
///   grad[0..8] += d/dx of the same (row-major, grad[3i+k] = d_k u_i)
/// with d = x - source, a the monopole vector and B a symmetric trace-free
/// stresslet given by its six independent entries.
inline void accumulate_mollified(double dx, double dy, double dz, double eta2, double ax, double ay, double az,
                                 double bxx, double bxy, double bxz, double byy, double byz, double bzz, bool with_grad,
                                 double *u, double *grad) {
    constexpr double c8 = 1.0 / (8.0 * 3.14159265358979323846);
    const double r2 = dx * dx + dy * dy + dz * dz;
    const double s2 = r2 + eta2;
    const double s1 = c8 / std::sqrt(s2);
    const double s3 = s1 / s2;
    const double s5 = s3 / s2;
    const double s7 = s5 / s2;

    const double da = dx * ax + dy * ay + dz * az;
    const double bdx = bxx * dx + bxy * dy + bxz * dz;
    const double bdy = bxy * dx + byy * dy + byz * dz;
    const double bdz = bxz * dx + byz * dy + bzz * dz;
    const double q = dx * bdx + dy * bdy + dz * bdz;

    const double radial = da * s3 - 3.0 * q * s5;
    u[0] += ax * s1 + dx * radial;
    u[1] += ay * s1 + dy * radial;
    u[2] += az * s1 + dz * radial;

    if (!with_grad)
        return;

    // monopole: (d_i a_k - a_i d_k) s3 + delta_ik da s3 - 3 da d_i d_k s5
    // stresslet: -3 q delta_ik s5 - 6 d_i (Bd)_k s5 + 15 q d_i d_k s7
    const double coef_dd = -3.0 * da * s5 + 15.0 * q * s7;
    const double m6s5 = -6.0 * s5;
    const double d[3] = {dx, dy, dz};
    const double a[3] = {ax, ay, az};
    const double bd[3] = {bdx, bdy, bdz};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            grad[3 * i + k] += (d[i] * a[k] - a[i] * d[k]) * s3 + coef_dd * d[i] * d[k] + m6s5 * d[i] * bd[k];
    grad[0] += radial;
    grad[4] += radial;
    grad[8] += radial;
}

} // namespace stokesim
