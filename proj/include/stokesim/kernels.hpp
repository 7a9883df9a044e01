#pragma once

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Green's function of the steady Stokes equations in 3d (Oseen tensor),
///   G(x) = 1/(8 pi |x|) (Id + xhat (x) xhat).
/// Symmetric, even, divergence-free, homogeneous of degree -1.
/// Throws std::domain_error at x = 0.
Mat3 stokeslet(const Vec3 &x);

/// Full first derivative, t[i][j][k] = d_k G_ij(x). Homogeneous of degree -2.
Grad3 stokeslet_gradient(const Vec3 &x);

/// v_i = (d_k G_ij)(x) T_jk: the kernel of G * div(T) after one integration
/// by parts.  The trace part of T is annihilated identically, so only the
/// deviatoric part of T contributes.
Vec3 stokeslet_gradient_apply(const Vec3 &x, const Mat3 &T);

} // namespace stokesim
