#pragma once

#include "stokesim/geometry.hpp"

namespace stokesim {

/// Single-particle geometry, selecting the closed-form coefficient family.
struct ShapeModel {
    enum class Kind { Sphere, SlenderFiber };

    Kind kind = Kind::Sphere;
    /// Stresslet shape factor of the slender model (> 0).
    double alpha1 = 1.0;
    /// Rotation shape factor of the slender model; plays the role of the
    /// Bretherton parameter in shear (0 < alpha2 <= 1).
    double alpha2 = 1.0;

    static ShapeModel sphere() { return {Kind::Sphere, 0.0, 0.0}; }
    static ShapeModel slender_fiber(double alpha1, double alpha2);

    void validate() const;
};

/// Self-propulsion constants.  beta_f > 0 is a puller, beta_f < 0 a pusher.
struct ActivityModel {
    double kappa0 = 0.0;  ///< propulsion intensity, in [0, 1]
    double beta_f = 0.0;  ///< active stresslet strength
    double alpha_f = 0.0; ///< swim speed factor, >= 0

    static ActivityModel passive() { return {}; }

    void validate() const;
};

/// Stresslet response to a trace-free symmetric strain rate E: for a sphere
/// the classical Einstein factor 5/2, for a slender fiber the axis-aligned
/// response alpha1 (E : r(x)°r) r(x)°r.  Output is symmetric trace-free.
Mat3 stresslet_response(const ShapeModel &shape, const Vec3 &r, const Mat3 &strain_rate);

/// Rate of change of the axis direction in a local velocity gradient H:
/// rdot = (Omega°(r) H) r.  Sphere: skew(H) r (half the vorticity); slender
/// fiber: (Id - r(x)r)(alpha2 sym(H) + skew(H)) r.  Always orthogonal to r.
Vec3 orientation_velocity(const ShapeModel &shape, const Vec3 &r, const Mat3 &velocity_gradient);

/// Active stresslet beta_f (r (x) r - Id/3) of a swimmer along r.
Mat3 active_stresslet(const ActivityModel &activity, const Vec3 &r);

/// Self-propulsion drag velocity alpha_f r.
Vec3 swim_velocity(const ActivityModel &activity, const Vec3 &r);

} // namespace stokesim
