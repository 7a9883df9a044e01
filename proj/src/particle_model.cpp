#include "stokesim/particle_model.hpp"

#include <cmath>
#include <string>

#include "stokesim/errors.hpp"

namespace stokesim {

namespace {
constexpr double unit_tol = 1e-9;

void require_unit(const Vec3 &r) {
    if (std::abs(r.norm() - 1.0) > unit_tol)
        throw ValidationError("orientation must be a unit vector, |r| = " + std::to_string(r.norm()));
}
} // namespace

ShapeModel ShapeModel::slender_fiber(double alpha1, double alpha2) {
    ShapeModel m{Kind::SlenderFiber, alpha1, alpha2};
    m.validate();
    return m;
}

void ShapeModel::validate() const {
    if (kind == Kind::SlenderFiber) {
        if (!(alpha1 > 0.0))
            throw ValidationError("slender fiber requires alpha1 > 0");
        if (!(alpha2 > 0.0 && alpha2 <= 1.0))
            throw ValidationError("slender fiber requires 0 < alpha2 <= 1");
    }
}

void ActivityModel::validate() const {
    if (!(kappa0 >= 0.0 && kappa0 <= 1.0))
        throw ValidationError("activity requires kappa0 in [0, 1]");
    if (!(alpha_f >= 0.0))
        throw ValidationError("activity requires alpha_f >= 0");
    if (!std::isfinite(beta_f))
        throw ValidationError("activity requires finite beta_f");
}

Mat3 stresslet_response(const ShapeModel &shape, const Vec3 &r, const Mat3 &strain_rate) {
    require_unit(r);
    if (std::abs(strain_rate.trace()) > unit_tol)
        throw ValidationError("strain rate must be trace-free");
    if ((strain_rate - strain_rate.transpose()).frobenius_norm() > unit_tol)
        throw ValidationError("strain rate must be symmetric");

    switch (shape.kind) {
    case ShapeModel::Kind::Sphere:
        return strain_rate * 2.5;
    case ShapeModel::Kind::SlenderFiber: {
        const Mat3 axis = traceless_outer(r, r);
        const double projection = Mat3::double_dot(strain_rate, axis);
        return axis * (shape.alpha1 * projection);
    }
    }
    return Mat3::zero();
}

Vec3 orientation_velocity(const ShapeModel &shape, const Vec3 &r, const Mat3 &velocity_gradient) {
    require_unit(r);
    switch (shape.kind) {
    case ShapeModel::Kind::Sphere:
        return velocity_gradient.skew_part() * r;
    case ShapeModel::Kind::SlenderFiber: {
        const Vec3 v = velocity_gradient.symmetric_part() * r * shape.alpha2 + velocity_gradient.skew_part() * r;
        return v - r * dot(r, v);
    }
    }
    return Vec3{};
}

Mat3 active_stresslet(const ActivityModel &activity, const Vec3 &r) {
    require_unit(r);
    return traceless_outer(r, r) * activity.beta_f;
}

Vec3 swim_velocity(const ActivityModel &activity, const Vec3 &r) {
    require_unit(r);
    return r * activity.alpha_f;
}

} // namespace stokesim
