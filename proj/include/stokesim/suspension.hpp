#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <vector>

#include "stokesim/background_flow.hpp"
#include "stokesim/geometry.hpp"
#include "stokesim/particle_model.hpp"

namespace stokesim {

/// Particle radius scale from the volume fraction: eps = (lambda/(N |I°|))^(1/3).
double derive_epsilon(int n_particles, double volume_fraction, double unit_volume);

constexpr double unit_ball_volume = 4.18879020478639098462; // 4 pi / 3

struct SuspensionParams {
    int n_particles = 1;
    double volume_fraction = 0.0; ///< lambda = N eps^3 |I°|
    double particle_scale = 0.0;  ///< eps, always derived
    Vec3 buoyancy;                ///< e, |e| <= 1
    ShapeModel shape = ShapeModel::sphere();
    ActivityModel activity;
    double unit_volume = unit_ball_volume; ///< |I°| of the reference particle

    static SuspensionParams make(int n_particles, double volume_fraction, const Vec3 &buoyancy,
                                 const ShapeModel &shape, const ActivityModel &activity,
                                 double unit_volume = unit_ball_volume);

    void validate() const;
};

/// Truncation order of the dilute velocity expansion.
enum class ExpansionOrder {
    ZeroOrder, ///< particles passively advected by the ambient flow
    FirstOrder ///< pairwise O(lambda) corrections: drag, stresslets, swimming
};

struct SuspensionState {
    std::vector<Vec3> positions;
    std::vector<Vec3> orientations; ///< unit vectors
    double time = 0.0;

    int size() const { return static_cast<int>(positions.size()); }
    void validate() const;
};

struct ParticleVelocities {
    std::vector<Vec3> velocity;
    std::vector<Vec3> orientation_rate;
};

/// Dilute-expansion particle velocities.  FirstOrder adds to the ambient
/// advection the pairwise Stokeslet drag (buoyancy against forcing), the
/// pairwise stresslet disturbances (passive + active), and the self swim
/// term; the orientation law is first-order at both truncations.
/// Throws SeparationGuardError when d_min < 4 eps.
ParticleVelocities compute_velocities(const SuspensionState &state, const SuspensionParams &params,
                                      const BackgroundFlow &flow, ExpansionOrder order);

/// One classical RK4 step of dt on positions and orientations; orientations
/// are renormalized after the full step.
SuspensionState step(const SuspensionState &state, const SuspensionParams &params, const BackgroundFlow &flow,
                     ExpansionOrder order, double dt);

struct Diagnostics {
    double min_separation = std::numeric_limits<double>::infinity();
    /// alpha[s] = max_n (1/N) sum_{m != n} |X^n - X^m|^(s-3), s = 0, 1, 2.
    std::array<double, 3> interaction_moments{};
    double max_speed = 0.0;
    double max_rotation_rate = 0.0;
};

/// max_n (1/N) sum_{m != n} |X^n - X^m|^(sigma - 3) for sigma in [0, 3];
/// 0 for a single particle.
double interaction_moment(const SuspensionState &state, double sigma);

/// Geometric diagnostics; the single-particle convention is d_min = +inf,
/// alpha = 0 so that guards trivially pass.
Diagnostics diagnostics(const SuspensionState &state);
/// Also records the velocity maxima.
Diagnostics diagnostics(const SuspensionState &state, const ParticleVelocities &velocities);

/// Snapshot rows "n,x,y,z,rx,ry,rz".
void write_state_csv(std::ostream &out, const SuspensionState &state);
SuspensionState read_state_csv(std::istream &in);

} // namespace stokesim
