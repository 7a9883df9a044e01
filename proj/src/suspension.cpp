#include "stokesim/suspension.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stokesim/errors.hpp"
#include "stokesim/kernels.hpp"
#include "stokesim/parallel.hpp"

namespace stokesim {

double derive_epsilon(int n_particles, double volume_fraction, double unit_volume) {
    if (n_particles < 1)
        throw ValidationError("particle count must be >= 1");
    if (!(volume_fraction > 0.0))
        throw ValidationError("volume fraction must be > 0");
    if (!(unit_volume > 0.0))
        throw ValidationError("unit particle volume must be > 0");
    return std::cbrt(volume_fraction / (n_particles * unit_volume));
}

SuspensionParams SuspensionParams::make(int n_particles, double volume_fraction, const Vec3 &buoyancy,
                                        const ShapeModel &shape, const ActivityModel &activity, double unit_volume) {
    SuspensionParams p;
    p.n_particles = n_particles;
    p.volume_fraction = volume_fraction;
    // lambda = 0 is the point-particle limit (eps = 0, guard vacuous)
    p.particle_scale = volume_fraction == 0.0 ? 0.0 : derive_epsilon(n_particles, volume_fraction, unit_volume);
    p.buoyancy = buoyancy;
    p.shape = shape;
    p.activity = activity;
    p.unit_volume = unit_volume;
    p.validate();
    return p;
}

void SuspensionParams::validate() const {
    if (n_particles < 1)
        throw ValidationError("particle count must be >= 1");
    if (!(volume_fraction >= 0.0))
        throw ValidationError("volume fraction must be >= 0");
    if (buoyancy.norm() > 1.0 + 1e-12)
        throw ValidationError("buoyancy direction must satisfy |e| <= 1");
    const double expected = n_particles * unit_volume * particle_scale * particle_scale * particle_scale;
    if (std::abs(expected - volume_fraction) > 1e-9 * volume_fraction)
        throw ValidationError("inconsistent params: lambda != N eps^3 |I°|");
    shape.validate();
    activity.validate();
}

void SuspensionState::validate() const {
    if (positions.size() != orientations.size())
        throw ValidationError("state position/orientation counts differ");
    for (const auto &r : orientations)
        if (std::abs(r.norm() - 1.0) > 1e-9)
            throw ValidationError("state orientations must be unit vectors");
}

namespace {

double min_separation(const std::vector<Vec3> &x) {
    double d2 = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < x.size(); ++n)
        for (std::size_t m = n + 1; m < x.size(); ++m)
            d2 = std::min(d2, (x[n] - x[m]).norm2());
    return std::sqrt(d2);
}

} // namespace

ParticleVelocities compute_velocities(const SuspensionState &state, const SuspensionParams &params,
                                      const BackgroundFlow &flow, ExpansionOrder order) {
    const int n = state.size();
    if (n != params.n_particles)
        throw ValidationError("state size does not match params.n_particles");

    if (n >= 2) {
        const double dmin = min_separation(state.positions);
        if (dmin < 4.0 * params.particle_scale)
            throw SeparationGuardError(dmin, 4.0 * params.particle_scale);
    }

    ParticleVelocities out;
    out.velocity.resize(n);
    out.orientation_rate.resize(n);

    // integrator stages drift orientations slightly off the sphere; the
    // coefficient laws are evaluated on the normalized axis
    std::vector<Vec3> axes(n);
    for (int i = 0; i < n; ++i)
        axes[i] = state.orientations[i].normalized();

    // ambient samples, shared by both orders
    std::vector<FlowSample> ambient(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            ambient[i] = flow(state.positions[i]);
    });

    if (order == ExpansionOrder::ZeroOrder) {
        for (int i = 0; i < n; ++i) {
            out.velocity[i] = ambient[i].velocity;
            out.orientation_rate[i] = orientation_velocity(params.shape, axes[i], ambient[i].velocity_gradient);
        }
        return out;
    }

    const double lambda = params.volume_fraction;
    const double kappa0 = params.activity.kappa0;
    const double pair_weight = lambda / n;

    // per-particle pair sources: drag monopole e - h(X^m) and stresslet
    // 2 Sigma°(R^m) D(u_h)(X^m) + kappa0 Sigma_f°(R^m)
    std::vector<Vec3> monopole(n);
    std::vector<Mat3> stresslet(n);
    for (int m = 0; m < n; ++m) {
        monopole[m] = params.buoyancy - ambient[m].force_density;
        const Mat3 strain = ambient[m].velocity_gradient.deviatoric_symmetric();
        stresslet[m] = stresslet_response(params.shape, axes[m], strain) * 2.0 +
                       active_stresslet(params.activity, axes[m]) * kappa0;
    }

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Vec3 v = ambient[i].velocity;
            for (int m = 0; m < n; ++m) {
                if (static_cast<std::size_t>(m) == i)
                    continue;
                const Vec3 d = state.positions[i] - state.positions[m];
                v += stokeslet(d) * monopole[m] * pair_weight;
                v += stokeslet_gradient_apply(d, stresslet[m]) * pair_weight;
            }
            v += swim_velocity(params.activity, axes[i]) * (kappa0 * params.particle_scale);
            out.velocity[i] = v;
            out.orientation_rate[i] = orientation_velocity(params.shape, axes[i], ambient[i].velocity_gradient);
        }
    });
    return out;
}

SuspensionState step(const SuspensionState &state, const SuspensionParams &params, const BackgroundFlow &flow,
                     ExpansionOrder order, double dt) {
    if (!(dt > 0.0))
        throw ValidationError("time step must be > 0");
    const int n = state.size();

    auto shifted = [&](const ParticleVelocities &k, double a) {
        SuspensionState s = state;
        for (int i = 0; i < n; ++i) {
            s.positions[i] += k.velocity[i] * a;
            s.orientations[i] += k.orientation_rate[i] * a;
        }
        s.time = state.time + a;
        return s;
    };

    const ParticleVelocities k1 = compute_velocities(state, params, flow, order);
    const ParticleVelocities k2 = compute_velocities(shifted(k1, 0.5 * dt), params, flow, order);
    const ParticleVelocities k3 = compute_velocities(shifted(k2, 0.5 * dt), params, flow, order);
    const ParticleVelocities k4 = compute_velocities(shifted(k3, dt), params, flow, order);

    SuspensionState next = state;
    for (int i = 0; i < n; ++i) {
        next.positions[i] += (k1.velocity[i] + (k2.velocity[i] + k3.velocity[i]) * 2.0 + k4.velocity[i]) * (dt / 6.0);
        Vec3 r = state.orientations[i] + (k1.orientation_rate[i] + (k2.orientation_rate[i] + k3.orientation_rate[i]) * 2.0 +
                                          k4.orientation_rate[i]) *
                                             (dt / 6.0);
        next.orientations[i] = r.normalized();
    }
    next.time = state.time + dt;
    return next;
}

double interaction_moment(const SuspensionState &state, double sigma) {
    if (!(sigma >= 0.0 && sigma <= 3.0))
        throw ValidationError("interaction moment exponent must lie in [0, 3]");
    const int n = state.size();
    if (n < 2)
        return 0.0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            if (m == i)
                continue;
            acc += std::pow((state.positions[i] - state.positions[m]).norm(), sigma - 3.0);
        }
        worst = std::max(worst, acc / n);
    }
    return worst;
}

Diagnostics diagnostics(const SuspensionState &state) {
    Diagnostics d;
    const int n = state.size();
    if (n < 2)
        return d;
    d.min_separation = min_separation(state.positions);
    for (int s = 0; s < 3; ++s)
        d.interaction_moments[s] = interaction_moment(state, s);
    return d;
}

Diagnostics diagnostics(const SuspensionState &state, const ParticleVelocities &velocities) {
    Diagnostics d = diagnostics(state);
    for (const auto &v : velocities.velocity)
        d.max_speed = std::max(d.max_speed, v.norm());
    for (const auto &w : velocities.orientation_rate)
        d.max_rotation_rate = std::max(d.max_rotation_rate, w.norm());
    return d;
}

void write_state_csv(std::ostream &out, const SuspensionState &state) {
    out << "n,x,y,z,rx,ry,rz\n";
    char buf[256];
    for (int i = 0; i < state.size(); ++i) {
        const Vec3 &x = state.positions[i];
        const Vec3 &r = state.orientations[i];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, x.x, x.y, x.z, r.x, r.y, r.z);
        out << buf;
    }
}

SuspensionState read_state_csv(std::istream &in) {
    SuspensionState s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string cell;
        std::array<double, 7> row{};
        std::size_t col = 0;
        bool numeric = true;
        while (std::getline(ls, cell, ',') && col < 7) {
            try {
                row[col++] = std::stod(cell);
            } catch (const std::exception &) {
                numeric = false;
                break;
            }
        }
        if (!numeric)
            continue; // header
        if (col != 7)
            throw ValidationError("state row needs 7 columns: n,x,y,z,rx,ry,rz");
        s.positions.push_back({row[1], row[2], row[3]});
        s.orientations.push_back({row[4], row[5], row[6]});
    }
    s.validate();
    return s;
}

} // namespace stokesim
