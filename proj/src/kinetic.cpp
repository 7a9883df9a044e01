#include "stokesim/kinetic.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "stokesim/errors.hpp"
#include "stokesim/mollified.hpp"
#include "stokesim/parallel.hpp"
#include "stokesim/rng.hpp"

namespace stokesim {

// ---------------------------------------------------------------------------
// sampling

void InitialDensitySpec::validate() const {
    if (!(extent > 0.0))
        throw ValidationError("initial density extent must be > 0");
    if (orientation == Orientation::VonMisesFisher) {
        if (std::abs(mean_direction.norm() - 1.0) > 1e-9)
            throw ValidationError("von Mises-Fisher mean direction must be a unit vector");
        if (!(concentration >= 0.0))
            throw ValidationError("von Mises-Fisher concentration must be >= 0");
    }
}

void KineticEnsemble::validate() const {
    if (positions.empty())
        throw ValidationError("ensemble must hold at least one sample");
    if (positions.size() != orientations.size() || positions.size() != weights.size())
        throw ValidationError("ensemble array sizes differ");
    if (!(smoothing > 0.0))
        throw ValidationError("ensemble smoothing width must be > 0");
    for (double w : weights)
        if (!(w >= 0.0))
            throw ValidationError("ensemble weights must be >= 0");
    for (const auto &r : orientations)
        if (std::abs(r.norm() - 1.0) > 1e-9)
            throw ValidationError("ensemble orientations must be unit vectors");
}

double KineticEnsemble::total_weight() const {
    double sum = 0.0, comp = 0.0;
    for (double w : weights) {
        const double t = sum + w;
        if (std::abs(sum) >= std::abs(w))
            comp += (sum - t) + w;
        else
            comp += (w - t) + sum;
        sum = t;
    }
    return sum + comp;
}

Vec3 sample_spatial(const InitialDensitySpec &spec, Rng &rng, std::uint64_t index) {
    if (!spec.low_discrepancy) {
        if (spec.spatial == InitialDensitySpec::Spatial::UniformBall)
            return rng.in_ball(spec.center, spec.extent);
        return rng.gaussian(spec.center, spec.extent);
    }
    const double u1 = radical_inverse(index + 1, 2);
    const double u2 = radical_inverse(index + 1, 3);
    const double u3 = radical_inverse(index + 1, 5);
    if (spec.spatial == InitialDensitySpec::Spatial::UniformBall) {
        const double r = spec.extent * std::cbrt(u1);
        const double z = 1.0 - 2.0 * u2;
        const double phi = 2.0 * std::numbers::pi * u3;
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return spec.center + Vec3{s * std::cos(phi), s * std::sin(phi), z} * r;
    }
    // Box-Muller on Halton pairs
    const double u4 = radical_inverse(index + 1, 7);
    const double e1 = std::max(u1, 0x1.0p-60), e3 = std::max(u3, 0x1.0p-60);
    const double n1 = std::sqrt(-2.0 * std::log(e1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double n2 = std::sqrt(-2.0 * std::log(e1)) * std::sin(2.0 * std::numbers::pi * u2);
    const double n3 = std::sqrt(-2.0 * std::log(e3)) * std::cos(2.0 * std::numbers::pi * u4);
    return spec.center + Vec3{n1, n2, n3} * spec.extent;
}

Vec3 sample_orientation(const InitialDensitySpec &spec, Rng &rng) {
    return spec.orientation == InitialDensitySpec::Orientation::Uniform
               ? rng.unit_vector()
               : rng.von_mises_fisher(spec.mean_direction, spec.concentration);
}

KineticEnsemble sample_initial(const InitialDensitySpec &spec, int count, std::uint64_t seed) {
    if (count < 1)
        throw ValidationError("ensemble size must be >= 1");
    spec.validate();

    KineticEnsemble e;
    e.positions.resize(count);
    e.orientations.resize(count);
    e.weights.assign(count, 1.0 / count);
    Rng rng(mix_seed(seed, 0x6b696e65));
    for (int k = 0; k < count; ++k) {
        e.positions[k] = sample_spatial(spec, rng, static_cast<std::uint64_t>(k));
        e.orientations[k] = sample_orientation(spec, rng);
    }
    // nudge the first weight so the compensated total is exactly one
    for (int pass = 0; pass < 5 && e.total_weight() != 1.0; ++pass)
        e.weights[0] += 1.0 - e.total_weight();

    e.smoothing = 2.0 * std::cbrt(1.0 / count) * spec.support_radius();
    return e;
}

// ---------------------------------------------------------------------------
// effective field

void FixedPointConfig::validate() const {
    if (!(tolerance > 0.0))
        throw ValidationError("fixed-point tolerance must be > 0");
    if (max_iterations < 1)
        throw ValidationError("fixed-point iteration budget must be >= 1");
    if (!(relaxation > 0.0 && relaxation <= 1.0))
        throw ValidationError("fixed-point relaxation must lie in (0, 1]");
}

EffectiveVelocityField::Value EffectiveVelocityField::operator()(const Vec3 &x) const {
    const FlowSample bg = flow_(x);
    double u[3] = {bg.velocity.x, bg.velocity.y, bg.velocity.z};
    double g[9];
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            g[3 * i + k] = bg.velocity_gradient(i, k);
    const std::size_t n = px_.size();
    for (std::size_t k = 0; k < n; ++k)
        accumulate_mollified(x.x - px_[k], x.y - py_[k], x.z - pz_[k], eta2_, ax_[k], ay_[k], az_[k], bxx_[k], bxy_[k],
                             bxz_[k], byy_[k], byz_[k], bzz_[k], true, u, g);
    Value v;
    v.velocity = {u[0], u[1], u[2]};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            v.gradient(i, k) = g[3 * i + k];
    return v;
}

std::vector<EffectiveVelocityField::Value> EffectiveVelocityField::evaluate(const std::vector<Vec3> &points) const {
    std::vector<Value> out(points.size());
    parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            out[i] = (*this)(points[i]);
    });
    return out;
}

/// Shared assembly of field sources from an ensemble and per-sample strain
/// rates, so the explicit model and the fixed-point iterates coincide exactly
/// when fed the same strains.
class FieldAssembler {
  public:
    FieldAssembler(const KineticEnsemble &ens, const SuspensionParams &params, const BackgroundFlow &flow)
        : ens_(ens), params_(params), flow_(flow) {
        const int n = ens.size();
        background_.resize(n);
        parallel_for(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                background_[i] = flow(ens.positions[i]);
        });
    }

    const std::vector<FlowSample> &background() const { return background_; }

    /// Monopole sources lambda w_k (e - h(x_k)); fixed across iterations.
    void fill_monopoles(EffectiveVelocityField &f) const {
        const int n = ens_.size();
        const double lambda = params_.volume_fraction;
        f.flow_ = flow_;
        f.eta2_ = ens_.smoothing * ens_.smoothing;
        f.px_.resize(n);
        f.py_.resize(n);
        f.pz_.resize(n);
        f.ax_.resize(n);
        f.ay_.resize(n);
        f.az_.resize(n);
        f.bxx_.assign(n, 0.0);
        f.bxy_.assign(n, 0.0);
        f.bxz_.assign(n, 0.0);
        f.byy_.assign(n, 0.0);
        f.byz_.assign(n, 0.0);
        f.bzz_.assign(n, 0.0);
        for (int k = 0; k < n; ++k) {
            f.px_[k] = ens_.positions[k].x;
            f.py_[k] = ens_.positions[k].y;
            f.pz_[k] = ens_.positions[k].z;
            const Vec3 a = (params_.buoyancy - background_[k].force_density) * (lambda * ens_.weights[k]);
            f.ax_[k] = a.x;
            f.ay_[k] = a.y;
            f.az_[k] = a.z;
        }
    }

    /// Stresslet sources lambda w_k (2 Sigma°(r_k) E_k + kappa0 Sigma_f°(r_k)).
    void fill_stresslets(EffectiveVelocityField &f, const std::vector<Mat3> &gradients) const {
        const int n = ens_.size();
        const double lambda = params_.volume_fraction;
        for (int k = 0; k < n; ++k) {
            const Vec3 axis = ens_.orientations[k].normalized();
            const Mat3 strain = gradients[k].deviatoric_symmetric();
            Mat3 t = stresslet_response(params_.shape, axis, strain) * 2.0 +
                     active_stresslet(params_.activity, axis) * params_.activity.kappa0;
            t = t * (lambda * ens_.weights[k]);
            f.bxx_[k] = t(0, 0);
            f.bxy_[k] = t(0, 1);
            f.bxz_[k] = t(0, 2);
            f.byy_[k] = t(1, 1);
            f.byz_[k] = t(1, 2);
            f.bzz_[k] = t(2, 2);
        }
    }

  private:
    const KineticEnsemble &ens_;
    const SuspensionParams &params_;
    const BackgroundFlow &flow_;
    std::vector<FlowSample> background_;
};

namespace {

// integrator stages may carry slightly non-unit orientations; solvers accept
// them and evaluate the coefficient laws on the normalized axis
void check_solvable(const KineticEnsemble &e) {
    if (e.positions.empty())
        throw ValidationError("ensemble must hold at least one sample");
    if (e.positions.size() != e.orientations.size() || e.positions.size() != e.weights.size())
        throw ValidationError("ensemble array sizes differ");
    if (!(e.smoothing > 0.0))
        throw ValidationError("ensemble smoothing width must be > 0");
}

} // namespace

EffectiveVelocityField solve_velocity_field(const KineticEnsemble &ensemble, const SuspensionParams &params,
                                            const BackgroundFlow &flow, const FixedPointConfig &config) {
    check_solvable(ensemble);
    config.validate();

    if (params.volume_fraction == 0.0) {
        EffectiveVelocityField f;
        f.flow_ = flow;
        f.eta2_ = ensemble.smoothing * ensemble.smoothing;
        f.iterations_ = 1;
        f.residuals_ = {0.0};
        return f;
    }

    FieldAssembler assembler(ensemble, params, flow);
    const int n = ensemble.size();

    // per-sample monopole field (fixed across iterations)
    EffectiveVelocityField mono;
    assembler.fill_monopoles(mono);
    const std::vector<EffectiveVelocityField::Value> mono_at = mono.evaluate(ensemble.positions);

    // iterate from u0 = ambient flow
    std::vector<Vec3> u_prev(n);
    std::vector<Mat3> g_prev(n);
    for (int k = 0; k < n; ++k) {
        u_prev[k] = assembler.background()[k].velocity;
        g_prev[k] = assembler.background()[k].velocity_gradient;
    }

    EffectiveVelocityField field = mono; // reuse positions and monopoles
    std::vector<double> residuals;
    int worse_streak = 0;
    for (int it = 1; it <= config.max_iterations; ++it) {
        assembler.fill_stresslets(field, g_prev);
        const std::vector<EffectiveVelocityField::Value> at = field.evaluate(ensemble.positions);

        double residual = 0.0;
        for (int k = 0; k < n; ++k)
            residual = std::max(residual, (at[k].velocity - u_prev[k]).norm());
        residuals.push_back(residual);

        const double w = config.relaxation;
        for (int k = 0; k < n; ++k) {
            u_prev[k] += (at[k].velocity - u_prev[k]) * w;
            g_prev[k] += (at[k].gradient - g_prev[k]) * w;
        }

        if (residual < config.tolerance) {
            field.iterations_ = it;
            field.residuals_ = residuals;
            return field;
        }
        if (residuals.size() >= 2 && residual >= residuals[residuals.size() - 2]) {
            if (++worse_streak >= 3) {
                ContractionError err("effective-velocity fixed point stopped contracting after " + std::to_string(it) +
                                         " iterations (volume fraction too large or smoothing too small)",
                                     residuals);
                throw err;
            }
        } else {
            worse_streak = 0;
        }
    }
    throw ContractionError("effective-velocity fixed point did not reach tolerance within " +
                               std::to_string(config.max_iterations) + " iterations",
                           residuals);
}

EffectiveVelocityField explicit_mf_velocity(const KineticEnsemble &baseline, const SuspensionParams &params,
                                            const BackgroundFlow &flow) {
    check_solvable(baseline);
    FieldAssembler assembler(baseline, params, flow);
    EffectiveVelocityField f;
    assembler.fill_monopoles(f);
    std::vector<Mat3> ambient_gradients(baseline.size());
    for (int k = 0; k < baseline.size(); ++k)
        ambient_gradients[k] = assembler.background()[k].velocity_gradient;
    assembler.fill_stresslets(f, ambient_gradients);
    f.iterations_ = 1;
    f.residuals_ = {};
    return f;
}

// ---------------------------------------------------------------------------
// transport

namespace {

struct Derivative {
    std::vector<Vec3> dx;
    std::vector<Vec3> dr;
};

KineticEnsemble advance(const KineticEnsemble &base, const Derivative &d, double a) {
    KineticEnsemble s = base;
    for (int k = 0; k < base.size(); ++k) {
        s.positions[k] += d.dx[k] * a;
        s.orientations[k] += d.dr[k] * a;
    }
    s.time = base.time + a;
    return s;
}

KineticEnsemble rk4_combine(const KineticEnsemble &state, const Derivative &k1, const Derivative &k2,
                            const Derivative &k3, const Derivative &k4, double dt) {
    KineticEnsemble next = state;
    for (int k = 0; k < state.size(); ++k) {
        next.positions[k] += (k1.dx[k] + (k2.dx[k] + k3.dx[k]) * 2.0 + k4.dx[k]) * (dt / 6.0);
        const Vec3 r =
            state.orientations[k] + (k1.dr[k] + (k2.dr[k] + k3.dr[k]) * 2.0 + k4.dr[k]) * (dt / 6.0);
        next.orientations[k] = r.normalized();
    }
    next.time = state.time + dt;
    return next;
}

Derivative kinetic_derivative(const KineticEnsemble &ens, const SuspensionParams &params,
                              const EffectiveVelocityField &field) {
    Derivative d;
    d.dx.resize(ens.size());
    d.dr.resize(ens.size());
    const auto values = field.evaluate(ens.positions);
    for (int k = 0; k < ens.size(); ++k) {
        d.dx[k] = values[k].velocity;
        d.dr[k] = orientation_velocity(params.shape, ens.orientations[k].normalized(), values[k].gradient);
    }
    return d;
}

Derivative ambient_derivative(const KineticEnsemble &ens, const SuspensionParams &params, const BackgroundFlow &flow) {
    Derivative d;
    d.dx.resize(ens.size());
    d.dr.resize(ens.size());
    parallel_for(ens.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const FlowSample s = flow(ens.positions[k]);
            d.dx[k] = s.velocity;
            d.dr[k] = orientation_velocity(params.shape, ens.orientations[k].normalized(), s.velocity_gradient);
        }
    });
    return d;
}

} // namespace

KineticEnsemble kinetic_step(const KineticEnsemble &ensemble, const SuspensionParams &params,
                             const BackgroundFlow &flow, const FixedPointConfig &config, double dt, ResolveMode mode) {
    if (!(dt > 0.0))
        throw ValidationError("time step must be > 0");

    auto field_for = [&](const KineticEnsemble &stage) { return solve_velocity_field(stage, params, flow, config); };

    if (mode == ResolveMode::FrozenPerStep) {
        const EffectiveVelocityField field = field_for(ensemble);
        const Derivative k1 = kinetic_derivative(ensemble, params, field);
        const Derivative k2 = kinetic_derivative(advance(ensemble, k1, 0.5 * dt), params, field);
        const Derivative k3 = kinetic_derivative(advance(ensemble, k2, 0.5 * dt), params, field);
        const Derivative k4 = kinetic_derivative(advance(ensemble, k3, dt), params, field);
        return rk4_combine(ensemble, k1, k2, k3, k4, dt);
    }

    const Derivative k1 = kinetic_derivative(ensemble, params, field_for(ensemble));
    const KineticEnsemble s2 = advance(ensemble, k1, 0.5 * dt);
    const Derivative k2 = kinetic_derivative(s2, params, field_for(s2));
    const KineticEnsemble s3 = advance(ensemble, k2, 0.5 * dt);
    const Derivative k3 = kinetic_derivative(s3, params, field_for(s3));
    const KineticEnsemble s4 = advance(ensemble, k3, dt);
    const Derivative k4 = kinetic_derivative(s4, params, field_for(s4));
    return rk4_combine(ensemble, k1, k2, k3, k4, dt);
}

KineticEnsemble baseline_step(const KineticEnsemble &ensemble, const SuspensionParams &params,
                              const BackgroundFlow &flow, double dt) {
    if (!(dt > 0.0))
        throw ValidationError("time step must be > 0");
    const Derivative k1 = ambient_derivative(ensemble, params, flow);
    const Derivative k2 = ambient_derivative(advance(ensemble, k1, 0.5 * dt), params, flow);
    const Derivative k3 = ambient_derivative(advance(ensemble, k2, 0.5 * dt), params, flow);
    const Derivative k4 = ambient_derivative(advance(ensemble, k3, dt), params, flow);
    return rk4_combine(ensemble, k1, k2, k3, k4, dt);
}

ExplicitMfState explicit_mf_step(const ExplicitMfState &state, const SuspensionParams &params,
                                 const BackgroundFlow &flow, double dt, ResolveMode mode) {
    if (!(dt > 0.0))
        throw ValidationError("time step must be > 0");

    // corrected-ensemble derivative: positions follow the explicit linearized
    // field built from the simultaneous baseline stage; orientations follow
    // the ambient angular velocity.
    auto corrected_derivative = [&](const KineticEnsemble &corrected, const EffectiveVelocityField &field) {
        Derivative d;
        d.dx.resize(corrected.size());
        d.dr.resize(corrected.size());
        const auto values = field.evaluate(corrected.positions);
        parallel_for(corrected.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                d.dx[k] = values[k].velocity;
                const FlowSample s = flow(corrected.positions[k]);
                d.dr[k] = orientation_velocity(params.shape, corrected.orientations[k].normalized(), s.velocity_gradient);
            }
        });
        return d;
    };

    const EffectiveVelocityField frozen =
        mode == ResolveMode::FrozenPerStep ? explicit_mf_velocity(state.baseline, params, flow) : EffectiveVelocityField{};

    auto stage_field = [&](const KineticEnsemble &baseline_stage) {
        return mode == ResolveMode::FrozenPerStep ? frozen : explicit_mf_velocity(baseline_stage, params, flow);
    };

    const Derivative b1 = ambient_derivative(state.baseline, params, flow);
    const Derivative c1 = corrected_derivative(state.corrected, stage_field(state.baseline));

    const KineticEnsemble b2s = advance(state.baseline, b1, 0.5 * dt);
    const Derivative b2 = ambient_derivative(b2s, params, flow);
    const Derivative c2 = corrected_derivative(advance(state.corrected, c1, 0.5 * dt), stage_field(b2s));

    const KineticEnsemble b3s = advance(state.baseline, b2, 0.5 * dt);
    const Derivative b3 = ambient_derivative(b3s, params, flow);
    const Derivative c3 = corrected_derivative(advance(state.corrected, c2, 0.5 * dt), stage_field(b3s));

    const KineticEnsemble b4s = advance(state.baseline, b3, dt);
    const Derivative b4 = ambient_derivative(b4s, params, flow);
    const Derivative c4 = corrected_derivative(advance(state.corrected, c3, dt), stage_field(b4s));

    ExplicitMfState next;
    next.baseline = rk4_combine(state.baseline, b1, b2, b3, b4, dt);
    next.corrected = rk4_combine(state.corrected, c1, c2, c3, c4, dt);
    return next;
}

// ---------------------------------------------------------------------------
// serialization

void write_ensemble_csv(std::ostream &out, const KineticEnsemble &ensemble) {
    out << "k,x,y,z,rx,ry,rz,w\n";
    char buf[320];
    for (int k = 0; k < ensemble.size(); ++k) {
        const Vec3 &x = ensemble.positions[k];
        const Vec3 &r = ensemble.orientations[k];
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, x.x, x.y, x.z, r.x, r.y,
                      r.z, ensemble.weights[k]);
        out << buf;
    }
}

KineticEnsemble read_ensemble_csv(std::istream &in) {
    KineticEnsemble e;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string cell;
        std::array<double, 8> row{};
        std::size_t col = 0;
        bool numeric = true;
        while (std::getline(ls, cell, ',') && col < 8) {
            try {
                row[col++] = std::stod(cell);
            } catch (const std::exception &) {
                numeric = false;
                break;
            }
        }
        if (!numeric)
            continue;
        if (col != 8)
            throw ValidationError("ensemble row needs 8 columns: k,x,y,z,rx,ry,rz,w");
        e.positions.push_back({row[1], row[2], row[3]});
        e.orientations.push_back({row[4], row[5], row[6]});
        e.weights.push_back(row[7]);
    }
    if (e.positions.empty())
        throw ValidationError("ensemble file holds no samples");
    return e;
}

} // namespace stokesim
