#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "stokesim/background_flow.hpp"
#include "stokesim/geometry.hpp"
#include "stokesim/suspension.hpp"

namespace stokesim {

/// Product law for the initial phase-space density: a spatial family times
/// an orientation family on the unit sphere.
struct InitialDensitySpec {
    enum class Spatial { UniformBall, Gaussian };
    enum class Orientation { Uniform, VonMisesFisher };

    Spatial spatial = Spatial::UniformBall;
    Vec3 center{};
    double extent = 1.0; ///< ball radius, or standard deviation for Gaussian
    Orientation orientation = Orientation::Uniform;
    Vec3 mean_direction{0.0, 0.0, 1.0};
    double concentration = 0.0;
    bool low_discrepancy = false; ///< Halton points for the spatial part

    /// Radius scale used for the default kernel smoothing width.
    double support_radius() const { return spatial == Spatial::UniformBall ? extent : 2.0 * extent; }
    void validate() const;
};

/// Weighted characteristic samples representing the phase-space density,
/// plus the smoothing width of the mollified convolution kernels.
struct KineticEnsemble {
    std::vector<Vec3> positions;
    std::vector<Vec3> orientations;
    std::vector<double> weights;
    double smoothing = 0.0; ///< eta > 0
    double time = 0.0;

    int size() const { return static_cast<int>(positions.size()); }
    /// Neumaier-compensated total weight.
    double total_weight() const;
    void validate() const;
};

/// Draw count samples from the given density law; equal weights summing to 1
/// exactly under compensated summation, bit-identical for a given seed.  The
/// default smoothing width is 2 count^(-1/3) support_radius.
KineticEnsemble sample_initial(const InitialDensitySpec &spec, int count, std::uint64_t seed);

class Rng;
/// One draw from the spatial law; halton_index drives the low-discrepancy
/// sequence and is ignored otherwise.
Vec3 sample_spatial(const InitialDensitySpec &spec, Rng &rng, std::uint64_t halton_index);
/// One draw from the orientation law.
Vec3 sample_orientation(const InitialDensitySpec &spec, Rng &rng);

struct FixedPointConfig {
    double tolerance = 1e-10; ///< sup-norm over sample velocities
    int max_iterations = 50;
    double relaxation = 1.0; ///< under-relaxation factor in (0, 1]
    void validate() const;
};

/// Effective flow field reconstructed from ensemble sources: the ambient
/// flow plus smoothed Stokeslet monopoles and stresslets.  Evaluation is
/// pure and thread-safe.
class EffectiveVelocityField {
  public:
    struct Value {
        Vec3 velocity;
        Mat3 gradient;
    };

    Value operator()(const Vec3 &x) const;

    /// Evaluate at many points (parallel over targets, fixed source order).
    std::vector<Value> evaluate(const std::vector<Vec3> &points) const;

    int iterations() const { return iterations_; }
    const std::vector<double> &residual_history() const { return residuals_; }

  private:
    friend class FieldAssembler;
    friend EffectiveVelocityField solve_velocity_field(const KineticEnsemble &, const SuspensionParams &,
                                                       const BackgroundFlow &, const FixedPointConfig &);
    friend EffectiveVelocityField explicit_mf_velocity(const KineticEnsemble &, const SuspensionParams &,
                                                       const BackgroundFlow &);
    BackgroundFlow flow_;
    double eta2_ = 0.0;
    // structure-of-arrays sources: positions, monopole vectors (premultiplied
    // by lambda w_k), symmetric trace-free stresslets (idem)
    std::vector<double> px_, py_, pz_;
    std::vector<double> ax_, ay_, az_;
    std::vector<double> bxx_, bxy_, bxz_, byy_, byz_, bzz_;
    int iterations_ = 1;
    std::vector<double> residuals_;
};

/// Solve the effective-velocity fixed point on the current ensemble: starting
/// from the ambient flow, alternate between per-sample stresslet sources
/// (from the previous iterate's strain rates) and the induced field, until
/// the sup-norm of the sample velocity update drops below tolerance.
/// Throws ContractionError when the residuals stop decreasing (volume
/// fraction too large or smoothing too small) or the budget is exhausted.
EffectiveVelocityField solve_velocity_field(const KineticEnsemble &ensemble, const SuspensionParams &params,
                                            const BackgroundFlow &flow, const FixedPointConfig &config);

/// The explicit linearized mean-field velocity: a single evaluation with
/// stresslets taken from the ambient strain rate (no fixed point).  Equals
/// the first fixed-point iterate started from the ambient flow.
EffectiveVelocityField explicit_mf_velocity(const KineticEnsemble &baseline, const SuspensionParams &params,
                                            const BackgroundFlow &flow);

enum class ResolveMode {
    PerStage,     ///< re-solve the field at every RK4 stage
    FrozenPerStep ///< solve once per step; first order in dt for the coupling
};

/// One RK4 step of the kinetic characteristics ( xdot = u(x),
/// rdot = orientation_velocity(r, grad u(x)) ).  Weights are untouched, so
/// mass conservation is exact; orientations are renormalized.
KineticEnsemble kinetic_step(const KineticEnsemble &ensemble, const SuspensionParams &params,
                             const BackgroundFlow &flow, const FixedPointConfig &config, double dt,
                             ResolveMode mode = ResolveMode::PerStage);

/// One RK4 step of the ambient-flow characteristics (the zero volume
/// fraction dynamics).
KineticEnsemble baseline_step(const KineticEnsemble &ensemble, const SuspensionParams &params,
                              const BackgroundFlow &flow, double dt);

/// Paired ensembles of the explicit linearized model: the baseline is
/// transported by the ambient flow and feeds the corrected ensemble's
/// velocity field; both use the ambient angular velocity.
struct ExplicitMfState {
    KineticEnsemble baseline;
    KineticEnsemble corrected;
};

ExplicitMfState explicit_mf_step(const ExplicitMfState &state, const SuspensionParams &params,
                                 const BackgroundFlow &flow, double dt, ResolveMode mode = ResolveMode::PerStage);

/// Snapshot rows "k,x,y,z,rx,ry,rz,w".
void write_ensemble_csv(std::ostream &out, const KineticEnsemble &ensemble);
KineticEnsemble read_ensemble_csv(std::istream &in);

} // namespace stokesim
