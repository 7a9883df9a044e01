#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stokesim/config.hpp"
#include "stokesim/kinetic.hpp"
#include "stokesim/rate_fit.hpp"
#include "stokesim/suspension.hpp"
#include "stokesim/transport.hpp"

namespace stokesim {

/// Fully resolved experiment description (parsed from the INI config).
struct ExperimentConfig {
    std::string scenario = "standard";
    std::uint64_t seed = 42;
    std::string out_dir; ///< empty = no files written

    // time grid
    double t_end = 0.5;
    double dt = 0.025;
    int outputs = 4; ///< output times beyond t = 0 (t_end always included)

    // particle system
    int n_particles = 64;
    double volume_fraction = 0.02;
    Vec3 buoyancy{};
    double unit_volume = unit_ball_volume;
    ShapeModel shape = ShapeModel::sphere();
    ActivityModel activity;
    ExpansionOrder order = ExpansionOrder::FirstOrder; ///< for `simulate`

    // flow
    std::string flow_type = "zero"; ///< zero | linear | regularized_stokeslet | tabulated
    Mat3 flow_gradient{};
    Vec3 flow_center{};
    Vec3 flow_strength{};
    double flow_blob_width = 1.0;
    std::string flow_csv;

    // initial density
    InitialDensitySpec initial;
    double min_sep_coeff = 0.3;
    double guard_margin = 1.5; ///< initial d_min >= guard_margin * 4 eps
    int rejection_budget = 200;

    // kinetic solver
    int ensemble_size = 1024;
    double smoothing = 0.0; ///< 0 = default 2 K^(-1/3) support radius
    FixedPointConfig fixed_point;
    ResolveMode resolve = ResolveMode::PerStage;
    std::string kinetic_mode = "doi"; ///< for `kinetic`: doi | explicit

    // sweep
    std::vector<double> sweep_particles;
    std::vector<double> sweep_lambdas;
    std::string sweep_metric = "w1_final"; ///< w1_final | mf_gap

    static ExperimentConfig from_config(const Config &cfg);
    Config to_config() const;
    BackgroundFlow make_flow() const;
    SuspensionParams make_params() const;
    void validate() const;
};

/// Rejection-sample particle positions from the initial density until the
/// minimum pairwise distance clears both the configured c N^(-1/3) floor and
/// the separation guard with margin; orientations are drawn independently.
/// Throws ValidationError when the retry budget is exhausted.
SuspensionState sample_particles(const ExperimentConfig &cfg, const SuspensionParams &params);

/// Positions-only cloud of `count` points drawn from the weighted ensemble
/// by systematic resampling (deterministic given the seed).
Cloud resample_positions(const KineticEnsemble &ensemble, int count, std::uint64_t seed);

/// Sup-over-samples gap between the fixed-point effective velocity and the
/// explicit linearized field on the same ensemble.
double mean_field_gap(const KineticEnsemble &ensemble, const SuspensionParams &params, const BackgroundFlow &flow,
                      const FixedPointConfig &fixed_point);

struct CompareRow {
    double t;
    std::string metric; ///< "W1" | "W2"
    std::string order;  ///< "zero" | "first"
    std::string mode;   ///< "doi" | "explicit"
    double value;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double initial_offset_w1 = 0.0; ///< particles vs resampled ensemble at t = 0
    double initial_offset_w2 = 0.0;
    double mf_gap = 0.0; ///< fixed-point vs explicit field gap at t = 0
    int fixed_point_max_iterations = 0;
    double seconds_particles = 0.0;
    double seconds_kinetic = 0.0;
    double seconds_metrics = 0.0;

    /// Deterministic CSV bytes: "t,metric,order,mode,value".
    std::string csv() const;
};

/// Kinetic-side trajectories shared between compare runs (the kinetic
/// solution does not depend on the particle count).
struct KineticTrajectory {
    std::vector<double> times;
    std::vector<KineticEnsemble> doi;
    std::vector<KineticEnsemble> explicit_corrected;
    double mf_gap = 0.0;
    int fixed_point_max_iterations = 0;
    double seconds = 0.0;
};

KineticTrajectory run_kinetic_trajectory(const ExperimentConfig &cfg);

/// Full particle-vs-kinetic comparison; writes compare.csv and summary.json
/// into cfg.out_dir when set.
CompareReport run_compare(const ExperimentConfig &cfg);
/// Same, reusing a precomputed kinetic trajectory on matching time grids.
CompareReport run_compare(const ExperimentConfig &cfg, const KineticTrajectory &kinetic);

struct SweepPoint {
    double parameter;
    bool ok = false;
    std::string error;
    double value = 0.0;
};

struct SweepReport {
    std::vector<SweepPoint> points;
    std::optional<RateFit> fit; ///< over surviving points when >= 3 (or >= 2 for complete sweeps)
    std::string csv() const;    ///< "parameter,ok,value"
};

/// Run the configured sweep (particle-count list with the w1_final metric,
/// or volume-fraction list with the mf_gap metric) and fit the log-log rate.
SweepReport run_sweep(const ExperimentConfig &cfg);

} // namespace stokesim
