#include "stokesim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "stokesim/errors.hpp"
#include "stokesim/rng.hpp"

namespace stokesim {

namespace {

using json = nlohmann::ordered_json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct TimeGrid {
    int n_steps;
    double dt;
    std::vector<int> output_steps; ///< includes 0 and n_steps
};

TimeGrid make_grid(const ExperimentConfig &cfg) {
    TimeGrid g;
    g.n_steps = std::max(1, static_cast<int>(std::llround(cfg.t_end / cfg.dt)));
    g.dt = cfg.t_end / g.n_steps;
    const int stride = std::max(1, g.n_steps / std::max(1, cfg.outputs));
    g.output_steps.push_back(0);
    for (int s = stride; s < g.n_steps; s += stride)
        g.output_steps.push_back(s);
    g.output_steps.push_back(g.n_steps);
    return g;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + path.string());
    out << text;
}

json params_json(const ExperimentConfig &cfg, const SuspensionParams &params) {
    json j;
    j["scenario"] = cfg.scenario;
    j["seed"] = cfg.seed;
    j["particles"] = params.n_particles;
    j["volume_fraction"] = params.volume_fraction;
    j["particle_scale"] = params.particle_scale;
    j["buoyancy"] = {params.buoyancy.x, params.buoyancy.y, params.buoyancy.z};
    j["kappa0"] = params.activity.kappa0;
    j["beta_f"] = params.activity.beta_f;
    j["alpha_f"] = params.activity.alpha_f;
    j["shape"] = params.shape.kind == ShapeModel::Kind::Sphere ? "sphere" : "slender";
    j["ensemble_size"] = cfg.ensemble_size;
    j["t_end"] = cfg.t_end;
    j["dt"] = cfg.dt;
    return j;
}

} // namespace

// ---------------------------------------------------------------------------
// config plumbing

ExperimentConfig ExperimentConfig::from_config(const Config &cfg) {
    ExperimentConfig e;
    e.scenario = cfg.get("experiment", "scenario", e.scenario);
    e.seed = static_cast<std::uint64_t>(cfg.get_int("experiment", "seed", static_cast<std::int64_t>(e.seed)));
    e.out_dir = cfg.get("output", "directory", e.out_dir);
    e.t_end = cfg.get_double("experiment", "t_end", e.t_end);
    e.dt = cfg.get_double("experiment", "dt", e.dt);
    e.outputs = static_cast<int>(cfg.get_int("experiment", "outputs", e.outputs));
    const std::string order = cfg.get("experiment", "order", "first");
    if (order != "zero" && order != "first")
        throw ValidationError("experiment.order must be zero or first");
    e.order = order == "zero" ? ExpansionOrder::ZeroOrder : ExpansionOrder::FirstOrder;

    e.n_particles = static_cast<int>(cfg.get_int("suspension", "particles", e.n_particles));
    e.volume_fraction = cfg.get_double("suspension", "volume_fraction", e.volume_fraction);
    e.buoyancy = cfg.get_vec3("suspension", "buoyancy", e.buoyancy);
    e.unit_volume = cfg.get_double("suspension", "unit_volume", e.unit_volume);

    const std::string shape = cfg.get("shape", "model", "sphere");
    if (shape == "sphere")
        e.shape = ShapeModel::sphere();
    else if (shape == "slender")
        e.shape = ShapeModel::slender_fiber(cfg.get_double("shape", "alpha1", 1.0), cfg.get_double("shape", "alpha2", 1.0));
    else
        throw ValidationError("shape.model must be sphere or slender");

    e.activity.kappa0 = cfg.get_double("activity", "kappa0", 0.0);
    e.activity.beta_f = cfg.get_double("activity", "beta_f", 0.0);
    e.activity.alpha_f = cfg.get_double("activity", "alpha_f", 0.0);

    e.flow_type = cfg.get("flow", "type", e.flow_type);
    if (e.flow_type == "linear") {
        const auto g = cfg.get_list("flow", "gradient");
        if (g.size() != 9)
            throw ValidationError("flow.gradient needs 9 comma-separated numbers (row-major)");
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                e.flow_gradient(i, j) = g[static_cast<std::size_t>(3 * i + j)];
    }
    e.flow_center = cfg.get_vec3("flow", "center", e.flow_center);
    e.flow_strength = cfg.get_vec3("flow", "strength", e.flow_strength);
    e.flow_blob_width = cfg.get_double("flow", "blob_width", e.flow_blob_width);
    e.flow_csv = cfg.get("flow", "csv", e.flow_csv);

    const std::string spatial = cfg.get("initial", "spatial", "ball");
    if (spatial == "ball")
        e.initial.spatial = InitialDensitySpec::Spatial::UniformBall;
    else if (spatial == "gaussian")
        e.initial.spatial = InitialDensitySpec::Spatial::Gaussian;
    else
        throw ValidationError("initial.spatial must be ball or gaussian");
    e.initial.center = cfg.get_vec3("initial", "center", e.initial.center);
    e.initial.extent = cfg.get_double("initial", "extent", e.initial.extent);
    const std::string orient = cfg.get("initial", "orientation", "uniform");
    if (orient == "uniform")
        e.initial.orientation = InitialDensitySpec::Orientation::Uniform;
    else if (orient == "vmf")
        e.initial.orientation = InitialDensitySpec::Orientation::VonMisesFisher;
    else
        throw ValidationError("initial.orientation must be uniform or vmf");
    e.initial.mean_direction = cfg.get_vec3("initial", "mean_direction", e.initial.mean_direction);
    e.initial.concentration = cfg.get_double("initial", "concentration", e.initial.concentration);
    e.initial.low_discrepancy = cfg.get_bool("initial", "low_discrepancy", e.initial.low_discrepancy);
    e.min_sep_coeff = cfg.get_double("initial", "min_sep_coeff", e.min_sep_coeff);
    e.guard_margin = cfg.get_double("initial", "guard_margin", e.guard_margin);
    e.rejection_budget = static_cast<int>(cfg.get_int("initial", "rejection_budget", e.rejection_budget));

    e.ensemble_size = static_cast<int>(cfg.get_int("kinetic", "samples", e.ensemble_size));
    e.smoothing = cfg.get_double("kinetic", "smoothing", e.smoothing);
    e.fixed_point.tolerance = cfg.get_double("kinetic", "tolerance", e.fixed_point.tolerance);
    e.fixed_point.max_iterations = static_cast<int>(cfg.get_int("kinetic", "max_iterations", e.fixed_point.max_iterations));
    e.fixed_point.relaxation = cfg.get_double("kinetic", "relaxation", e.fixed_point.relaxation);
    const std::string resolve = cfg.get("kinetic", "resolve", "stage");
    if (resolve == "stage")
        e.resolve = ResolveMode::PerStage;
    else if (resolve == "frozen")
        e.resolve = ResolveMode::FrozenPerStep;
    else
        throw ValidationError("kinetic.resolve must be stage or frozen");
    e.kinetic_mode = cfg.get("kinetic", "mode", e.kinetic_mode);

    if (cfg.has("sweep", "particles_list"))
        e.sweep_particles = cfg.get_list("sweep", "particles_list");
    if (cfg.has("sweep", "lambda_list"))
        e.sweep_lambdas = cfg.get_list("sweep", "lambda_list");
    e.sweep_metric = cfg.get("sweep", "metric", e.sweep_metric);

    e.validate();
    return e;
}

Config ExperimentConfig::to_config() const {
    Config c;
    c.set("experiment", "scenario", scenario);
    c.set("experiment", "seed", std::to_string(seed));
    c.set_double("experiment", "t_end", t_end);
    c.set_double("experiment", "dt", dt);
    c.set("experiment", "outputs", std::to_string(outputs));
    c.set("experiment", "order", order == ExpansionOrder::ZeroOrder ? "zero" : "first");

    c.set("suspension", "particles", std::to_string(n_particles));
    c.set_double("suspension", "volume_fraction", volume_fraction);
    c.set("suspension", "buoyancy",
          format_double(buoyancy.x) + "," + format_double(buoyancy.y) + "," + format_double(buoyancy.z));
    c.set_double("suspension", "unit_volume", unit_volume);

    c.set("shape", "model", shape.kind == ShapeModel::Kind::Sphere ? "sphere" : "slender");
    if (shape.kind == ShapeModel::Kind::SlenderFiber) {
        c.set_double("shape", "alpha1", shape.alpha1);
        c.set_double("shape", "alpha2", shape.alpha2);
    }
    c.set_double("activity", "kappa0", activity.kappa0);
    c.set_double("activity", "beta_f", activity.beta_f);
    c.set_double("activity", "alpha_f", activity.alpha_f);

    c.set("flow", "type", flow_type);
    if (flow_type == "linear") {
        std::string g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                g += (g.empty() ? "" : ",") + format_double(flow_gradient(i, j));
        c.set("flow", "gradient", g);
    }
    c.set("flow", "center",
          format_double(flow_center.x) + "," + format_double(flow_center.y) + "," + format_double(flow_center.z));
    c.set("flow", "strength",
          format_double(flow_strength.x) + "," + format_double(flow_strength.y) + "," + format_double(flow_strength.z));
    c.set_double("flow", "blob_width", flow_blob_width);
    if (!flow_csv.empty())
        c.set("flow", "csv", flow_csv);

    c.set("initial", "spatial", initial.spatial == InitialDensitySpec::Spatial::UniformBall ? "ball" : "gaussian");
    c.set("initial", "center",
          format_double(initial.center.x) + "," + format_double(initial.center.y) + "," + format_double(initial.center.z));
    c.set_double("initial", "extent", initial.extent);
    c.set("initial", "orientation",
          initial.orientation == InitialDensitySpec::Orientation::Uniform ? "uniform" : "vmf");
    c.set("initial", "mean_direction", format_double(initial.mean_direction.x) + "," +
                                           format_double(initial.mean_direction.y) + "," +
                                           format_double(initial.mean_direction.z));
    c.set_double("initial", "concentration", initial.concentration);
    c.set("initial", "low_discrepancy", initial.low_discrepancy ? "true" : "false");
    c.set_double("initial", "min_sep_coeff", min_sep_coeff);
    c.set_double("initial", "guard_margin", guard_margin);
    c.set("initial", "rejection_budget", std::to_string(rejection_budget));

    c.set("kinetic", "samples", std::to_string(ensemble_size));
    c.set_double("kinetic", "smoothing", smoothing);
    c.set_double("kinetic", "tolerance", fixed_point.tolerance);
    c.set("kinetic", "max_iterations", std::to_string(fixed_point.max_iterations));
    c.set_double("kinetic", "relaxation", fixed_point.relaxation);
    c.set("kinetic", "resolve", resolve == ResolveMode::PerStage ? "stage" : "frozen");
    c.set("kinetic", "mode", kinetic_mode);

    if (!sweep_particles.empty()) {
        std::string s;
        for (double v : sweep_particles)
            s += (s.empty() ? "" : ",") + format_double(v);
        c.set("sweep", "particles_list", s);
    }
    if (!sweep_lambdas.empty()) {
        std::string s;
        for (double v : sweep_lambdas)
            s += (s.empty() ? "" : ",") + format_double(v);
        c.set("sweep", "lambda_list", s);
    }
    c.set("sweep", "metric", sweep_metric);
    if (!out_dir.empty())
        c.set("output", "directory", out_dir);
    return c;
}

BackgroundFlow ExperimentConfig::make_flow() const {
    if (flow_type == "zero")
        return BackgroundFlow::zero();
    if (flow_type == "linear")
        return BackgroundFlow::linear(flow_gradient);
    if (flow_type == "regularized_stokeslet")
        return BackgroundFlow::regularized_stokeslet(flow_center, flow_strength, flow_blob_width);
    if (flow_type == "tabulated")
        return BackgroundFlow::tabulated(TabulatedField::from_csv(flow_csv));
    throw ValidationError("unknown flow.type " + flow_type);
}

SuspensionParams ExperimentConfig::make_params() const {
    return SuspensionParams::make(n_particles, volume_fraction, buoyancy, shape, activity, unit_volume);
}

void ExperimentConfig::validate() const {
    if (!(t_end > 0.0))
        throw ValidationError("experiment.t_end must be > 0");
    if (!(dt > 0.0))
        throw ValidationError("experiment.dt must be > 0");
    if (outputs < 1)
        throw ValidationError("experiment.outputs must be >= 1");
    if (ensemble_size < 1)
        throw ValidationError("kinetic.samples must be >= 1");
    if (!(min_sep_coeff > 0.0))
        throw ValidationError("initial.min_sep_coeff must be > 0");
    if (!(guard_margin >= 1.0))
        throw ValidationError("initial.guard_margin must be >= 1");
    if (rejection_budget < 1)
        throw ValidationError("initial.rejection_budget must be >= 1");
    if (kinetic_mode != "doi" && kinetic_mode != "explicit")
        throw ValidationError("kinetic.mode must be doi or explicit");
    if (sweep_metric != "w1_final" && sweep_metric != "mf_gap")
        throw ValidationError("sweep.metric must be w1_final or mf_gap");
    initial.validate();
    fixed_point.validate();
    make_params(); // validates the particle parameter block
}

// ---------------------------------------------------------------------------
// sampling helpers

SuspensionState sample_particles(const ExperimentConfig &cfg, const SuspensionParams &params) {
    const int n = params.n_particles;
    Rng rng(mix_seed(cfg.seed, 0x70617274)); // particle stream
    double threshold = 0.0;
    if (n >= 2)
        threshold = std::max(cfg.min_sep_coeff * std::pow(static_cast<double>(n), -1.0 / 3.0),
                             cfg.guard_margin * 4.0 * params.particle_scale);

    SuspensionState state;
    state.positions.reserve(n);
    state.orientations.reserve(n);
    std::uint64_t halton_index = 0;
    for (int i = 0; i < n; ++i) {
        bool accepted = false;
        for (int attempt = 0; attempt < cfg.rejection_budget && !accepted; ++attempt) {
            const Vec3 x = sample_spatial(cfg.initial, rng, halton_index++);
            accepted = true;
            for (const Vec3 &y : state.positions)
                if ((x - y).norm() < threshold) {
                    accepted = false;
                    break;
                }
            if (accepted)
                state.positions.push_back(x);
        }
        if (!accepted)
            throw ValidationError("initial rejection budget exhausted: density too concentrated for " +
                                  std::to_string(n) + " particles at separation " + format_double(threshold));
    }
    for (int i = 0; i < n; ++i)
        state.orientations.push_back(sample_orientation(cfg.initial, rng));
    return state;
}

Cloud resample_positions(const KineticEnsemble &ensemble, int count, std::uint64_t seed) {
    if (count < 1)
        throw ValidationError("resample count must be >= 1");
    Rng rng(seed);
    const double offset = rng.uniform();
    const double total = ensemble.total_weight();
    Cloud cloud;
    cloud.points.reserve(count);
    int idx = 0;
    double cum = ensemble.weights[0];
    for (int j = 0; j < count; ++j) {
        const double target = (j + offset) / count * total;
        while (cum < target && idx + 1 < ensemble.size()) {
            ++idx;
            cum += ensemble.weights[idx];
        }
        cloud.points.push_back(ensemble.positions[idx]);
    }
    return cloud;
}

double mean_field_gap(const KineticEnsemble &ensemble, const SuspensionParams &params, const BackgroundFlow &flow,
                      const FixedPointConfig &fixed_point) {
    const EffectiveVelocityField doi = solve_velocity_field(ensemble, params, flow, fixed_point);
    const EffectiveVelocityField lin = explicit_mf_velocity(ensemble, params, flow);
    const auto a = doi.evaluate(ensemble.positions);
    const auto b = lin.evaluate(ensemble.positions);
    double gap = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        gap = std::max(gap, (a[k].velocity - b[k].velocity).norm());
    return gap;
}

// ---------------------------------------------------------------------------
// compare

std::string CompareReport::csv() const {
    std::string out = "t,metric,order,mode,value\n";
    for (const auto &r : rows)
        out += format_double(r.t) + "," + r.metric + "," + r.order + "," + r.mode + "," + format_double(r.value) + "\n";
    return out;
}

KineticTrajectory run_kinetic_trajectory(const ExperimentConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const SuspensionParams kinetic_params =
        SuspensionParams::make(std::max(cfg.n_particles, 1), cfg.volume_fraction, cfg.buoyancy, cfg.shape,
                               cfg.activity, cfg.unit_volume);
    const BackgroundFlow flow = cfg.make_flow();
    const TimeGrid grid = make_grid(cfg);

    KineticEnsemble ens = sample_initial(cfg.initial, cfg.ensemble_size, mix_seed(cfg.seed, 0x6b696e));
    if (cfg.smoothing > 0.0)
        ens.smoothing = cfg.smoothing;

    KineticTrajectory traj;
    traj.mf_gap = mean_field_gap(ens, kinetic_params, flow, cfg.fixed_point);

    ExplicitMfState expl{ens, ens};
    KineticEnsemble doi = ens;

    auto record = [&](int step) {
        traj.times.push_back(step * grid.dt);
        traj.doi.push_back(doi);
        traj.explicit_corrected.push_back(expl.corrected);
        const EffectiveVelocityField probe = solve_velocity_field(doi, kinetic_params, flow, cfg.fixed_point);
        traj.fixed_point_max_iterations = std::max(traj.fixed_point_max_iterations, probe.iterations());
    };

    std::size_t next_output = 0;
    if (grid.output_steps[next_output] == 0) {
        record(0);
        ++next_output;
    }
    for (int s = 1; s <= grid.n_steps; ++s) {
        doi = kinetic_step(doi, kinetic_params, flow, cfg.fixed_point, grid.dt, cfg.resolve);
        expl = explicit_mf_step(expl, kinetic_params, flow, grid.dt, cfg.resolve);
        if (next_output < grid.output_steps.size() && grid.output_steps[next_output] == s) {
            record(s);
            ++next_output;
        }
    }
    traj.seconds = seconds_since(t0);
    return traj;
}

namespace {

double cloud_distance(const Cloud &a, const Cloud &b, double p) {
    const CostSpec cost = CostSpec::spatial(p);
    if (a.size() <= 2048)
        return wasserstein_exact(a, b, cost).value;
    return wasserstein_sinkhorn(a, b, cost, 0.01, 5000).value;
}

} // namespace

CompareReport run_compare(const ExperimentConfig &cfg) { return run_compare(cfg, run_kinetic_trajectory(cfg)); }

CompareReport run_compare(const ExperimentConfig &cfg, const KineticTrajectory &kinetic) {
    cfg.validate();
    const SuspensionParams params = cfg.make_params();
    const BackgroundFlow flow = cfg.make_flow();
    const TimeGrid grid = make_grid(cfg);

    if (kinetic.times.size() != grid.output_steps.size())
        throw ValidationError("kinetic trajectory does not match the configured time grid");

    CompareReport report;
    report.mf_gap = kinetic.mf_gap;
    report.fixed_point_max_iterations = kinetic.fixed_point_max_iterations;
    report.seconds_kinetic = kinetic.seconds;

    // particle trajectories for both expansion orders
    auto tp = std::chrono::steady_clock::now();
    const SuspensionState initial_state = sample_particles(cfg, params);
    std::vector<SuspensionState> zero_snaps, first_snaps;
    for (ExpansionOrder order : {ExpansionOrder::ZeroOrder, ExpansionOrder::FirstOrder}) {
        auto &snaps = order == ExpansionOrder::ZeroOrder ? zero_snaps : first_snaps;
        SuspensionState state = initial_state;
        std::size_t next_output = 0;
        if (grid.output_steps[next_output] == 0) {
            snaps.push_back(state);
            ++next_output;
        }
        for (int s = 1; s <= grid.n_steps; ++s) {
            try {
                state = step(state, params, flow, order, grid.dt);
            } catch (const SeparationGuardError &e) {
                throw SeparationGuardError(e.min_separation, e.threshold,
                                           "at t = " + format_double(state.time) + " (order " +
                                               (order == ExpansionOrder::ZeroOrder ? "zero)" : "first)"));
            }
            if (next_output < grid.output_steps.size() && grid.output_steps[next_output] == s) {
                snaps.push_back(state);
                ++next_output;
            }
        }
    }
    report.seconds_particles = seconds_since(tp);

    // Wasserstein time series
    tp = std::chrono::steady_clock::now();
    for (std::size_t oi = 0; oi < grid.output_steps.size(); ++oi) {
        const double t = kinetic.times[oi];
        for (const char *metric : {"W1", "W2"}) {
            const double p = metric[1] == '1' ? 1.0 : 2.0;
            for (const char *order : {"zero", "first"}) {
                const auto &snaps = order[0] == 'z' ? zero_snaps : first_snaps;
                Cloud particles;
                particles.points = snaps[oi].positions;
                for (const char *mode : {"doi", "explicit"}) {
                    const auto &ens = mode[0] == 'd' ? kinetic.doi[oi] : kinetic.explicit_corrected[oi];
                    const Cloud sample =
                        resample_positions(ens, params.n_particles, mix_seed(cfg.seed, 0x72650000 + 16 * oi + (mode[0] == 'd' ? 0 : 1)));
                    report.rows.push_back({t, metric, order, mode, cloud_distance(particles, sample, p)});
                }
            }
        }
    }
    report.seconds_metrics = seconds_since(tp);

    for (const auto &r : report.rows)
        if (r.t == 0.0 && r.order == std::string("first") && r.mode == std::string("doi")) {
            if (r.metric == std::string("W1"))
                report.initial_offset_w1 = r.value;
            else
                report.initial_offset_w2 = r.value;
        }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_text(std::filesystem::path(cfg.out_dir) / "compare.csv", report.csv());
        json j;
        j["schema_version"] = 1;
        j["kind"] = "compare";
        j["params"] = params_json(cfg, params);
        j["initial_offset_w1"] = report.initial_offset_w1;
        j["initial_offset_w2"] = report.initial_offset_w2;
        j["mf_gap"] = report.mf_gap;
        j["fixed_point_max_iterations"] = report.fixed_point_max_iterations;
        j["timings"] = {{"particles", report.seconds_particles},
                        {"kinetic", report.seconds_kinetic},
                        {"metrics", report.seconds_metrics}};
        write_text(std::filesystem::path(cfg.out_dir) / "summary.json", j.dump(2) + "\n");
        write_text(std::filesystem::path(cfg.out_dir) / "config.ini", cfg.to_config().serialize());
    }
    return report;
}

// ---------------------------------------------------------------------------
// sweep

std::string SweepReport::csv() const {
    std::string out = "parameter,ok,value\n";
    for (const auto &p : points)
        out += format_double(p.parameter) + "," + (p.ok ? "1" : "0") + "," + format_double(p.value) + "\n";
    return out;
}

SweepReport run_sweep(const ExperimentConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const bool lambda_sweep = cfg.sweep_metric == "mf_gap";
    const std::vector<double> &values = lambda_sweep ? cfg.sweep_lambdas : cfg.sweep_particles;
    if (values.size() < 3)
        throw ValidationError("sweep requires at least 3 points in " +
                              std::string(lambda_sweep ? "sweep.lambda_list" : "sweep.particles_list"));

    SweepReport report;
    std::optional<KineticTrajectory> shared;
    if (!lambda_sweep)
        shared = run_kinetic_trajectory(cfg);

    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepPoint point;
        point.parameter = values[i];
        ExperimentConfig pt = cfg;
        if (!pt.out_dir.empty())
            pt.out_dir = (std::filesystem::path(cfg.out_dir) / ("point_" + std::to_string(i))).string();
        try {
            if (lambda_sweep) {
                pt.volume_fraction = values[i];
                const SuspensionParams params = pt.make_params();
                const BackgroundFlow flow = pt.make_flow();
                KineticEnsemble ens = sample_initial(pt.initial, pt.ensemble_size, mix_seed(pt.seed, 0x6b696e));
                if (pt.smoothing > 0.0)
                    ens.smoothing = pt.smoothing;
                point.value = mean_field_gap(ens, params, flow, pt.fixed_point);
            } else {
                pt.n_particles = static_cast<int>(std::llround(values[i]));
                const CompareReport cr = run_compare(pt, *shared);
                double w1_final = 0.0;
                for (const auto &r : cr.rows)
                    if (r.metric == "W1" && r.order == "first" && r.mode == "doi")
                        w1_final = r.value; // rows are time-ordered; keep the last
                point.value = w1_final;
            }
            point.ok = true;
        } catch (const std::exception &e) {
            point.ok = false;
            point.error = e.what();
        }
        report.points.push_back(point);
    }

    std::vector<double> xs, ys;
    for (const auto &p : report.points)
        if (p.ok && p.value > 0.0) {
            xs.push_back(p.parameter);
            ys.push_back(p.value);
        }
    if (xs.size() >= 3)
        report.fit = fit_rate(xs, ys);

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        write_text(std::filesystem::path(cfg.out_dir) / "sweep.csv", report.csv());
        json j;
        j["schema_version"] = 1;
        j["kind"] = "sweep";
        j["metric"] = cfg.sweep_metric;
        j["points"] = json::array();
        for (const auto &p : report.points) {
            json pj;
            pj["parameter"] = p.parameter;
            pj["ok"] = p.ok;
            pj["value"] = p.value;
            if (!p.error.empty())
                pj["error"] = p.error;
            j["points"].push_back(pj);
        }
        if (report.fit) {
            j["fit"] = {{"slope", report.fit->slope},
                        {"intercept", report.fit->intercept},
                        {"residual", report.fit->residual}};
        }
        j["seconds"] = seconds_since(t0);
        write_text(std::filesystem::path(cfg.out_dir) / "sweep_summary.json", j.dump(2) + "\n");
    }
    return report;
}

} // namespace stokesim
