#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stokesim/errors.hpp"
#include "stokesim/experiment.hpp"
#include "stokesim/parallel.hpp"
#include "stokesim/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace stokesim;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string order;
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

void add_common(CLI::App *cmd, CommonOpts &opts) {
    cmd->add_option("--config", opts.config_path, "INI config file");
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--order", opts.order, "expansion order: zero | first")
        ->check(CLI::IsMember({"zero", "first"}));
    cmd->add_option("--mode", opts.mode, "kinetic mode: doi | explicit")->check(CLI::IsMember({"doi", "explicit"}));
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&opts](const std::uint64_t &v) { opts.seed = v; opts.seed_set = true; }, "master seed");
    cmd->add_option("--threads", opts.threads, "worker threads (0 = hardware)");
}

ExperimentConfig load_config(const CommonOpts &opts) {
    ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig{}
                                                    : ExperimentConfig::from_config(Config::parse_file(opts.config_path));
    if (opts.seed_set)
        cfg.seed = opts.seed;
    if (!opts.out_dir.empty())
        cfg.out_dir = opts.out_dir;
    if (!opts.order.empty())
        cfg.order = opts.order == "zero" ? ExpansionOrder::ZeroOrder : ExpansionOrder::FirstOrder;
    if (!opts.mode.empty())
        cfg.kinetic_mode = opts.mode;
    if (opts.threads > 0)
        set_max_threads(opts.threads);
    return cfg;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + p.string());
    out << text;
}

struct OutputGrid {
    int n_steps;
    double dt;
    std::vector<int> steps;
};

OutputGrid output_grid(const ExperimentConfig &cfg) {
    OutputGrid g;
    g.n_steps = std::max(1, static_cast<int>(std::llround(cfg.t_end / cfg.dt)));
    g.dt = cfg.t_end / g.n_steps;
    const int stride = std::max(1, g.n_steps / std::max(1, cfg.outputs));
    g.steps.push_back(0);
    for (int s = stride; s < g.n_steps; s += stride)
        g.steps.push_back(s);
    g.steps.push_back(g.n_steps);
    return g;
}

void write_manifest(const fs::path &dir, const std::string &kind, const ExperimentConfig &cfg,
                    const std::vector<std::string> &files, double seconds) {
    ordered_json j;
    j["schema_version"] = 1;
    j["kind"] = kind;
    j["seed"] = cfg.seed;
    j["config"] = cfg.to_config().serialize();
    j["files"] = files;
    j["seconds"] = seconds;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
}

int cmd_coeffs(const CommonOpts &opts, int grid) {
    const ExperimentConfig cfg = load_config(opts);
    const Mat3 shear = [] {
        Mat3 h;
        h(0, 1) = 1.0;
        return h;
    }();
    std::ostringstream out;
    out << "theta,phi,rx,ry,rz,sig_axial,sig_shear,rot_rate_shear,act_xx,act_xy,act_xz,act_yy,act_yz,act_zz,"
           "swim_x,swim_y,swim_z\n";
    for (int it = 0; it <= grid; ++it) {
        const double theta = std::numbers::pi * it / grid;
        for (int ip = 0; ip < 2 * grid; ++ip) {
            const double phi = std::numbers::pi * ip / grid;
            const Vec3 r{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
            const Vec3 t = std::abs(r.z) < 0.9 ? cross(r, Vec3{0, 0, 1}).normalized() : cross(r, Vec3{1, 0, 0}).normalized();
            const Mat3 axial = traceless_outer(r, r);
            const Mat3 shear_strain = traceless_sym_outer(r, t);
            const double sig_axial = Mat3::double_dot(axial, stresslet_response(cfg.shape, r, axial));
            const double sig_shear = Mat3::double_dot(shear_strain, stresslet_response(cfg.shape, r, shear_strain));
            const double rot = orientation_velocity(cfg.shape, r, shear).norm();
            const Mat3 act = active_stresslet(cfg.activity, r);
            const Vec3 swim = swim_velocity(cfg.activity, r);
            out << fmt(theta) << ',' << fmt(phi) << ',' << fmt(r.x) << ',' << fmt(r.y) << ',' << fmt(r.z) << ','
                << fmt(sig_axial) << ',' << fmt(sig_shear) << ',' << fmt(rot) << ',' << fmt(act(0, 0)) << ','
                << fmt(act(0, 1)) << ',' << fmt(act(0, 2)) << ',' << fmt(act(1, 1)) << ',' << fmt(act(1, 2)) << ','
                << fmt(act(2, 2)) << ',' << fmt(swim.x) << ',' << fmt(swim.y) << ',' << fmt(swim.z) << "\n";
        }
    }
    if (cfg.out_dir.empty()) {
        std::cout << out.str();
    } else {
        fs::create_directories(cfg.out_dir);
        write_file(fs::path(cfg.out_dir) / "coeffs.csv", out.str());
        std::cout << "wrote " << (fs::path(cfg.out_dir) / "coeffs.csv").string() << "\n";
    }
    return 0;
}

int cmd_simulate(const CommonOpts &opts, const std::string &init_path) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = load_config(opts);
    if (cfg.out_dir.empty())
        cfg.out_dir = "out";

    SuspensionState state;
    if (!init_path.empty()) {
        std::ifstream in(init_path);
        if (!in)
            throw ValidationError("cannot open initial state " + init_path);
        state = read_state_csv(in);
        cfg.n_particles = state.size();
    }
    const SuspensionParams params = cfg.make_params();
    const BackgroundFlow flow = cfg.make_flow();
    if (init_path.empty())
        state = sample_particles(cfg, params);

    const OutputGrid grid = output_grid(cfg);
    fs::create_directories(cfg.out_dir);
    std::vector<std::string> files;
    std::string diag_csv = "t,d_min,alpha0,alpha1,alpha2,v_max,omega_max\n";

    auto emit = [&](int index, int step_no, const SuspensionState &s) {
        char name[64];
        std::snprintf(name, sizeof name, "state_%03d.csv", index);
        std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
        write_state_csv(out, s);
        files.push_back(name);
        const Diagnostics d = diagnostics(s, compute_velocities(s, params, flow, cfg.order));
        diag_csv += fmt(step_no * grid.dt) + "," + fmt(d.min_separation) + "," + fmt(d.interaction_moments[0]) + "," +
                    fmt(d.interaction_moments[1]) + "," + fmt(d.interaction_moments[2]) + "," + fmt(d.max_speed) +
                    "," + fmt(d.max_rotation_rate) + "\n";
    };

    int out_index = 0;
    std::size_t next = 0;
    if (grid.steps[next] == 0) {
        emit(out_index++, 0, state);
        ++next;
    }
    for (int s = 1; s <= grid.n_steps; ++s) {
        state = step(state, params, flow, cfg.order, grid.dt);
        if (next < grid.steps.size() && grid.steps[next] == s) {
            emit(out_index++, s, state);
            ++next;
        }
    }
    write_file(fs::path(cfg.out_dir) / "diagnostics.csv", diag_csv);
    files.push_back("diagnostics.csv");
    write_manifest(cfg.out_dir, "simulate", cfg, files, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::cout << "simulate: " << out_index << " snapshots in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_kinetic(const CommonOpts &opts) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = load_config(opts);
    if (cfg.out_dir.empty())
        cfg.out_dir = "out";
    const SuspensionParams params = SuspensionParams::make(std::max(cfg.n_particles, 1), cfg.volume_fraction,
                                                           cfg.buoyancy, cfg.shape, cfg.activity, cfg.unit_volume);
    const BackgroundFlow flow = cfg.make_flow();
    const OutputGrid grid = output_grid(cfg);

    KineticEnsemble ens = sample_initial(cfg.initial, cfg.ensemble_size, mix_seed(cfg.seed, 0x6b696e));
    if (cfg.smoothing > 0.0)
        ens.smoothing = cfg.smoothing;
    ExplicitMfState expl{ens, ens};
    const bool doi = cfg.kinetic_mode == "doi";

    fs::create_directories(cfg.out_dir);
    std::vector<std::string> files;
    std::string fp_csv = "t,iterations,final_residual\n";
    auto emit = [&](int index, int step_no, const KineticEnsemble &e) {
        char name[64];
        std::snprintf(name, sizeof name, "ensemble_%03d.csv", index);
        std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
        write_ensemble_csv(out, e);
        files.push_back(name);
        if (doi) { // the explicit closure has no fixed point to probe
            const EffectiveVelocityField probe = solve_velocity_field(e, params, flow, cfg.fixed_point);
            const double res = probe.residual_history().empty() ? 0.0 : probe.residual_history().back();
            fp_csv += fmt(step_no * grid.dt) + "," + std::to_string(probe.iterations()) + "," + fmt(res) + "\n";
        }
    };

    int out_index = 0;
    std::size_t next = 0;
    if (grid.steps[next] == 0) {
        emit(out_index++, 0, doi ? ens : expl.corrected);
        ++next;
    }
    for (int s = 1; s <= grid.n_steps; ++s) {
        if (doi)
            ens = kinetic_step(ens, params, flow, cfg.fixed_point, grid.dt, cfg.resolve);
        else
            expl = explicit_mf_step(expl, params, flow, grid.dt, cfg.resolve);
        if (next < grid.steps.size() && grid.steps[next] == s) {
            emit(out_index++, s, doi ? ens : expl.corrected);
            ++next;
        }
    }
    if (doi) {
        write_file(fs::path(cfg.out_dir) / "fixedpoint.csv", fp_csv);
        files.push_back("fixedpoint.csv");
    }
    write_manifest(cfg.out_dir, "kinetic", cfg, files, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::cout << "kinetic(" << cfg.kinetic_mode << "): " << out_index << " snapshots in " << cfg.out_dir << "\n";
    return 0;
}

int cmd_compare(const CommonOpts &opts) {
    const ExperimentConfig cfg = load_config(opts);
    const CompareReport report = run_compare(cfg);
    if (cfg.out_dir.empty())
        std::cout << report.csv();
    else
        std::cout << "compare: " << report.rows.size() << " rows in " << cfg.out_dir << " (mf_gap " << report.mf_gap
                  << ")\n";
    return 0;
}

int cmd_sweep(const CommonOpts &opts) {
    const ExperimentConfig cfg = load_config(opts);
    const SweepReport report = run_sweep(cfg);
    if (cfg.out_dir.empty())
        std::cout << report.csv();
    if (report.fit)
        std::cout << "fit: slope " << report.fit->slope << " intercept " << report.fit->intercept << " residual "
                  << report.fit->residual << "\n";
    else
        std::cout << "fit: skipped (fewer than 3 surviving points)\n";
    return 0;
}

int cmd_fit(const std::string &csv_path, std::vector<double> xs, std::vector<double> ys) {
    if (!csv_path.empty()) {
        std::ifstream in(csv_path);
        if (!in)
            throw ValidationError("cannot open " + csv_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#')
                continue;
            std::istringstream ls(line);
            std::string a, b;
            if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
                continue;
            try {
                const double x = std::stod(a), y = std::stod(b);
                xs.push_back(x);
                ys.push_back(y);
            } catch (const std::exception &) {
                continue; // header
            }
        }
    }
    const RateFit fit = fit_rate(xs, ys);
    ordered_json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residual"] = fit.residual;
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"dilute suspension simulation and mean-field verification toolkit"};
    app.require_subcommand(1);

    CommonOpts coeffs_opts, sim_opts, kin_opts, cmp_opts, sweep_opts;
    int coeffs_grid = 6;
    std::string init_path, fit_csv;
    std::vector<double> fit_xs, fit_ys;

    CLI::App *coeffs = app.add_subcommand("coeffs", "tabulate single-particle coefficient actions");
    add_common(coeffs, coeffs_opts);
    coeffs->add_option("--grid", coeffs_grid, "polar grid refinement")->check(CLI::PositiveNumber);

    CLI::App *simulate = app.add_subcommand("simulate", "run the N-particle dilute dynamics");
    add_common(simulate, sim_opts);
    simulate->add_option("--init", init_path, "initial state CSV (n,x,y,z,rx,ry,rz)");

    CLI::App *kinetic = app.add_subcommand("kinetic", "solve the mean-field kinetic model");
    add_common(kinetic, kin_opts);

    CLI::App *compare = app.add_subcommand("compare", "particle vs kinetic Wasserstein comparison");
    add_common(compare, cmp_opts);

    CLI::App *sweep = app.add_subcommand("sweep", "convergence sweep with rate fit");
    add_common(sweep, sweep_opts);

    CLI::App *fit = app.add_subcommand("fit", "log-log least-squares slope of (x, y) data");
    fit->add_option("--csv", fit_csv, "two-column CSV of x,y values");
    fit->add_option("--xs", fit_xs, "abscissas")->delimiter(',');
    fit->add_option("--ys", fit_ys, "values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed())
            return cmd_coeffs(coeffs_opts, coeffs_grid);
        if (simulate->parsed())
            return cmd_simulate(sim_opts, init_path);
        if (kinetic->parsed())
            return cmd_kinetic(kin_opts);
        if (compare->parsed())
            return cmd_compare(cmp_opts);
        if (sweep->parsed())
            return cmd_sweep(sweep_opts);
        if (fit->parsed())
            return cmd_fit(fit_csv, fit_xs, fit_ys);
    } catch (const SeparationGuardError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ContractionError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
