#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stokesim/errors.hpp"
#include "stokesim/experiment.hpp"
#include "stokesim/kernels.hpp"
#include "stokesim/kinetic.hpp"
#include "stokesim/parallel.hpp"
#include "stokesim/particle_model.hpp"
#include "stokesim/rate_fit.hpp"
#include "stokesim/suspension.hpp"
#include "stokesim/transport.hpp"

namespace py = pybind11;
using namespace stokesim;

namespace {

Vec3 to_vec3(py::handle obj) {
    const auto seq = py::cast<std::array<double, 3>>(obj);
    return {seq[0], seq[1], seq[2]};
}

py::array_t<double> from_vec3(const Vec3 &v) {
    py::array_t<double> out(3);
    auto r = out.mutable_unchecked<1>();
    r(0) = v.x;
    r(1) = v.y;
    r(2) = v.z;
    return out;
}

Mat3 to_mat3(py::handle obj) {
    const auto arr = py::cast<py::array_t<double>>(obj);
    if (arr.ndim() != 2 || arr.shape(0) != 3 || arr.shape(1) != 3)
        throw ValidationError("expected a 3x3 array");
    Mat3 m;
    auto r = arr.unchecked<2>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = r(i, j);
    return m;
}

py::array_t<double> from_mat3(const Mat3 &m) {
    py::array_t<double> out({3, 3});
    auto r = out.mutable_unchecked<2>();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = m(i, j);
    return out;
}

std::vector<Vec3> to_vec3_list(py::handle obj) {
    const auto arr = py::cast<py::array_t<double>>(obj);
    if (arr.ndim() != 2 || arr.shape(1) != 3)
        throw ValidationError("expected an (n, 3) array");
    std::vector<Vec3> out(static_cast<std::size_t>(arr.shape(0)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        out[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1), r(i, 2)};
    return out;
}

py::array_t<double> from_vec3_list(const std::vector<Vec3> &v) {
    py::array_t<double> out({static_cast<py::ssize_t>(v.size()), py::ssize_t(3)});
    auto r = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < static_cast<py::ssize_t>(v.size()); ++i) {
        r(i, 0) = v[static_cast<std::size_t>(i)].x;
        r(i, 1) = v[static_cast<std::size_t>(i)].y;
        r(i, 2) = v[static_cast<std::size_t>(i)].z;
    }
    return out;
}

Cloud cloud_from(py::handle pts, py::handle orients) {
    Cloud c;
    c.points = to_vec3_list(pts);
    if (!orients.is_none())
        c.orientations = to_vec3_list(orients);
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "dilute rigid-particle suspensions in Stokes flow: dilute-expansion "
              "particle dynamics, a kinetic mean-field solver, and Wasserstein metrics";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SeparationGuardError>(m, "SeparationGuardError", PyExc_RuntimeError);
    py::register_exception<ContractionError>(m, "ContractionError", PyExc_RuntimeError);

    m.def("set_max_threads", &set_max_threads, py::arg("n"));

    // kernels
    m.def(
        "stokeslet", [](py::handle x) { return from_mat3(stokeslet(to_vec3(x))); }, py::arg("x"),
        "Stokes Green's function G(x) = (Id + xhat xhat^T) / (8 pi |x|)");
    m.def(
        "stokeslet_gradient_apply",
        [](py::handle x, py::handle t) { return from_vec3(stokeslet_gradient_apply(to_vec3(x), to_mat3(t))); },
        py::arg("x"), py::arg("stresslet"), "v_i = (d_k G_ij)(x) T_jk");

    // single-particle coefficient models
    py::class_<ShapeModel>(m, "ShapeModel")
        .def_static("sphere", &ShapeModel::sphere)
        .def_static("slender_fiber", &ShapeModel::slender_fiber, py::arg("alpha1"), py::arg("alpha2"))
        .def_readonly("alpha1", &ShapeModel::alpha1)
        .def_readonly("alpha2", &ShapeModel::alpha2);
    py::class_<ActivityModel>(m, "ActivityModel")
        .def(py::init([](double kappa0, double beta_f, double alpha_f) {
                 ActivityModel a{kappa0, beta_f, alpha_f};
                 a.validate();
                 return a;
             }),
             py::arg("kappa0") = 0.0, py::arg("beta_f") = 0.0, py::arg("alpha_f") = 0.0)
        .def_readonly("kappa0", &ActivityModel::kappa0)
        .def_readonly("beta_f", &ActivityModel::beta_f)
        .def_readonly("alpha_f", &ActivityModel::alpha_f);

    m.def(
        "stresslet_response",
        [](const ShapeModel &s, py::handle r, py::handle e) {
            return from_mat3(stresslet_response(s, to_vec3(r), to_mat3(e)));
        },
        py::arg("shape"), py::arg("axis"), py::arg("strain_rate"));
    m.def(
        "orientation_velocity",
        [](const ShapeModel &s, py::handle r, py::handle h) {
            return from_vec3(orientation_velocity(s, to_vec3(r), to_mat3(h)));
        },
        py::arg("shape"), py::arg("axis"), py::arg("velocity_gradient"));
    m.def(
        "active_stresslet",
        [](const ActivityModel &a, py::handle r) { return from_mat3(active_stresslet(a, to_vec3(r))); },
        py::arg("activity"), py::arg("axis"));
    m.def(
        "swim_velocity", [](const ActivityModel &a, py::handle r) { return from_vec3(swim_velocity(a, to_vec3(r))); },
        py::arg("activity"), py::arg("axis"));

    // ambient flow
    py::class_<BackgroundFlow>(m, "BackgroundFlow")
        .def_static("zero", &BackgroundFlow::zero)
        .def_static(
            "linear", [](py::handle g) { return BackgroundFlow::linear(to_mat3(g)); }, py::arg("gradient"))
        .def_static(
            "regularized_stokeslet",
            [](py::handle c, py::handle f, double w) {
                return BackgroundFlow::regularized_stokeslet(to_vec3(c), to_vec3(f), w);
            },
            py::arg("center"), py::arg("strength"), py::arg("blob_width"))
        .def_static(
            "tabulated",
            [](const std::string &csv) { return BackgroundFlow::tabulated(TabulatedField::from_csv(csv)); },
            py::arg("csv_path"))
        .def(
            "__call__",
            [](const BackgroundFlow &f, py::handle x) {
                const FlowSample s = f(to_vec3(x));
                return py::make_tuple(from_vec3(s.velocity), from_mat3(s.velocity_gradient),
                                      from_vec3(s.force_density));
            },
            py::arg("x"), "returns (velocity, velocity_gradient, force_density)");

    // particle system
    m.def("derive_epsilon", &derive_epsilon, py::arg("n_particles"), py::arg("volume_fraction"),
          py::arg("unit_volume") = unit_ball_volume);
    py::class_<SuspensionParams>(m, "SuspensionParams")
        .def(py::init([](int n, double lam, py::handle e, const ShapeModel &shape, const ActivityModel &act,
                         double unit_volume) {
                 return SuspensionParams::make(n, lam, to_vec3(e), shape, act, unit_volume);
             }),
             py::arg("n_particles"), py::arg("volume_fraction"), py::arg("buoyancy") = py::make_tuple(0.0, 0.0, 0.0),
             py::arg("shape") = ShapeModel::sphere(), py::arg("activity") = ActivityModel{},
             py::arg("unit_volume") = unit_ball_volume)
        .def_readonly("n_particles", &SuspensionParams::n_particles)
        .def_readonly("volume_fraction", &SuspensionParams::volume_fraction)
        .def_readonly("particle_scale", &SuspensionParams::particle_scale);

    py::enum_<ExpansionOrder>(m, "ExpansionOrder")
        .value("ZERO", ExpansionOrder::ZeroOrder)
        .value("FIRST", ExpansionOrder::FirstOrder);

    m.def(
        "compute_velocities",
        [](py::handle positions, py::handle orientations, const SuspensionParams &params, const BackgroundFlow &flow,
           ExpansionOrder order) {
            SuspensionState s;
            s.positions = to_vec3_list(positions);
            s.orientations = to_vec3_list(orientations);
            const ParticleVelocities v = compute_velocities(s, params, flow, order);
            return py::make_tuple(from_vec3_list(v.velocity), from_vec3_list(v.orientation_rate));
        },
        py::arg("positions"), py::arg("orientations"), py::arg("params"), py::arg("flow"),
        py::arg("order") = ExpansionOrder::FirstOrder, "returns (velocities, orientation_rates)");
    m.def(
        "step",
        [](py::handle positions, py::handle orientations, double time, const SuspensionParams &params,
           const BackgroundFlow &flow, ExpansionOrder order, double dt) {
            SuspensionState s;
            s.positions = to_vec3_list(positions);
            s.orientations = to_vec3_list(orientations);
            s.time = time;
            const SuspensionState next = step(s, params, flow, order, dt);
            return py::make_tuple(from_vec3_list(next.positions), from_vec3_list(next.orientations), next.time);
        },
        py::arg("positions"), py::arg("orientations"), py::arg("time"), py::arg("params"), py::arg("flow"),
        py::arg("order"), py::arg("dt"), "one RK4 step; returns (positions, orientations, time)");
    m.def(
        "min_separation",
        [](py::handle positions) {
            SuspensionState s;
            s.positions = to_vec3_list(positions);
            s.orientations.assign(s.positions.size(), Vec3{0, 0, 1});
            return diagnostics(s).min_separation;
        },
        py::arg("positions"));

    // kinetic solver
    py::class_<InitialDensitySpec>(m, "InitialDensitySpec")
        .def(py::init([](const std::string &spatial, py::handle center, double extent, const std::string &orientation,
                         py::handle mean_direction, double concentration, bool low_discrepancy) {
                 InitialDensitySpec spec;
                 if (spatial == "ball")
                     spec.spatial = InitialDensitySpec::Spatial::UniformBall;
                 else if (spatial == "gaussian")
                     spec.spatial = InitialDensitySpec::Spatial::Gaussian;
                 else
                     throw ValidationError("spatial must be 'ball' or 'gaussian'");
                 spec.center = to_vec3(center);
                 spec.extent = extent;
                 if (orientation == "uniform")
                     spec.orientation = InitialDensitySpec::Orientation::Uniform;
                 else if (orientation == "vmf")
                     spec.orientation = InitialDensitySpec::Orientation::VonMisesFisher;
                 else
                     throw ValidationError("orientation must be 'uniform' or 'vmf'");
                 spec.mean_direction = to_vec3(mean_direction);
                 spec.concentration = concentration;
                 spec.low_discrepancy = low_discrepancy;
                 spec.validate();
                 return spec;
             }),
             py::arg("spatial") = "ball", py::arg("center") = py::make_tuple(0.0, 0.0, 0.0), py::arg("extent") = 1.0,
             py::arg("orientation") = "uniform", py::arg("mean_direction") = py::make_tuple(0.0, 0.0, 1.0),
             py::arg("concentration") = 0.0, py::arg("low_discrepancy") = false);

    py::class_<KineticEnsemble>(m, "KineticEnsemble")
        .def_property_readonly("positions", [](const KineticEnsemble &e) { return from_vec3_list(e.positions); })
        .def_property_readonly("orientations",
                               [](const KineticEnsemble &e) { return from_vec3_list(e.orientations); })
        .def_property_readonly("weights",
                               [](const KineticEnsemble &e) {
                                   py::array_t<double> out(static_cast<py::ssize_t>(e.weights.size()));
                                   auto r = out.mutable_unchecked<1>();
                                   for (py::ssize_t k = 0; k < out.shape(0); ++k)
                                       r(k) = e.weights[static_cast<std::size_t>(k)];
                                   return out;
                               })
        .def_readonly("smoothing", &KineticEnsemble::smoothing)
        .def_readonly("time", &KineticEnsemble::time)
        .def("total_weight", &KineticEnsemble::total_weight)
        .def("__len__", &KineticEnsemble::size);

    m.def("sample_initial", &sample_initial, py::arg("spec"), py::arg("count"), py::arg("seed"));

    py::class_<FixedPointConfig>(m, "FixedPointConfig")
        .def(py::init([](double tol, int iters, double relax) {
                 FixedPointConfig c{tol, iters, relax};
                 c.validate();
                 return c;
             }),
             py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 50, py::arg("relaxation") = 1.0);

    py::class_<EffectiveVelocityField>(m, "EffectiveVelocityField")
        .def(
            "__call__",
            [](const EffectiveVelocityField &f, py::handle x) {
                const auto v = f(to_vec3(x));
                return py::make_tuple(from_vec3(v.velocity), from_mat3(v.gradient));
            },
            py::arg("x"), "returns (velocity, velocity_gradient)")
        .def_property_readonly("iterations", &EffectiveVelocityField::iterations)
        .def_property_readonly("residual_history", &EffectiveVelocityField::residual_history);

    m.def("solve_velocity_field", &solve_velocity_field, py::arg("ensemble"), py::arg("params"), py::arg("flow"),
          py::arg("config") = FixedPointConfig{});
    m.def("explicit_mf_velocity", &explicit_mf_velocity, py::arg("baseline"), py::arg("params"), py::arg("flow"));

    py::enum_<ResolveMode>(m, "ResolveMode")
        .value("PER_STAGE", ResolveMode::PerStage)
        .value("FROZEN_PER_STEP", ResolveMode::FrozenPerStep);
    m.def("kinetic_step", &kinetic_step, py::arg("ensemble"), py::arg("params"), py::arg("flow"),
          py::arg("config") = FixedPointConfig{}, py::arg("dt") = 0.01, py::arg("mode") = ResolveMode::PerStage);
    m.def("baseline_step", &baseline_step, py::arg("ensemble"), py::arg("params"), py::arg("flow"), py::arg("dt"));

    // transport metrics
    m.def(
        "wasserstein_exact",
        [](py::handle a_pts, py::handle b_pts, double p, py::handle a_orient, py::handle b_orient) {
            const Cloud a = cloud_from(a_pts, a_orient);
            const Cloud b = cloud_from(b_pts, b_orient);
            const CostSpec cost{p, !a_orient.is_none()};
            const TransportResult r = wasserstein_exact(a, b, cost);
            return py::make_tuple(r.value, r.assignment);
        },
        py::arg("a"), py::arg("b"), py::arg("p") = 2.0, py::arg("a_orientations") = py::none(),
        py::arg("b_orientations") = py::none(), "returns (value, assignment)");
    m.def(
        "wasserstein_bottleneck",
        [](py::handle a_pts, py::handle b_pts, py::handle a_orient, py::handle b_orient) {
            const Cloud a = cloud_from(a_pts, a_orient);
            const Cloud b = cloud_from(b_pts, b_orient);
            const CostSpec cost{std::numeric_limits<double>::infinity(), !a_orient.is_none()};
            const TransportResult r = wasserstein_bottleneck(a, b, cost);
            return py::make_tuple(r.value, r.assignment);
        },
        py::arg("a"), py::arg("b"), py::arg("a_orientations") = py::none(), py::arg("b_orientations") = py::none());
    m.def(
        "wasserstein_sinkhorn",
        [](py::handle a_pts, py::handle b_pts, double p, double reg, int iterations) {
            const Cloud a = cloud_from(a_pts, py::none());
            const Cloud b = cloud_from(b_pts, py::none());
            const TransportResult r = wasserstein_sinkhorn(a, b, CostSpec{p, false}, reg, iterations);
            return r.value;
        },
        py::arg("a"), py::arg("b"), py::arg("p") = 2.0, py::arg("reg") = 0.01, py::arg("iterations") = 200000);

    // harness utilities
    m.def(
        "fit_rate",
        [](const std::vector<double> &xs, const std::vector<double> &ys) {
            const RateFit f = fit_rate(xs, ys);
            return py::make_tuple(f.slope, f.intercept, f.residual);
        },
        py::arg("xs"), py::arg("ys"), "log-log least squares; returns (slope, intercept, residual)");
}
