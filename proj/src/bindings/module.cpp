#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "igeh/correlation.hpp"
#include "igeh/distinguishability.hpp"
#include "igeh/dynamics.hpp"
#include "igeh/geometry.hpp"
#include "igeh/model.hpp"
#include "igeh/numerics.hpp"

namespace py = pybind11;

using namespace igeh;

namespace {

correlation::Battery battery_from_list(const std::vector<correlation::TestFunction>& fs) {
  if (fs.size() != 4)
    throw std::invalid_argument("battery must contain exactly 4 test functions");
  return {fs[0], fs[1], fs[2], fs[3]};
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Information-geometry toolkit for the 2D correlated Gaussian model";

  py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);

  // ---- model ----------------------------------------------------------
  py::class_<model::MacroPoint>(m, "MacroPoint")
      .def(py::init<double, double>(), py::arg("mu"), py::arg("sigma"))
      .def_readwrite("mu", &model::MacroPoint::mu)
      .def_readwrite("sigma", &model::MacroPoint::sigma)
      .def("__repr__", [](const model::MacroPoint& p) {
        return "MacroPoint(mu=" + std::to_string(p.mu) +
               ", sigma=" + std::to_string(p.sigma) + ")";
      });

  py::class_<model::ModelConfig>(m, "ModelConfig")
      .def(py::init<double, double, bool>(), py::arg("Sigma"), py::arg("r"),
           py::arg("symmetric") = false)
      .def_readwrite("Sigma", &model::ModelConfig::Sigma)
      .def_readwrite("r", &model::ModelConfig::r)
      .def_readwrite("symmetric", &model::ModelConfig::symmetric);

  py::class_<model::MicroPoint>(m, "MicroPoint")
      .def(py::init<double, double, double, double>(), py::arg("h11"), py::arg("h22"),
           py::arg("h12"), py::arg("h21"))
      .def_readwrite("h11", &model::MicroPoint::h11)
      .def_readwrite("h22", &model::MicroPoint::h22)
      .def_readwrite("h12", &model::MicroPoint::h12)
      .def_readwrite("h21", &model::MicroPoint::h21);

  py::enum_<model::Block>(m, "Block")
      .value("BIVARIATE", model::Block::Bivariate)
      .value("FULL", model::Block::Full);

  m.def("joint_density", &model::joint_density, py::arg("x"), py::arg("theta"),
        py::arg("cfg"), "Joint density of the four matrix elements.");
  m.def("marginal_density", &model::marginal_density, py::arg("var"), py::arg("value"),
        py::arg("theta"), py::arg("cfg"),
        "Marginal density of variable 1..4 (h11, h22, h12, h21).");
  m.def(
      "sample",
      [](std::size_t n, const model::MacroPoint& theta, const model::ModelConfig& cfg,
         std::uint64_t seed) {
        const auto draws = model::sample(n, theta, cfg, seed);
        std::vector<std::tuple<double, double, double, double>> out;
        out.reserve(draws.size());
        for (const auto& p : draws) out.emplace_back(p.h11, p.h22, p.h12, p.h21);
        return out;
      },
      py::arg("n"), py::arg("theta"), py::arg("cfg"), py::arg("seed"),
      "Seeded draws as (h11, h22, h12, h21) tuples.");
  m.def(
      "verify_constraints",
      [](const model::MacroPoint& theta, const model::ModelConfig& cfg, double tol,
         int order) {
        const auto rep = model::verify_constraints(theta, cfg, tol, order);
        py::list entries;
        for (const auto& e : rep.entries) {
          py::dict d;
          d["name"] = e.name;
          d["expected"] = e.expected;
          d["actual"] = e.actual;
          d["residual"] = e.residual;
          d["pass"] = e.pass;
          entries.append(d);
        }
        py::dict out;
        out["tolerance"] = rep.tolerance;
        out["all_pass"] = rep.all_pass;
        out["constraints"] = entries;
        return out;
      },
      py::arg("theta"), py::arg("cfg"), py::arg("tol") = 1e-8, py::arg("order") = 24,
      "Moment-constraint residuals as a dict.");
  m.def("score_macro", &model::score_macro, py::arg("x"), py::arg("theta"), py::arg("cfg"),
        py::arg("block") = model::Block::Bivariate,
        "(d/dmu, d/dsigma) of the log density restricted to a block.");

  // ---- geometry -------------------------------------------------------
  py::class_<geometry::MetricTensor>(m, "MetricTensor")
      .def_readonly("g11", &geometry::MetricTensor::g11)
      .def_readonly("g12", &geometry::MetricTensor::g12)
      .def_readonly("g22", &geometry::MetricTensor::g22)
      .def("det", &geometry::MetricTensor::det)
      .def("positive_definite", &geometry::MetricTensor::positive_definite);

  py::class_<geometry::Christoffel>(m, "Christoffel")
      .def("__call__", &geometry::Christoffel::operator(), py::arg("k"), py::arg("i"),
           py::arg("j"));

  py::class_<geometry::CurvatureReport>(m, "CurvatureReport")
      .def_readonly("R11", &geometry::CurvatureReport::R11)
      .def_readonly("R22", &geometry::CurvatureReport::R22)
      .def_readonly("R12", &geometry::CurvatureReport::R12)
      .def_readonly("R", &geometry::CurvatureReport::R);

  py::enum_<geometry::DerivativeMode>(m, "DerivativeMode")
      .value("ANALYTIC", geometry::DerivativeMode::Analytic)
      .value("FINITE_DIFFERENCE", geometry::DerivativeMode::FiniteDifference);

  m.def("fisher_metric_numeric", &geometry::fisher_metric_numeric, py::arg("theta"),
        py::arg("cfg"), py::arg("block") = model::Block::Bivariate, py::arg("order") = 32,
        "Fisher-Rao metric by Gauss-Hermite quadrature of the score.");
  m.def("fisher_metric_analytic", &geometry::fisher_metric_analytic, py::arg("theta"),
        py::arg("cfg"), "Closed-form metric diag(1, 4)/(sigma^2 (1-r^2)).");
  m.def("christoffel", &geometry::christoffel, py::arg("theta"), py::arg("cfg"),
        py::arg("mode") = geometry::DerivativeMode::Analytic);
  m.def("ricci", &geometry::ricci, py::arg("theta"), py::arg("cfg"),
        py::arg("mode") = geometry::DerivativeMode::Analytic,
        "Ricci tensor and scalar curvature R = -(1-r^2)/2.");

  // ---- dynamics -------------------------------------------------------
  py::class_<dynamics::GeodesicState>(m, "GeodesicState")
      .def(py::init([](const model::MacroPoint& theta, double mu_dot, double sigma_dot) {
             return dynamics::GeodesicState{theta, {mu_dot, sigma_dot}};
           }),
           py::arg("theta"), py::arg("mu_dot"), py::arg("sigma_dot"))
      .def_readonly("theta", &dynamics::GeodesicState::theta)
      .def_property_readonly("mu_dot",
                             [](const dynamics::GeodesicState& s) { return s.velocity[0]; })
      .def_property_readonly("sigma_dot", [](const dynamics::GeodesicState& s) {
        return s.velocity[1];
      });

  py::class_<dynamics::TrajectorySample>(m, "TrajectorySample")
      .def_readonly("tau", &dynamics::TrajectorySample::tau)
      .def_readonly("state", &dynamics::TrajectorySample::state)
      .def_readonly("speed", &dynamics::TrajectorySample::speed);

  py::class_<dynamics::Trajectory>(m, "Trajectory")
      .def_readonly("samples", &dynamics::Trajectory::samples)
      .def_readonly("truncated", &dynamics::Trajectory::truncated)
      .def_readonly("speed_drift", &dynamics::Trajectory::speed_drift);

  py::class_<dynamics::RSchedule>(m, "RSchedule")
      .def_static("constant", &dynamics::RSchedule::constant, py::arg("r0"))
      .def_static("exp_decay", &dynamics::RSchedule::exp_decay, py::arg("r0"),
                  py::arg("decay"))
      .def_static("damped_oscillation", &dynamics::RSchedule::damped_oscillation,
                  py::arg("r0"), py::arg("alpha"), py::arg("decay") = 0.0)
      .def("name", &dynamics::RSchedule::name);

  m.def("geodesic_rhs", &dynamics::geodesic_rhs, py::arg("state"), py::arg("cfg"));
  m.def("integrate_geodesic", &dynamics::integrate_geodesic, py::arg("initial"),
        py::arg("cfg"), py::arg("tau_max"), py::arg("h") = 1e-3,
        "RK4 geodesic with conserved-speed diagnostics.");
  m.def("schedule_r", &dynamics::schedule_r, py::arg("schedule"), py::arg("tau"));

  // ---- correlation ----------------------------------------------------
  py::class_<correlation::TestFunction>(m, "TestFunction")
      .def_static("identity", &correlation::TestFunction::identity, py::arg("var"))
      .def_static("cosine", &correlation::TestFunction::cosine, py::arg("var"),
                  py::arg("omega"))
      .def_static("gauss_bump", &correlation::TestFunction::gauss_bump, py::arg("var"),
                  py::arg("center"), py::arg("width"))
      .def_static("indicator", &correlation::TestFunction::indicator, py::arg("var"),
                  py::arg("lo"), py::arg("hi"))
      .def_static("one", &correlation::TestFunction::one, py::arg("var"))
      .def("__call__", &correlation::TestFunction::operator(), py::arg("x"))
      .def("one_norm", &correlation::TestFunction::one_norm)
      .def("sup_norm", &correlation::TestFunction::sup_norm)
      .def("describe", &correlation::TestFunction::describe);

  py::class_<correlation::CorrelationEntry>(m, "CorrelationEntry")
      .def_readonly("tau", &correlation::CorrelationEntry::tau)
      .def_readonly("r", &correlation::CorrelationEntry::r)
      .def_readonly("C", &correlation::CorrelationEntry::c);

  py::class_<correlation::CorrelationSeries>(m, "CorrelationSeries")
      .def_readonly("entries", &correlation::CorrelationSeries::entries)
      .def_readonly("battery_id", &correlation::CorrelationSeries::battery_id);

  py::enum_<correlation::IgehLevel>(m, "IgehLevel")
      .value("BERNOULLI", correlation::IgehLevel::Bernoulli)
      .value("MIXING", correlation::IgehLevel::Mixing)
      .value("ERGODIC", correlation::IgehLevel::Ergodic)
      .value("UNCLASSIFIED", correlation::IgehLevel::Unclassified);

  py::class_<correlation::ClassifyOptions>(m, "ClassifyOptions")
      .def(py::init<>())
      .def_readwrite("eps_bernoulli", &correlation::ClassifyOptions::eps_bernoulli)
      .def_readwrite("eps_mixing", &correlation::ClassifyOptions::eps_mixing)
      .def_readwrite("eps_ergodic", &correlation::ClassifyOptions::eps_ergodic)
      .def_readwrite("tail_fraction", &correlation::ClassifyOptions::tail_fraction);

  py::class_<correlation::IgehVerdict>(m, "IgehVerdict")
      .def_readonly("level", &correlation::IgehVerdict::level)
      .def_readonly("max_abs_C", &correlation::IgehVerdict::max_abs_c)
      .def_readonly("tail_max_abs_C", &correlation::IgehVerdict::tail_max_abs_c)
      .def_readonly("time_avg", &correlation::IgehVerdict::time_avg)
      .def_readonly("time_avg_quarter", &correlation::IgehVerdict::time_avg_quarter)
      .def("__repr__", [](const correlation::IgehVerdict& v) {
        return "IgehVerdict(" + correlation::to_string(v.level) + ")";
      });

  m.def(
      "ig_correlation",
      [](const std::vector<correlation::TestFunction>& fs, const model::MacroPoint& theta,
         const model::ModelConfig& cfg, int order) {
        return correlation::ig_correlation(battery_from_list(fs), theta, cfg, order);
      },
      py::arg("battery"), py::arg("theta"), py::arg("cfg"), py::arg("order") = 16,
      "IG correlation of a 4-function battery at a macro point.");
  m.def(
      "correlation_series",
      [](const std::vector<correlation::TestFunction>& fs, const model::MacroPoint& theta,
         const dynamics::RSchedule& schedule, const std::vector<double>& tau_grid,
         const model::ModelConfig& cfg, int order) {
        return correlation::correlation_series(battery_from_list(fs), theta, schedule,
                                               tau_grid, cfg, order);
      },
      py::arg("battery"), py::arg("theta"), py::arg("schedule"), py::arg("tau_grid"),
      py::arg("cfg"), py::arg("order") = 16,
      "C(tau) with r following the schedule at fixed theta.");
  m.def(
      "correlation_series_path",
      [](const std::vector<correlation::TestFunction>& fs, const py::function& theta_fn,
         const dynamics::RSchedule& schedule, const std::vector<double>& tau_grid,
         const model::ModelConfig& cfg, int order) {
        correlation::ThetaPath path = [theta_fn](double tau) {
          return theta_fn(tau).cast<model::MacroPoint>();
        };
        return correlation::correlation_series(battery_from_list(fs), path, schedule,
                                               tau_grid, cfg, order);
      },
      py::arg("battery"), py::arg("theta_fn"), py::arg("schedule"), py::arg("tau_grid"),
      py::arg("cfg"), py::arg("order") = 16,
      "C(tau) with theta supplied by a callable tau -> MacroPoint.");
  m.def(
      "trajectory_path_series",
      [](const std::vector<correlation::TestFunction>& fs, const dynamics::Trajectory& traj,
         const dynamics::RSchedule& schedule, const std::vector<double>& tau_grid,
         const model::ModelConfig& cfg, int order) {
        return correlation::correlation_series(battery_from_list(fs),
                                               correlation::trajectory_path(traj), schedule,
                                               tau_grid, cfg, order);
      },
      py::arg("battery"), py::arg("trajectory"), py::arg("schedule"), py::arg("tau_grid"),
      py::arg("cfg"), py::arg("order") = 16,
      "C(tau) with theta following an integrated geodesic.");
  m.def("time_average", &correlation::time_average, py::arg("series"), py::arg("T"));
  m.def("classify", &correlation::classify, py::arg("series"),
        py::arg("options") = correlation::ClassifyOptions{},
        "Bernoulli / mixing / ergodic / unclassified verdict for a series.");

  // ---- distinguishability ---------------------------------------------
  py::enum_<distinguishability::Coordinates>(m, "Coordinates")
      .value("STANDARDIZED", distinguishability::Coordinates::Standardized)
      .value("RAW", distinguishability::Coordinates::Raw);

  py::class_<distinguishability::FResult>(m, "FResult")
      .def_readonly("r", &distinguishability::FResult::r)
      .def_readonly("f_bruteforce", &distinguishability::FResult::f_bruteforce)
      .def_readonly("f_closed", &distinguishability::FResult::f_closed)
      .def_readonly("convention_ratio", &distinguishability::FResult::convention_ratio)
      .def_readonly("argmax", &distinguishability::FResult::argmax);

  py::class_<distinguishability::BoundReport>(m, "BoundReport")
      .def_readonly("battery_id", &distinguishability::BoundReport::battery_id)
      .def_readonly("r", &distinguishability::BoundReport::r)
      .def_readonly("abs_C", &distinguishability::BoundReport::abs_c)
      .def_readonly("bound_product_norms",
                    &distinguishability::BoundReport::bound_product_norms)
      .def_readonly("bound_mixed_norms",
                    &distinguishability::BoundReport::bound_mixed_norms)
      .def_readonly("product_norms_ok", &distinguishability::BoundReport::product_norms_ok)
      .def_readonly("mixed_norms_ok", &distinguishability::BoundReport::mixed_norms_ok);

  m.attr("BRANCH_POINT") = distinguishability::kBranchPoint;
  m.def("f_closed", &distinguishability::f_closed, py::arg("r"),
        "Closed form of the distinguishability measure.");
  m.def("f_bruteforce", &distinguishability::f_bruteforce, py::arg("r"),
        py::arg("coords") = distinguishability::Coordinates::Standardized,
        py::arg("theta") = model::MacroPoint{0.0, 1.0},
        py::arg("cfg") = model::ModelConfig{1.0, 0.0, false},
        py::arg("grid_resolution") = 1201, py::arg("refine_iterations") = 60,
        "Grid + golden-section maximization of the density difference.");
  m.def(
      "f_curve",
      [](double r_min, double r_max, int n, const std::string& method) {
        using distinguishability::CurveMethod;
        CurveMethod cm = CurveMethod::Closed;
        if (method == "bruteforce") cm = CurveMethod::BruteForce;
        else if (method == "both") cm = CurveMethod::Both;
        else if (method != "closed")
          throw std::invalid_argument("method must be closed|bruteforce|both");
        return distinguishability::f_curve(r_min, r_max, n, cm);
      },
      py::arg("r_min") = -0.99, py::arg("r_max") = 0.99, py::arg("n") = 199,
      py::arg("method") = "closed");
  m.def(
      "bound_check",
      [](const std::vector<correlation::TestFunction>& fs, const model::MacroPoint& theta,
         const model::ModelConfig& cfg, const std::vector<double>& r_grid) {
        return distinguishability::bound_check(battery_from_list(fs), theta, cfg, r_grid);
      },
      py::arg("battery"), py::arg("theta"), py::arg("cfg"), py::arg("r_grid"),
      "Checks |C| against the F-based norm bounds.");
}
