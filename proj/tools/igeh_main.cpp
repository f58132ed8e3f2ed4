#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "igeh/io.hpp"

namespace {

using igeh::io::json;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path == "-") {
    std::cout << content;
    return;
  }
  igeh::io::write_file_atomic(out_path, content);
}

std::vector<double> tau_grid(double tau_max, double dt) {
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau-max must be positive");
  if (!(dt > 0.0) || dt > tau_max) throw std::invalid_argument("dt must be in (0, tau-max]");
  std::vector<double> grid;
  const long n = std::lround(std::floor(tau_max / dt + 1e-9));
  grid.reserve(n + 2);
  for (long i = 0; i <= n; ++i) grid.push_back(i * dt);
  if (grid.back() < tau_max - 1e-12 * tau_max) grid.push_back(tau_max);
  return grid;
}

struct CommonModel {
  std::string model_path;
  std::string out_path = "-";

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_path, "Model JSON file (mu, sigma, Sigma, r[, symmetric])")
        ->required();
    cmd->add_option("-o,--out", out_path, "Output path ('-' for stdout)");
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-geometry toolkit for the 2D correlated Gaussian model:\n"
               "Fisher-Rao geometry, geodesics, IG correlation and ergodic-hierarchy\n"
               "classification, and the distinguishability measure F."};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for sampling-backed checks (commands are "
                                 "deterministic; recorded for reproducibility)");

  // geometry
  auto* geo = app.add_subcommand("geometry", "Metric, connection and curvature report (JSON)");
  CommonModel geo_common;
  geo_common.attach(geo);
  std::string geo_block = "bivariate";
  int geo_order = 32;
  geo->add_option("--block", geo_block, "Microvariable block: bivariate | full")
      ->check(CLI::IsMember({"bivariate", "full"}));
  geo->add_option("--order", geo_order, "Quadrature order per axis")->check(CLI::Range(2, 128));

  // verify-constraints
  auto* ver = app.add_subcommand("verify-constraints",
                                 "Check the moment constraints and normalization (JSON)");
  CommonModel ver_common;
  ver_common.attach(ver);
  double ver_tol = 1e-8;
  int ver_order = 24;
  ver->add_option("--tol", ver_tol, "Pass/fail tolerance on each residual");
  ver->add_option("--order", ver_order, "Quadrature order per axis")->check(CLI::Range(4, 64));

  // geodesic
  auto* geod = app.add_subcommand("geodesic", "Integrate a geodesic (CSV)");
  CommonModel geod_common;
  geod_common.attach(geod);
  std::vector<double> v0{0.0, 0.0};
  double geod_tau_max = 1.0, geod_h = 1e-3;
  geod->add_option("--v0", v0, "Initial velocity (mu_dot sigma_dot)")->expected(2);
  geod->add_option("--tau-max", geod_tau_max, "Integration horizon");
  geod->add_option("--step", geod_h, "RK4 step");

  // correlate
  auto* corr = app.add_subcommand("correlate", "IG correlation series along a schedule (CSV)");
  CommonModel corr_common;
  corr_common.attach(corr);
  std::string corr_schedule, corr_battery;
  double corr_tau_max = 50.0, corr_dt = 0.05;
  int corr_order = 16;
  corr->add_option("--schedule", corr_schedule, "Schedule JSON file")->required();
  corr->add_option("--battery", corr_battery, "Battery JSON file (4 test functions)")->required();
  corr->add_option("--tau-max", corr_tau_max, "Series horizon");
  corr->add_option("--dt", corr_dt, "Grid spacing");
  corr->add_option("--order", corr_order, "Quadrature order per axis")->check(CLI::Range(4, 64));

  // classify
  auto* cls = app.add_subcommand("classify", "Classify the correlation decay (verdict JSON)");
  CommonModel cls_common;
  cls_common.attach(cls);
  std::string cls_schedule, cls_battery, cls_series_out;
  double cls_tau_max = 50.0, cls_dt = 0.05;
  int cls_order = 16;
  igeh::correlation::ClassifyOptions cls_opts;
  cls->add_option("--schedule", cls_schedule, "Schedule JSON file")->required();
  cls->add_option("--battery", cls_battery, "Battery JSON file (4 test functions)")->required();
  cls->add_option("--series-out", cls_series_out, "Where to write the series CSV");
  cls->add_option("--tau-max", cls_tau_max, "Series horizon");
  cls->add_option("--dt", cls_dt, "Grid spacing");
  cls->add_option("--order", cls_order, "Quadrature order per axis")->check(CLI::Range(4, 64));
  cls->add_option("--eps-bernoulli", cls_opts.eps_bernoulli, "Bernoulli tolerance on max |C|");
  cls->add_option("--eps-mixing", cls_opts.eps_mixing, "Mixing tolerance on the tail max");
  cls->add_option("--eps-ergodic", cls_opts.eps_ergodic, "Ergodic tolerance on the time average");
  cls->add_option("--tail-fraction", cls_opts.tail_fraction, "Tail window fraction");

  // fcurve
  auto* fc = app.add_subcommand("fcurve", "Distinguishability curve F(r) (CSV)");
  std::string fc_out = "-";
  double fc_rmin = -0.99, fc_rmax = 0.99;
  int fc_n = 199;
  std::string fc_method = "closed";
  fc->add_option("-o,--out", fc_out, "Output path ('-' for stdout)");
  fc->add_option("--rmin", fc_rmin, "Lower end of the r range");
  fc->add_option("--rmax", fc_rmax, "Upper end of the r range");
  fc->add_option("-n,--points", fc_n, "Number of samples");
  fc->add_option("--method", fc_method, "closed | bruteforce | both")
      ->check(CLI::IsMember({"closed", "bruteforce", "both"}));

  // bound-check
  auto* bc = app.add_subcommand("bound-check",
                                "Check |C| against the F-based bounds (JSON)");
  CommonModel bc_common;
  bc_common.attach(bc);
  std::string bc_battery;
  std::vector<double> bc_rs{-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
  bc->add_option("--battery", bc_battery, "Battery JSON file (finite-norm functions)")
      ->required();
  bc->add_option("--r", bc_rs, "Correlation values to test");

  // let global options (--seed) appear after the subcommand too
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*geo) {
      const auto spec = igeh::io::parse_model_file(geo_common.model_path);
      const auto block = geo_block == "full" ? igeh::model::Block::Full
                                             : igeh::model::Block::Bivariate;
      emit(geo_common.out_path,
           igeh::io::geometry_report(spec, block, geo_order).dump(2) + "\n");
    } else if (*ver) {
      const auto spec = igeh::io::parse_model_file(ver_common.model_path);
      if (!(ver_tol > 0.0)) throw std::invalid_argument("tol must be positive");
      const auto rep = igeh::model::verify_constraints(spec.theta, spec.cfg, ver_tol, ver_order);
      emit(ver_common.out_path, igeh::io::constraint_report_to_json(rep).dump(2) + "\n");
    } else if (*geod) {
      const auto spec = igeh::io::parse_model_file(geod_common.model_path);
      igeh::dynamics::GeodesicState init{spec.theta, {v0[0], v0[1]}};
      const auto traj = igeh::dynamics::integrate_geodesic(init, spec.cfg, geod_tau_max, geod_h);
      emit(geod_common.out_path, igeh::io::trajectory_csv(traj));
    } else if (*corr) {
      const auto spec = igeh::io::parse_model_file(corr_common.model_path);
      const auto schedule = igeh::io::parse_schedule_file(corr_schedule);
      const auto battery = igeh::io::parse_battery_file(corr_battery);
      const auto grid = tau_grid(corr_tau_max, corr_dt);
      const auto series = igeh::correlation::correlation_series(battery, spec.theta, schedule,
                                                                grid, spec.cfg, corr_order);
      emit(corr_common.out_path, igeh::io::series_csv(series));
    } else if (*cls) {
      const auto spec = igeh::io::parse_model_file(cls_common.model_path);
      const auto schedule = igeh::io::parse_schedule_file(cls_schedule);
      const auto battery = igeh::io::parse_battery_file(cls_battery);
      const auto grid = tau_grid(cls_tau_max, cls_dt);
      const auto series = igeh::correlation::correlation_series(battery, spec.theta, schedule,
                                                                grid, spec.cfg, cls_order);
      const auto verdict = igeh::correlation::classify(series, cls_opts);
      if (!cls_series_out.empty()) emit(cls_series_out, igeh::io::series_csv(series));
      emit(cls_common.out_path, igeh::io::verdict_to_json(verdict).dump(2) + "\n");
    } else if (*fc) {
      using igeh::distinguishability::CurveMethod;
      const auto method = fc_method == "closed"      ? CurveMethod::Closed
                          : fc_method == "bruteforce" ? CurveMethod::BruteForce
                                                      : CurveMethod::Both;
      const auto curve = igeh::distinguishability::f_curve(fc_rmin, fc_rmax, fc_n, method);
      emit(fc_out, igeh::io::fcurve_csv(curve));
      if (method == CurveMethod::Both) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& f : curve) {
          if (!std::isfinite(f.convention_ratio)) continue;
          lo = std::min(lo, f.convention_ratio);
          hi = std::max(hi, f.convention_ratio);
        }
        std::cerr << "convention_ratio: min=" << igeh::io::fmt17(lo)
                  << " max=" << igeh::io::fmt17(hi) << "\n";
      }
    } else if (*bc) {
      const auto spec = igeh::io::parse_model_file(bc_common.model_path);
      const auto battery = igeh::io::parse_battery_file(bc_battery);
      const auto reports = igeh::distinguishability::bound_check(battery, spec.theta, spec.cfg,
                                                                 bc_rs);
      emit(bc_common.out_path, igeh::io::bound_reports_to_json(reports).dump(2) + "\n");
    }
  } catch (const igeh::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
