// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criteria that drive the command-line surface receive
// the binary path as argv[1].

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "igeh/io.hpp"

using namespace igeh;
using correlation::Battery;
using correlation::TestFunction;
using model::Block;
using model::MacroPoint;
using model::MicroPoint;
using model::ModelConfig;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string g_cli;
int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!pass) ++g_failures;
}

std::string run_cli_capture(const std::string& args, int& exit_code) {
  const std::string out = "/tmp/igeh_acc_out.txt";
  const std::string cmd = "'" + g_cli + "' " + args + " > " + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string write_tmp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/igeh_acc_" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

Battery covariance_battery() {
  return {TestFunction::identity(1), TestFunction::identity(2), TestFunction::one(3),
          TestFunction::one(4)};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// ---------------------------------------------------------------------------

void criterion_1_curvature() {
  bool ok = true;
  std::ostringstream detail;

  const auto model0 = write_tmp("c1_goe.json", R"({"mu":0,"sigma":1,"Sigma":1,"r":0})");
  int code = 0;
  const auto rep0 = io::json::parse(run_cli_capture("geometry --model " + model0, code));
  const double r_ana = rep0.at("ricci").at("R").get<double>();
  const double r_fd = rep0.at("ricci_fd").at("R").get<double>();
  ok = ok && code == 0 && std::abs(r_ana + 0.5) < 1e-5 && std::abs(r_fd + 0.5) < 1e-5;
  detail << "R(r=0) analytic=" << r_ana << " fd=" << r_fd;

  for (double r : {0.999, -0.999}) {
    std::ostringstream cfg;
    cfg << R"({"mu":0,"sigma":1,"Sigma":1,"r":)" << r << "}";
    const auto path = write_tmp("c1_strong.json", cfg.str());
    const auto rep = io::json::parse(run_cli_capture("geometry --model " + path, code));
    const double want = -0.5 * (1.0 - r * r);
    const double got_a = rep.at("ricci").at("R").get<double>();
    const double got_f = rep.at("ricci_fd").at("R").get<double>();
    ok = ok && code == 0 && std::abs(got_a - want) < 1e-5 && std::abs(got_f - want) < 1e-5;
  }
  detail << ", R(|r|=0.999) ~ -9.995e-4 both paths";
  report(1, "curvature reproduction", ok, detail.str());
}

void criterion_2_metric_oracle() {
  bool ok = true;
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0, 5.0})
    for (double r : {0.0, 0.3, -0.3, 0.9, -0.9}) {
      const MacroPoint theta{0.4, s};
      const ModelConfig cfg{1.2, r, false};
      const auto num = geometry::fisher_metric_numeric(theta, cfg, Block::Bivariate);
      const double denom = s * s * (1.0 - r * r);
      worst = std::max({worst, std::abs(num.g11 - 1.0 / denom),
                        std::abs(num.g22 - 4.0 / denom), std::abs(num.g12)});
    }
  ok = worst < 1e-8;

  // the printed variant is reported alongside and the sigma != 1
  // discrepancy is documented in the report output
  int code = 0;
  const auto model = write_tmp("c2.json", R"({"mu":0,"sigma":2,"Sigma":1,"r":0})");
  const auto rep = io::json::parse(run_cli_capture("geometry --model " + model, code));
  const double lit = rep.at("paper_literal_metric")[0][0].get<double>();
  const double adopted = rep.at("g")[0][0].get<double>();
  ok = ok && code == 0 && std::abs(lit - 0.5) < 1e-12 && std::abs(adopted - 0.25) < 1e-12 &&
       rep.contains("note") && rep.at("metric_variant_max_reldiff").get<double>() > 0.5;

  std::ostringstream detail;
  detail << "max |g_numeric - closed form| = " << worst
         << "; literal variant reported with note";
  report(2, "metric oracle", ok, detail.str());
}

void criterion_3_christoffel() {
  bool ok = true;
  const auto c2 = geometry::christoffel({0.0, 2.0}, {1.0, 0.0, false});
  ok = ok && c2(0, 0, 1) == -0.5 && c2(1, 0, 0) == 0.125 && c2(1, 1, 1) == -0.5;

  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0})
    for (double r : {0.0, 0.6, -0.9}) {
      const auto ana = geometry::christoffel({1.0, s}, {1.0, r, false});
      const auto fd = geometry::christoffel({1.0, s}, {1.0, r, false},
                                            geometry::DerivativeMode::FiniteDifference);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            worst = std::max(worst, std::abs(fd(k, i, j) - ana(k, i, j)));
    }
  ok = ok && worst < 1e-6;

  std::ostringstream detail;
  detail << "sigma=2 exact (-0.5, 0.125, -0.5); max fd deviation = " << worst;
  report(3, "christoffel reproduction", ok, detail.str());
}

void criterion_4_geodesics() {
  const ModelConfig cfg{1.0, 0.0, false};

  const dynamics::GeodesicState mixed{{0.0, 1.0}, {0.6, -0.25}};
  const auto traj = dynamics::integrate_geodesic(mixed, cfg, 5.0, 1e-3);
  const double drift_rate = traj.speed_drift / 5.0;

  const double k = 0.8;
  const dynamics::GeodesicState vertical{{0.0, 1.0}, {0.0, k}};
  const auto vert = dynamics::integrate_geodesic(vertical, cfg, 1.0, 1e-3);
  const double vert_err = std::abs(vert.samples.back().state.theta.sigma - std::exp(k));

  const bool ok = !traj.truncated && drift_rate < 1e-8 && !vert.truncated && vert_err < 1e-8;
  std::ostringstream detail;
  detail << "speed drift/tau = " << drift_rate << ", vertical closed-form error = "
         << vert_err;
  report(4, "geodesic invariants", ok, detail.str());
}

void criterion_5_classification() {
  const MacroPoint theta{0.0, 1.0};
  const ModelConfig cfg{1.0, 0.0, false};
  const auto battery = covariance_battery();
  bool ok = true;
  std::ostringstream detail;

  struct Scenario {
    const char* name;
    dynamics::RSchedule schedule;
    std::vector<double> grid;
    correlation::IgehLevel want;
  };
  const std::vector<Scenario> scenarios = {
      {"constant0", dynamics::RSchedule::constant(0.0), linspace(0.0, 50.0, 1001),
       correlation::IgehLevel::Bernoulli},
      {"expdecay", dynamics::RSchedule::exp_decay(0.8, 1.0), linspace(0.0, 50.0, 1001),
       correlation::IgehLevel::Mixing},
      // oscillation examined over whole periods of sin(2 tau)
      {"dampedosc", dynamics::RSchedule::damped_oscillation(0.5, 2.0, 0.0),
       linspace(0.0, 16.0 * kPi, 2561), correlation::IgehLevel::Ergodic},
  };

  for (const auto& sc : scenarios) {
    const auto series =
        correlation::correlation_series(battery, theta, sc.schedule, sc.grid, cfg);
    // the covariance battery must trace r(tau) Sigma^2 pointwise
    double worst = 0.0;
    for (const auto& e : series.entries)
      worst = std::max(worst,
                       std::abs(e.c - dynamics::schedule_r(sc.schedule, e.tau) *
                                          cfg.Sigma * cfg.Sigma));
    const auto verdict = correlation::classify(series);
    const bool good = verdict.level == sc.want && worst < 1e-8;
    ok = ok && good;
    detail << sc.name << "->" << correlation::to_string(verdict.level)
           << " (series dev " << worst << ") ";
  }
  report(5, "IGEH classification", ok, detail.str());
}

void criterion_6_covariance_value() {
  bool ok = true;
  double worst = 0.0;
  for (double r : {0.1, -0.1, 0.5, -0.5, 0.9, -0.9})
    for (double S : {0.5, 1.0, 2.0}) {
      const MacroPoint theta{0.7, 1.3};
      const ModelConfig cfg{S, r, false};
      const double c = correlation::ig_correlation(covariance_battery(), theta, cfg);
      worst = std::max(worst, std::abs(c - r * S * S));
    }
  ok = worst < 1e-10;
  std::ostringstream detail;
  detail << "max |C - r Sigma^2| = " << worst;
  report(6, "covariance correlation value", ok, detail.str());
}

void criterion_7_f_oracle() {
  std::ostringstream detail;

  // (a) single constant ratio across the stated r set, spread < 1e-3
  const std::vector<double> rset{-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<double> ratios;
  std::vector<distinguishability::FResult> results;
  for (double r : rset) {
    const auto m = distinguishability::f_bruteforce(
        r, distinguishability::Coordinates::Standardized);
    results.push_back(m);
    ratios.push_back(m.f_closed / m.f_bruteforce);
  }
  auto sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[4] + sorted[5]);
  const double spread = (sorted.back() - sorted.front()) / median;
  const bool ratio_ok = spread < 1e-3;
  detail << "ratio spread = " << spread << " (median " << median
         << "; ratio at |r|<=0.7 is 2pi, at |r|=0.9 it is " << ratios.front()
         << " -- the closed form tracks the sup only below the branch point |r| ~ 0.839, "
            "past it the true maximum sits at the origin)";

  // (b) closed-form spot value
  const bool spot_ok = std::abs(distinguishability::f_closed(0.5) - 0.22809) < 1e-4;

  // (c) small-r slope 1/e
  const double slope = distinguishability::f_closed(1e-3) / 1e-3;
  const bool slope_ok = std::abs(slope - 1.0 / 2.718281828459045) < 1e-3;

  // (d) symmetry for both methods
  double asym = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    asym = std::max(asym, std::abs(results[i].f_bruteforce -
                                   results[rset.size() - 1 - i].f_bruteforce));
    asym = std::max(asym, std::abs(results[i].f_closed -
                                   results[rset.size() - 1 - i].f_closed));
  }
  const bool sym_ok = asym < 1e-9;

  detail << "; F(0.5)=" << distinguishability::f_closed(0.5) << " slope=" << slope
         << " max asymmetry=" << asym;
  report(7, "F(p) oracle agreement", ratio_ok && spot_ok && slope_ok && sym_ok,
         detail.str());
}

void criterion_8_fcurve() {
  int code = 0;
  const std::string text =
      run_cli_capture("fcurve --rmin -0.99 --rmax 0.99 -n 199 --method closed", code);
  const auto curve = io::parse_fcurve_csv(text);
  bool ok = code == 0 && curve.size() == 199;

  if (ok) {
    for (std::size_t i = 0; i < curve.size(); ++i)
      ok = ok && std::abs(curve[i].f_closed - curve[curve.size() - 1 - i].f_closed) < 1e-12;
    for (std::size_t i = 100; i + 1 < curve.size(); ++i)
      ok = ok && curve[i + 1].f_closed > curve[i].f_closed;
    ok = ok && std::abs(curve[99].f_closed) < 1e-14; // vanishes at r = 0
    ok = ok && curve.back().f_closed > 12.0;         // divergence onset
  }
  std::ostringstream detail;
  if (!curve.empty())
    detail << "F(0.99) = " << curve.back().f_closed << ", even and monotone in |r|";
  report(8, "curve reproduction (fcurve)", ok, detail.str());
}

void criterion_9_upper_bound() {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  auto random_finite_fn = [&](int var) {
    if (uni(rng) < 0.5)
      return TestFunction::gauss_bump(var, -1.0 + 2.0 * uni(rng), 0.4 + 1.2 * uni(rng));
    const double lo = -2.0 + 2.5 * uni(rng);
    return TestFunction::indicator(var, lo, lo + 0.3 + 2.5 * uni(rng));
  };

  const std::vector<double> rset{-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7};
  std::vector<Battery> batteries;
  for (int b = 0; b < 50; ++b)
    batteries.push_back(Battery{random_finite_fn(1), random_finite_fn(2),
                                random_finite_fn(3), random_finite_fn(4)});

  int product_violations = 0;
  int mixed_violations = 0;
  int checks = 0;
  for (double r : rset) {
    const MacroPoint theta{-0.5 + uni(rng), 0.8 + 0.8 * uni(rng)};
    const ModelConfig cfg{0.8 + 0.8 * uni(rng), r, false};
    // one raw-coordinate maximization per (theta, cfg, r)
    const auto fb = distinguishability::f_bruteforce(
        r, distinguishability::Coordinates::Raw, theta, cfg);
    for (const auto& fs : batteries) {
      double prod_one = 1.0, mixed = 1.0;
      for (int i = 0; i < 4; ++i) prod_one *= fs[i].one_norm();
      for (int i = 0; i < 3; ++i) mixed *= fs[i].sup_norm();
      mixed *= fs[3].one_norm();
      const double c = std::abs(correlation::ig_correlation(fs, theta, cfg));
      ++checks;
      if (c > fb.f_bruteforce * prod_one + 1e-12) ++product_violations;
      if (c > fb.f_bruteforce * mixed + 1e-12) ++mixed_violations;
    }
  }
  const bool ok = product_violations == 0;
  std::ostringstream detail;
  detail << checks << " checks; product-norm bound violations = " << product_violations
         << "; printed mixed-norm combination violations = " << mixed_violations
         << " (informational)";
  report(9, "upper bound", ok, detail.str());
}

void criterion_10_cross_validation() {
  bool ok = true;
  int outside = 0;

  // ten expectation integrands against seeded Monte-Carlo
  {
    const double mean[2] = {0.3, -0.6};
    const double chol[4] = {1.1, 0.0, 0.4, 0.8};
    const auto rule = numerics::gauss_hermite_rule(32);
    std::mt19937_64 rng(777);
    using Fn = std::function<double(double, double)>;
    const std::vector<Fn> fns = {
        [](double x, double y) { return x * y; },
        [](double x, double y) { return x * x; },
        [](double x, double y) { return y * y * x; },
        [](double x, double y) { return std::cos(1.3 * x); },
        [](double x, double y) { return std::sin(x - 0.5 * y); },
        [](double x, double y) { return std::exp(-0.5 * x * x); },
        [](double x, double y) { return 1.0 / (1.0 + y * y); },
        [](double x, double y) { return std::tanh(x + y); },
        [](double x, double y) { return 1.0 / (1.0 + std::exp(-2.0 * x)); },
        [](double x, double y) { return x * x * y * y; },
    };
    for (const auto& f : fns) {
      const double quad = numerics::gaussian_expectation(
          [&](std::span<const double> p) { return f(p[0], p[1]); }, mean, chol, rule);
      double sum = 0.0, sumsq = 0.0;
      const std::size_t n = 1000000;
      std::normal_distribution<double> nd;
      for (std::size_t i = 0; i < n; ++i) {
        const double u = nd(rng), v = nd(rng);
        const double val = f(mean[0] + chol[0] * u, mean[1] + chol[2] * u + chol[3] * v);
        sum += val;
        sumsq += val * val;
      }
      const double mc = sum / n;
      const double se = std::sqrt((sumsq / n - mc * mc) / n);
      if (std::abs(quad - mc) > 3.0 * se) {
        ok = false;
        ++outside;
      }
    }
  }

  // ten random correlation batteries against the model sampler
  {
    std::mt19937_64 rng(888);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto random_fn = [&](int var) -> TestFunction {
      const double pick = uni(rng);
      if (pick < 0.25) return TestFunction::identity(var);
      if (pick < 0.5) return TestFunction::cosine(var, 0.4 + 1.2 * uni(rng));
      if (pick < 0.75)
        return TestFunction::gauss_bump(var, -1.0 + 2.0 * uni(rng), 0.5 + uni(rng));
      const double lo = -1.5 + 2.0 * uni(rng);
      return TestFunction::indicator(var, lo, lo + 0.5 + 1.5 * uni(rng));
    };
    for (int trial = 0; trial < 10; ++trial) {
      const MacroPoint theta{-0.5 + uni(rng), 0.9 + 0.6 * uni(rng)};
      const ModelConfig cfg{0.8 + 0.7 * uni(rng), -0.85 + 1.7 * uni(rng), false};
      const Battery fs{random_fn(1), random_fn(2), random_fn(3), random_fn(4)};
      const double quad = correlation::ig_correlation(fs, theta, cfg, 32);

      const auto draws = model::sample(1000000, theta, cfg, 9000 + trial);
      double sum = 0.0, sumsq = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
      for (const auto& p : draws) {
        const double prod = fs[0](p.h11) * fs[1](p.h22) * fs[2](p.h12) * fs[3](p.h21);
        sum += prod;
        sumsq += prod * prod;
        m1 += fs[0](p.h11);
        m2 += fs[1](p.h22);
        m3 += fs[2](p.h12);
        m4 += fs[3](p.h21);
      }
      const double n = static_cast<double>(draws.size());
      const double joint = sum / n;
      const double se = std::sqrt((sumsq / n - joint * joint) / n);
      const double mc = joint - (m1 / n) * (m2 / n) * (m3 / n) * (m4 / n);
      if (std::abs(quad - mc) > 3.0 * se + 1e-4) {
        ok = false;
        ++outside;
      }
    }
  }

  std::ostringstream detail;
  detail << "20 comparisons at 1e6 samples, " << outside << " outside 3 standard errors";
  report(10, "cross-validation quadrature vs Monte-Carlo", ok, detail.str());
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: igeh_acceptance <path-to-igeh-cli>\n");
    return 64;
  }
  g_cli = argv[1];

  criterion_1_curvature();
  criterion_2_metric_oracle();
  criterion_3_christoffel();
  criterion_4_geodesics();
  criterion_5_classification();
  criterion_6_covariance_value();
  criterion_7_f_oracle();
  criterion_8_fcurve();
  criterion_9_upper_bound();
  criterion_10_cross_validation();

  if (g_failures > 0) {
    std::printf("%d of 10 criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
