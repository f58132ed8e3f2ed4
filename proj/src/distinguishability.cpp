#include "igeh/distinguishability.hpp"

#include <cmath>
#include <sstream>

namespace igeh::distinguishability {

using model::MacroPoint;
using model::MicroPoint;
using model::ModelConfig;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(kTwoPi); }

double std_bivariate_pdf(double x, double y, double r) {
  const double omr2 = 1.0 - r * r;
  const double q = (x * x + y * y - 2.0 * r * x * y) / omr2;
  return std::exp(-0.5 * q) / (kTwoPi * std::sqrt(omr2));
}
} // namespace

double f_closed(double r) {
  const double a = std::abs(r);
  if (a >= 1.0)
    throw std::invalid_argument("f_closed: |r| must be below 1 (the measure diverges)");
  if (a == 0.0) return 0.0;
  return a * std::pow(std::sqrt(1.0 - a * a) * (1.0 + a), -1.0 - 1.0 / a);
}

FResult f_bruteforce(double r, Coordinates coords, const MacroPoint& theta,
                     const ModelConfig& cfg_in, int grid_resolution,
                     int refine_iterations) {
  if (std::abs(r) > model::kMaxAbsCorrelation)
    throw std::invalid_argument("f_bruteforce: |r| must be at most 1 - 1e-6");
  theta.validate();
  ModelConfig cfg = cfg_in;
  cfg.r = r;
  cfg.validate();

  FResult res;
  res.r = r;
  res.f_closed = f_closed(r);
  res.convention_ratio = std::numeric_limits<double>::quiet_NaN();

  if (coords == Coordinates::Standardized) {
    numerics::ScalarFn diff = [r](std::span<const double> a) {
      return std::abs(std_bivariate_pdf(a[0], a[1], r) -
                      std_normal_pdf(a[0]) * std_normal_pdf(a[1]));
    };
    const numerics::BoxDomain box({-8.0, -8.0}, {8.0, 8.0});
    const auto m = numerics::maximize(diff, box, grid_resolution, refine_iterations);
    res.f_bruteforce = m.value;
    res.argmax = {m.argmax[0], m.argmax[1]};
    if (res.f_closed > 0.0 && res.f_bruteforce > 0.0)
      res.convention_ratio = res.f_closed / (kTwoPi * res.f_bruteforce);
    return res;
  }

  // Raw coordinates: the literal four-variable difference. The grid has
  // to stay coarse in 4D; the coordinate refinement does the polishing.
  std::array<double, 4> sd{theta.sigma, cfg.Sigma * cfg.Sigma / theta.sigma, theta.sigma,
                           theta.sigma};
  std::array<double, 4> mean{theta.mu, 0.0, 0.0, 0.0};
  numerics::ScalarFn diff = [&](std::span<const double> x) {
    MicroPoint p{x[0], x[1], x[2], x[3]};
    const double joint = model::joint_density(p, theta, cfg);
    const double prod = model::marginal_density(1, x[0], theta, cfg) *
                        model::marginal_density(2, x[1], theta, cfg) *
                        model::marginal_density(3, x[2], theta, cfg) *
                        model::marginal_density(4, x[3], theta, cfg);
    return std::abs(joint - prod);
  };
  std::vector<double> lo(4), hi(4);
  for (int i = 0; i < 4; ++i) {
    lo[i] = mean[i] - 8.0 * sd[i];
    hi[i] = mean[i] + 8.0 * sd[i];
  }
  const int res4 = std::min(grid_resolution, 41);
  const auto m = numerics::maximize(diff, numerics::BoxDomain(lo, hi), res4,
                                    refine_iterations);
  res.f_bruteforce = m.value;
  // report the maximizer of the correlated block in standardized units
  res.argmax = {(m.argmax[0] - theta.mu) / sd[0], m.argmax[1] / sd[1]};
  return res;
}

std::vector<FResult> f_curve(double r_min, double r_max, int n, CurveMethod method) {
  if (!(r_min < r_max) || r_min <= -1.0 || r_max >= 1.0)
    throw std::invalid_argument("f_curve: need -1 < r_min < r_max < 1");
  if (n < 2) throw std::invalid_argument("f_curve: need at least 2 points");

  std::vector<FResult> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double r = r_min + (r_max - r_min) * i / (n - 1);
    if (method == CurveMethod::Closed) {
      FResult fr;
      fr.r = r;
      fr.f_closed = f_closed(r);
      fr.f_bruteforce = std::numeric_limits<double>::quiet_NaN();
      fr.convention_ratio = std::numeric_limits<double>::quiet_NaN();
      fr.argmax = {std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
      out.push_back(fr);
    } else {
      out.push_back(f_bruteforce(r, Coordinates::Standardized));
    }
  }
  return out;
}

std::vector<BoundReport> bound_check(const correlation::Battery& fs,
                                     const MacroPoint& theta, const ModelConfig& cfg_base,
                                     std::span<const double> r_grid, int grid_resolution,
                                     int refine_iterations) {
  // order the battery by variable index and check the norms the bounds use
  std::array<const correlation::TestFunction*, 4> by_var{nullptr, nullptr, nullptr, nullptr};
  for (const auto& f : fs) {
    if (f.var < 1 || f.var > 4)
      throw std::invalid_argument("bound_check: variable index must be 1..4");
    by_var[f.var - 1] = &f;
  }
  for (int i = 0; i < 4; ++i)
    if (by_var[i] == nullptr)
      throw std::invalid_argument("bound_check: battery must cover each microvariable once");
  for (int i = 0; i < 4; ++i)
    if (!std::isfinite(by_var[i]->one_norm()))
      throw std::invalid_argument("bound_check: " + by_var[i]->describe() +
                                  " has an infinite 1-norm");
  for (int i = 0; i < 3; ++i)
    if (!std::isfinite(by_var[i]->sup_norm()))
      throw std::invalid_argument("bound_check: " + by_var[i]->describe() +
                                  " has an infinite sup norm");

  std::ostringstream id;
  for (int i = 0; i < 4; ++i) id << (i ? "," : "") << by_var[i]->describe();

  const double prod_one = by_var[0]->one_norm() * by_var[1]->one_norm() *
                          by_var[2]->one_norm() * by_var[3]->one_norm();
  const double mixed = by_var[0]->sup_norm() * by_var[1]->sup_norm() *
                       by_var[2]->sup_norm() * by_var[3]->one_norm();

  std::vector<BoundReport> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    ModelConfig cfg = cfg_base;
    cfg.r = r;
    cfg.validate();
    const double c = correlation::ig_correlation(fs, theta, cfg);
    const auto fb = f_bruteforce(r, Coordinates::Raw, theta, cfg, grid_resolution,
                                 refine_iterations);
    BoundReport rep;
    rep.battery_id = id.str();
    rep.r = r;
    rep.abs_c = std::abs(c);
    rep.bound_product_norms = fb.f_bruteforce * prod_one;
    rep.bound_mixed_norms = fb.f_bruteforce * mixed;
    // absolute slack covers the r = 0 corner where both sides are pure
    // roundoff on a mathematically exact 0 <= 0
    constexpr double kSlack = 1e-12;
    rep.product_norms_ok = rep.abs_c <= rep.bound_product_norms + kSlack;
    rep.mixed_norms_ok = rep.abs_c <= rep.bound_mixed_norms + kSlack;
    out.push_back(rep);
  }
  return out;
}

} // namespace igeh::distinguishability
