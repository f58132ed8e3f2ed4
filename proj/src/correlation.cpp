#include "igeh/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace igeh::correlation {

using model::MacroPoint;
using model::ModelConfig;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

TestFunction TestFunction::identity(int var) { return {var, Kind::Identity, 0.0, 0.0}; }

TestFunction TestFunction::cosine(int var, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("TestFunction: omega must be positive");
  return {var, Kind::Cosine, omega, 0.0};
}

TestFunction TestFunction::gauss_bump(int var, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("TestFunction: width must be positive");
  return {var, Kind::GaussBump, center, width};
}

TestFunction TestFunction::indicator(int var, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("TestFunction: indicator needs lo < hi");
  return {var, Kind::Indicator, lo, hi};
}

TestFunction TestFunction::one(int var) { return {var, Kind::One, 0.0, 0.0}; }

double TestFunction::operator()(double x) const {
  switch (kind) {
    case Kind::Identity: return x;
    case Kind::Cosine: return std::cos(a * x);
    case Kind::GaussBump: {
      const double z = (x - a) / b;
      return std::exp(-0.5 * z * z);
    }
    case Kind::Indicator: return (x >= a && x <= b) ? 1.0 : 0.0;
    case Kind::One: return 1.0;
  }
  return 0.0;
}

double TestFunction::one_norm() const {
  switch (kind) {
    case Kind::Identity: return kInf;
    case Kind::Cosine: return kInf;
    case Kind::GaussBump: return b * std::sqrt(2.0 * kPi);
    case Kind::Indicator: return b - a;
    case Kind::One: return kInf;
  }
  return kInf;
}

double TestFunction::sup_norm() const {
  switch (kind) {
    case Kind::Identity: return kInf;
    default: return 1.0;
  }
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os << "f" << var << ":";
  switch (kind) {
    case Kind::Identity: os << "identity"; break;
    case Kind::Cosine: os << "cosine(" << a << ")"; break;
    case Kind::GaussBump: os << "gaussbump(" << a << "," << b << ")"; break;
    case Kind::Indicator: os << "indicator(" << a << "," << b << ")"; break;
    case Kind::One: os << "one"; break;
  }
  return os.str();
}

MicroFunction MicroFunction::from(const TestFunction& f) {
  MicroFunction m;
  m.eval = [f](double x) { return f(x); };
  switch (f.kind) {
    case TestFunction::Kind::GaussBump:
      m.smooth = false;
      m.lo = f.a - 9.0 * f.b;
      m.hi = f.a + 9.0 * f.b;
      m.scale = f.b;
      break;
    case TestFunction::Kind::Indicator:
      m.smooth = false;
      m.lo = f.a;
      m.hi = f.b;
      break;
    default:
      m.smooth = true;
      break;
  }
  return m;
}

double expect_1d(const MicroFunction& f, double mean, double sd, int order) {
  if (!(sd > 0.0)) throw std::invalid_argument("expect_1d: sd must be positive");
  if (f.smooth) {
    static thread_local numerics::QuadratureRule gh;
    if (gh.order != order) gh = numerics::gauss_hermite_rule(order);
    const double sqrt2 = std::sqrt(2.0);
    double sum = 0.0;
    for (int i = 0; i < gh.order; ++i) {
      const double x = mean + sqrt2 * sd * gh.nodes[i];
      const double v = f.eval(x);
      if (!std::isfinite(v))
        throw NumericalDomainError("expect_1d: integrand not finite", {x});
      sum += gh.weights[i] * v;
    }
    return sum / kSqrtPi;
  }
  return numerics::gaussian_weighted_segment(f.eval, mean, sd, f.lo, f.hi,
                                             f.breakpoints, f.scale);
}

namespace {

// E[f1(X) f2(Y)] over the correlated (h11, h22) block by iterated
// quadrature: outer integral over X, inner over Y | X = x which is
// N(r s2 (x - mu)/s1, s2^2 (1 - r^2)).
double bivariate_expectation(const MicroFunction& f1, const MicroFunction& f2,
                             const MacroPoint& theta, const ModelConfig& cfg,
                             int order) {
  const double m1 = theta.mu;
  const double s1 = theta.sigma;
  const double s2 = cfg.Sigma * cfg.Sigma / theta.sigma;
  const double cond_sd = s2 * std::sqrt(1.0 - cfg.r * cfg.r);

  // integrate f1(x) E[f2 | x] against the X marginal; the outer function
  // keeps f1's quadrature hints (window, breakpoints)
  MicroFunction outer = f1;
  outer.eval = [&](double x) {
    const double cond_mean = cfg.r * s2 * (x - m1) / s1;
    return f1.eval(x) * expect_1d(f2, cond_mean, cond_sd, order);
  };
  return expect_1d(outer, m1, s1, order);
}

void validate_grid(std::span<const double> tau_grid) {
  if (tau_grid.size() < 2)
    throw std::invalid_argument("correlation_series: tau grid needs at least 2 points");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] > tau_grid[i - 1]))
      throw std::invalid_argument("correlation_series: tau grid must be strictly increasing");
}

} // namespace

double ig_correlation_fns(const std::array<MicroFunction, 4>& fs, const MacroPoint& theta,
                          const ModelConfig& cfg, int order) {
  theta.validate();
  cfg.validate();

  const double e3 = expect_1d(fs[2], 0.0, theta.sigma, order);
  const double e4 = expect_1d(fs[3], 0.0, theta.sigma, order);
  const double e1 = expect_1d(fs[0], theta.mu, theta.sigma, order);
  const double e2 = expect_1d(fs[1], 0.0, cfg.Sigma * cfg.Sigma / theta.sigma, order);
  const double joint12 = bivariate_expectation(fs[0], fs[1], theta, cfg, order);
  return e3 * e4 * (joint12 - e1 * e2);
}

double ig_correlation(const Battery& fs, const MacroPoint& theta, const ModelConfig& cfg,
                      int order) {
  bool seen[4] = {false, false, false, false};
  for (const auto& f : fs) {
    if (f.var < 1 || f.var > 4)
      throw std::invalid_argument("ig_correlation: variable index must be 1..4");
    if (seen[f.var - 1])
      throw std::invalid_argument("ig_correlation: battery must cover each microvariable once");
    seen[f.var - 1] = true;
  }
  std::array<MicroFunction, 4> mf;
  for (const auto& f : fs) mf[f.var - 1] = MicroFunction::from(f);
  return ig_correlation_fns(mf, theta, cfg, order);
}

ThetaPath trajectory_path(const dynamics::Trajectory& traj) {
  if (traj.samples.empty())
    throw std::invalid_argument("trajectory_path: empty trajectory");
  auto samples = std::make_shared<std::vector<dynamics::TrajectorySample>>(traj.samples);
  return [samples](double tau) {
    const auto& s = *samples;
    if (tau <= s.front().tau) return s.front().state.theta;
    if (tau >= s.back().tau) return s.back().state.theta;
    auto it = std::lower_bound(s.begin(), s.end(), tau,
                               [](const dynamics::TrajectorySample& a, double t) {
                                 return a.tau < t;
                               });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (tau - lo.tau) / (hi.tau - lo.tau);
    return model::MacroPoint{lo.state.theta.mu + w * (hi.state.theta.mu - lo.state.theta.mu),
                             lo.state.theta.sigma +
                                 w * (hi.state.theta.sigma - lo.state.theta.sigma)};
  };
}

CorrelationSeries correlation_series(const Battery& fs, const ThetaPath& path,
                                     const dynamics::RSchedule& schedule,
                                     std::span<const double> tau_grid,
                                     const ModelConfig& cfg_base, int order) {
  validate_grid(tau_grid);
  CorrelationSeries series;
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < fs.size(); ++i) os << (i ? "," : "") << fs[i].describe();
    series.battery_id = os.str();
  }
  series.entries.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    ModelConfig cfg = cfg_base;
    cfg.r = dynamics::schedule_r(schedule, tau);
    const MacroPoint theta = path(tau);
    series.entries.push_back({tau, cfg.r, ig_correlation(fs, theta, cfg, order)});
  }
  return series;
}

CorrelationSeries correlation_series(const Battery& fs, const MacroPoint& theta,
                                     const dynamics::RSchedule& schedule,
                                     std::span<const double> tau_grid,
                                     const ModelConfig& cfg_base, int order) {
  return correlation_series(
      fs, [theta](double) { return theta; }, schedule, tau_grid, cfg_base, order);
}

double time_average(const CorrelationSeries& series, double T) {
  if (series.entries.size() < 2)
    throw std::invalid_argument("time_average: need at least 2 entries");
  const double t0 = series.entries.front().tau;
  const double t_last = series.entries.back().tau;
  if (T > t_last || T <= t0)
    throw std::invalid_argument("time_average: T outside the series range");

  double integral = 0.0;
  for (std::size_t i = 1; i < series.entries.size(); ++i) {
    const auto& a = series.entries[i - 1];
    const auto& b = series.entries[i];
    if (b.tau <= T) {
      integral += 0.5 * (a.c + b.c) * (b.tau - a.tau);
      if (b.tau == T) break;
    } else {
      // partial segment, linear interpolation at T
      const double w = (T - a.tau) / (b.tau - a.tau);
      const double cT = a.c + w * (b.c - a.c);
      integral += 0.5 * (a.c + cT) * (T - a.tau);
      break;
    }
  }
  return integral / (T - t0);
}

std::string to_string(IgehLevel level) {
  switch (level) {
    case IgehLevel::Bernoulli: return "bernoulli";
    case IgehLevel::Mixing: return "mixing";
    case IgehLevel::Ergodic: return "ergodic";
    case IgehLevel::Unclassified: return "unclassified";
  }
  return "unclassified";
}

IgehVerdict classify(const CorrelationSeries& series, const ClassifyOptions& opts) {
  if (series.entries.size() < 8)
    throw InsufficientDataError("classify: series needs at least 8 points");
  if (!(opts.tail_fraction > 0.0 && opts.tail_fraction < 1.0))
    throw std::invalid_argument("classify: tail fraction must be in (0, 1)");
  if (!(opts.eps_bernoulli > 0.0 && opts.eps_mixing > 0.0 && opts.eps_ergodic > 0.0))
    throw std::invalid_argument("classify: tolerances must be positive");

  IgehVerdict v;
  v.tolerances = opts;

  const auto& e = series.entries;
  const std::size_t n = e.size();
  const std::size_t tail_start = n - std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::floor(opts.tail_fraction * n)));
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(e[i].c);
    v.max_abs_c = std::max(v.max_abs_c, a);
    if (i >= tail_start) v.tail_max_abs_c = std::max(v.tail_max_abs_c, a);
  }

  const double t0 = e.front().tau;
  const double T = e.back().tau;
  v.time_avg = time_average(series, T);
  v.time_avg_quarter = time_average(series, t0 + 0.25 * (T - t0));

  if (v.max_abs_c < opts.eps_bernoulli) {
    v.level = IgehLevel::Bernoulli;
    return v;
  }
  const bool tail_small = v.tail_max_abs_c < opts.eps_mixing;
  const bool tail_decayed =
      v.tail_max_abs_c <= 0.25 * v.max_abs_c || v.max_abs_c < opts.eps_mixing;
  if (tail_small && tail_decayed) {
    v.level = IgehLevel::Mixing;
    return v;
  }
  const bool avg_small = std::abs(v.time_avg) < opts.eps_ergodic;
  const bool avg_decayed = std::abs(v.time_avg) < 0.5 * std::abs(v.time_avg_quarter) ||
                           std::abs(v.time_avg_quarter) < opts.eps_ergodic;
  if (avg_small && avg_decayed) {
    v.level = IgehLevel::Ergodic;
    return v;
  }
  v.level = IgehLevel::Unclassified;
  return v;
}

} // namespace igeh::correlation
