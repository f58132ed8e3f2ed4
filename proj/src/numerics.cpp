#include "igeh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace igeh::numerics {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPi = 1.7724538509055160273;

// Orthonormal Hermite functions for the weight e^{-x^2}:
//   psi_0 = pi^{-1/4}, psi_{k+1} = x sqrt(2/(k+1)) psi_k - sqrt(k/(k+1)) psi_{k-1}
// with psi_n'(x) = sqrt(2n) psi_{n-1}(x) at a root of psi_n.
double hermite_eval(int n, double x, double& prev) {
  double p0 = std::pow(kPi, -0.25);
  if (n == 0) {
    prev = 0.0;
    return p0;
  }
  double p1 = std::sqrt(2.0) * x * p0;
  for (int k = 1; k < n; ++k) {
    double p2 = x * std::sqrt(2.0 / (k + 1)) * p1 - std::sqrt(double(k) / (k + 1)) * p0;
    p0 = p1;
    p1 = p2;
  }
  prev = p0;
  return p1;
}

} // namespace

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1 || n > 128)
    throw std::invalid_argument("gauss_hermite_rule: order must be in [1, 128], got " +
                                std::to_string(n));

  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  // Solve for the roots in the upper half line and mirror; this keeps the
  // node set exactly symmetric. Initial guesses follow the usual
  // largest-root-first recipe.
  const int half = (n + 1) / 2;
  double x = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0) {
      x = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      x -= 1.14 * std::pow(double(n), 0.426) / x;
    } else if (i == 2) {
      x = 1.86 * x - 0.86 * rule.nodes[n - 1];
    } else if (i == 3) {
      x = 1.91 * x - 0.91 * rule.nodes[n - 2];
    } else {
      x = 2.0 * x - rule.nodes[n - i + 1];
    }
    double pm = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p = hermite_eval(n, x, pm);
      double dp = std::sqrt(2.0 * n) * pm;
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    double p = hermite_eval(n, x, pm);
    (void)p;
    double w = 1.0 / (n * pm * pm);
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
    double pm = 0.0;
    hermite_eval(n, 0.0, pm);
    rule.weights[n / 2] = 1.0 / (n * pm * pm);
  }
  return rule;
}

QuadratureRule gauss_legendre_rule(int n) {
  if (n < 1 || n > 256)
    throw std::invalid_argument("gauss_legendre_rule: order must be in [1, 256], got " +
                                std::to_string(n));
  QuadratureRule rule;
  rule.order = n;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() != upper.size() || lower.empty() || lower.size() > 4)
    throw std::invalid_argument("BoxDomain: dimension must be 1..4");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("BoxDomain: lower bound must be below upper bound");
}

double gaussian_expectation(const ScalarFn& f, std::span<const double> mean,
                            std::span<const double> chol,
                            const QuadratureRule& rule) {
  const int d = static_cast<int>(mean.size());
  if (d < 1 || d > 4)
    throw std::invalid_argument("gaussian_expectation: dimension must be 1..4");
  if (chol.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("gaussian_expectation: Cholesky factor has wrong size");
  for (int i = 0; i < d; ++i) {
    if (!(chol[i * d + i] > 0.0))
      throw std::invalid_argument("gaussian_expectation: Cholesky diagonal must be positive");
    for (int j = i + 1; j < d; ++j)
      if (chol[i * d + j] != 0.0)
        throw std::invalid_argument("gaussian_expectation: Cholesky factor must be lower triangular");
  }

  const int n = rule.order;
  const double sqrt2 = std::sqrt(2.0);
  std::array<int, 4> idx{0, 0, 0, 0};
  std::array<double, 4> x{};
  double sum = 0.0;
  const long total = [&] {
    long t = 1;
    for (int k = 0; k < d; ++k) t *= n;
    return t;
  }();
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rem % n);
      rem /= n;
    }
    double w = 1.0;
    for (int k = 0; k < d; ++k) w *= rule.weights[idx[k]];
    for (int i = 0; i < d; ++i) {
      double xi = mean[i];
      for (int j = 0; j <= i; ++j) xi += sqrt2 * chol[i * d + j] * rule.nodes[idx[j]];
      x[i] = xi;
    }
    const double fx = f(std::span<const double>(x.data(), d));
    if (!std::isfinite(fx)) {
      std::ostringstream os;
      os << "gaussian_expectation: integrand not finite at node (";
      for (int i = 0; i < d; ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw NumericalDomainError(os.str(), std::vector<double>(x.begin(), x.begin() + d));
    }
    sum += w * fx;
  }
  return sum / std::pow(kSqrtPi, d);
}

double gaussian_weighted_segment(const std::function<double(double)>& f,
                                 double mean, double sd, double lo, double hi,
                                 std::span<const double> breakpoints,
                                 double scale, int panel_order) {
  if (!(sd > 0.0)) throw std::invalid_argument("gaussian_weighted_segment: sd must be positive");
  const double a = std::max(lo, mean - 9.0 * sd);
  const double b = std::min(hi, mean + 9.0 * sd);
  if (!(a < b)) return 0.0;

  std::vector<double> edges{a, b};
  for (double bp : breakpoints)
    if (bp > a && bp < b) edges.push_back(bp);
  std::sort(edges.begin(), edges.end());

  double panel = 0.75 * sd;
  if (scale > 0.0) panel = std::min(panel, 0.75 * scale);

  static thread_local QuadratureRule gl;
  if (gl.order != panel_order) gl = gauss_legendre_rule(panel_order);

  const double norm = 1.0 / (sd * std::sqrt(2.0 * kPi));
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const int nseg = std::max(1, static_cast<int>(std::ceil((edges[s + 1] - edges[s]) / panel)));
    const double w = (edges[s + 1] - edges[s]) / nseg;
    for (int p = 0; p < nseg; ++p) {
      const double plo = edges[s] + p * w;
      for (int q = 0; q < gl.order; ++q) {
        const double x = plo + 0.5 * w * (gl.nodes[q] + 1.0);
        const double z = (x - mean) / sd;
        sum += 0.5 * w * gl.weights[q] * norm * std::exp(-0.5 * z * z) * f(x);
      }
    }
  }
  return sum;
}

DiffResult central_diff(const ScalarFn& f, std::span<const double> x,
                        std::span<const double> steps) {
  const int m = static_cast<int>(x.size());
  if (m < 1) throw std::invalid_argument("central_diff: empty point");
  std::vector<double> h(m);
  for (int i = 0; i < m; ++i) {
    if (!steps.empty()) {
      if (!(steps[i % steps.size()] > 0.0))
        throw std::invalid_argument("central_diff: step must be positive");
      h[i] = steps[i % steps.size()];
    } else {
      h[i] = 1e-4 * std::max(1.0, std::abs(x[i]));
    }
  }

  std::vector<double> p(x.begin(), x.end());
  auto eval = [&](std::span<const double> q) {
    double v = f(q);
    if (!std::isfinite(v))
      throw DomainError("central_diff: function not finite on stencil");
    return v;
  };

  DiffResult out;
  out.gradient.assign(m, 0.0);
  out.hessian.assign(m, std::vector<double>(m, 0.0));
  const double f0 = eval(p);

  for (int i = 0; i < m; ++i) {
    p[i] = x[i] + h[i];
    const double fp = eval(p);
    p[i] = x[i] - h[i];
    const double fm = eval(p);
    p[i] = x[i];
    out.gradient[i] = (fp - fm) / (2.0 * h[i]);
    out.hessian[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      p[i] = x[i] + h[i]; p[j] = x[j] + h[j];
      const double fpp = eval(p);
      p[j] = x[j] - h[j];
      const double fpm = eval(p);
      p[i] = x[i] - h[i]; p[j] = x[j] + h[j];
      const double fmp = eval(p);
      p[j] = x[j] - h[j];
      const double fmm = eval(p);
      p[i] = x[i]; p[j] = x[j];
      out.hessian[i][j] = out.hessian[j][i] = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
    }
  }
  return out;
}

OdeResult rk4_integrate(const OdeField& field, std::span<const double> initial,
                        double tau_max, double h, const StatePredicate& admissible) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_integrate: step must be positive");
  if (!(tau_max > 0.0)) throw std::invalid_argument("rk4_integrate: tau_max must be positive");

  const std::size_t d = initial.size();
  OdeResult out;
  std::vector<double> y(initial.begin(), initial.end());
  auto ok = [&](std::span<const double> s) { return !admissible || admissible(s); };
  if (!ok(y)) {
    out.truncated = true;
    return out;
  }
  out.samples.emplace_back(0.0, y);

  std::vector<double> stage(d), k1, k2, k3, k4, next(d);
  double tau = 0.0;
  while (tau < tau_max - 1e-15 * tau_max) {
    const double dt = std::min(h, tau_max - tau);
    k1 = field(tau, y);
    for (std::size_t i = 0; i < d; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
    if (!ok(stage)) { out.truncated = true; return out; }
    k2 = field(tau + 0.5 * dt, stage);
    for (std::size_t i = 0; i < d; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
    if (!ok(stage)) { out.truncated = true; return out; }
    k3 = field(tau + 0.5 * dt, stage);
    for (std::size_t i = 0; i < d; ++i) stage[i] = y[i] + dt * k3[i];
    if (!ok(stage)) { out.truncated = true; return out; }
    k4 = field(tau + dt, stage);
    for (std::size_t i = 0; i < d; ++i)
      next[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    for (std::size_t i = 0; i < d; ++i)
      if (!std::isfinite(next[i]))
        throw NumericalDomainError("rk4_integrate: state not finite", next);
    if (!ok(next)) { out.truncated = true; return out; }
    y = next;
    tau += dt;
    out.samples.emplace_back(tau, y);
  }
  return out;
}

namespace {

// Golden-section maximization of a 1D slice, returns (arg, value).
std::pair<double, double> golden_max(const std::function<double(double)>& f,
                                     double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

} // namespace

MaxResult maximize(const ScalarFn& f, const BoxDomain& box,
                   int grid_resolution, int refine_iterations) {
  if (grid_resolution < 3)
    throw std::invalid_argument("maximize: grid resolution must be at least 3");
  const int d = box.dim();
  const int n = grid_resolution;

  auto eval = [&](std::span<const double> q) {
    const double v = f(q);
    if (!std::isfinite(v))
      throw NumericalDomainError("maximize: objective not finite",
                                 std::vector<double>(q.begin(), q.end()));
    return v;
  };

  std::array<double, 4> x{};
  std::array<int, 4> idx{};
  std::vector<double> best_x(d);
  double best = -std::numeric_limits<double>::infinity();
  long total = 1;
  for (int k = 0; k < d; ++k) total *= n;
  std::vector<double> step(d);
  for (int k = 0; k < d; ++k) step[k] = (box.upper[k] - box.lower[k]) / (n - 1);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int k = d - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int k = 0; k < d; ++k) x[k] = box.lower[k] + idx[k] * step[k];
    const double v = eval(std::span<const double>(x.data(), d));
    if (v > best) {
      best = v;
      std::copy(x.begin(), x.begin() + d, best_x.begin());
    }
  }

  // Coordinate-wise golden-section sweeps within one grid cell of the
  // incumbent; single-coordinate moves only, so the scan winner can never
  // be lost.
  std::vector<double> cur = best_x;
  double cur_v = best;
  for (int sweep = 0; sweep < refine_iterations; ++sweep) {
    for (int k = 0; k < d; ++k) {
      const double lo = std::max(box.lower[k], cur[k] - step[k]);
      const double hi = std::min(box.upper[k], cur[k] + step[k]);
      auto slice = [&](double t) {
        std::array<double, 4> q{};
        std::copy(cur.begin(), cur.end(), q.begin());
        q[k] = t;
        return eval(std::span<const double>(q.data(), d));
      };
      auto [arg, val] = golden_max(slice, lo, hi);
      if (val > cur_v) {
        cur[k] = arg;
        cur_v = val;
      }
    }
  }

  if (cur_v >= best) return {cur, cur_v};
  return {best_x, best};
}

} // namespace igeh::numerics
