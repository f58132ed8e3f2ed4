#ifndef IGEH_NUMERICS_HPP
#define IGEH_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "igeh/errors.hpp"

namespace igeh::numerics {

/// Scalar function of a small point (dimension <= 4).
using ScalarFn = std::function<double(std::span<const double>)>;

/// Gauss quadrature rule. Hermite rules use the physicists' weight
/// e^{-x^2}, so the weights of an n-point rule sum to sqrt(pi).
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Hermite rule (weight e^{-x^2}), 1 <= n <= 128.
/// Nodes come out strictly increasing and exactly symmetric about 0.
QuadratureRule gauss_hermite_rule(int n);

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre_rule(int n);

/// Axis-aligned box, dimension 1..4, lower < upper per axis.
struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  BoxDomain(std::vector<double> lo, std::vector<double> hi);
  int dim() const { return static_cast<int>(lower.size()); }
};

/// E[f(X)] for X ~ N(mean, L L^T) by tensor-product Gauss-Hermite with
/// the change of variables x = mean + sqrt(2) L u. `chol` is the lower
/// Cholesky factor in row-major order, strictly positive diagonal.
/// Summation order is fixed, so results are reproducible bit for bit.
double gaussian_expectation(const ScalarFn& f, std::span<const double> mean,
                            std::span<const double> chol,
                            const QuadratureRule& rule);

/// Integral of f against the Gaussian weight N(mean, sd^2) over [lo, hi],
/// by composite Gauss-Legendre with panel edges at `breakpoints`. Panels
/// are kept narrower than both sd and `scale` so sharply localized
/// integrands stay resolved.
double gaussian_weighted_segment(const std::function<double(double)>& f,
                                 double mean, double sd, double lo, double hi,
                                 std::span<const double> breakpoints = {},
                                 double scale = 0.0, int panel_order = 16);

struct DiffResult {
  std::vector<double> gradient;
  std::vector<std::vector<double>> hessian;
};

/// Second-order central differences (gradient and full Hessian).
/// Steps default to 1e-4 * max(1, |x_i|) per component.
DiffResult central_diff(const ScalarFn& f, std::span<const double> x,
                        std::span<const double> steps = {});

struct OdeResult {
  std::vector<std::pair<double, std::vector<double>>> samples;
  bool truncated = false;
};

using OdeField = std::function<std::vector<double>(double, std::span<const double>)>;
using StatePredicate = std::function<bool(std::span<const double>)>;

/// Classical RK4 from tau=0 to tau_max with fixed step h (final step
/// shortened to land on tau_max). Every accepted step is recorded,
/// initial state included. If `admissible` rejects a stage or step
/// state, integration stops and the result is flagged truncated.
OdeResult rk4_integrate(const OdeField& field, std::span<const double> initial,
                        double tau_max, double h,
                        const StatePredicate& admissible = nullptr);

struct MaxResult {
  std::vector<double> argmax;
  double value = 0.0;
};

/// Deterministic maximization: exhaustive scan of a tensor grid with
/// `grid_resolution` nodes per axis, then coordinate-wise golden-section
/// sweeps confined to one grid cell around the incumbent. The result is
/// never worse than the best grid sample.
MaxResult maximize(const ScalarFn& f, const BoxDomain& box,
                   int grid_resolution, int refine_iterations);

} // namespace igeh::numerics

#endif
