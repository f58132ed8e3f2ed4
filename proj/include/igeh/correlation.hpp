#ifndef IGEH_CORRELATION_HPP
#define IGEH_CORRELATION_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "igeh/dynamics.hpp"
#include "igeh/model.hpp"

namespace igeh::correlation {

/// One per-microvariable test function from a closed family with exact
/// norms, so bound checks never rely on estimated norms.
struct TestFunction {
  enum class Kind { Identity, Cosine, GaussBump, Indicator, One };

  int var = 1; // microvariable index 1..4
  Kind kind = Kind::One;
  double a = 0.0; // Cosine: omega; GaussBump: center; Indicator: left edge
  double b = 0.0; // GaussBump: width; Indicator: right edge

  static TestFunction identity(int var);
  static TestFunction cosine(int var, double omega);
  static TestFunction gauss_bump(int var, double center, double width);
  static TestFunction indicator(int var, double lo, double hi);
  static TestFunction one(int var);

  double operator()(double x) const;
  /// L1 and sup norms; infinity() where unbounded.
  double one_norm() const;
  double sup_norm() const;
  std::string describe() const;
};

using Battery = std::array<TestFunction, 4>;

/// Per-variable integrand with the hints the quadrature needs: smooth
/// functions go through Gauss-Hermite, localized/discontinuous ones
/// through composite Gauss-Legendre between their breakpoints.
struct MicroFunction {
  std::function<double(double)> eval;
  bool smooth = true;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breakpoints; // interior discontinuities
  double scale = 0.0;              // finest feature size, 0 = none

  static MicroFunction from(const TestFunction& f);
};

/// E[f(X)] for X ~ N(mean, sd^2), dispatched on the integrand hints.
double expect_1d(const MicroFunction& f, double mean, double sd, int order);

/// IG correlation C(f1..f4) = E[prod f_i] - prod E_i[f_i] at the given
/// macro point. The (h12, h21) factors of the joint separate exactly, so
/// the four-variable integral reduces to one bivariate integral over the
/// correlated (h11, h22) block times two univariate ones.
double ig_correlation(const Battery& fs, const model::MacroPoint& theta,
                      const model::ModelConfig& cfg, int order = 16);

/// Same functional over raw per-variable integrands (index order
/// h11, h22, h12, h21); the generic path behind ig_correlation.
double ig_correlation_fns(const std::array<MicroFunction, 4>& fs,
                          const model::MacroPoint& theta,
                          const model::ModelConfig& cfg, int order = 16);

struct CorrelationEntry {
  double tau = 0.0;
  double r = 0.0;
  double c = 0.0;
};

struct CorrelationSeries {
  std::vector<CorrelationEntry> entries;
  std::string battery_id;
};

using ThetaPath = std::function<model::MacroPoint(double)>;

/// Path backed by an integrated trajectory: linear interpolation in tau,
/// clamped to the trajectory's ends.
ThetaPath trajectory_path(const dynamics::Trajectory& traj);

/// C(tau) with r = schedule(tau) and theta = path(tau) over a strictly
/// increasing grid of at least two points.
CorrelationSeries correlation_series(const Battery& fs, const ThetaPath& path,
                                     const dynamics::RSchedule& schedule,
                                     std::span<const double> tau_grid,
                                     const model::ModelConfig& cfg_base,
                                     int order = 16);

/// Fixed-theta convenience overload.
CorrelationSeries correlation_series(const Battery& fs, const model::MacroPoint& theta,
                                     const dynamics::RSchedule& schedule,
                                     std::span<const double> tau_grid,
                                     const model::ModelConfig& cfg_base,
                                     int order = 16);

/// Trapezoid average of C over [tau_0, T]; T must lie inside the grid.
double time_average(const CorrelationSeries& series, double T);

enum class IgehLevel { Bernoulli, Mixing, Ergodic, Unclassified };

std::string to_string(IgehLevel level);

struct ClassifyOptions {
  double eps_bernoulli = 1e-9;
  double eps_mixing = 1e-6;
  double eps_ergodic = 1e-6;
  double tail_fraction = 0.2;
};

struct IgehVerdict {
  IgehLevel level = IgehLevel::Unclassified;
  double max_abs_c = 0.0;
  double tail_max_abs_c = 0.0;
  double time_avg = 0.0;         // running average at the last tau
  double time_avg_quarter = 0.0; // running average at the quarter point
  ClassifyOptions tolerances;
};

/// Finite-horizon surrogate of the hierarchy levels:
///  - Bernoulli: max |C| below eps_bernoulli everywhere;
///  - Mixing: tail max below eps_mixing with decay evidence (tail max
///    under a quarter of the global max, or the whole series already
///    below eps_mixing);
///  - Ergodic: |running average| below eps_ergodic at the horizon with
///    decay evidence (halved since the quarter horizon, or already below
///    tolerance there).
/// The escape clauses keep the levels nested for identically small
/// series. Throws InsufficientDataError for series shorter than 8.
IgehVerdict classify(const CorrelationSeries& series, const ClassifyOptions& opts = {});

} // namespace igeh::correlation

#endif
