#ifndef IGEH_DISTINGUISHABILITY_HPP
#define IGEH_DISTINGUISHABILITY_HPP

#include <array>
#include <string>
#include <vector>

#include "igeh/correlation.hpp"
#include "igeh/model.hpp"

namespace igeh::distinguishability {

/// Closed form |r| (sqrt(1-r^2)(1+|r|))^(-1-1/|r|) for the density
/// distinguishability, continuously extended by 0 at r = 0. Throws for
/// |r| >= 1.
///
/// The formula is the interior maximum of the standardized density
/// difference along the diagonal. That maximum only exists while
/// (1+|r|)^3 (1-|r|) > 1, i.e. |r| below the branch point r* ~ 0.83929
/// (see kBranchPoint); past it the stationary point collides with the
/// origin and the true sup becomes ((1-r^2)^{-1/2} - 1)/(2 pi), which
/// the closed form then overshoots. f_bruteforce reports the true sup,
/// so the two agree (up to the constant 2 pi) only for |r| <= r*.
double f_closed(double r);

/// Largest |r| for which the closed form tracks the brute-force sup:
/// the root of (1+r)^3 (1-r) = 1.
constexpr double kBranchPoint = 0.8392867552141612;

/// Coordinate convention for the brute-force maximization.
enum class Coordinates {
  /// Standardized bivariate block: the independent (h12, h21) factors
  /// and all scale Jacobians drop out, making the value depend on r
  /// alone. Relates to f_closed by the constant 2*pi.
  Standardized,
  /// Literal four-variable density difference; scales with
  /// 1/(2 pi sigma^2 Sigma^2 ...) prefactors.
  Raw
};

struct FResult {
  double r = 0.0;
  double f_bruteforce = 0.0;
  double f_closed = 0.0;
  /// f_closed / (2 pi f_bruteforce) in standardized coordinates;
  /// 1 when the two conventions agree. NaN when not computed.
  double convention_ratio = 0.0;
  std::array<double, 2> argmax{0.0, 0.0}; // standardized coordinates
};

/// Grid scan plus coordinate refinement of the density difference over
/// +-8 standard deviations.
FResult f_bruteforce(double r, Coordinates coords,
                     const model::MacroPoint& theta = {0.0, 1.0},
                     const model::ModelConfig& cfg = {1.0, 0.0, false},
                     int grid_resolution = 1201, int refine_iterations = 60);

enum class CurveMethod { Closed, BruteForce, Both };

/// Uniformly sampled F(r) curve on [r_min, r_max], n >= 2 points.
std::vector<FResult> f_curve(double r_min, double r_max, int n, CurveMethod method);

struct BoundReport {
  std::string battery_id;
  double r = 0.0;
  double abs_c = 0.0;
  /// F times the product of all four 1-norms (the chain that follows
  /// from the sup-norm inequality).
  double bound_product_norms = 0.0;
  /// F times |f1|_inf |f2|_inf |f3|_inf |f4|_1 (the alternative printed
  /// combination; reported, not asserted).
  double bound_mixed_norms = 0.0;
  bool product_norms_ok = false;
  bool mixed_norms_ok = false;
};

/// |C| against both candidate bounds with F in the raw-coordinate
/// convention, over a grid of correlation values. Every battery
/// function must have the finite norms the bounds require.
std::vector<BoundReport> bound_check(const correlation::Battery& fs,
                                     const model::MacroPoint& theta,
                                     const model::ModelConfig& cfg_base,
                                     std::span<const double> r_grid,
                                     int grid_resolution = 41,
                                     int refine_iterations = 40);

} // namespace igeh::distinguishability

#endif
