#ifndef IGEH_GEOMETRY_HPP
#define IGEH_GEOMETRY_HPP

#include "igeh/model.hpp"

namespace igeh::geometry {

/// Fisher-Rao metric at a macro point, coordinates ordered (mu, sigma).
struct MetricTensor {
  model::MacroPoint at;
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }
  bool positive_definite() const { return g11 > 0.0 && det() > 0.0; }
};

/// Levi-Civita connection coefficients Gamma^k_ij, symmetric in (i, j).
/// Indices are 0-based over (mu, sigma).
struct Christoffel {
  model::MacroPoint at;
  double coeff[2][2][2] = {};

  double operator()(int k, int i, int j) const { return coeff[k][i][j]; }
};

/// Ricci tensor components and scalar curvature.
struct CurvatureReport {
  model::MacroPoint at;
  double R11 = 0.0;
  double R22 = 0.0;
  double R12 = 0.0;
  double R = 0.0;
};

enum class DerivativeMode { Analytic, FiniteDifference };

/// g_ij = E[d_i log p * d_j log p] by Gauss-Hermite quadrature over the
/// chosen block of microvariables.
MetricTensor fisher_metric_numeric(const model::MacroPoint& theta,
                                   const model::ModelConfig& cfg,
                                   model::Block block, int order = 32);

/// Closed form diag(1/(sigma^2 (1-r^2)), 4/(sigma^2 (1-r^2))) for the
/// bivariate block; the form whose connection and curvature match the
/// analytic Christoffel and Ricci values below.
MetricTensor fisher_metric_analytic(const model::MacroPoint& theta,
                                    const model::ModelConfig& cfg);

/// Variant with a 1/sigma normalization, diag(1/(sigma (1-r^2)),
/// 4/(sigma (1-r^2))). Reported alongside the adopted form; the two
/// coincide only at sigma = 1 and only the sigma^2 form is consistent
/// with the quadrature metric, the connection and the curvature.
MetricTensor fisher_metric_sigma_variant(const model::MacroPoint& theta,
                                         const model::ModelConfig& cfg);

/// Gamma^1_12 = Gamma^1_21 = -1/sigma, Gamma^2_11 = 1/(4 sigma),
/// Gamma^2_22 = -1/sigma, all others zero. FiniteDifference mode
/// assembles the symbols from central differences of the analytic metric.
Christoffel christoffel(const model::MacroPoint& theta, const model::ModelConfig& cfg,
                        DerivativeMode mode = DerivativeMode::Analytic);

/// R11 = -1/(4 sigma^2), R22 = -1/sigma^2, R = -(1 - r^2)/2.
/// FiniteDifference mode contracts the Riemann tensor built from
/// central differences of the connection. Sign convention is fixed so
/// the half-plane metric (dx^2 + dy^2)/y^2 gets R = -2.
CurvatureReport ricci(const model::MacroPoint& theta, const model::ModelConfig& cfg,
                      DerivativeMode mode = DerivativeMode::Analytic);

} // namespace igeh::geometry

#endif
