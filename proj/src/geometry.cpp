#include "igeh/geometry.hpp"

#include <cmath>

namespace igeh::geometry {

using model::Block;
using model::MacroPoint;
using model::MicroPoint;
using model::ModelConfig;

MetricTensor fisher_metric_numeric(const MacroPoint& theta, const ModelConfig& cfg,
                                   Block block, int order) {
  theta.validate();
  cfg.validate();
  const auto rule = numerics::gauss_hermite_rule(order);

  MetricTensor g;
  g.at = theta;

  if (block == Block::Bivariate) {
    const double mean[2] = {theta.mu, 0.0};
    const double sd2 = cfg.Sigma * cfg.Sigma / theta.sigma;
    const double chol[4] = {theta.sigma, 0.0, cfg.r * sd2,
                            sd2 * std::sqrt(1.0 - cfg.r * cfg.r)};
    auto entry = [&](int i, int j) {
      numerics::ScalarFn f = [&](std::span<const double> x) {
        MicroPoint p{x[0], x[1], 0.0, 0.0};
        const auto sc = model::score_macro(p, theta, cfg, Block::Bivariate);
        return sc[i] * sc[j];
      };
      return numerics::gaussian_expectation(f, mean, chol, rule);
    };
    g.g11 = entry(0, 0);
    g.g12 = entry(0, 1);
    g.g22 = entry(1, 1);
  } else {
    const auto mean = model::mean_vector(theta, cfg);
    const auto chol = model::covariance_cholesky(theta, cfg);
    auto entry = [&](int i, int j) {
      numerics::ScalarFn f = [&](std::span<const double> x) {
        MicroPoint p{x[0], x[1], x[2], x[3]};
        const auto sc = model::score_macro(p, theta, cfg, Block::Full);
        return sc[i] * sc[j];
      };
      return numerics::gaussian_expectation(f, mean, chol, rule);
    };
    g.g11 = entry(0, 0);
    g.g12 = entry(0, 1);
    g.g22 = entry(1, 1);
  }
  return g;
}

MetricTensor fisher_metric_analytic(const MacroPoint& theta, const ModelConfig& cfg) {
  theta.validate();
  cfg.validate();
  const double denom = theta.sigma * theta.sigma * (1.0 - cfg.r * cfg.r);
  return {theta, 1.0 / denom, 0.0, 4.0 / denom};
}

MetricTensor fisher_metric_sigma_variant(const MacroPoint& theta, const ModelConfig& cfg) {
  theta.validate();
  cfg.validate();
  const double denom = theta.sigma * (1.0 - cfg.r * cfg.r);
  return {theta, 1.0 / denom, 0.0, 4.0 / denom};
}

namespace {

// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij) from central
// differences of the analytic metric.
Christoffel christoffel_fd(const MacroPoint& theta, const ModelConfig& cfg) {
  const double h_mu = 1e-4 * std::max(1.0, std::abs(theta.mu));
  const double h_sg = 1e-4 * std::max(1.0, std::abs(theta.sigma));
  if (theta.sigma - h_sg <= 0.0)
    throw DomainError("christoffel: finite-difference stencil crosses sigma <= 0");

  auto metric_at = [&](double mu, double sigma) {
    return fisher_metric_analytic({mu, sigma}, cfg);
  };

  // dg[l][i][j]: derivative of g_ij along coordinate l (0 = mu, 1 = sigma).
  double gmat[2][2];
  {
    const auto g0 = metric_at(theta.mu, theta.sigma);
    gmat[0][0] = g0.g11;
    gmat[0][1] = gmat[1][0] = g0.g12;
    gmat[1][1] = g0.g22;
  }
  double dg[2][2][2];
  {
    const auto gp = metric_at(theta.mu + h_mu, theta.sigma);
    const auto gm = metric_at(theta.mu - h_mu, theta.sigma);
    dg[0][0][0] = (gp.g11 - gm.g11) / (2.0 * h_mu);
    dg[0][0][1] = dg[0][1][0] = (gp.g12 - gm.g12) / (2.0 * h_mu);
    dg[0][1][1] = (gp.g22 - gm.g22) / (2.0 * h_mu);
  }
  {
    const auto gp = metric_at(theta.mu, theta.sigma + h_sg);
    const auto gm = metric_at(theta.mu, theta.sigma - h_sg);
    dg[1][0][0] = (gp.g11 - gm.g11) / (2.0 * h_sg);
    dg[1][0][1] = dg[1][1][0] = (gp.g12 - gm.g12) / (2.0 * h_sg);
    dg[1][1][1] = (gp.g22 - gm.g22) / (2.0 * h_sg);
  }

  const double det = gmat[0][0] * gmat[1][1] - gmat[0][1] * gmat[1][0];
  const double ginv[2][2] = {{gmat[1][1] / det, -gmat[0][1] / det},
                             {-gmat[1][0] / det, gmat[0][0] / det}};

  Christoffel c;
  c.at = theta;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 2; ++l)
          acc += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        c.coeff[k][i][j] = 0.5 * acc;
      }
  return c;
}

} // namespace

Christoffel christoffel(const MacroPoint& theta, const ModelConfig& cfg,
                        DerivativeMode mode) {
  theta.validate();
  cfg.validate();
  if (mode == DerivativeMode::FiniteDifference) return christoffel_fd(theta, cfg);

  Christoffel c;
  c.at = theta;
  const double inv_s = 1.0 / theta.sigma;
  c.coeff[0][0][1] = c.coeff[0][1][0] = -inv_s;
  c.coeff[1][0][0] = 0.25 * inv_s;
  c.coeff[1][1][1] = -inv_s;
  return c;
}

CurvatureReport ricci(const MacroPoint& theta, const ModelConfig& cfg,
                      DerivativeMode mode) {
  theta.validate();
  cfg.validate();

  CurvatureReport rep;
  rep.at = theta;
  if (mode == DerivativeMode::Analytic) {
    const double s2 = theta.sigma * theta.sigma;
    rep.R11 = -0.25 / s2;
    rep.R22 = -1.0 / s2;
    rep.R12 = 0.0;
    rep.R = -0.5 * (1.0 - cfg.r * cfg.r);
    return rep;
  }

  // R^l_{ikj} = d_k Gamma^l_{ji} - d_j Gamma^l_{ki}
  //            + Gamma^l_{km} Gamma^m_{ji} - Gamma^l_{jm} Gamma^m_{ki},
  // Ricci R_ij = R^k_{ikj}; all Gammas and their derivatives come from
  // the finite-difference connection.
  const double h_mu = 1e-4 * std::max(1.0, std::abs(theta.mu));
  const double h_sg = 1e-4 * std::max(1.0, std::abs(theta.sigma));
  if (theta.sigma - 2.0 * h_sg <= 0.0)
    throw DomainError("ricci: finite-difference stencil crosses sigma <= 0");

  auto gamma_at = [&](double mu, double sigma) {
    return christoffel_fd({mu, sigma}, cfg);
  };
  const Christoffel g0 = gamma_at(theta.mu, theta.sigma);
  const Christoffel gmu_p = gamma_at(theta.mu + h_mu, theta.sigma);
  const Christoffel gmu_m = gamma_at(theta.mu - h_mu, theta.sigma);
  const Christoffel gsg_p = gamma_at(theta.mu, theta.sigma + h_sg);
  const Christoffel gsg_m = gamma_at(theta.mu, theta.sigma - h_sg);

  auto dgamma = [&](int coord, int l, int i, int j) {
    if (coord == 0) return (gmu_p.coeff[l][i][j] - gmu_m.coeff[l][i][j]) / (2.0 * h_mu);
    return (gsg_p.coeff[l][i][j] - gsg_m.coeff[l][i][j]) / (2.0 * h_sg);
  };

  auto ricci_entry = [&](int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < 2; ++k) {
      acc += dgamma(k, k, j, i) - dgamma(j, k, k, i);
      for (int m = 0; m < 2; ++m)
        acc += g0.coeff[k][k][m] * g0.coeff[m][j][i] -
               g0.coeff[k][j][m] * g0.coeff[m][k][i];
    }
    return acc;
  };

  rep.R11 = ricci_entry(0, 0);
  rep.R22 = ricci_entry(1, 1);
  rep.R12 = ricci_entry(0, 1);

  const auto g = fisher_metric_analytic(theta, cfg);
  const double det = g.det();
  const double inv11 = g.g22 / det;
  const double inv22 = g.g11 / det;
  const double inv12 = -g.g12 / det;
  rep.R = inv11 * rep.R11 + inv22 * rep.R22 + 2.0 * inv12 * rep.R12;
  return rep;
}

} // namespace igeh::geometry
