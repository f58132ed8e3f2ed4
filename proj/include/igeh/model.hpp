#ifndef IGEH_MODEL_HPP
#define IGEH_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "igeh/errors.hpp"
#include "igeh/numerics.hpp"

namespace igeh::model {

/// Largest admissible |r|; the joint density degenerates at |r| = 1.
constexpr double kMaxAbsCorrelation = 1.0 - 1e-6;

/// Point on the statistical manifold: mean of h11 and the shared
/// standard deviation of h11, h12, h21.
struct MacroPoint {
  double mu = 0.0;
  double sigma = 1.0;

  void validate() const;
};

/// External parameters: the constant covariance scale Sigma and the
/// correlation coefficient r between h11 and h22. `symmetric` collapses
/// h21 to h12 when sampling (symmetric-matrix reading of the ensemble);
/// densities always keep the four-factor form.
struct ModelConfig {
  double Sigma = 1.0;
  double r = 0.0;
  bool symmetric = false;

  void validate() const;
};

/// One draw of the 2x2 Hamiltonian matrix elements.
struct MicroPoint {
  double h11 = 0.0;
  double h22 = 0.0;
  double h12 = 0.0;
  double h21 = 0.0;
};

/// Which microvariables a geometric quantity integrates over.
enum class Block { Bivariate, Full };

/// Marginal moments implied by the constraints. Variables are indexed
/// 1=h11, 2=h22, 3=h12, 4=h21.
double marginal_mean(int var, const MacroPoint& theta, const ModelConfig& cfg);
double marginal_sd(int var, const MacroPoint& theta, const ModelConfig& cfg);

/// Joint density: correlated bivariate Gaussian in (h11, h22) with
/// mean (mu, 0), variances (sigma^2, Sigma^4/sigma^2) and correlation r,
/// times independent N(0, sigma^2) factors in h12 and h21.
double joint_density(const MicroPoint& x, const MacroPoint& theta, const ModelConfig& cfg);
double log_joint_density(const MicroPoint& x, const MacroPoint& theta, const ModelConfig& cfg);

/// Density of the bivariate (h11, h22) block alone.
double bivariate_density(double h11, double h22, const MacroPoint& theta, const ModelConfig& cfg);

double marginal_density(int var, double value, const MacroPoint& theta, const ModelConfig& cfg);

struct ConstraintEntry {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double residual = 0.0;
  bool pass = false;
};

struct ConstraintReport {
  std::vector<ConstraintEntry> entries;
  double tolerance = 0.0;
  bool all_pass = false;
};

/// Checks the nine moment constraints and the normalization integral by
/// quadrature against an inflated-covariance reference Gaussian, so the
/// density itself is exercised rather than assumed.
ConstraintReport verify_constraints(const MacroPoint& theta, const ModelConfig& cfg,
                                    double tol, int order = 24);

/// n i.i.d. draws through the Cholesky factor of the 4x4 covariance.
/// Deterministic for a given seed (own Box-Muller on mt19937_64).
std::vector<MicroPoint> sample(std::size_t n, const MacroPoint& theta,
                               const ModelConfig& cfg, std::uint64_t seed);

/// (d log p / d mu, d log p / d sigma) restricted to the given block.
std::array<double, 2> score_macro(const MicroPoint& x, const MacroPoint& theta,
                                  const ModelConfig& cfg, Block block);

/// Lower Cholesky factor (row-major 4x4) of the micro covariance and the
/// mean vector, ordered (h11, h22, h12, h21).
std::array<double, 16> covariance_cholesky(const MacroPoint& theta, const ModelConfig& cfg);
std::array<double, 4> mean_vector(const MacroPoint& theta, const ModelConfig& cfg);

} // namespace igeh::model

#endif
