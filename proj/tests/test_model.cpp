#include <doctest.h>

#include <cmath>

#include "igeh/model.hpp"
#include "test_helpers.hpp"

using namespace igeh;
using namespace igeh::model;

namespace {
constexpr double kTwoPi = 6.283185307179586477;
}

TEST_CASE("type invariants") {
  CHECK_THROWS_AS((MacroPoint{0.0, 0.0}.validate()), InvariantError);
  CHECK_THROWS_AS((MacroPoint{0.0, -1.0}.validate()), InvariantError);
  CHECK_THROWS_AS((ModelConfig{0.0, 0.0, false}.validate()), InvariantError);
  CHECK_THROWS_AS((ModelConfig{1.0, 1.0, false}.validate()), InvariantError);
  CHECK_THROWS_AS((ModelConfig{1.0, -0.9999999, false}.validate()), InvariantError);
  CHECK_NOTHROW((ModelConfig{1.0, 1.0 - 1e-6, false}.validate()));
}

TEST_CASE("joint density point values") {
  const MacroPoint theta{0.0, 1.0};
  const MicroPoint origin{0.0, 0.0, 0.0, 0.0};

  // independent case: 1/(4 pi^2)
  CHECK(joint_density(origin, theta, {1.0, 0.0, false}) ==
        doctest::Approx(0.025330295910584444).epsilon(1e-12));

  // r = 0.5: bivariate normalizer picks up 1/sqrt(0.75)
  CHECK(joint_density(origin, theta, {1.0, 0.5, false}) ==
        doctest::Approx(0.029248906325257610).epsilon(1e-12));
}

TEST_CASE("factorization at r = 0, Sigma = sigma") {
  // the joint is the product of its marginals at every micropoint
  testing::Normals rng(7);
  for (int i = 0; i < 100; ++i) {
    const MacroPoint theta{0.4, 1.3};
    const ModelConfig cfg{1.3, 0.0, false};
    const MicroPoint p{theta.mu + 2.0 * rng(), 2.0 * rng(), 2.0 * rng(), 2.0 * rng()};
    const double joint = joint_density(p, theta, cfg);
    const double prod = marginal_density(1, p.h11, theta, cfg) *
                        marginal_density(2, p.h22, theta, cfg) *
                        marginal_density(3, p.h12, theta, cfg) *
                        marginal_density(4, p.h21, theta, cfg);
    CHECK(joint == doctest::Approx(prod).epsilon(1e-12));
  }
}

TEST_CASE("marginal densities") {
  // h11 mode height at sigma = 1
  CHECK(marginal_density(1, 0.5, {0.5, 1.0}, {1.0, 0.0, false}) ==
        doctest::Approx(0.398942280401432678).epsilon(1e-14));

  // h22 has variance Sigma^4 / sigma^2 = 1/4 at sigma = 2, Sigma = 1,
  // so its mode height is 2/sqrt(2 pi)
  CHECK(marginal_density(2, 0.0, {0.0, 2.0}, {1.0, 0.3, false}) ==
        doctest::Approx(0.797884560802865356).epsilon(1e-14));

  CHECK_THROWS_AS(marginal_density(5, 0.0, {0.0, 1.0}, {1.0, 0.0, false}),
                  std::invalid_argument);

  // each marginal integrates to 1
  const MacroPoint theta{1.5, 0.7};
  const ModelConfig cfg{2.0, -0.6, false};
  const auto rule = numerics::gauss_hermite_rule(32);
  for (int var = 1; var <= 4; ++var) {
    const double m = marginal_mean(var, theta, cfg);
    const double s = marginal_sd(var, theta, cfg);
    // integrate against an inflated reference so the density is exercised
    const double mean[1] = {m};
    const double chol[1] = {1.5 * s};
    const double total = numerics::gaussian_expectation(
        [&](std::span<const double> x) {
          const double z = (x[0] - m) / (1.5 * s);
          const double ref = std::exp(-0.5 * z * z) / ((1.5 * s) * std::sqrt(kTwoPi));
          return marginal_density(var, x[0], theta, cfg) / ref;
        },
        mean, chol, rule);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("marginalization consistency") {
  // integrating the joint over three variables reproduces the marginal
  const MacroPoint theta{0.8, 1.4};
  const ModelConfig cfg{1.1, 0.55, false};
  const auto rule = numerics::gauss_hermite_rule(48);

  testing::Normals rng(11);
  for (int t = 0; t < 5; ++t) {
    for (int var = 1; var <= 4; ++var) {
      const double value = marginal_mean(var, theta, cfg) +
                           marginal_sd(var, theta, cfg) * rng();
      // reference over the three remaining variables, inflated
      int others[3];
      int k = 0;
      for (int v = 1; v <= 4; ++v)
        if (v != var) others[k++] = v;
      double mean[3], chol[9] = {0.0};
      for (int i = 0; i < 3; ++i) {
        mean[i] = marginal_mean(others[i], theta, cfg);
        chol[i * 3 + i] = 1.6 * marginal_sd(others[i], theta, cfg);
      }
      const double integrated = numerics::gaussian_expectation(
          [&](std::span<const double> x) {
            double coords[5];
            coords[var] = value;
            for (int i = 0; i < 3; ++i) coords[others[i]] = x[i];
            const MicroPoint p{coords[1], coords[2], coords[3], coords[4]};
            double ref = 1.0;
            for (int i = 0; i < 3; ++i) {
              const double s = chol[i * 3 + i];
              const double z = (x[i] - mean[i]) / s;
              ref *= std::exp(-0.5 * z * z) / (s * std::sqrt(kTwoPi));
            }
            return joint_density(p, theta, cfg) / ref;
          },
          mean, chol, rule);
      CHECK(integrated == doctest::Approx(marginal_density(var, value, theta, cfg))
                              .epsilon(1e-8));
    }
  }
}

TEST_CASE("joint density integrates to one across the parameter grid") {
  for (double sigma : {0.5, 1.0, 2.5})
    for (double r : {0.0, 0.6, -0.9})
      for (double S : {0.7, 1.4}) {
        const auto rep = verify_constraints({0.8, sigma}, {S, r, false}, 1e-10);
        CHECK(rep.entries.front().name == "normalization");
        CHECK(std::abs(rep.entries.front().actual - 1.0) < 1e-10);
      }
}

TEST_CASE("verify_constraints") {
  const auto rep = verify_constraints({1.0, 2.0}, {1.5, 0.7, false}, 1e-10);
  CHECK(rep.all_pass);
  for (const auto& e : rep.entries) CHECK(e.residual < 1e-10);

  // normalization entry is first
  CHECK(rep.entries.front().name == "normalization");
  CHECK(rep.entries.front().actual == doctest::Approx(1.0).epsilon(1e-10));

  // independence: the covariance residual collapses at r = 0
  const auto rep0 = verify_constraints({0.0, 1.0}, {1.0, 0.0, false}, 1e-10);
  for (const auto& e : rep0.entries)
    if (e.name == "Cov[h11,h22]") CHECK(std::abs(e.actual) < 1e-12);

  CHECK_THROWS_AS(verify_constraints({0.0, 1.0}, {1.0, 0.0, false}, -1.0),
                  std::invalid_argument);
}

TEST_CASE("sampler moments and determinism") {
  const MacroPoint theta{0.0, 1.0};
  const ModelConfig cfg{1.0, 0.5, false};
  const std::size_t n = 1000000;
  const auto draws = sample(n, theta, cfg, 2024);

  double m11 = 0.0, m22 = 0.0, c12 = 0.0, v11 = 0.0, v22 = 0.0;
  for (const auto& p : draws) {
    m11 += p.h11;
    m22 += p.h22;
  }
  m11 /= n;
  m22 /= n;
  for (const auto& p : draws) {
    v11 += (p.h11 - m11) * (p.h11 - m11);
    v22 += (p.h22 - m22) * (p.h22 - m22);
    c12 += (p.h11 - m11) * (p.h22 - m22);
  }
  const double corr = c12 / std::sqrt(v11 * v22);
  CHECK(std::abs(corr - 0.5) < 0.005);
  CHECK(std::abs(m11 - theta.mu) < 0.005);

  const auto again = sample(1000, theta, cfg, 99);
  const auto again2 = sample(1000, theta, cfg, 99);
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].h11 == again2[i].h11);
    CHECK(again[i].h21 == again2[i].h21);
  }

  // symmetric flag collapses h21 onto h12
  const auto sym = sample(100, theta, {1.0, 0.3, true}, 5);
  for (const auto& p : sym) CHECK(p.h12 == p.h21);
}

TEST_CASE("score against finite differences") {
  const ModelConfig cfg{1.4, 0.35, false};
  testing::Normals rng(21);
  for (int t = 0; t < 50; ++t) {
    const MacroPoint theta{0.5, 1.2};
    const MicroPoint p{0.5 + 1.2 * rng(), 1.5 * rng(), 1.2 * rng(), 1.2 * rng()};
    for (const Block block : {Block::Bivariate, Block::Full}) {
      const auto sc = score_macro(p, theta, cfg, block);
      const double at[2] = {theta.mu, theta.sigma};
      const auto fd = numerics::central_diff(
          [&](std::span<const double> q) {
            const MacroPoint th{q[0], q[1]};
            if (block == Block::Full) return log_joint_density(p, th, cfg);
            return std::log(bivariate_density(p.h11, p.h22, th, cfg));
          },
          at);
      CHECK(sc[0] == doctest::Approx(fd.gradient[0]).epsilon(1e-6));
      CHECK(sc[1] == doctest::Approx(fd.gradient[1]).epsilon(1e-6));
    }
  }
}

TEST_CASE("score structure and zero mean") {
  // r = 0, bivariate block: d_mu log p = (h11 - mu)/sigma^2
  const MacroPoint theta{0.7, 1.5};
  const ModelConfig cfg0{1.0, 0.0, false};
  const MicroPoint p{2.0, 0.3, 0.1, -0.4};
  const auto sc = score_macro(p, theta, cfg0, Block::Bivariate);
  CHECK(sc[0] == doctest::Approx((p.h11 - theta.mu) / (theta.sigma * theta.sigma))
                     .epsilon(1e-14));

  // E[score] = 0 under the model
  const ModelConfig cfg{1.3, 0.6, false};
  const auto rule = numerics::gauss_hermite_rule(16);
  const auto mean = mean_vector(theta, cfg);
  const auto chol = covariance_cholesky(theta, cfg);
  for (int comp = 0; comp < 2; ++comp) {
    const double ev = numerics::gaussian_expectation(
        [&](std::span<const double> x) {
          const MicroPoint q{x[0], x[1], x[2], x[3]};
          return score_macro(q, theta, cfg, Block::Full)[comp];
        },
        mean, chol, rule);
    CHECK(std::abs(ev) < 1e-8);
  }
}

TEST_CASE("sample moments track the constraint values") {
  const MacroPoint theta{1.0, 1.5};
  const ModelConfig cfg{1.2, -0.4, false};
  const std::size_t n = 400000;
  const auto draws = sample(n, theta, cfg, 31);
  double s22 = 0.0, s12 = 0.0, cov = 0.0;
  for (const auto& p : draws) {
    s22 += p.h22 * p.h22;
    s12 += p.h12 * p.h12;
    cov += (p.h11 - theta.mu) * p.h22;
  }
  const double S2 = cfg.Sigma * cfg.Sigma;
  const double target22 = S2 * S2 / (theta.sigma * theta.sigma);
  CHECK(std::abs(s22 / n - target22) < 5.0 * target22 / std::sqrt(double(n)));
  CHECK(std::abs(s12 / n - theta.sigma * theta.sigma) <
        5.0 * theta.sigma * theta.sigma / std::sqrt(double(n)));
  CHECK(std::abs(cov / n - cfg.r * S2) < 0.01);
}
