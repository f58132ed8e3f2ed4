#include "igeh/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace igeh::dynamics {

using model::MacroPoint;
using model::ModelConfig;

std::array<double, 4> geodesic_rhs(const GeodesicState& s, const ModelConfig& cfg) {
  s.theta.validate();
  cfg.validate();
  const auto gamma = geometry::christoffel(s.theta, cfg);
  const double u = s.velocity[0];
  const double v = s.velocity[1];
  double acc[2];
  for (int k = 0; k < 2; ++k) {
    acc[k] = -(gamma.coeff[k][0][0] * u * u + 2.0 * gamma.coeff[k][0][1] * u * v +
               gamma.coeff[k][1][1] * v * v);
  }
  return {u, v, acc[0], acc[1]};
}

namespace {

double metric_speed(const GeodesicState& s, const ModelConfig& cfg) {
  const auto g = geometry::fisher_metric_analytic(s.theta, cfg);
  const double u = s.velocity[0];
  const double v = s.velocity[1];
  return g.g11 * u * u + 2.0 * g.g12 * u * v + g.g22 * v * v;
}

} // namespace

Trajectory integrate_geodesic(const GeodesicState& initial, const ModelConfig& cfg,
                              double tau_max, double h) {
  initial.theta.validate();
  cfg.validate();

  numerics::OdeField field = [&](double, std::span<const double> y) {
    GeodesicState s{{y[0], y[1]}, {y[2], y[3]}};
    const auto d = geodesic_rhs(s, cfg);
    return std::vector<double>(d.begin(), d.end());
  };
  numerics::StatePredicate admissible = [](std::span<const double> y) {
    return y[1] > 0.0;
  };

  const double y0[4] = {initial.theta.mu, initial.theta.sigma, initial.velocity[0],
                        initial.velocity[1]};
  const auto ode = numerics::rk4_integrate(field, y0, tau_max, h, admissible);

  Trajectory traj;
  traj.truncated = ode.truncated;
  traj.samples.reserve(ode.samples.size());
  double speed0 = 0.0;
  for (const auto& [tau, y] : ode.samples) {
    TrajectorySample smp;
    smp.tau = tau;
    smp.state = GeodesicState{{y[0], y[1]}, {y[2], y[3]}};
    smp.speed = metric_speed(smp.state, cfg);
    if (traj.samples.empty()) speed0 = smp.speed;
    traj.samples.push_back(smp);
    if (speed0 != 0.0)
      traj.speed_drift = std::max(traj.speed_drift, std::abs(smp.speed / speed0 - 1.0));
  }
  return traj;
}

RSchedule RSchedule::constant(double r0) {
  RSchedule s;
  s.kind = Kind::Constant;
  s.r0 = r0;
  if (std::abs(r0) > model::kMaxAbsCorrelation)
    throw std::invalid_argument("RSchedule: |r0| must be at most 1 - 1e-6");
  return s;
}

RSchedule RSchedule::exp_decay(double r0, double lambda) {
  RSchedule s;
  s.kind = Kind::ExpDecay;
  s.r0 = r0;
  s.lambda = lambda;
  if (std::abs(r0) > model::kMaxAbsCorrelation)
    throw std::invalid_argument("RSchedule: |r0| must be at most 1 - 1e-6");
  if (!(lambda > 0.0)) throw std::invalid_argument("RSchedule: decay rate must be positive");
  return s;
}

RSchedule RSchedule::damped_oscillation(double r0, double alpha, double lambda) {
  RSchedule s;
  s.kind = Kind::DampedOscillation;
  s.r0 = r0;
  s.alpha = alpha;
  s.lambda = lambda;
  if (std::abs(r0) > model::kMaxAbsCorrelation)
    throw std::invalid_argument("RSchedule: |r0| must be at most 1 - 1e-6");
  if (lambda < 0.0) throw std::invalid_argument("RSchedule: decay rate must be non-negative");
  return s;
}

std::string RSchedule::name() const {
  switch (kind) {
    case Kind::Constant: return "constant";
    case Kind::ExpDecay: return "expdecay";
    case Kind::DampedOscillation: return "dampedosc";
  }
  return "unknown";
}

double schedule_r(const RSchedule& s, double tau) {
  if (tau < 0.0) throw std::invalid_argument("schedule_r: tau must be non-negative");
  double r = 0.0;
  switch (s.kind) {
    case RSchedule::Kind::Constant: r = s.r0; break;
    case RSchedule::Kind::ExpDecay: r = s.r0 * std::exp(-s.lambda * tau); break;
    case RSchedule::Kind::DampedOscillation:
      r = s.r0 * std::exp(-s.lambda * tau) * std::sin(s.alpha * tau);
      break;
  }
  return std::clamp(r, -model::kMaxAbsCorrelation, model::kMaxAbsCorrelation);
}

} // namespace igeh::dynamics
