#ifndef IGEH_DYNAMICS_HPP
#define IGEH_DYNAMICS_HPP

#include <array>
#include <string>
#include <vector>

#include "igeh/geometry.hpp"
#include "igeh/model.hpp"

namespace igeh::dynamics {

/// Macro position plus velocity (mu_dot, sigma_dot).
struct GeodesicState {
  model::MacroPoint theta;
  std::array<double, 2> velocity{0.0, 0.0};
};

struct TrajectorySample {
  double tau = 0.0;
  GeodesicState state;
  double speed = 0.0; // g(theta_dot, theta_dot)
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool truncated = false;
  double speed_drift = 0.0; // max_t |speed(t)/speed(0) - 1|
};

/// (theta_dot, -Gamma^k_ij theta_dot^i theta_dot^j) with the analytic
/// connection; state layout (mu, sigma, mu_dot, sigma_dot).
std::array<double, 4> geodesic_rhs(const GeodesicState& s, const model::ModelConfig& cfg);

/// RK4 integration of the geodesic equation. Stops with the truncated
/// flag if sigma leaves (0, inf).
Trajectory integrate_geodesic(const GeodesicState& initial, const model::ModelConfig& cfg,
                              double tau_max, double h);

/// Evolution law for the external correlation parameter.
struct RSchedule {
  enum class Kind { Constant, ExpDecay, DampedOscillation };

  Kind kind = Kind::Constant;
  double r0 = 0.0;
  double lambda = 0.0; // decay rate
  double alpha = 0.0;  // oscillation frequency

  static RSchedule constant(double r0);
  static RSchedule exp_decay(double r0, double lambda);
  static RSchedule damped_oscillation(double r0, double alpha, double lambda);

  std::string name() const;
};

/// r(tau) for the schedule, clamped to |r| <= 1 - 1e-6.
double schedule_r(const RSchedule& s, double tau);

} // namespace igeh::dynamics

#endif
