#ifndef IGEH_IO_HPP
#define IGEH_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "igeh/correlation.hpp"
#include "igeh/distinguishability.hpp"
#include "igeh/dynamics.hpp"
#include "igeh/geometry.hpp"
#include "igeh/model.hpp"

namespace igeh::io {

using json = nlohmann::ordered_json;

/// Doubles in CSV files carry 17 significant digits so they round-trip
/// exactly.
std::string fmt17(double v);

/// Write-then-rename, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// -- config parsing (unknown keys are rejected everywhere) --------------

struct ModelSpec {
  model::MacroPoint theta;
  model::ModelConfig cfg;
};

ModelSpec parse_model(const json& j);
ModelSpec parse_model_file(const std::string& path);
json model_to_json(const ModelSpec& spec);

dynamics::RSchedule parse_schedule(const json& j);
dynamics::RSchedule parse_schedule_file(const std::string& path);
json schedule_to_json(const dynamics::RSchedule& s);

correlation::Battery parse_battery(const json& j);
correlation::Battery parse_battery_file(const std::string& path);
json battery_to_json(const correlation::Battery& fs);

// -- reports -------------------------------------------------------------

json geometry_report(const ModelSpec& spec, model::Block block, int order);
json verdict_to_json(const correlation::IgehVerdict& v);
json constraint_report_to_json(const model::ConstraintReport& rep);
json bound_reports_to_json(const std::vector<distinguishability::BoundReport>& reps);

// -- CSV schemas ----------------------------------------------------------

std::string trajectory_csv(const dynamics::Trajectory& traj);
std::string series_csv(const correlation::CorrelationSeries& series);
std::string fcurve_csv(const std::vector<distinguishability::FResult>& curve);

struct TrajectoryRow {
  double tau, mu, sigma, mu_dot, sigma_dot, speed;
};
std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text);

std::vector<correlation::CorrelationEntry> parse_series_csv(const std::string& text);

std::vector<distinguishability::FResult> parse_fcurve_csv(const std::string& text);

} // namespace igeh::io

#endif
