#include "igeh/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace igeh::io {

using correlation::TestFunction;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const char* what) {
  if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected an object");
  for (const char* k : required)
    if (!j.contains(k))
      throw std::invalid_argument(std::string(what) + ": missing key '" + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : required) known = known || it.key() == k;
    for (const char* k : optional) known = known || it.key() == k;
    if (!known)
      throw std::invalid_argument(std::string(what) + ": unknown key '" + it.key() + "'");
  }
}

double number(const json& j, const char* key, const char* what) {
  const auto& v = j.at(key);
  if (!v.is_number())
    throw std::invalid_argument(std::string(what) + ": key '" + key + "' must be a number");
  return v.get<double>();
}

} // namespace

ModelSpec parse_model(const json& j) {
  require_keys(j, {"mu", "sigma", "Sigma", "r"}, {"symmetric"}, "model");
  ModelSpec spec;
  spec.theta.mu = number(j, "mu", "model");
  spec.theta.sigma = number(j, "sigma", "model");
  spec.cfg.Sigma = number(j, "Sigma", "model");
  spec.cfg.r = number(j, "r", "model");
  if (j.contains("symmetric")) {
    if (!j.at("symmetric").is_boolean())
      throw std::invalid_argument("model: key 'symmetric' must be a boolean");
    spec.cfg.symmetric = j.at("symmetric").get<bool>();
  }
  spec.theta.validate();
  spec.cfg.validate();
  return spec;
}

ModelSpec parse_model_file(const std::string& path) {
  return parse_model(json::parse(read_file(path)));
}

json model_to_json(const ModelSpec& spec) {
  return json{{"mu", spec.theta.mu},
              {"sigma", spec.theta.sigma},
              {"Sigma", spec.cfg.Sigma},
              {"r", spec.cfg.r},
              {"symmetric", spec.cfg.symmetric}};
}

dynamics::RSchedule parse_schedule(const json& j) {
  require_keys(j, {"kind", "r0"}, {"lambda", "alpha"}, "schedule");
  const std::string kind = j.at("kind").get<std::string>();
  const double r0 = number(j, "r0", "schedule");
  if (kind == "constant") {
    return dynamics::RSchedule::constant(r0);
  }
  if (kind == "expdecay") {
    if (!j.contains("lambda"))
      throw std::invalid_argument("schedule: expdecay requires 'lambda'");
    return dynamics::RSchedule::exp_decay(r0, number(j, "lambda", "schedule"));
  }
  if (kind == "dampedosc") {
    if (!j.contains("alpha"))
      throw std::invalid_argument("schedule: dampedosc requires 'alpha'");
    const double lambda = j.contains("lambda") ? number(j, "lambda", "schedule") : 0.0;
    return dynamics::RSchedule::damped_oscillation(r0, number(j, "alpha", "schedule"), lambda);
  }
  throw std::invalid_argument("schedule: unknown kind '" + kind + "'");
}

dynamics::RSchedule parse_schedule_file(const std::string& path) {
  return parse_schedule(json::parse(read_file(path)));
}

json schedule_to_json(const dynamics::RSchedule& s) {
  json j{{"kind", s.name()}, {"r0", s.r0}};
  if (s.kind == dynamics::RSchedule::Kind::ExpDecay) j["lambda"] = s.lambda;
  if (s.kind == dynamics::RSchedule::Kind::DampedOscillation) {
    j["alpha"] = s.alpha;
    j["lambda"] = s.lambda;
  }
  return j;
}

namespace {

TestFunction parse_test_function(const json& j) {
  require_keys(j, {"var", "kind"}, {"omega", "center", "width", "lo", "hi"}, "battery");
  const int var = j.at("var").get<int>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return TestFunction::identity(var);
  if (kind == "one") return TestFunction::one(var);
  if (kind == "cosine") return TestFunction::cosine(var, number(j, "omega", "battery"));
  if (kind == "gaussbump")
    return TestFunction::gauss_bump(var, number(j, "center", "battery"),
                                    number(j, "width", "battery"));
  if (kind == "indicator")
    return TestFunction::indicator(var, number(j, "lo", "battery"),
                                   number(j, "hi", "battery"));
  throw std::invalid_argument("battery: unknown kind '" + kind + "'");
}

json test_function_to_json(const TestFunction& f) {
  json j{{"var", f.var}};
  switch (f.kind) {
    case TestFunction::Kind::Identity: j["kind"] = "identity"; break;
    case TestFunction::Kind::One: j["kind"] = "one"; break;
    case TestFunction::Kind::Cosine:
      j["kind"] = "cosine";
      j["omega"] = f.a;
      break;
    case TestFunction::Kind::GaussBump:
      j["kind"] = "gaussbump";
      j["center"] = f.a;
      j["width"] = f.b;
      break;
    case TestFunction::Kind::Indicator:
      j["kind"] = "indicator";
      j["lo"] = f.a;
      j["hi"] = f.b;
      break;
  }
  return j;
}

} // namespace

correlation::Battery parse_battery(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("battery: expected an array of exactly 4 functions");
  correlation::Battery fs{TestFunction::one(1), TestFunction::one(2), TestFunction::one(3),
                          TestFunction::one(4)};
  bool seen[4] = {false, false, false, false};
  for (std::size_t i = 0; i < 4; ++i) {
    const TestFunction f = parse_test_function(j[i]);
    if (f.var < 1 || f.var > 4)
      throw std::invalid_argument("battery: variable index must be 1..4");
    if (seen[f.var - 1])
      throw std::invalid_argument("battery: duplicate variable index");
    seen[f.var - 1] = true;
    fs[f.var - 1] = f;
  }
  return fs;
}

correlation::Battery parse_battery_file(const std::string& path) {
  return parse_battery(json::parse(read_file(path)));
}

json battery_to_json(const correlation::Battery& fs) {
  json arr = json::array();
  for (const auto& f : fs) arr.push_back(test_function_to_json(f));
  return arr;
}

namespace {

json metric_to_json(const geometry::MetricTensor& g) {
  return json::array({json::array({g.g11, g.g12}), json::array({g.g12, g.g22})});
}

json christoffel_to_json(const geometry::Christoffel& c) {
  return json{{"Gamma1_11", c(0, 0, 0)}, {"Gamma1_12", c(0, 0, 1)},
              {"Gamma1_22", c(0, 1, 1)}, {"Gamma2_11", c(1, 0, 0)},
              {"Gamma2_12", c(1, 0, 1)}, {"Gamma2_22", c(1, 1, 1)}};
}

json ricci_to_json(const geometry::CurvatureReport& r) {
  return json{{"R11", r.R11}, {"R22", r.R22}, {"R12", r.R12}, {"R", r.R}};
}

} // namespace

json geometry_report(const ModelSpec& spec, model::Block block, int order) {
  const auto& theta = spec.theta;
  const auto& cfg = spec.cfg;
  const auto g_num = geometry::fisher_metric_numeric(theta, cfg, block, order);
  const auto g_ana = geometry::fisher_metric_analytic(theta, cfg);
  const auto g_lit = geometry::fisher_metric_sigma_variant(theta, cfg);
  const auto gamma = geometry::christoffel(theta, cfg, geometry::DerivativeMode::Analytic);
  const auto gamma_fd =
      geometry::christoffel(theta, cfg, geometry::DerivativeMode::FiniteDifference);
  const auto ric = geometry::ricci(theta, cfg, geometry::DerivativeMode::Analytic);
  const auto ric_fd = geometry::ricci(theta, cfg, geometry::DerivativeMode::FiniteDifference);

  json j;
  j["at"] = json{{"mu", theta.mu}, {"sigma", theta.sigma}};
  j["r"] = cfg.r;
  j["Sigma"] = cfg.Sigma;
  j["block"] = block == model::Block::Bivariate ? "bivariate" : "full";
  j["g"] = metric_to_json(g_ana);
  j["g_numeric"] = metric_to_json(g_num);
  j["paper_literal_metric"] = metric_to_json(g_lit);
  j["christoffel"] = christoffel_to_json(gamma);
  j["christoffel_fd"] = christoffel_to_json(gamma_fd);
  j["ricci"] = ricci_to_json(ric);
  j["ricci_fd"] = ricci_to_json(ric_fd);
  j["metric_variant_max_reldiff"] =
      std::max(std::abs(g_lit.g11 / g_ana.g11 - 1.0), std::abs(g_lit.g22 / g_ana.g22 - 1.0));
  j["note"] =
      "g uses the 1/sigma^2 normalization, the one consistent with the quadrature "
      "metric (g_numeric on the bivariate block), the christoffel values and the "
      "ricci values; paper_literal_metric keeps the 1/sigma variant, which matches "
      "g only at sigma = 1.";
  return j;
}

json verdict_to_json(const correlation::IgehVerdict& v) {
  return json{{"level", correlation::to_string(v.level)},
              {"max_abs_C", v.max_abs_c},
              {"tail_max_abs_C", v.tail_max_abs_c},
              {"time_avg", v.time_avg},
              {"time_avg_quarter", v.time_avg_quarter},
              {"tolerances",
               json{{"eps_bernoulli", v.tolerances.eps_bernoulli},
                    {"eps_mixing", v.tolerances.eps_mixing},
                    {"eps_ergodic", v.tolerances.eps_ergodic},
                    {"tail_fraction", v.tolerances.tail_fraction}}}};
}

json constraint_report_to_json(const model::ConstraintReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back(json{{"name", e.name},
                           {"expected", e.expected},
                           {"actual", e.actual},
                           {"residual", e.residual},
                           {"pass", e.pass}});
  return json{{"tolerance", rep.tolerance}, {"all_pass", rep.all_pass},
              {"constraints", entries}};
}

json bound_reports_to_json(const std::vector<distinguishability::BoundReport>& reps) {
  json arr = json::array();
  for (const auto& r : reps)
    arr.push_back(json{{"battery_id", r.battery_id},
                       {"r", r.r},
                       {"abs_C", r.abs_c},
                       {"bound_product_norms", r.bound_product_norms},
                       {"bound_mixed_norms", r.bound_mixed_norms},
                       {"product_norms_ok", r.product_norms_ok},
                       {"mixed_norms_ok", r.mixed_norms_ok}});
  return arr;
}

std::string trajectory_csv(const dynamics::Trajectory& traj) {
  std::ostringstream os;
  os << "tau,mu,sigma,mu_dot,sigma_dot,speed\n";
  for (const auto& s : traj.samples)
    os << fmt17(s.tau) << ',' << fmt17(s.state.theta.mu) << ',' << fmt17(s.state.theta.sigma)
       << ',' << fmt17(s.state.velocity[0]) << ',' << fmt17(s.state.velocity[1]) << ','
       << fmt17(s.speed) << '\n';
  return os.str();
}

std::string series_csv(const correlation::CorrelationSeries& series) {
  std::ostringstream os;
  os << "tau,r,C\n";
  for (const auto& e : series.entries)
    os << fmt17(e.tau) << ',' << fmt17(e.r) << ',' << fmt17(e.c) << '\n';
  return os.str();
}

std::string fcurve_csv(const std::vector<distinguishability::FResult>& curve) {
  std::ostringstream os;
  os << "r,F_closed,F_bruteforce,ratio,argmax_a1,argmax_a2\n";
  for (const auto& f : curve)
    os << fmt17(f.r) << ',' << fmt17(f.f_closed) << ',' << fmt17(f.f_bruteforce) << ','
       << fmt17(f.convention_ratio) << ',' << fmt17(f.argmax[0]) << ','
       << fmt17(f.argmax[1]) << '\n';
  return os.str();
}

namespace {

std::vector<std::vector<double>> parse_csv(const std::string& text, const std::string& header,
                                           std::size_t columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw std::invalid_argument("csv: expected header '" + header + "', got '" + line + "'");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos
                                                    ? std::string::npos
                                                    : comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::invalid_argument("csv: cannot parse number '" + cell + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (row.size() != columns)
      throw std::invalid_argument("csv: expected " + std::to_string(columns) +
                                  " columns, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace

std::vector<TrajectoryRow> parse_trajectory_csv(const std::string& text) {
  const auto rows = parse_csv(text, "tau,mu,sigma,mu_dot,sigma_dot,speed", 6);
  std::vector<TrajectoryRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
  return out;
}

std::vector<correlation::CorrelationEntry> parse_series_csv(const std::string& text) {
  const auto rows = parse_csv(text, "tau,r,C", 3);
  std::vector<correlation::CorrelationEntry> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r[0], r[1], r[2]});
  return out;
}

std::vector<distinguishability::FResult> parse_fcurve_csv(const std::string& text) {
  const auto rows = parse_csv(text, "r,F_closed,F_bruteforce,ratio,argmax_a1,argmax_a2", 6);
  std::vector<distinguishability::FResult> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    distinguishability::FResult f;
    f.r = r[0];
    f.f_closed = r[1];
    f.f_bruteforce = r[2];
    f.convention_ratio = r[3];
    f.argmax = {r[4], r[5]};
    out.push_back(f);
  }
  return out;
}

} // namespace igeh::io
