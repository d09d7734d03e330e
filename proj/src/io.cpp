#include "gdsched/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>


namespace gdsched {

std::string to_hex_float(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double from_hex_float(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) {
    throw std::invalid_argument("from_hex_float: unparsable value: " + s);
  }
  return v;
}

std::string to_decimal17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json schedule_to_json(const FiniteSchedule& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  nlohmann::json params = nlohmann::json::object();
  switch (s.kind) {
    case ScheduleKind::silver:
      params["order"] = s.silver_order;
      break;
    case ScheduleKind::anytime_prefix:
      params["c"] = s.anytime ? s.anytime->c : default_growth_exponent();
      params["length"] = s.size();
      break;
    case ScheduleKind::constant:
      params["alpha"] = s.constant_alpha;
      break;
    case ScheduleKind::strongly_convex:
      params["kappa"] = s.kappa;
      params["c0"] = s.c0;
      if (s.anytime) params["c"] = s.anytime->c;
      break;
    case ScheduleKind::custom:
      break;
  }
  j["params"] = params;
  nlohmann::json values = nlohmann::json::array();
  for (double v : s.values) values.push_back(to_hex_float(v));
  j["values"] = std::move(values);
  j["join_positions"] = s.join_positions;
  return j;
}

FiniteSchedule schedule_from_json(const nlohmann::json& j) {
  FiniteSchedule s;
  s.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
  const nlohmann::json& params = j.at("params");
  switch (s.kind) {
    case ScheduleKind::silver:
      s.silver_order = params.at("order").get<int>();
      break;
    case ScheduleKind::anytime_prefix:
      s.anytime = AnytimeParams{params.at("c").get<double>()};
      break;
    case ScheduleKind::constant:
      s.constant_alpha = params.at("alpha").get<double>();
      break;
    case ScheduleKind::strongly_convex:
      s.kappa = params.at("kappa").get<double>();
      s.c0 = params.at("c0").get<double>();
      if (params.contains("c")) {
        s.anytime = AnytimeParams{params.at("c").get<double>()};
      }
      break;
    case ScheduleKind::custom:
      break;
  }
  for (const auto& v : j.at("values")) {
    s.values.push_back(from_hex_float(v.get<std::string>()));
  }
  s.join_positions =
      j.at("join_positions").get<std::vector<std::size_t>>();
  return s;
}

void write_schedule_file(const FiniteSchedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << schedule_to_json(s).dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

FiniteSchedule read_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  in >> j;
  return schedule_from_json(j);
}

void write_trajectory_csv(const Trajectory& traj, double f_star_normalized,
                          std::ostream& out) {
  out << "t,alpha,f_gap,grad_norm,is_join\n";
  for (std::size_t t = 0; t < traj.length(); ++t) {
    const double alpha = (t < traj.alpha.size()) ? traj.alpha[t] : 0.0;
    const int join =
        (t < traj.is_join.size()) ? static_cast<int>(traj.is_join[t]) : 0;
    out << (t + 1) << ',' << to_decimal17(alpha) << ','
        << to_decimal17(traj.f[t] - f_star_normalized) << ','
        << to_decimal17(traj.grad_norm[t]) << ',' << join << '\n';
  }
}

nlohmann::json report_to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["check"] = rep.check;
  j["instance"] = rep.instance;
  j["min_slack"] = rep.min_slack;
  j["tol"] = rep.tolerance;
  j["pass"] = rep.pass;
  j["aux"] = rep.aux;
  return j;
}

}  // namespace gdsched
