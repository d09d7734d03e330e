#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "gdsched/engine.hpp"
#include "gdsched/schedule.hpp"
#include "gdsched/verify.hpp"

namespace gdsched {

/// Bit-exact double <-> string via C99 hex-float notation.
std::string to_hex_float(double v);
double from_hex_float(const std::string& s);

/// Decimal with 17 significant digits (round-trips in practice, but the
/// schedule files use hex floats for guaranteed bit-exactness).
std::string to_decimal17(double v);

nlohmann::json schedule_to_json(const FiniteSchedule& s);
FiniteSchedule schedule_from_json(const nlohmann::json& j);

void write_schedule_file(const FiniteSchedule& s, const std::string& path);
FiniteSchedule read_schedule_file(const std::string& path);

/// CSV columns: t, alpha, f_gap, grad_norm, is_join. f_star is in
/// normalized (f/L) units, matching the trajectory.
void write_trajectory_csv(const Trajectory& traj, double f_star_normalized,
                          std::ostream& out);

nlohmann::json report_to_json(const VerificationReport& rep);

}  // namespace gdsched
