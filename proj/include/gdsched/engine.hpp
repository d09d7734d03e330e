#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "gdsched/objectives.hpp"
#include "gdsched/schedule.hpp"

namespace gdsched {

/// Recorded GD run, in L-normalized units: the engine applies
/// x_{t+1} = x_t - (alpha_t / L) grad f(x_t) and records f_t/L and
/// |g_t|/L, so every 1-smooth inequality applies verbatim.
/// Index 0 of each array corresponds to the first iterate x_1.
struct Trajectory {
  std::vector<double> alpha;       // alpha_1..alpha_{T-1}, normalized units
  std::vector<double> f;           // f(x_t)/L, t = 1..T
  std::vector<double> grad_norm;   // |grad f(x_t)|/L
  std::vector<std::uint8_t> is_join;  // per applied stepsize
  std::vector<Eigen::VectorXd> x;  // retained iterates (empty if not kept)
  bool full_iterates = false;

  std::size_t length() const { return f.size(); }
};

struct RunConfig {
  std::size_t steps = 1;  // T: number of iterates recorded
  /// Retain every iterate only while dim*T stays under this many scalars.
  std::size_t retention_budget = 10'000'000;
};

/// Runs GD from x1 with the given stepsize source (1-based position ->
/// normalized stepsize). Throws std::runtime_error on a non-finite value
/// or gradient; the engine never clamps.
Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const std::function<double(std::size_t)>& stepsize,
                  const RunConfig& config);

Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const FiniteSchedule& schedule, const RunConfig& config);

/// Convenience: T iterates under `schedule`, full retention.
Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const FiniteSchedule& schedule);

/// Normalized suboptimality f_t/L - f*/L, clamped at zero; throws if
/// f_star exceeds the observed minimum by more than the tolerance.
std::vector<double> suboptimality_series(const Trajectory& traj,
                                         double f_star_normalized,
                                         double tol = 1e-9);

}  // namespace gdsched
