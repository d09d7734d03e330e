#include "gdsched/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gdsched {

Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const std::function<double(std::size_t)>& stepsize,
                  const RunConfig& config) {
  if (config.steps < 1) {
    throw std::invalid_argument("run_gd: steps must be >= 1");
  }
  const std::size_t n_steps = config.steps - 1;
  const double inv_l = 1.0 / obj.smoothness;

  Trajectory traj;
  traj.alpha.reserve(n_steps);
  traj.f.reserve(config.steps);
  traj.grad_norm.reserve(config.steps);
  traj.full_iterates = static_cast<std::size_t>(obj.dim) * config.steps <=
                       config.retention_budget;
  if (traj.full_iterates) traj.x.reserve(config.steps);

  Eigen::VectorXd x = x1;
  for (std::size_t t = 1;; ++t) {
    const double fx = obj.value(x) * inv_l;
    const Eigen::VectorXd g = obj.gradient(x) * inv_l;
    if (!std::isfinite(fx) || !g.allFinite()) {
      throw std::runtime_error("run_gd: non-finite value or gradient at step " +
                               std::to_string(t));
    }
    traj.f.push_back(fx);
    traj.grad_norm.push_back(g.norm());
    if (traj.full_iterates) traj.x.push_back(x);
    if (t > n_steps) break;
    const double a = stepsize(t);
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::runtime_error("run_gd: invalid stepsize at step " +
                               std::to_string(t));
    }
    traj.alpha.push_back(a);
    x -= a * g;  // g is already grad/L, so this is (a/L) * grad
  }
  return traj;
}

Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const FiniteSchedule& schedule, const RunConfig& config) {
  if (schedule.size() + 1 < config.steps) {
    throw std::invalid_argument("run_gd: schedule shorter than requested run");
  }
  Trajectory traj = run_gd(
      obj, x1, [&](std::size_t t) { return schedule.values[t - 1]; }, config);
  traj.is_join.assign(traj.alpha.size(), 0);
  for (std::size_t p : schedule.join_positions) {
    if (p <= traj.is_join.size()) traj.is_join[p - 1] = 1;
  }
  return traj;
}

Trajectory run_gd(const Objective& obj, const Eigen::VectorXd& x1,
                  const FiniteSchedule& schedule) {
  RunConfig config;
  config.steps = schedule.size() + 1;
  return run_gd(obj, x1, schedule, config);
}

std::vector<double> suboptimality_series(const Trajectory& traj,
                                         double f_star_normalized,
                                         double tol) {
  double fmin = traj.f.front();
  double scale = std::abs(traj.f.front());
  for (double v : traj.f) {
    fmin = std::min(fmin, v);
    scale = std::max(scale, std::abs(v));
  }
  if (f_star_normalized > fmin + tol * std::max(1.0, scale)) {
    throw std::invalid_argument(
        "suboptimality_series: f_star exceeds observed minimum");
  }
  std::vector<double> out;
  out.reserve(traj.f.size());
  for (double v : traj.f) {
    out.push_back(std::max(0.0, v - f_star_normalized));
  }
  return out;
}

}  // namespace gdsched
