#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "gdsched/engine.hpp"
#include "gdsched/objectives.hpp"
#include "gdsched/schedule.hpp"

namespace gdsched {

/// Outcome of one inequality/identity battery. Slacks are signed: >= 0
/// means the claimed inequality holds; pass iff min_slack >= -tolerance.
struct VerificationReport {
  std::string check;
  std::string instance;
  double min_slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, double> aux;

  void record(double slack) { min_slack = std::min(min_slack, slack); }
  void finalize() { pass = min_slack >= -tolerance; }
};

inline constexpr double kIdentityTol = 1e-9;   // relative, analytic identities
inline constexpr double kSlackTol = 1e-7;      // x natural scale, inequalities

/// Base point (x_0, f_0, g_0) in L-normalized units.
struct BasePoint {
  Eigen::VectorXd x;
  double f = 0.0;
  Eigen::VectorXd g;
};

BasePoint make_base_point(const Objective& obj, const Eigen::VectorXd& x0);

/// Lengths 2^i - 1, aggregates rho^i - 1, prefix nesting, for i <= max_order.
VerificationReport check_silver_identities(int max_order);

/// A_{t+1} >= (1/36) t^((c+log2 rho)/(c+1)) and 2^(o_t) <= 2 t^(1/(c+1))
/// for all t <= t_max (streaming scan).
VerificationReport check_anytime_bounds(const AnytimeParams& params,
                                        std::size_t t_max);

/// Both chained primitivity inequalities at the final index of traj;
/// requires known x*, f* and fully retained iterates.
VerificationReport check_primitive(const Trajectory& traj,
                                   const PrefixSums& sums,
                                   const Objective& obj);

/// Base-point variant of the certificate: A_k(f_k-f_0) + 1/2|x_k-x_0|^2 +
/// C_k|g_k|^2 <= 1/2|x_1-x_0|^2 + sum alpha_i <g_i,g_0> - A_k/2 |g_0|^2.
VerificationReport check_lemma_key(const Trajectory& traj,
                                   const BasePoint& base,
                                   const PrefixSums& sums);

/// Gradient-norm and value control after a pre-step of size alpha0:
/// runs x_1 = x_0 - alpha0 g_0 followed by `prefix`, then checks both
/// final-step bounds.
VerificationReport check_lemma_key3(const FiniteSchedule& prefix, double alpha0,
                                    const Objective& obj,
                                    const Eigen::VectorXd& x0);

/// f_0 - f_l lower bound for a pre-step alpha in [1, A_l + 2).
VerificationReport check_lemma_key2(const FiniteSchedule& prefix, double alpha,
                                    const Objective& obj,
                                    const Eigen::VectorXd& x0);

/// After a long pre-step alpha >= (sqrt2-1)(rho^i - 1) + sqrt2, every
/// intermediate value along the order-i silver block stays within
/// 432 alpha^2 |g_0|^2 of f_0.
VerificationReport check_refine1(int order, double alpha, const Objective& obj,
                                 const Eigen::VectorXd& x0);

/// f_{t_i+1} - f* <= |x_1-x*|^2 / A_{t_i+1} and |g_{t_i+1}|^2 <=
/// |x_1-x*|^2 / A_{t_i+1}^2 at every checkpoint t_i + 1 <= T.
VerificationReport check_checkpoint_rates(const AnytimeParams& params,
                                          const Objective& obj,
                                          const Eigen::VectorXd& x1,
                                          std::size_t steps);

/// Per-step descent bound f_{t+1} - f_t <= (a^2+2a)/2 |g_t|^2 over the
/// whole trajectory.
VerificationReport check_local_error(const Trajectory& traj);

/// Scalar-quadratic worst case sup_{lambda in (0,1]} (lambda/2)
/// prod (1 - lambda a_i)^2, via a geometric grid refined by golden
/// section. `grid_points` trades accuracy for speed.
double worst_case_quadratic(const std::vector<double>& prefix,
                            std::size_t grid_points = 10'000);

/// Incremental variant of the worst-case oracle: appending a stepsize
/// updates the per-lambda log products in O(grid) so that F can be read
/// at every prefix length of a long schedule.
class WorstCaseScan {
 public:
  explicit WorstCaseScan(std::size_t grid_points = 10'000);

  void append(double alpha);
  std::size_t length() const { return prefix_.size(); }
  /// Grid-only maximum (no refinement); monotone scans use this.
  double grid_value() const;
  /// Grid maximum refined by golden section around the best cell.
  double refined_value() const;

 private:
  std::vector<double> grid_;
  std::vector<double> logs_;
  std::vector<double> prefix_;
};

/// Smallest C0 with F_T * T^theta <= C0 for the anytime schedule over all
/// T <= t_max on the scalar-quadratic oracle. Default for
/// strongly_convex_schedule and recorded in reports.
double calibrate_c0(const AnytimeParams& params = default_anytime_params(),
                    std::size_t t_max = 10'000);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;          // log-log fit of value vs T
  double sup_value_t_theta = 0.0;  // max over points of value * T^theta
};

/// Least-squares fit of log(value) against log(T). Needs >= 5 positive
/// points.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

/// Join-step counts up to t for both schedules: the limiting silver
/// schedule joins at positions 2^k (k >= 1), so its count is floor(log2 t).
std::size_t silver_join_count(std::size_t t);

struct JoinCensus {
  std::vector<std::size_t> anytime_join_positions;  // all joins <= t_max
};

JoinCensus join_step_census(const AnytimeParams& params, std::size_t t_max);

std::size_t anytime_join_count(const JoinCensus& census, std::size_t t);

/// Runs n_periods periods of the periodic strongly-convex schedule and
/// reports the per-period contraction of |x_{i tau + 1} - x*|^2 plus the
/// fitted linear rate of the value gap.
VerificationReport check_strongly_convex(const StrongConvexSchedule& schedule,
                                         const Objective& obj,
                                         const Eigen::VectorXd& x1,
                                         std::size_t n_periods);

}  // namespace gdsched
