#include "gdsched/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gdsched {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double pow_int(double base, int e) {
  double v = 1.0;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

}  // namespace

BasePoint make_base_point(const Objective& obj, const Eigen::VectorXd& x0) {
  BasePoint base;
  base.x = x0;
  base.f = obj.value(x0) / obj.smoothness;
  base.g = obj.gradient(x0) / obj.smoothness;
  return base;
}

VerificationReport check_silver_identities(int max_order) {
  if (max_order > 30) {
    throw std::invalid_argument("check_silver_identities: max_order > 30");
  }
  VerificationReport rep;
  rep.check = "silver_identities";
  rep.instance = "orders 1.." + std::to_string(max_order);
  rep.tolerance = 0.0;
  rep.min_slack = std::numeric_limits<double>::infinity();
  FiniteSchedule prev = silver(0);
  for (int i = 1; i <= max_order; ++i) {
    const FiniteSchedule s = silver(i);
    if (s.size() != (std::size_t{1} << i) - 1) {
      rep.record(-1.0);
      continue;
    }
    const double target = pow_int(kSilverRatio, i) - 1.0;
    const double err = std::abs(s.aggregate() - target);
    rep.record((kIdentityTol * pow_int(kSilverRatio, i) - err) /
               pow_int(kSilverRatio, i));
    // prefix nesting, bit-exact
    if (!std::equal(prev.values.begin(), prev.values.end(),
                    s.values.begin())) {
      rep.record(-1.0);
    }
    // every stepsize of a positive-order schedule exceeds 1
    if (*std::min_element(s.values.begin(), s.values.end()) <= 1.0) {
      rep.record(-1.0);
    }
    prev = s;
  }
  rep.aux["max_order"] = max_order;
  rep.finalize();
  return rep;
}

VerificationReport check_anytime_bounds(const AnytimeParams& params,
                                        std::size_t t_max) {
  VerificationReport rep;
  rep.check = "anytime_bounds";
  rep.instance = "c=" + std::to_string(params.c) +
                 " t_max=" + std::to_string(t_max);
  rep.tolerance = kIdentityTol;
  rep.min_slack = std::numeric_limits<double>::infinity();
  const double lr = std::log2(kSilverRatio);
  const double exp_a = (params.c + lr) / (params.c + 1.0);
  const double exp_o = 1.0 / (params.c + 1.0);
  AnytimeStream stream(params);
  double min_a_ratio = std::numeric_limits<double>::infinity();
  double min_o_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t <= t_max; ++t) {
    const StreamStep step = stream.next();
    const double a_next = stream.prefix_aggregate();  // A_{t+1}
    const double bound = std::pow(static_cast<double>(t), exp_a) / 36.0;
    min_a_ratio = std::min(min_a_ratio, a_next / bound);
    const double o_bound =
        2.0 * std::pow(static_cast<double>(t), exp_o);
    min_o_ratio = std::min(
        min_o_ratio, o_bound / std::exp2(static_cast<double>(step.block_order)));
  }
  rep.record(min_a_ratio - 1.0);
  rep.record(min_o_ratio - 1.0);
  rep.aux["min_A_ratio"] = min_a_ratio;
  rep.aux["min_ot_ratio"] = min_o_ratio;
  rep.finalize();
  return rep;
}

VerificationReport check_primitive(const Trajectory& traj,
                                   const PrefixSums& sums,
                                   const Objective& obj) {
  if (!obj.x_star || !obj.f_star) {
    throw std::invalid_argument("check_primitive: objective needs x*, f*");
  }
  if (!traj.full_iterates) {
    throw std::invalid_argument("check_primitive: needs retained iterates");
  }
  const std::size_t k = traj.length();
  const double inv_l = 1.0 / obj.smoothness;
  const Eigen::VectorXd& xs = *obj.x_star;
  const double fs = *obj.f_star * inv_l;
  const double scale = std::max((traj.x.front() - xs).squaredNorm(), 1e-30);

  const double a_k = sums.A_at(k);
  const double c_k = sums.C_at(k);
  const double lhs = a_k * (traj.f[k - 1] - fs) +
                     c_k * traj.grad_norm[k - 1] * traj.grad_norm[k - 1] +
                     0.5 * (traj.x[k - 1] - xs).squaredNorm();
  double mid = 0.5 * (traj.x.front() - xs).squaredNorm();
  for (std::size_t i = 1; i < k; ++i) {
    const Eigen::VectorXd gi = obj.gradient(traj.x[i - 1]) * inv_l;
    mid += traj.alpha[i - 1] * (traj.f[i - 1] - fs - gi.dot(traj.x[i - 1] - xs) +
                                0.5 * gi.squaredNorm());
  }
  const double rhs = 0.5 * (traj.x.front() - xs).squaredNorm();

  VerificationReport rep;
  rep.check = "primitive";
  rep.instance = "k=" + std::to_string(k);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = std::min(mid - lhs, rhs - mid);
  rep.aux["chain_slack_1"] = mid - lhs;
  rep.aux["chain_slack_2"] = rhs - mid;
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_lemma_key(const Trajectory& traj,
                                   const BasePoint& base,
                                   const PrefixSums& sums) {
  if (!traj.full_iterates) {
    throw std::invalid_argument("check_lemma_key: needs retained iterates");
  }
  const std::size_t k = traj.length();
  const double a_k = sums.A_at(k);
  const double c_k = sums.C_at(k);
  const double g0_sq = base.g.squaredNorm();
  const double scale =
      std::max({(traj.x.front() - base.x).squaredNorm(), g0_sq, 1e-30});

  const double lhs = a_k * (traj.f[k - 1] - base.f) +
                     0.5 * (traj.x[k - 1] - base.x).squaredNorm() +
                     c_k * traj.grad_norm[k - 1] * traj.grad_norm[k - 1];
  double rhs = 0.5 * (traj.x.front() - base.x).squaredNorm() -
               0.5 * a_k * g0_sq;
  for (std::size_t i = 1; i < k; ++i) {
    // x_i - x_{i+1} = alpha_i g_i, so the inner product needs no extra
    // gradient evaluations
    rhs += (traj.x[i - 1] - traj.x[i]).dot(base.g);
  }

  VerificationReport rep;
  rep.check = "lemma_key";
  rep.instance = "k=" + std::to_string(k);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = rhs - lhs;
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_lemma_key3(const FiniteSchedule& prefix, double alpha0,
                                    const Objective& obj,
                                    const Eigen::VectorXd& x0) {
  const BasePoint base = make_base_point(obj, x0);
  const Eigen::VectorXd x1 = x0 - alpha0 * base.g;
  const Trajectory traj = run_gd(obj, x1, prefix);
  const PrefixSums sums = prefix_sums(prefix);
  const std::size_t k = traj.length();
  const double a_k = sums.A_at(k);
  const double c_k = sums.C_at(k);
  const double g0_sq = base.g.squaredNorm();
  const double scale = std::max(g0_sq, 1e-30);

  VerificationReport rep;
  rep.check = "lemma_key3";
  rep.instance = "k=" + std::to_string(k) + " alpha0=" + std::to_string(alpha0);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = std::numeric_limits<double>::infinity();

  const double gk_sq = traj.grad_norm[k - 1] * traj.grad_norm[k - 1];
  const double bound1 = (0.5 * alpha0 * alpha0 + 0.5 * (a_k + 1) * (a_k + 1) -
                         alpha0 - 0.5 * a_k) *
                        g0_sq;
  rep.record(bound1 - c_k * gk_sq);
  rep.aux["grad_slack"] = bound1 - c_k * gk_sq;
  if (a_k > 0.0) {
    const double bound2 =
        (0.5 * alpha0 * alpha0 - 0.5 * a_k - alpha0 + 0.5) / a_k * g0_sq;
    rep.record(bound2 - (traj.f[k - 1] - base.f));
    rep.aux["value_slack"] = bound2 - (traj.f[k - 1] - base.f);
  }
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_lemma_key2(const FiniteSchedule& prefix, double alpha,
                                    const Objective& obj,
                                    const Eigen::VectorXd& x0) {
  const PrefixSums sums = prefix_sums(prefix);
  const std::size_t l = prefix.size() + 1;
  const double a_l = sums.A_at(l);
  if (alpha < 1.0 || alpha >= a_l + 2.0) {
    throw std::invalid_argument("check_lemma_key2: alpha outside [1, A_l+2)");
  }
  const double a_used = std::min(alpha, a_l + 2.0 - 1e-6);

  const BasePoint base = make_base_point(obj, x0);
  const Eigen::VectorXd x1 = x0 - a_used * base.g;
  const Trajectory traj = run_gd(obj, x1, prefix);
  const double g0_sq = base.g.squaredNorm();
  const double gl_sq = traj.grad_norm[l - 1] * traj.grad_norm[l - 1];
  const double scale = std::max(g0_sq, 1e-30);

  const double denom = 2.0 * (a_l + 2.0 - a_used);
  const double rhs = (a_l + 3.0 * a_used - 2.0 * a_used * a_used) / denom *
                         g0_sq +
                     (2.0 * a_l * a_l + 3.0 * a_l + a_used) / denom * gl_sq;
  const double lhs = base.f - traj.f[l - 1];

  VerificationReport rep;
  rep.check = "lemma_key2";
  rep.instance = "l=" + std::to_string(l) + " alpha=" + std::to_string(a_used);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = lhs - rhs;
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_refine1(int order, double alpha, const Objective& obj,
                                 const Eigen::VectorXd& x0) {
  const double a_total = pow_int(kSilverRatio, order) - 1.0;
  const double threshold = (kSqrt2 - 1.0) * a_total + kSqrt2;
  if (alpha < threshold * (1.0 - 1e-12)) {
    throw std::invalid_argument(
        "check_refine1: alpha below (sqrt2-1)A_k + sqrt2");
  }
  const FiniteSchedule block = silver(order);
  const BasePoint base = make_base_point(obj, x0);
  const Eigen::VectorXd x1 = x0 - alpha * base.g;
  const Trajectory traj = run_gd(obj, x1, block);
  const double g0_sq = base.g.squaredNorm();
  const double scale = std::max(alpha * alpha * g0_sq, 1e-30);
  const double bound = 432.0 * alpha * alpha * g0_sq;

  VerificationReport rep;
  rep.check = "refine1";
  rep.instance = "order=" + std::to_string(order) +
                 " alpha=" + std::to_string(alpha);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  for (std::size_t l = 1; l < traj.length(); ++l) {
    const double rise = traj.f[l - 1] - base.f;
    rep.record(bound - rise);
    if (g0_sq > 0.0) {
      worst_ratio = std::max(worst_ratio, rise / (alpha * alpha * g0_sq));
    }
  }
  rep.aux["worst_ratio"] = worst_ratio;
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_checkpoint_rates(const AnytimeParams& params,
                                          const Objective& obj,
                                          const Eigen::VectorXd& x1,
                                          std::size_t steps) {
  if (!obj.x_star || !obj.f_star) {
    throw std::invalid_argument(
        "check_checkpoint_rates: objective needs x*, f*");
  }
  const FiniteSchedule prefix = anytime_prefix(steps - 1, params);
  const PrefixSums sums = prefix_sums(prefix);
  const Trajectory traj = run_gd(obj, x1, prefix);
  const double fs = *obj.f_star / obj.smoothness;
  const double r_sq = (x1 - *obj.x_star).squaredNorm();
  const double scale = std::max(r_sq, 1e-30);

  VerificationReport rep;
  rep.check = "checkpoint_rates";
  rep.instance = "T=" + std::to_string(steps);
  rep.tolerance = kSlackTol * scale;
  rep.min_slack = std::numeric_limits<double>::infinity();
  std::size_t n_checked = 0;
  for (std::size_t ti : checkpoint_lengths(params, steps - 1)) {
    const double a = sums.A_at(ti + 1);
    const double gap = traj.f[ti] - fs;        // iterate t_i + 1
    const double g_sq = traj.grad_norm[ti] * traj.grad_norm[ti];
    rep.record(r_sq / a - gap);
    rep.record(r_sq / (a * a) - g_sq);
    ++n_checked;
  }
  rep.aux["checkpoints"] = static_cast<double>(n_checked);
  rep.aux["scale"] = scale;
  rep.finalize();
  return rep;
}

VerificationReport check_local_error(const Trajectory& traj) {
  VerificationReport rep;
  rep.check = "local_error";
  rep.instance = "T=" + std::to_string(traj.length());
  rep.tolerance = 1e-9;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < traj.alpha.size(); ++t) {
    const double a = traj.alpha[t];
    const double g_sq = traj.grad_norm[t] * traj.grad_norm[t];
    const double slack =
        0.5 * (a * a + 2.0 * a) * g_sq - (traj.f[t + 1] - traj.f[t]);
    const double scale = std::max({g_sq, std::abs(traj.f[t]), 1e-30});
    rep.record(slack / scale);
  }
  rep.finalize();
  return rep;
}

namespace {

// Product value (lambda/2) prod (1 - lambda a_i)^2 in the log domain.
double scalar_worst_value(double lambda, const std::vector<double>& prefix) {
  double logs = 0.0;
  for (double a : prefix) {
    const double term = std::abs(1.0 - lambda * a);
    if (term == 0.0) return 0.0;
    logs += 2.0 * std::log(term);
  }
  return 0.5 * lambda * std::exp(logs);
}

}  // namespace

double worst_case_quadratic(const std::vector<double>& prefix,
                            std::size_t grid_points) {
  const double lo = 1e-8;
  const double ratio = std::pow(1.0 / lo, 1.0 / double(grid_points - 1));
  double best = 0.0;
  std::size_t best_i = 0;
  double lambda = lo;
  std::vector<double> grid(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid[i] = (i + 1 == grid_points) ? 1.0 : lambda;
    const double v = scalar_worst_value(grid[i], prefix);
    if (v > best) {
      best = v;
      best_i = i;
    }
    lambda *= ratio;
  }
  // golden-section refinement around the best grid cell
  double a = grid[best_i > 0 ? best_i - 1 : 0];
  double b = grid[std::min(best_i + 1, grid_points - 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = scalar_worst_value(x1, prefix);
  double f2 = scalar_worst_value(x2, prefix);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = scalar_worst_value(x2, prefix);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = scalar_worst_value(x1, prefix);
    }
  }
  return std::max({best, f1, f2});
}

WorstCaseScan::WorstCaseScan(std::size_t grid_points) {
  grid_.resize(grid_points);
  logs_.assign(grid_points, 0.0);
  const double lo = 1e-8;
  const double ratio = std::pow(1.0 / lo, 1.0 / double(grid_points - 1));
  double lambda = lo;
  for (std::size_t i = 0; i < grid_points; ++i) {
    grid_[i] = (i + 1 == grid_points) ? 1.0 : lambda;
    lambda *= ratio;
  }
}

void WorstCaseScan::append(double alpha) {
  prefix_.push_back(alpha);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    // log(0) = -inf marks a lambda that maps the iterate exactly to the
    // minimizer; it stays -inf under further appends as required
    logs_[i] += 2.0 * std::log(std::abs(1.0 - grid_[i] * alpha));
  }
}

double WorstCaseScan::grid_value() const {
  double best = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    best = std::max(best, 0.5 * grid_[i] * std::exp(logs_[i]));
  }
  return best;
}

double WorstCaseScan::refined_value() const {
  double best = 0.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double v = 0.5 * grid_[i] * std::exp(logs_[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double a = grid_[best_i > 0 ? best_i - 1 : 0];
  double b = grid_[std::min(best_i + 1, grid_.size() - 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = scalar_worst_value(x1, prefix_);
  double f2 = scalar_worst_value(x2, prefix_);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = scalar_worst_value(x2, prefix_);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = scalar_worst_value(x1, prefix_);
    }
  }
  return std::max({best, f1, f2});
}

double calibrate_c0(const AnytimeParams& params, std::size_t t_max) {
  const FiniteSchedule sched = anytime_prefix(t_max, params);
  const double theta = rate_exponent_theta();
  WorstCaseScan scan;
  double best = 0.0;
  std::size_t best_t = 1;
  for (std::size_t t = 1; t <= t_max; ++t) {
    scan.append(sched.values[t - 1]);
    const double v = scan.grid_value() * std::pow(static_cast<double>(t), theta);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  // re-refine at the grid argmax only; the refinement step is O(grid) so
  // doing it at every T would dominate the scan
  const std::vector<double> prefix(sched.values.begin(),
                                   sched.values.begin() + best_t);
  return std::max(best, worst_case_quadratic(prefix) *
                            std::pow(static_cast<double>(best_t), theta));
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 5) {
    throw std::invalid_argument("rate_fit: needs at least 5 points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  RateFit fit;
  const double theta = rate_exponent_theta();
  for (const auto& [t, v] : points) {
    if (!(v > 0.0) || !(t > 0.0)) {
      throw std::invalid_argument("rate_fit: values and T must be positive");
    }
    const double x = std::log(t);
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    fit.sup_value_t_theta =
        std::max(fit.sup_value_t_theta, v * std::pow(t, theta));
  }
  const double n = static_cast<double>(points.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

std::size_t silver_join_count(std::size_t t) {
  std::size_t count = 0;
  for (std::size_t p = 2; p <= t; p *= 2) ++count;
  return count;
}

JoinCensus join_step_census(const AnytimeParams& params, std::size_t t_max) {
  JoinCensus census;
  AnytimeStream stream(params);
  for (std::size_t t = 1; t <= t_max; ++t) {
    if (stream.next().is_join) census.anytime_join_positions.push_back(t);
  }
  return census;
}

std::size_t anytime_join_count(const JoinCensus& census, std::size_t t) {
  return std::upper_bound(census.anytime_join_positions.begin(),
                          census.anytime_join_positions.end(), t) -
         census.anytime_join_positions.begin();
}

VerificationReport check_strongly_convex(const StrongConvexSchedule& schedule,
                                         const Objective& obj,
                                         const Eigen::VectorXd& x1,
                                         std::size_t n_periods) {
  if (!obj.x_star || !obj.f_star) {
    throw std::invalid_argument(
        "check_strongly_convex: objective needs x*, f*");
  }
  const std::size_t tau = schedule.params.tau;
  RunConfig config;
  config.steps = n_periods * tau + 1;
  const Trajectory traj = run_gd(
      obj, x1, [&](std::size_t t) { return schedule.alpha(t); }, config);
  const Eigen::VectorXd& xs = *obj.x_star;
  const double fs = *obj.f_star / obj.smoothness;

  VerificationReport rep;
  rep.check = "strongly_convex";
  rep.instance = "kappa=" + std::to_string(schedule.params.kappa) +
                 " tau=" + std::to_string(tau);
  rep.tolerance = 0.0;
  rep.min_slack = std::numeric_limits<double>::infinity();
  double max_factor = 0.0;
  double prev = (x1 - xs).squaredNorm();
  for (std::size_t i = 1; i <= n_periods; ++i) {
    const double cur = (traj.x[i * tau] - xs).squaredNorm();
    if (prev <= 0.0) break;  // reached the minimizer exactly
    const double factor = cur / prev;
    max_factor = std::max(max_factor, factor);
    rep.record(0.75 - factor);
    prev = cur;
  }

  // linear-rate fit of log(f_t - f*) against t, above the floating floor
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t t = 0; t < traj.length(); ++t) {
    const double gap = traj.f[t] - fs;
    if (gap > 1e-280) {
      const double x = static_cast<double>(t + 1);
      const double y = std::log(gap);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      n += 1;
    }
  }
  const double chat = (n >= 2) ? -(n * sxy - sx * sy) / (n * sxx - sx * sx)
                               : 0.0;
  rep.aux["max_period_factor"] = max_factor;
  rep.aux["chat"] = chat;
  rep.aux["chat_kappa_varsigma"] =
      chat * std::pow(schedule.params.kappa, schedule.params.varsigma);
  rep.aux["tau"] = static_cast<double>(tau);
  rep.finalize();
  return rep;
}

}  // namespace gdsched
