#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace gdsched {

/// A smooth convex test objective. Stepsizes are normalized inside the GD
/// engine (divided by `smoothness`), so schedules are always expressed in
/// units of 1/L.
struct Objective {
  Eigen::Index dim = 0;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  double smoothness = 1.0;        // L > 0
  double strong_convexity = 0.0;  // mu in [0, L]
  std::optional<Eigen::VectorXd> x_star;
  std::optional<double> f_star;
};

/// f(x) = 1/2 sum lambda_i (x_i - x*_i)^2, L = max lambda, mu = min lambda.
Objective make_quadratic_diag(const Eigen::VectorXd& spectrum,
                              const Eigen::VectorXd& x_star);

/// Scalar quadratic lambda/2 (x - x*)^2.
Objective make_scalar_quadratic(double lambda, double x_star = 0.0);

/// f(x) = 1/2 ||Ax - b||^2, L = sigma_max(A)^2.
Objective make_least_squares(const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& b);

/// f(x) = t log sum_i exp((a_i.x + b_i)/t), evaluated with the usual
/// max-shift. L = sigma_max(A)^2 / t. x*/f* left unset; fill them with
/// solve_min_star() when needed.
Objective make_log_sum_exp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           double smoothing);

/// Componentwise Huber loss around x*, threshold delta; L = 1, mu = 0.
Objective make_huber(double delta, const Eigen::VectorXd& x_star);

/// Fills x_star/f_star by a long constant-1/L GD run from x0 (the f*
/// oracle for families without a closed form).
void solve_min_star(Objective& obj, const Eigen::VectorXd& x0,
                    std::size_t max_iters = 1'000'000,
                    double grad_tol = 1e-12);

enum class ObjectiveFamily {
  quadratic_diag,
  least_squares,
  log_sum_exp,
  huber,
  scalar_quadratic,
};

std::string to_string(ObjectiveFamily family);
ObjectiveFamily objective_family_from_string(const std::string& s);

/// Deterministic, seedable recipe for a randomized test objective.
struct ObjectiveSpec {
  ObjectiveFamily family = ObjectiveFamily::quadratic_diag;
  Eigen::Index dim = 1;
  std::uint64_t seed = 0;
  double param = 1.0;  // family parameter: min eigenvalue, smoothing t, delta

  Objective build() const;
};

struct SmoothConvexValidation {
  double max_cocoercivity_violation = 0.0;
  double max_descent_violation = 0.0;
  std::size_t pairs_checked = 0;
};

/// Samples point pairs and checks the 1-smooth-convex interpolation
/// inequality and the (alpha^2+2alpha)/2 descent bound on the L-rescaled
/// view of obj. Violations are reported, never thrown.
SmoothConvexValidation validate_smooth_convex(const Objective& obj,
                                              std::size_t n_pairs,
                                              std::uint64_t seed);

}  // namespace gdsched
