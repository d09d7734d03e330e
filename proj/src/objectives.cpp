#include "gdsched/objectives.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gdsched {

Objective make_quadratic_diag(const Eigen::VectorXd& spectrum,
                              const Eigen::VectorXd& x_star) {
  if (spectrum.size() == 0) {
    throw std::invalid_argument("make_quadratic_diag: empty spectrum");
  }
  if (spectrum.size() != x_star.size()) {
    throw std::invalid_argument("make_quadratic_diag: dimension mismatch");
  }
  if (spectrum.minCoeff() <= 0.0) {
    throw std::invalid_argument(
        "make_quadratic_diag: eigenvalues must be positive");
  }
  Objective obj;
  obj.dim = spectrum.size();
  obj.smoothness = spectrum.maxCoeff();
  obj.strong_convexity = spectrum.minCoeff();
  obj.x_star = x_star;
  obj.f_star = 0.0;
  obj.value = [spectrum, x_star](const Eigen::VectorXd& x) {
    return 0.5 * (spectrum.array() * (x - x_star).array().square()).sum();
  };
  obj.gradient = [spectrum, x_star](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(spectrum.array() * (x - x_star).array());
  };
  return obj;
}

Objective make_scalar_quadratic(double lambda, double x_star) {
  Eigen::VectorXd s(1), xs(1);
  s << lambda;
  xs << x_star;
  return make_quadratic_diag(s, xs);
}

Objective make_least_squares(const Eigen::MatrixXd& a,
                             const Eigen::VectorXd& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("make_least_squares: dimension mismatch");
  }
  Objective obj;
  obj.dim = a.cols();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  obj.smoothness = smax * smax;
  obj.strong_convexity = (a.rows() >= a.cols()) ? smin * smin : 0.0;
  const Eigen::VectorXd xs = svd.solve(b);
  obj.x_star = xs;
  obj.f_star = 0.5 * (a * xs - b).squaredNorm();
  obj.value = [a, b](const Eigen::VectorXd& x) {
    return 0.5 * (a * x - b).squaredNorm();
  };
  obj.gradient = [a, b](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(a.transpose() * (a * x - b));
  };
  return obj;
}

Objective make_log_sum_exp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                           double smoothing) {
  if (smoothing <= 0.0) {
    throw std::invalid_argument("make_log_sum_exp: smoothing must be > 0");
  }
  if (a.rows() != b.size()) {
    throw std::invalid_argument("make_log_sum_exp: dimension mismatch");
  }
  Objective obj;
  obj.dim = a.cols();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double smax = svd.singularValues()(0);
  obj.smoothness = smax * smax / smoothing;
  obj.strong_convexity = 0.0;
  obj.value = [a, b, smoothing](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = (a * x + b) / smoothing;
    const double m = z.maxCoeff();
    return smoothing * (m + std::log((z.array() - m).exp().sum()));
  };
  obj.gradient = [a, b, smoothing](const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = (a * x + b) / smoothing;
    const double m = z.maxCoeff();
    Eigen::VectorXd w = (z.array() - m).exp();
    w /= w.sum();
    return Eigen::VectorXd(a.transpose() * w);
  };
  return obj;
}

Objective make_huber(double delta, const Eigen::VectorXd& x_star) {
  if (delta <= 0.0) {
    throw std::invalid_argument("make_huber: delta must be > 0");
  }
  Objective obj;
  obj.dim = x_star.size();
  obj.smoothness = 1.0;
  obj.strong_convexity = 0.0;
  obj.x_star = x_star;
  obj.f_star = 0.0;
  obj.value = [delta, x_star](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = std::abs(x(i) - x_star(i));
      s += (r <= delta) ? 0.5 * r * r : delta * (r - 0.5 * delta);
    }
    return s;
  };
  obj.gradient = [delta, x_star](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double r = x(i) - x_star(i);
      g(i) = (std::abs(r) <= delta) ? r : delta * ((r > 0) ? 1.0 : -1.0);
    }
    return g;
  };
  return obj;
}

void solve_min_star(Objective& obj, const Eigen::VectorXd& x0,
                    std::size_t max_iters, double grad_tol) {
  Eigen::VectorXd x = x0;
  const double step = 1.0 / obj.smoothness;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd g = obj.gradient(x);
    if (g.norm() < grad_tol) break;
    x -= step * g;
  }
  obj.x_star = x;
  obj.f_star = obj.value(x);
}

std::string to_string(ObjectiveFamily family) {
  switch (family) {
    case ObjectiveFamily::quadratic_diag: return "quadratic_diag";
    case ObjectiveFamily::least_squares: return "least_squares";
    case ObjectiveFamily::log_sum_exp: return "log_sum_exp";
    case ObjectiveFamily::huber: return "huber";
    case ObjectiveFamily::scalar_quadratic: return "scalar_quadratic";
  }
  return "quadratic_diag";
}

ObjectiveFamily objective_family_from_string(const std::string& s) {
  if (s == "quadratic_diag") return ObjectiveFamily::quadratic_diag;
  if (s == "least_squares") return ObjectiveFamily::least_squares;
  if (s == "log_sum_exp") return ObjectiveFamily::log_sum_exp;
  if (s == "huber") return ObjectiveFamily::huber;
  if (s == "scalar_quadratic") return ObjectiveFamily::scalar_quadratic;
  throw std::invalid_argument("unknown objective family: " + s);
}

Objective ObjectiveSpec::build() const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  switch (family) {
    case ObjectiveFamily::quadratic_diag: {
      // spectrum in [param, 1] with both endpoints present, L = 1
      Eigen::VectorXd spec(dim), xs(dim);
      const double lo = std::min(param, 1.0);
      for (Eigen::Index i = 0; i < dim; ++i) {
        spec(i) = lo + (1.0 - lo) * unif(rng);
        xs(i) = gauss(rng);
      }
      spec(0) = 1.0;
      if (dim > 1) spec(dim - 1) = lo;
      return make_quadratic_diag(spec, xs);
    }
    case ObjectiveFamily::scalar_quadratic: {
      return make_scalar_quadratic(param, 0.0);
    }
    case ObjectiveFamily::least_squares: {
      Eigen::MatrixXd a(dim + 2, dim);
      Eigen::VectorXd b(dim + 2);
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = gauss(rng);
        b(i) = gauss(rng);
      }
      return make_least_squares(a, b);
    }
    case ObjectiveFamily::log_sum_exp: {
      Eigen::MatrixXd a(2 * dim, dim);
      Eigen::VectorXd b(2 * dim);
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = gauss(rng);
        b(i) = 0.5 * gauss(rng);
      }
      Objective obj = make_log_sum_exp(a, b, param);
      solve_min_star(obj, Eigen::VectorXd::Zero(dim));
      return obj;
    }
    case ObjectiveFamily::huber: {
      Eigen::VectorXd xs(dim);
      for (Eigen::Index i = 0; i < dim; ++i) xs(i) = gauss(rng);
      return make_huber(param, xs);
    }
  }
  throw std::invalid_argument("ObjectiveSpec: unknown family");
}

SmoothConvexValidation validate_smooth_convex(const Objective& obj,
                                              std::size_t n_pairs,
                                              std::uint64_t seed) {
  if (n_pairs < 1) {
    throw std::invalid_argument("validate_smooth_convex: n_pairs must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> alpha_dist(0.05, 8.0);
  const double inv_l = 1.0 / obj.smoothness;
  SmoothConvexValidation out;
  out.pairs_checked = n_pairs;
  for (std::size_t p = 0; p < n_pairs; ++p) {
    Eigen::VectorXd xi(obj.dim), xj(obj.dim);
    for (Eigen::Index d = 0; d < obj.dim; ++d) {
      xi(d) = 3.0 * gauss(rng);
      xj(d) = 3.0 * gauss(rng);
    }
    // L-rescaled view: ftilde = f/L, gtilde = g/L is 1-smooth convex
    const double fi = obj.value(xi) * inv_l;
    const double fj = obj.value(xj) * inv_l;
    const Eigen::VectorXd gi = obj.gradient(xi) * inv_l;
    const Eigen::VectorXd gj = obj.gradient(xj) * inv_l;
    const double coco =
        fi - fj - gi.dot(xi - xj) + 0.5 * (gi - gj).squaredNorm();
    out.max_cocoercivity_violation =
        std::max(out.max_cocoercivity_violation, coco);

    const double a = alpha_dist(rng);
    const double fstep = obj.value(xi - a * gi) * inv_l;
    const double descent =
        (fstep - fi) - 0.5 * (a * a + 2.0 * a) * gi.squaredNorm();
    out.max_descent_violation = std::max(out.max_descent_violation, descent);
  }
  return out;
}

}  // namespace gdsched
