#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gdsched {

/// Silver ratio 1 + sqrt(2).
inline constexpr double kSilverRatio = 2.41421356237309504880;

/// Anytime rate exponent 2*log2(rho) / (1 + log2(rho)).
double rate_exponent_theta();

/// Strongly-convex rate exponent 1/theta.
double rate_exponent_varsigma();

/// log2(rho), the default block-growth exponent c.
double default_growth_exponent();

/// Join-step function: phi(x, y) for x, y >= 0. Always > 1, symmetric,
/// non-decreasing in each argument. Evaluated in the rationalized form
/// 2(xy + 2x + 2y + 2) / (x + y + sqrt((x+y+2)^2 + 4(x+1)(y+1)))
/// which avoids cancellation for large x + y.
double phi(double x, double y);

enum class ScheduleKind {
  silver,
  anytime_prefix,
  constant,
  strongly_convex,
  custom,
};

std::string to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(const std::string& s);

struct AnytimeParams {
  /// Block-growth exponent; must be >= 1.
  double c;

  /// k_j = floor(2 * 2^(c*j)), the repeat count of the order-j block.
  std::int64_t repeat_count(int order) const;

  /// M_j = sum_{i<=j} k_i, cumulative repeat count.
  std::int64_t cumulative_repeats(int order) const;

  bool operator==(const AnytimeParams&) const = default;
};

/// Params with the default exponent c = log2(rho).
AnytimeParams default_anytime_params();

/// Validates c >= 1 and returns the params. Throws std::invalid_argument
/// otherwise.
AnytimeParams anytime_params(double c);

/// A finite positive stepsize sequence in units of 1/L (normalized for a
/// 1-smooth objective), with construction metadata.
struct FiniteSchedule {
  std::vector<double> values;
  ScheduleKind kind = ScheduleKind::custom;
  std::vector<std::size_t> join_positions;  // 1-based, strictly increasing

  // kind metadata (meaningful fields depend on kind)
  int silver_order = -1;
  std::optional<AnytimeParams> anytime;
  double constant_alpha = 0.0;
  double kappa = 0.0;
  double c0 = 0.0;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  /// Left-to-right sum of values.
  double aggregate() const;
};

/// [s, phi(sum s, sum r), r]; join positions are carried over and the new
/// join is recorded at |s|+1.
FiniteSchedule concat(const FiniteSchedule& s, const FiniteSchedule& r);

/// The order-i silver schedule: s0 = [], s_i = concat(s_{i-1}, s_{i-1}).
/// Length 2^i - 1, aggregate rho^i - 1. Orders above max_order throw
/// std::length_error.
FiniteSchedule silver(int order, int max_order = 30);

/// First n values of the limiting silver schedule, with join positions at
/// the self-concatenation steps 2^k (k >= 1). This is the join convention
/// of the infinite schedule; the per-order metadata in silver() instead
/// records every recursively inserted step.
FiniteSchedule silver_limit_prefix(std::size_t n, int max_order = 30);

struct StreamStep {
  double value;
  bool is_join;
  int block_order;
};

/// Lazy generator of the infinite anytime schedule: for each order j the
/// order-j silver block is repeated k_j times, every block preceded by a
/// join step phi(aggregate-so-far, block aggregate). Prefix-consistent:
/// the first n outputs never depend on how far the stream is advanced.
class AnytimeStream {
 public:
  explicit AnytimeStream(AnytimeParams params = default_anytime_params());

  StreamStep next();

  std::size_t emitted() const { return emitted_; }
  /// Exact running sum of emitted values, i.e. A_{emitted()+1}.
  double prefix_aggregate() const { return aggregate_; }
  const AnytimeParams& params() const { return params_; }

 private:
  AnytimeParams params_;
  std::size_t emitted_ = 0;
  double aggregate_ = 0.0;
  int block_order_ = 1;
  std::int64_t repeats_done_ = 0;   // completed repeats of current order
  std::size_t inner_pos_ = 0;       // 0 = join pending, else index into block
  std::map<int, std::shared_ptr<const FiniteSchedule>> block_cache_;

  const FiniteSchedule& block(int order);
};

/// First n values of the anytime schedule (identical to collecting n
/// stream outputs). Guarded at 2^27 values by default.
FiniteSchedule anytime_prefix(std::size_t n,
                              AnytimeParams params = default_anytime_params(),
                              std::size_t max_n = std::size_t{1} << 27);

/// Concatenation boundaries t_i <= max_t (lengths of the successive
/// concatenated prefixes).
std::vector<std::size_t> checkpoint_lengths(const AnytimeParams& params,
                                            std::size_t max_t);

/// The block order active at position t: the unique o with
/// sum_{j<o} k_j 2^j < t <= sum_{j<=o} k_j 2^j.
int block_order_at(std::size_t t, const AnytimeParams& params);

/// A[n] = A_{n+1} = sum of the first n stepsizes (A[0] = A_1 = 0);
/// C[n] = A[n](A[n]+1)/2.
struct PrefixSums {
  std::vector<double> A;
  std::vector<double> C;

  double A_at(std::size_t n) const { return A.at(n - 1); }  // A_n, 1-based
  double C_at(std::size_t n) const { return C.at(n - 1); }
};

PrefixSums prefix_sums(const FiniteSchedule& s);

struct StrongConvexParams {
  double kappa = 1.0;       // condition number L/mu
  double mu = 1.0;          // 1/kappa
  double c0 = 0.0;          // calibration constant
  std::size_t tau = 0;      // period length
  double varsigma = 0.0;    // 1/theta
};

struct StrongConvexSchedule {
  StrongConvexParams params;
  FiniteSchedule period;  // the first tau anytime stepsizes

  /// Stepsize at 1-based position t of the periodic infinite schedule.
  double alpha(std::size_t t) const {
    return period.values[(t - 1) % period.values.size()];
  }
};

/// tau is the smallest integer with A_{tau+1}(anytime) >= 4*C0*kappa; the
/// schedule repeats the first tau anytime stepsizes forever.
StrongConvexSchedule strongly_convex_schedule(
    double kappa, double c0, AnytimeParams params = default_anytime_params());

}  // namespace gdsched
