#include "gdsched/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace gdsched {

double rate_exponent_theta() {
  const double l = std::log2(kSilverRatio);
  return 2.0 * l / (1.0 + l);
}

double rate_exponent_varsigma() { return 1.0 / rate_exponent_theta(); }

double default_growth_exponent() { return std::log2(kSilverRatio); }

double phi(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw std::invalid_argument("phi: arguments must be finite and >= 0");
  }
  const double s = x + y;
  const double d = (s + 2.0) * (s + 2.0) + 4.0 * (x + 1.0) * (y + 1.0);
  return 2.0 * (x * y + 2.0 * x + 2.0 * y + 2.0) / (s + std::sqrt(d));
}

std::string to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::silver: return "silver";
    case ScheduleKind::anytime_prefix: return "anytime_prefix";
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::strongly_convex: return "strongly_convex";
    case ScheduleKind::custom: return "custom";
  }
  return "custom";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
  if (s == "silver") return ScheduleKind::silver;
  if (s == "anytime_prefix") return ScheduleKind::anytime_prefix;
  if (s == "constant") return ScheduleKind::constant;
  if (s == "strongly_convex") return ScheduleKind::strongly_convex;
  if (s == "custom") return ScheduleKind::custom;
  throw std::invalid_argument("unknown schedule kind: " + s);
}

std::int64_t AnytimeParams::repeat_count(int order) const {
  if (order < 1) return 0;
  return static_cast<std::int64_t>(
      std::floor(2.0 * std::exp2(c * static_cast<double>(order))));
}

std::int64_t AnytimeParams::cumulative_repeats(int order) const {
  std::int64_t m = 0;
  for (int j = 1; j <= order; ++j) m += repeat_count(j);
  return m;
}

AnytimeParams default_anytime_params() {
  return AnytimeParams{default_growth_exponent()};
}

AnytimeParams anytime_params(double c) {
  if (!(c >= 1.0) || !std::isfinite(c)) {
    throw std::invalid_argument("anytime_params: c must be >= 1");
  }
  return AnytimeParams{c};
}

double FiniteSchedule::aggregate() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

FiniteSchedule concat(const FiniteSchedule& s, const FiniteSchedule& r) {
  FiniteSchedule out;
  out.kind = ScheduleKind::custom;
  out.values.reserve(s.size() + r.size() + 1);
  out.values = s.values;
  out.values.push_back(phi(s.aggregate(), r.aggregate()));
  out.values.insert(out.values.end(), r.values.begin(), r.values.end());

  out.join_positions = s.join_positions;
  out.join_positions.push_back(s.size() + 1);
  for (std::size_t p : r.join_positions) {
    out.join_positions.push_back(p + s.size() + 1);
  }
  return out;
}

FiniteSchedule silver(int order, int max_order) {
  if (order < 0) throw std::invalid_argument("silver: order must be >= 0");
  if (order > max_order) {
    throw std::length_error("silver: order exceeds configured maximum");
  }
  FiniteSchedule s;
  s.kind = ScheduleKind::silver;
  s.silver_order = 0;
  for (int i = 1; i <= order; ++i) {
    s = concat(s, s);
  }
  s.kind = ScheduleKind::silver;
  s.silver_order = order;
  return s;
}

FiniteSchedule silver_limit_prefix(std::size_t n, int max_order) {
  int order = 0;
  while ((std::size_t{1} << order) - 1 < n) ++order;
  FiniteSchedule full = silver(order, max_order);
  FiniteSchedule out;
  out.kind = ScheduleKind::silver;
  out.silver_order = order;
  out.values.assign(full.values.begin(), full.values.begin() + n);
  for (std::size_t p = 2; p <= n; p *= 2) out.join_positions.push_back(p);
  return out;
}

AnytimeStream::AnytimeStream(AnytimeParams params) : params_(params) {
  if (!(params_.c >= 1.0)) {
    throw std::invalid_argument("AnytimeStream: c must be >= 1");
  }
}

const FiniteSchedule& AnytimeStream::block(int order) {
  auto it = block_cache_.find(order);
  if (it == block_cache_.end()) {
    it = block_cache_
             .emplace(order,
                      std::make_shared<const FiniteSchedule>(silver(order)))
             .first;
  }
  return *it->second;
}

StreamStep AnytimeStream::next() {
  if (repeats_done_ == params_.repeat_count(block_order_)) {
    ++block_order_;
    repeats_done_ = 0;
  }
  const FiniteSchedule& blk = block(block_order_);
  StreamStep step{};
  step.block_order = block_order_;
  if (inner_pos_ == 0) {
    // Join value from the exact numeric block sum, so that the stream and
    // a batch concat() produce bit-identical sequences.
    step.value = phi(aggregate_, blk.aggregate());
    step.is_join = true;
  } else {
    step.value = blk.values[inner_pos_ - 1];
    step.is_join = false;
  }
  ++inner_pos_;
  if (inner_pos_ == blk.size() + 1) {
    inner_pos_ = 0;
    ++repeats_done_;
  }
  aggregate_ += step.value;
  ++emitted_;
  return step;
}

FiniteSchedule anytime_prefix(std::size_t n, AnytimeParams params,
                              std::size_t max_n) {
  if (n > max_n) {
    throw std::length_error("anytime_prefix: length exceeds memory guard");
  }
  FiniteSchedule out;
  out.kind = ScheduleKind::anytime_prefix;
  out.anytime = params;
  out.values.reserve(n);
  AnytimeStream stream(params);
  for (std::size_t t = 1; t <= n; ++t) {
    StreamStep step = stream.next();
    out.values.push_back(step.value);
    if (step.is_join) out.join_positions.push_back(t);
  }
  return out;
}

std::vector<std::size_t> checkpoint_lengths(const AnytimeParams& params,
                                            std::size_t max_t) {
  std::vector<std::size_t> out;
  std::size_t t = 0;
  int order = 1;
  std::int64_t reps = 0;
  while (true) {
    if (reps == params.repeat_count(order)) {
      ++order;
      reps = 0;
      continue;
    }
    t += std::size_t{1} << order;  // join step plus a 2^order - 1 block
    if (t > max_t) break;
    out.push_back(t);
    ++reps;
  }
  return out;
}

int block_order_at(std::size_t t, const AnytimeParams& params) {
  if (t < 1) throw std::invalid_argument("block_order_at: t must be >= 1");
  std::size_t total = 0;
  for (int o = 1;; ++o) {
    total += static_cast<std::size_t>(params.repeat_count(o))
             << static_cast<unsigned>(o);
    if (t <= total) return o;
  }
}

PrefixSums prefix_sums(const FiniteSchedule& s) {
  PrefixSums out;
  out.A.reserve(s.size() + 1);
  out.C.reserve(s.size() + 1);
  double a = 0.0;
  out.A.push_back(0.0);
  out.C.push_back(0.0);
  for (double v : s.values) {
    a += v;
    out.A.push_back(a);
    out.C.push_back(a * (a + 1.0) / 2.0);
  }
  return out;
}

StrongConvexSchedule strongly_convex_schedule(double kappa, double c0,
                                              AnytimeParams params) {
  if (!(kappa >= 1.0)) {
    throw std::invalid_argument("strongly_convex_schedule: kappa must be >= 1");
  }
  if (!(c0 > 0.0)) {
    throw std::invalid_argument("strongly_convex_schedule: C0 must be > 0");
  }
  const double threshold = 4.0 * c0 * kappa;
  AnytimeStream stream(params);
  std::size_t tau = 0;
  while (stream.prefix_aggregate() < threshold) {
    stream.next();
    ++tau;
  }
  StrongConvexSchedule out;
  out.params.kappa = kappa;
  out.params.mu = 1.0 / kappa;
  out.params.c0 = c0;
  out.params.tau = tau;
  out.params.varsigma = rate_exponent_varsigma();
  out.period = anytime_prefix(tau, params);
  out.period.kind = ScheduleKind::strongly_convex;
  out.period.kappa = kappa;
  out.period.c0 = c0;
  return out;
}

}  // namespace gdsched
