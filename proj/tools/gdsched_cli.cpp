// Command-line front end: schedule generation, GD runs, verification
// suites, figure data, rate benchmarks, and C0 calibration.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime
// abort.
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <iostream>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gdsched/engine.hpp"
#include "gdsched/io.hpp"
#include "gdsched/objectives.hpp"
#include "gdsched/schedule.hpp"
#include "gdsched/verify.hpp"

using namespace gdsched;

namespace {

constexpr const char* kJobsEnvVar = "GDSCHED_JOBS";

int default_jobs() {
  if (const char* env = std::getenv(kJobsEnvVar)) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

Eigen::VectorXd start_point(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = n(rng);
  return x;
}

struct GenOptions {
  std::string kind = "anytime";
  int order = 3;
  std::size_t steps = 128;
  double c = default_growth_exponent();
  double alpha = 1.0;
  double kappa = 10.0;
  double c0 = 0.0;  // 0 = calibrate
  std::string out;
};

FiniteSchedule build_schedule(const GenOptions& opt) {
  if (opt.kind == "silver") return silver(opt.order);
  if (opt.kind == "anytime") {
    return anytime_prefix(opt.steps, anytime_params(opt.c));
  }
  if (opt.kind == "constant") {
    FiniteSchedule s;
    s.kind = ScheduleKind::constant;
    s.constant_alpha = opt.alpha;
    s.values.assign(opt.steps, opt.alpha);
    return s;
  }
  if (opt.kind == "strongly-convex") {
    const double c0 = (opt.c0 > 0.0) ? opt.c0 : calibrate_c0();
    return strongly_convex_schedule(opt.kappa, c0, anytime_params(opt.c))
        .period;
  }
  throw CLI::ValidationError("--kind",
                             "expected silver|anytime|constant|strongly-convex");
}

int cmd_gen(const GenOptions& opt) {
  const FiniteSchedule sched = build_schedule(opt);
  if (!opt.out.empty()) write_schedule_file(sched, opt.out);
  std::cout << "kind=" << to_string(sched.kind) << " n=" << sched.size()
            << " aggregate=" << to_decimal17(sched.aggregate())
            << " joins=" << sched.join_positions.size() << "\n";
  return 0;
}

struct RunOptions {
  GenOptions gen;
  std::string objective = "quadratic_diag";
  Eigen::Index dim = 8;
  std::uint64_t seed = 0;
  double param = 0.05;
  std::string out;
};

int cmd_run(const RunOptions& opt) {
  FiniteSchedule sched = build_schedule(opt.gen);
  ObjectiveSpec spec;
  spec.family = objective_family_from_string(opt.objective);
  spec.dim = (spec.family == ObjectiveFamily::scalar_quadratic) ? 1 : opt.dim;
  spec.seed = opt.seed;
  spec.param = opt.param;
  const Objective obj = spec.build();
  const Eigen::VectorXd x1 = start_point(spec.dim, opt.seed);
  const Trajectory traj = run_gd(obj, x1, sched);
  const double fs = obj.f_star ? *obj.f_star / obj.smoothness : 0.0;
  if (!opt.out.empty()) {
    std::ofstream out(opt.out);
    if (!out) throw std::runtime_error("cannot open for writing: " + opt.out);
    write_trajectory_csv(traj, fs, out);
  } else {
    write_trajectory_csv(traj, fs, std::cout);
  }
  return 0;
}

struct VerifyOptions {
  std::string suite = "all";
  std::size_t t_max = 1'000'000;
  std::string out;
};

void append_lemma_suite(std::vector<VerificationReport>& reports) {
  const AnytimeParams params = default_anytime_params();
  const std::vector<std::size_t> checkpoints = checkpoint_lengths(params, 100);
  for (int i = 0; i < 10; ++i) {
    ObjectiveSpec spec;
    spec.family = (i % 2) ? ObjectiveFamily::log_sum_exp
                          : ObjectiveFamily::quadratic_diag;
    spec.dim = 4 + i % 4;
    spec.seed = 300 + static_cast<std::uint64_t>(i);
    spec.param = (i % 2) ? 0.5 : 0.05;
    const Objective obj = spec.build();
    const Eigen::VectorXd x0 = start_point(spec.dim, spec.seed);
    const int order = 1 + i % 8;
    const FiniteSchedule block = silver(order);
    const FiniteSchedule prefix =
        anytime_prefix(checkpoints[static_cast<std::size_t>(i % 15)], params);

    const Trajectory traj = run_gd(obj, x0, prefix);
    reports.push_back(check_primitive(traj, prefix_sums(prefix), obj));
    reports.push_back(check_lemma_key(run_gd(obj, x0, block),
                                      make_base_point(obj, x0),
                                      prefix_sums(block)));
    reports.push_back(check_lemma_key3(prefix, 1.0 + 0.5 * (i % 4), obj, x0));
    reports.push_back(check_lemma_key2(block, 1.0 + 0.2 * (i % 5), obj, x0));
    const double a_total = std::pow(kSilverRatio, order) - 1.0;
    reports.push_back(check_refine1(
        order, (std::sqrt(2.0) - 1.0) * a_total + std::sqrt(2.0) + 0.5, obj,
        x0));
    reports.push_back(check_local_error(traj));
  }
}

void append_rates_suite(std::vector<VerificationReport>& reports) {
  ObjectiveSpec spec;
  spec.family = ObjectiveFamily::quadratic_diag;
  spec.dim = 8;
  spec.seed = 17;
  spec.param = 0.05;
  const Objective obj = spec.build();
  reports.push_back(check_checkpoint_rates(default_anytime_params(), obj,
                                           start_point(8, 17), 300));
}

void append_strongly_convex_suite(std::vector<VerificationReport>& reports) {
  const double c0 = calibrate_c0();
  for (double kappa : {10.0, 100.0}) {
    ObjectiveSpec spec;
    spec.family = ObjectiveFamily::quadratic_diag;
    spec.dim = 12;
    spec.seed = 555;
    spec.param = 1.0 / kappa;
    const Objective obj = spec.build();
    const StrongConvexSchedule sched = strongly_convex_schedule(kappa, c0);
    VerificationReport rep =
        check_strongly_convex(sched, obj, start_point(12, 777), 20);
    rep.aux["c0"] = c0;
    reports.push_back(std::move(rep));
  }
}

int cmd_verify(const VerifyOptions& opt) {
  std::vector<VerificationReport> reports;
  const bool all = opt.suite == "all";
  if (all || opt.suite == "silver") {
    reports.push_back(check_silver_identities(20));
  }
  if (all || opt.suite == "anytime-bounds") {
    reports.push_back(
        check_anytime_bounds(default_anytime_params(), opt.t_max));
  }
  if (all || opt.suite == "primitive" || opt.suite == "lemmas") {
    append_lemma_suite(reports);
  }
  if (all || opt.suite == "rates") {
    append_rates_suite(reports);
  }
  if (all || opt.suite == "strongly-convex") {
    append_strongly_convex_suite(reports);
  }
  if (reports.empty()) {
    throw CLI::ValidationError(
        "suite", "expected silver|anytime-bounds|primitive|lemmas|rates|"
                 "strongly-convex|all");
  }
  bool pass = true;
  nlohmann::json entries = nlohmann::json::array();
  for (const VerificationReport& rep : reports) {
    entries.push_back(report_to_json(rep));
    pass = pass && rep.pass;
  }
  nlohmann::json out;
  out["reports"] = std::move(entries);
  out["pass"] = pass;
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot open for writing: " + opt.out);
    f << out.dump(2) << "\n";
  } else {
    std::cout << out.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

struct FigureOptions {
  std::size_t steps = 128;
  std::string out;
};

int cmd_figure(const FigureOptions& opt) {
  if (opt.steps < 2) {
    throw CLI::ValidationError("--steps", "needs at least 2 steps");
  }
  const FiniteSchedule sil = silver_limit_prefix(opt.steps);
  const FiniteSchedule any = anytime_prefix(opt.steps);
  std::ostringstream csv;
  csv << "series,index,value,is_join\n";
  auto emit = [&](const char* name, const FiniteSchedule& s) {
    std::vector<std::uint8_t> join(s.size(), 0);
    for (std::size_t p : s.join_positions) join[p - 1] = 1;
    for (std::size_t i = 0; i < s.size(); ++i) {
      csv << name << ',' << (i + 1) << ',' << to_decimal17(s.values[i]) << ','
          << static_cast<int>(join[i]) << '\n';
    }
  };
  emit("silver", sil);
  emit("anytime", any);
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot open for writing: " + opt.out);
    f << csv.str();
  } else {
    std::cout << csv.str();
  }
  return 0;
}

struct BenchOptions {
  std::size_t t_max = 16'384;
  int jobs = default_jobs();
  std::string out;
};

struct BenchCell {
  std::string kind;
  std::vector<std::size_t> ts;
  std::function<double(std::size_t)> alpha;  // stepsize source
  std::vector<std::pair<double, double>> points;  // (T, F_T)
  std::string error;
};

int cmd_bench(const BenchOptions& opt) {
  std::vector<std::size_t> grid;
  for (std::size_t t = 16; t <= opt.t_max; t *= 2) grid.push_back(t);
  if (grid.size() < 5) {
    throw CLI::ValidationError("--t-max", "grid needs at least 5 points (>= 256)");
  }
  std::vector<std::size_t> silver_ts;
  for (std::size_t t = 31; t <= opt.t_max; t = 2 * t + 1) silver_ts.push_back(t);

  int order = 0;
  while ((std::size_t{1} << order) - 1 < opt.t_max) ++order;
  const auto sil = std::make_shared<const FiniteSchedule>(silver(order));
  const auto any =
      std::make_shared<const FiniteSchedule>(anytime_prefix(opt.t_max));

  std::vector<BenchCell> cells(3);
  cells[0] = {"constant", grid, [](std::size_t) { return 1.0; }, {}, {}};
  cells[1] = {"anytime", grid,
              [any](std::size_t t) { return any->values[t - 1]; }, {}, {}};
  cells[2] = {"silver", silver_ts,
              [sil](std::size_t t) { return sil->values[t - 1]; }, {}, {}};

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < cells.size();
         i = next.fetch_add(1)) {
      BenchCell& cell = cells[i];
      try {
        WorstCaseScan scan;
        std::size_t j = 0;
        for (std::size_t t = 1; t <= cell.ts.back() && j < cell.ts.size();
             ++t) {
          scan.append(cell.alpha(t));
          if (t == cell.ts[j]) {
            cell.points.emplace_back(static_cast<double>(t),
                                     scan.refined_value());
            ++j;
          }
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers =
      std::min<int>(opt.jobs, static_cast<int>(cells.size()));
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  const double theta = rate_exponent_theta();
  std::ostringstream csv;
  csv << "kind,T,value,value_t_theta,slope\n";
  nlohmann::json summary;
  summary["theta"] = theta;
  summary["grid_max"] = opt.t_max;
  nlohmann::json slopes = nlohmann::json::object();
  bool any_failure = false;
  for (const BenchCell& cell : cells) {
    if (!cell.error.empty()) {
      any_failure = true;
      slopes[cell.kind] = nlohmann::json{{"error", cell.error}};
      continue;
    }
    const RateFit fit = rate_fit(cell.points);
    slopes[cell.kind] = fit.slope;
    for (const auto& [t, v] : cell.points) {
      csv << cell.kind << ',' << static_cast<std::size_t>(t) << ','
          << to_decimal17(v) << ',' << to_decimal17(v * std::pow(t, theta))
          << ',' << to_decimal17(fit.slope) << '\n';
    }
  }
  summary["slopes"] = std::move(slopes);
  summary["pass"] = !any_failure;
  if (!opt.out.empty()) {
    std::ofstream f(opt.out);
    if (!f) throw std::runtime_error("cannot open for writing: " + opt.out);
    f << csv.str();
    std::cout << summary.dump(2) << "\n";
  } else {
    std::cout << csv.str() << summary.dump(2) << "\n";
  }
  return any_failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stepsize-schedule construction, verification, and benchmarking for "
      "gradient descent on smooth convex objectives"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  CLI::App* gen = app.add_subcommand("gen", "Generate a schedule file");
  gen->add_option("--kind", gen_opt.kind,
                  "silver|anytime|constant|strongly-convex")
      ->capture_default_str();
  gen->add_option("--order", gen_opt.order, "Silver schedule order");
  gen->add_option("--steps", gen_opt.steps, "Schedule length");
  gen->add_option("--c", gen_opt.c, "Block-growth exponent (>= 1)");
  gen->add_option("--alpha", gen_opt.alpha, "Constant stepsize value");
  gen->add_option("--kappa", gen_opt.kappa, "Condition number L/mu");
  gen->add_option("--c0", gen_opt.c0, "Calibration constant (0 = calibrate)");
  gen->add_option("--out", gen_opt.out, "Output schedule JSON path");

  RunOptions run_opt;
  CLI::App* run = app.add_subcommand("run", "Run GD and emit a trajectory CSV");
  run->add_option("--kind", run_opt.gen.kind,
                  "silver|anytime|constant|strongly-convex")
      ->capture_default_str();
  run->add_option("--order", run_opt.gen.order, "Silver schedule order");
  run->add_option("--steps", run_opt.gen.steps, "Number of stepsizes");
  run->add_option("--c", run_opt.gen.c, "Block-growth exponent (>= 1)");
  run->add_option("--alpha", run_opt.gen.alpha, "Constant stepsize value");
  run->add_option("--objective", run_opt.objective,
                  "quadratic_diag|least_squares|log_sum_exp|huber|"
                  "scalar_quadratic")
      ->capture_default_str();
  run->add_option("--dim", run_opt.dim, "Objective dimension");
  run->add_option("--seed", run_opt.seed, "Deterministic instance seed");
  run->add_option("--param", run_opt.param,
                  "Family parameter (min eigenvalue, smoothing, delta)");
  run->add_option("--out", run_opt.out, "Output CSV path (default stdout)");

  VerifyOptions verify_opt;
  CLI::App* verify =
      app.add_subcommand("verify", "Run a verification suite, emit JSON");
  verify
      ->add_option("suite", verify_opt.suite,
                   "silver|anytime-bounds|primitive|lemmas|rates|"
                   "strongly-convex|all")
      ->capture_default_str();
  verify->add_option("--t-max", verify_opt.t_max,
                     "Scan horizon for the anytime bounds");
  verify->add_option("--out", verify_opt.out, "Report JSON path");

  FigureOptions figure_opt;
  CLI::App* figure = app.add_subcommand(
      "figure", "Emit silver/anytime schedule series with join flags");
  figure->add_option("--steps", figure_opt.steps, "Series length (>= 2)")
      ->capture_default_str();
  figure->add_option("--out", figure_opt.out, "Output CSV path");

  BenchOptions bench_opt;
  CLI::App* bench = app.add_subcommand(
      "bench",
      "Worst-case rate benchmark over T in {16, 32, ..., 16384} (dyadic "
      "grid; silver cells use T = 2^k - 1)");
  bench->add_option("--t-max", bench_opt.t_max, "Largest grid T")
      ->capture_default_str();
  bench
      ->add_option("--jobs", bench_opt.jobs,
                   "Parallel cells (default: $" + std::string(kJobsEnvVar) +
                       " or hardware threads)")
      ->capture_default_str();
  bench->add_option("--out", bench_opt.out, "RateTable CSV path");

  std::size_t cal_t_max = 10'000;
  CLI::App* cal = app.add_subcommand(
      "calibrate-c0",
      "Smallest C0 with F_T * T^theta <= C0 over T <= t-max (anytime)");
  cal->add_option("--t-max", cal_t_max, "Scan horizon")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_opt);
    if (run->parsed()) return cmd_run(run_opt);
    if (verify->parsed()) return cmd_verify(verify_opt);
    if (figure->parsed()) return cmd_figure(figure_opt);
    if (bench->parsed()) return cmd_bench(bench_opt);
    if (cal->parsed()) {
      const double c0 = calibrate_c0(default_anytime_params(), cal_t_max);
      std::cout << "C0=" << to_decimal17(c0) << " t_max=" << cal_t_max << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "abort: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
