#include "liefield/bench.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>

namespace liefield {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// States scattered on and around the curve, skipping any that land in the
// ambiguous set (evaluate_field rejects those by contract).
std::vector<GroupElement> make_states(const DiscretizedCurve& curve, int count,
                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, curve.size() - 1);
  std::vector<GroupElement> states;
  while (static_cast<int>(states.size()) < count) {
    const bool near = states.size() % 2 == 0;
    const GroupElement base = curve.element(pick(rng));
    const Twist offset =
        random_twist(*curve.group, rng, near ? 0.05 : 0.5);
    GroupElement state = exp_step(base, offset, 1.0);
    const CurveQueryResult q = find_nearest(curve, state);
    if (q.near_tie || q.distance < 1e-6) continue;
    states.push_back(std::move(state));
  }
  return states;
}

struct TimedPass {
  double search_ms = 0.0;
  double total_ms = 0.0;
  std::vector<double> iteration_ms;
  double checksum = 0.0;
};

TimedPass timed_pass(const DiscretizedCurve& curve,
                     const std::vector<GroupElement>& states,
                     const GainSchedule& gains, const FieldOptions& opts) {
  TimedPass pass;
  pass.iteration_ms.reserve(states.size());
  for (const auto& state : states) {
    const auto t0 = Clock::now();
    const CurveQueryResult query = find_nearest(curve, state, opts.search);
    const double search = ms_since(t0);
    evaluate_field_at(curve, state, query, gains, opts);
    const double total = ms_since(t0);
    pass.search_ms += search;
    pass.total_ms += total;
    pass.iteration_ms.push_back(total);
    pass.checksum += query.distance;
  }
  return pass;
}

}  // namespace

BenchReport bench_field_eval(const DiscretizedCurve& curve, int trials,
                             const std::vector<int>& worker_counts,
                             std::uint64_t seed) {
  BenchReport report;
  report.curve_samples = curve.size();
  report.trials = trials;
  if (trials <= 0) return report;

  std::mt19937_64 rng(seed);
  const int state_count = std::min(trials, 64);
  const std::vector<GroupElement> states = make_states(curve, state_count, rng);
  const GainSchedule gains;
  FieldOptions serial_opts;
  serial_opts.search.parallel = false;

  // Untimed reference pass: checksum plus the per-state serial answers.
  std::vector<std::pair<int, double>> reference;
  double untimed_checksum = 0.0;
  for (const auto& state : states) {
    const CurveQueryResult q = find_nearest(curve, state, serial_opts.search);
    reference.emplace_back(q.s_star_index, q.distance);
    untimed_checksum += q.distance;
  }

  // Warmup.
  for (int i = 0; i < 30; ++i) {
    find_nearest(curve, states[i % states.size()], serial_opts.search);
  }

  std::vector<double> iteration_ms;
  double search_ms = 0.0;
  double total_ms = 0.0;
  double checksum = 0.0;
  int rounds = std::max(1, trials / state_count);
  for (int r = 0; r < rounds; ++r) {
    TimedPass pass = timed_pass(curve, states, gains, serial_opts);
    search_ms += pass.search_ms;
    total_ms += pass.total_ms;
    checksum = pass.checksum;  // identical each round by construction
    iteration_ms.insert(iteration_ms.end(), pass.iteration_ms.begin(),
                        pass.iteration_ms.end());
  }
  report.checksum_consistent = checksum == untimed_checksum;
  report.distance_checksum = checksum;
  report.fraction_in_search = total_ms > 0.0 ? search_ms / total_ms : 0.0;

  const double mean =
      std::accumulate(iteration_ms.begin(), iteration_ms.end(), 0.0) /
      iteration_ms.size();
  double var = 0.0;
  for (double v : iteration_ms) var += (v - mean) * (v - mean);
  var /= iteration_ms.size();
  std::sort(iteration_ms.begin(), iteration_ms.end());
  report.per_iteration_mean_ms = mean;
  report.per_iteration_stddev_ms = std::sqrt(var);
  report.per_iteration_median_ms = iteration_ms[iteration_ms.size() / 2];

  // Parallel speedups against the serial search time, same states. Serial
  // and parallel passes are interleaved so frequency drift and scheduler
  // noise hit both sides, and the medians are compared.
  const auto time_once = [&](const SearchOptions& search) {
    const auto t0 = Clock::now();
    for (const auto& state : states) find_nearest(curve, state, search);
    return ms_since(t0);
  };
  std::map<int, SearchOptions> searches;
  for (int workers : worker_counts) {
    SearchOptions search;
    search.parallel = workers > 1;
    search.workers = workers;
    searches[workers] = search;
    find_nearest(curve, states[0], search);  // warm the pool
  }
  std::vector<double> serial_times;
  std::map<int, std::vector<double>> parallel_times;
  for (int rep = 0; rep < 13; ++rep) {
    serial_times.push_back(time_once(serial_opts.search));
    for (auto& [workers, search] : searches) {
      parallel_times[workers].push_back(time_once(search));
    }
  }
  const auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  const double serial_time = median(serial_times);
  for (auto& [workers, search] : searches) {
    report.speedup_by_workers[workers] =
        serial_time / median(parallel_times[workers]);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const CurveQueryResult q = find_nearest(curve, states[i], search);
      if (q.s_star_index != reference[i].first ||
          q.distance != reference[i].second) {
        report.parallel_matches_serial = false;
      }
    }
  }
  return report;
}

KernelBenchReport bench_distance_kernels(int trials, std::uint64_t seed) {
  KernelBenchReport report;
  report.trials = trials;
  if (trials <= 0) return report;

  std::mt19937_64 rng(seed);
  const auto se3 = GroupDescriptor::se3();
  std::vector<GroupElement> lhs, rhs;
  const int pairs = std::min(trials, 256);
  for (int i = 0; i < pairs; ++i) {
    lhs.push_back(random_element(se3, rng, 1.0, M_PI - 1e-3));
    rhs.push_back(random_element(se3, rng, 1.0, M_PI - 1e-3));
  }

  for (int i = 0; i < pairs; ++i) {
    const double closed = distance_se3(lhs[i], rhs[i]).first;
    const double generic = distance_via_log(lhs[i], rhs[i]);
    report.max_relative_diff =
        std::max(report.max_relative_diff,
                 std::abs(closed - generic) / (1.0 + closed));
  }

  const auto time_pass = [&](auto&& kernel) {
    volatile double sink = 0.0;
    const auto t0 = Clock::now();
    int done = 0;
    while (done < trials) {
      for (int i = 0; i < pairs && done < trials; ++i, ++done) {
        sink = sink + kernel(lhs[i], rhs[i]);
      }
    }
    return ms_since(t0);
  };
  const auto closed_kernel = [](const GroupElement& v, const GroupElement& w) {
    return distance_se3(v, w).first;
  };
  const auto generic_kernel = [](const GroupElement& v,
                                 const GroupElement& w) {
    return distance_via_log(v, w);
  };

  // Cold pass then warm pass; the ratio doubles as a stability probe.
  const double closed_cold = time_pass(closed_kernel);
  const double closed_warm = time_pass(closed_kernel);
  const double generic_time = time_pass(generic_kernel);
  report.warm_cold_ratio = closed_warm > 0.0 ? closed_cold / closed_warm : 1.0;
  report.closed_form_ops_per_sec =
      closed_warm > 0.0 ? trials / (closed_warm / 1000.0) : 0.0;
  report.generic_log_ops_per_sec =
      generic_time > 0.0 ? trials / (generic_time / 1000.0) : 0.0;
  report.speed_ratio = generic_time > 0.0 && closed_warm > 0.0
                           ? generic_time / closed_warm
                           : 0.0;
  return report;
}

std::string to_json(const BenchReport& r) {
  nlohmann::json j;
  j["per_iteration_mean_ms"] = r.per_iteration_mean_ms;
  j["per_iteration_stddev_ms"] = r.per_iteration_stddev_ms;
  j["per_iteration_median_ms"] = r.per_iteration_median_ms;
  j["fraction_in_search"] = r.fraction_in_search;
  j["curve_samples"] = r.curve_samples;
  j["trials"] = r.trials;
  nlohmann::json speedups = nlohmann::json::object();
  for (const auto& [workers, speedup] : r.speedup_by_workers) {
    speedups[std::to_string(workers)] = speedup;
  }
  j["speedup_by_workers"] = std::move(speedups);
  j["parallel_matches_serial"] = r.parallel_matches_serial;
  j["distance_checksum"] = r.distance_checksum;
  j["checksum_consistent"] = r.checksum_consistent;
  return j.dump(2);
}

std::string to_json(const KernelBenchReport& r) {
  nlohmann::json j;
  j["trials"] = r.trials;
  j["closed_form_ops_per_sec"] = r.closed_form_ops_per_sec;
  j["generic_log_ops_per_sec"] = r.generic_log_ops_per_sec;
  j["speed_ratio"] = r.speed_ratio;
  j["max_relative_diff"] = r.max_relative_diff;
  j["warm_cold_ratio"] = r.warm_cold_ratio;
  return j.dump(2);
}

void print_table(const BenchReport& r, std::ostream& out) {
  out << "field evaluation, N = " << r.curve_samples << ", trials = "
      << r.trials << "\n"
      << "  per iteration: mean " << r.per_iteration_mean_ms << " ms, stddev "
      << r.per_iteration_stddev_ms << " ms, median "
      << r.per_iteration_median_ms << " ms\n"
      << "  fraction in search: " << r.fraction_in_search << "\n";
  for (const auto& [workers, speedup] : r.speedup_by_workers) {
    out << "  speedup @ " << workers << " workers: " << speedup << "\n";
  }
  out << "  parallel matches serial: "
      << (r.parallel_matches_serial ? "yes" : "NO") << "\n"
      << "  checksum consistent: " << (r.checksum_consistent ? "yes" : "NO")
      << "\n";
}

void print_table(const KernelBenchReport& r, std::ostream& out) {
  out << "distance kernels, trials = " << r.trials << "\n"
      << "  closed form: " << r.closed_form_ops_per_sec << " ops/s\n"
      << "  generic log: " << r.generic_log_ops_per_sec << " ops/s\n"
      << "  speed ratio: " << r.speed_ratio << "x\n"
      << "  max relative diff: " << r.max_relative_diff << "\n"
      << "  warm/cold ratio: " << r.warm_cold_ratio << "\n";
}

}  // namespace liefield
