// liefield: vector-field path following on matrix Lie groups
//
// Micro-benchmarks for the field-evaluation hot path. The nearest-point
// search is expected to dominate, and to parallelize without changing
// results.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "liefield/field.hpp"

namespace liefield {

struct BenchReport {
  double per_iteration_mean_ms = 0.0;
  double per_iteration_stddev_ms = 0.0;
  double per_iteration_median_ms = 0.0;
  double fraction_in_search = 0.0;     // share of time inside find_nearest
  int curve_samples = 0;
  int trials = 0;
  std::map<int, double> speedup_by_workers;  // workers -> serial/parallel
  bool parallel_matches_serial = true;       // bit-identical (index, value)
  double distance_checksum = 0.0;            // order-fixed sum of distances
  bool checksum_consistent = true;           // timed vs untimed paths agree
};

struct KernelBenchReport {
  int trials = 0;
  double closed_form_ops_per_sec = 0.0;
  double generic_log_ops_per_sec = 0.0;
  double speed_ratio = 0.0;            // closed form vs generic
  double max_relative_diff = 0.0;      // |closed - generic| / (1 + D)
  double warm_cold_ratio = 1.0;        // second pass vs first pass
};

/// Times evaluate_field over seeded random on- and off-curve states and
/// measures the parallel-search speedup for each worker count.
BenchReport bench_field_eval(const DiscretizedCurve& curve, int trials,
                             const std::vector<int>& worker_counts,
                             std::uint64_t seed);

/// Throughput of the closed-form SE(3) kernel against the generic
/// matrix-logarithm route on identical random pairs.
KernelBenchReport bench_distance_kernels(int trials, std::uint64_t seed);

std::string to_json(const BenchReport& report);
std::string to_json(const KernelBenchReport& report);
void print_table(const BenchReport& report, std::ostream& out);
void print_table(const KernelBenchReport& report, std::ostream& out);

}  // namespace liefield
