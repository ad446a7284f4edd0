#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace srcalloc {

struct PairedTTest {
  std::size_t n = 0;
  double delta = 0.0;  // mean of b - a
  double sd = 0.0;     // sample sd of the differences
  double ci_low = 0.0;
  double ci_high = 0.0;
  double t_statistic = 0.0;
  double df = 0.0;
  double p = 0.0;  // two-sided; NaN when degenerate
  // Differences have zero variance: t and p are undefined (NaN) and the
  // interval collapses to delta.
  bool degenerate = false;
};

// Differences are b_i - a_i, so a positive delta favors `b`.
PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b,
                          double confidence = 0.95);

// mean(b - a) / sd(b - a), sd with n - 1 denominator. kDegenerateVariance
// when sd is zero.
double cohens_d_paired(std::span<const double> a, std::span<const double> b);

double bonferroni(double p, int family_size);

struct RunResult {
  std::string task;
  std::string target;
  std::int64_t budget = 0;
  std::string model;
  std::string strategy;
  std::uint64_t seed = 0;
  double metric = 0.0;
  double utilization = 0.0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Metric and utilization in [0, 1]; (task, target, budget, model, strategy,
// seed) unique.
void validate_results(std::span<const RunResult> results);

enum class WinMode {
  kSplitTies,   // tied winners share the condition equally
  kStrictOnly,  // only a unique winner is credited
};

// Share of (task, target, budget, model, seed) conditions won by each
// strategy. Every condition must contain every strategy.
std::map<std::string, double> win_rates(std::span<const RunResult> results,
                                        WinMode mode = WinMode::kSplitTies);

struct UtilizationStats {
  std::size_t runs = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

std::map<std::string, UtilizationStats> utilization_summary(
    std::span<const RunResult> results);

}  // namespace srcalloc
