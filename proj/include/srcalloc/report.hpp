#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srcalloc/stats.hpp"

namespace srcalloc {

// One row per (task, budget) condition, pairing runs of two strategies on
// (target, model, seed).
struct ComparisonRow {
  std::string comparison;
  std::string condition;
  std::size_t n = 0;
  double delta = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p = 0.0;
  double p_adjusted = 0.0;
  double d = 0.0;  // NaN when the differences are constant
  bool degenerate = false;
};

struct ComparisonReport {
  std::string strategy_a;
  std::string strategy_b;
  int family_size = 1;
  std::vector<ComparisonRow> rows;

  bool any_degenerate() const noexcept;
};

// Positive delta favors `strategy_b`.
ComparisonReport compare_strategies(std::span<const RunResult> results,
                                    std::string_view strategy_a,
                                    std::string_view strategy_b,
                                    int family_size);

// "***" below .001, "**" below .01, "*" below .05.
std::string_view significance_stars(double p) noexcept;

// Leading `#` configuration line, then
// comparison,condition,n,delta,ci_low,ci_high,p,p_adjusted,d.
std::string report_to_csv(const ComparisonReport& report);

// Aligned table with three-decimal signed deltas and starred p-values.
std::string report_to_text(const ComparisonReport& report);

inline constexpr std::string_view kResultsHeader =
    "task,target,budget,model,strategy,seed,metric,utilization";

// Lines starting with '#' are skipped; the header must match exactly.
std::vector<RunResult> parse_results_csv(std::string_view text,
                                         std::string_view source_name);

// Optional `comment` becomes a leading `# ` line.
std::string results_to_csv(std::span<const RunResult> results,
                           std::string_view comment = {});

}  // namespace srcalloc
