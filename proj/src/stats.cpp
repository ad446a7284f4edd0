#include "srcalloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "srcalloc/error.hpp"
#include "srcalloc/student_t.hpp"

namespace srcalloc {
namespace {

std::vector<double> differences(std::span<const double> a,
                                std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInput,
                "paired samples differ in length (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "a paired test needs at least 2 pairs");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw Error(ErrorCode::kInput, "non-finite value in paired samples");
    }
    d[i] = b[i] - a[i];
  }
  return d;
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  bool degenerate = false;
};

Moments moments(const std::vector<double>& d) {
  const double n = static_cast<double>(d.size());
  double sum = 0.0;
  double largest = 0.0;
  for (const double v : d) {
    sum += v;
    largest = std::max(largest, std::abs(v));
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (const double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  // Differences that are equal up to representation error count as constant.
  const bool degenerate = sd == 0.0 || sd <= 1e-14 * largest;
  return {mean, sd, degenerate};
}

}  // namespace

PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b,
                          double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kInput, "confidence level must be in (0, 1)");
  }
  const auto d = differences(a, b);
  const Moments m = moments(d);
  PairedTTest r;
  r.n = d.size();
  r.delta = m.mean;
  r.sd = m.sd;
  r.df = static_cast<double>(r.n - 1);
  if (m.degenerate) {
    r.degenerate = true;
    r.t_statistic = std::numeric_limits<double>::quiet_NaN();
    r.p = std::numeric_limits<double>::quiet_NaN();
    r.ci_low = r.ci_high = r.delta;
    return r;
  }
  const double se = m.sd / std::sqrt(static_cast<double>(r.n));
  r.t_statistic = m.mean / se;
  r.p = student_t_two_sided_p(r.t_statistic, r.df);
  const double half =
      student_t_quantile(0.5 + confidence / 2.0, r.df) * se;
  r.ci_low = m.mean - half;
  r.ci_high = m.mean + half;
  return r;
}

double cohens_d_paired(std::span<const double> a, std::span<const double> b) {
  const Moments m = moments(differences(a, b));
  if (m.degenerate) {
    throw Error(ErrorCode::kDegenerateVariance,
                "paired differences have zero variance; Cohen's d is "
                "undefined");
  }
  return m.mean / m.sd;
}

double bonferroni(double p, int family_size) {
  if (family_size < 1) {
    throw Error(ErrorCode::kInput, "family size must be at least 1");
  }
  if (std::isnan(p)) return p;
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInput, "p-value must lie in [0, 1]");
  }
  return std::min(1.0, p * family_size);
}

namespace {

auto run_key(const RunResult& r) {
  return std::tie(r.task, r.target, r.budget, r.model, r.strategy, r.seed);
}

auto condition_key(const RunResult& r) {
  return std::tie(r.task, r.target, r.budget, r.model, r.seed);
}

std::string describe(const RunResult& r) {
  return r.task + "/" + r.target + "/" + std::to_string(r.budget) + "/" +
         r.model + "/seed " + std::to_string(r.seed);
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

void validate_results(std::span<const RunResult> results) {
  std::vector<const RunResult*> sorted;
  for (const auto& r : results) {
    if (!in_unit_interval(r.metric)) {
      throw Error(ErrorCode::kInput, "metric outside [0, 1] for " +
                                         describe(r) + " (" + r.strategy + ")");
    }
    if (!in_unit_interval(r.utilization)) {
      throw Error(ErrorCode::kInput, "utilization outside [0, 1] for " +
                                         describe(r) + " (" + r.strategy + ")");
    }
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const RunResult* a, const RunResult* b) {
              return run_key(*a) < run_key(*b);
            });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (run_key(*sorted[i]) == run_key(*sorted[i - 1])) {
      throw Error(ErrorCode::kInput, "duplicate result for " +
                                         describe(*sorted[i]) + " (" +
                                         sorted[i]->strategy + ")");
    }
  }
}

std::map<std::string, double> win_rates(std::span<const RunResult> results,
                                        WinMode mode) {
  if (results.empty()) {
    throw Error(ErrorCode::kInput, "no results to compute win rates from");
  }
  validate_results(results);
  std::set<std::string> strategies;
  for (const auto& r : results) strategies.insert(r.strategy);

  std::vector<const RunResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunResult* a, const RunResult* b) {
              return std::tuple_cat(condition_key(*a), std::tie(a->strategy)) <
                     std::tuple_cat(condition_key(*b), std::tie(b->strategy));
            });

  std::map<std::string, double> wins;
  for (const auto& s : strategies) wins[s] = 0.0;
  std::size_t conditions = 0;
  for (std::size_t begin = 0; begin < sorted.size();) {
    std::size_t end = begin;
    while (end < sorted.size() &&
           condition_key(*sorted[end]) == condition_key(*sorted[begin])) {
      ++end;
    }
    if (end - begin != strategies.size()) {
      std::set<std::string> present;
      for (std::size_t i = begin; i < end; ++i) present.insert(sorted[i]->strategy);
      std::string missing;
      for (const auto& s : strategies) {
        if (!present.count(s)) missing += (missing.empty() ? "" : ", ") + s;
      }
      throw Error(ErrorCode::kCoverage, "condition " + describe(*sorted[begin]) +
                                            " lacks strategies: " + missing);
    }
    double best = -1.0;
    for (std::size_t i = begin; i < end; ++i) {
      best = std::max(best, sorted[i]->metric);
    }
    std::size_t tied = 0;
    for (std::size_t i = begin; i < end; ++i) {
      if (sorted[i]->metric == best) ++tied;
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (sorted[i]->metric != best) continue;
      if (mode == WinMode::kSplitTies) {
        wins[sorted[i]->strategy] += 1.0 / static_cast<double>(tied);
      } else if (tied == 1) {
        wins[sorted[i]->strategy] += 1.0;
      }
    }
    ++conditions;
    begin = end;
  }
  for (auto& [name, w] : wins) w /= static_cast<double>(conditions);
  return wins;
}

std::map<std::string, UtilizationStats> utilization_summary(
    std::span<const RunResult> results) {
  if (results.empty()) {
    throw Error(ErrorCode::kInput, "no results to summarize");
  }
  std::map<std::string, std::vector<double>> by_strategy;
  for (const auto& r : results) {
    if (!in_unit_interval(r.utilization)) {
      throw Error(ErrorCode::kInput, "utilization outside [0, 1] for " +
                                         describe(r) + " (" + r.strategy + ")");
    }
    by_strategy[r.strategy].push_back(r.utilization);
  }
  std::map<std::string, UtilizationStats> out;
  for (const auto& [name, values] : by_strategy) {
    UtilizationStats s;
    s.runs = values.size();
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    out[name] = s;
  }
  return out;
}

}  // namespace srcalloc
