#include "srcalloc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

#include "srcalloc/error.hpp"
#include "srcalloc/numeric.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {

bool ComparisonReport::any_degenerate() const noexcept {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ComparisonRow& r) { return r.degenerate; });
}

ComparisonReport compare_strategies(std::span<const RunResult> results,
                                    std::string_view strategy_a,
                                    std::string_view strategy_b,
                                    int family_size) {
  if (family_size < 1) {
    throw Error(ErrorCode::kInput, "family size must be at least 1");
  }
  if (strategy_a == strategy_b) {
    throw Error(ErrorCode::kInput, "cannot compare a strategy with itself");
  }
  validate_results(results);

  using Condition = std::pair<std::string, std::int64_t>;
  using PairKey = std::tuple<std::string, std::string, std::uint64_t>;
  std::map<Condition, std::map<PairKey, std::pair<const RunResult*,
                                                  const RunResult*>>>
      grouped;
  for (const auto& r : results) {
    const bool is_a = r.strategy == strategy_a;
    const bool is_b = r.strategy == strategy_b;
    if (!is_a && !is_b) continue;
    auto& slot = grouped[{r.task, r.budget}][{r.target, r.model, r.seed}];
    (is_a ? slot.first : slot.second) = &r;
  }
  if (grouped.empty()) {
    throw Error(ErrorCode::kCoverage, "no results for '" +
                                          std::string(strategy_a) + "' or '" +
                                          std::string(strategy_b) + "'");
  }

  ComparisonReport report;
  report.strategy_a = strategy_a;
  report.strategy_b = strategy_b;
  report.family_size = family_size;
  for (const auto& [condition, pairs] : grouped) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& [key, pair] : pairs) {
      if (!pair.first || !pair.second) {
        const RunResult& present = pair.first ? *pair.first : *pair.second;
        const std::string_view missing =
            pair.first ? strategy_b : strategy_a;
        throw Error(ErrorCode::kCoverage,
                    "no '" + std::string(missing) + "' run paired with " +
                        present.task + "/" + present.target + "/" +
                        std::to_string(present.budget) + "/" + present.model +
                        "/seed " + std::to_string(present.seed));
      }
      a.push_back(pair.first->metric);
      b.push_back(pair.second->metric);
    }
    const PairedTTest t = paired_t_test(a, b);
    ComparisonRow row;
    row.comparison = std::string(strategy_a) + " vs " + std::string(strategy_b);
    row.condition = condition.first + "-" + std::to_string(condition.second);
    row.n = t.n;
    row.delta = t.delta;
    row.ci_low = t.ci_low;
    row.ci_high = t.ci_high;
    row.p = t.p;
    row.p_adjusted = bonferroni(t.p, family_size);
    row.degenerate = t.degenerate;
    row.d = t.degenerate ? std::nan("") : t.delta / t.sd;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string_view significance_stars(double p) noexcept {
  if (std::isnan(p)) return "";
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

namespace {

std::string real_or_na(double x) {
  return std::isnan(x) ? "NA" : format_real(x);
}

// "+.038", "-1.250": fixed decimals, explicit sign, no leading zero.
std::string signed_fixed(double x, int decimals) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, std::abs(x));
  std::string digits(buf);
  if (digits.starts_with("0.")) digits.erase(0, 1);
  const bool zero = std::all_of(digits.begin(), digits.end(), [](char c) {
    return c == '0' || c == '.';
  });
  return (x < 0.0 && !zero ? "-" : "+") + digits;
}

std::string p_text(double p) {
  if (std::isnan(p)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", p);
  std::string s(buf);
  if (s.starts_with("0.")) s.erase(0, 1);
  return s + std::string(significance_stars(p));
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string report_to_csv(const ComparisonReport& report) {
  std::string out = "# comparison: a=" + report.strategy_a +
                    " b=" + report.strategy_b +
                    " family_size=" + std::to_string(report.family_size) +
                    " test=paired-t confidence=0.95\n";
  out += "comparison,condition,n,delta,ci_low,ci_high,p,p_adjusted,d\n";
  for (const auto& r : report.rows) {
    out += r.comparison + "," + r.condition + "," + std::to_string(r.n) + "," +
           format_real(r.delta) + "," + format_real(r.ci_low) + "," +
           format_real(r.ci_high) + "," + real_or_na(r.p) + "," +
           real_or_na(r.p_adjusted) + "," + real_or_na(r.d) + "\n";
  }
  return out;
}

std::string report_to_text(const ComparisonReport& report) {
  const std::vector<std::string> header = {"Comparison", "Condition", "n",
                                           "Delta",      "95% CI",    "p",
                                           "p_adj",      "d"};
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& r : report.rows) {
    rows.push_back({r.comparison, r.condition, std::to_string(r.n),
                    signed_fixed(r.delta, 3),
                    "[" + signed_fixed(r.ci_low, 3) + "," +
                        signed_fixed(r.ci_high, 3) + "]",
                    p_text(r.p), p_text(r.p_adjusted), signed_fixed(r.d, 2)});
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 == row.size() ? row[c] : pad(row[c], widths[c] + 2);
    }
    out += line + "\n";
  }
  out += "Bonferroni family size " + std::to_string(report.family_size) +
         "; * p<.05, ** p<.01, *** p<.001 (unadjusted p). Positive Delta "
         "favors " + report.strategy_b + ".\n";
  return out;
}

std::vector<RunResult> parse_results_csv(std::string_view text,
                                         std::string_view source_name) {
  std::vector<RunResult> out;
  bool seen_header = false;
  std::size_t line_no = 0;
  for (const auto raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string at =
        std::string(source_name) + ":" + std::to_string(line_no);
    if (!seen_header) {
      if (line != kResultsHeader) {
        throw Error(ErrorCode::kInput,
                    at + ": expected header `" + std::string(kResultsHeader) +
                        "`");
      }
      seen_header = true;
      continue;
    }
    const auto cells = split_char(line, ',');
    if (cells.size() != 8) {
      throw Error(ErrorCode::kInput,
                  at + ": expected 8 fields, got " +
                      std::to_string(cells.size()));
    }
    RunResult r;
    r.task = trim(cells[0]);
    r.target = trim(cells[1]);
    r.budget = parse_int(cells[2], at + " budget");
    r.model = trim(cells[3]);
    r.strategy = trim(cells[4]);
    r.seed = parse_uint(cells[5], at + " seed");
    r.metric = parse_double(cells[6], at + " metric");
    r.utilization = parse_double(cells[7], at + " utilization");
    out.push_back(std::move(r));
  }
  if (!seen_header) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) + ": missing results header");
  }
  validate_results(out);
  return out;
}

std::string results_to_csv(std::span<const RunResult> results,
                           std::string_view comment) {
  std::string out;
  if (!comment.empty()) out += "# " + std::string(comment) + "\n";
  out += std::string(kResultsHeader) + "\n";
  for (const auto& r : results) {
    out += r.task + "," + r.target + "," + std::to_string(r.budget) + "," +
           r.model + "," + r.strategy + "," + std::to_string(r.seed) + "," +
           format_real(r.metric) + "," + format_real(r.utilization) + "\n";
  }
  return out;
}

}  // namespace srcalloc
