// Runs every primary acceptance criterion once and prints one PASS/FAIL
// line per criterion. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "srcalloc/allocation.hpp"
#include "srcalloc/allocation_io.hpp"
#include "srcalloc/manifest.hpp"
#include "srcalloc/report.hpp"
#include "srcalloc/rng.hpp"
#include "srcalloc/similarity.hpp"
#include "srcalloc/simulator.hpp"
#include "srcalloc/stats.hpp"
#include "test_support.hpp"

namespace {

using namespace srcalloc;

// Collects the first few failure messages of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (failures_) {
      s << ", " << failures_ << " failed:";
      for (const auto& m : messages_) s << " [" << m << "]";
    }
    return s.str();
  }
  void note(const std::string& text) { notes_ += notes_.empty() ? text : "; " + text; }
  const std::string& notes() const { return notes_; }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> messages_;
  std::string notes_;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void utilization_reproduction(Check& c) {
  const auto tp = testing::scarce_best_pool();
  StrategyConfig cfg;
  cfg.strategy = Strategy::kAllFromBest;
  for (const auto& [budget, expected, percent] :
       {std::tuple{5000, 0.362, 36}, std::tuple{10000, 0.181, 18}}) {
    cfg.budget = budget;
    const auto v = all_from_best(tp.pool, cfg);
    c.expect(v.entries.size() == 1 && v.entries[0].language == "swa",
             "best source is swa");
    c.expect(v.used == 1810, "used " + std::to_string(v.used) + " != 1810");
    c.expect(std::abs(v.utilization - expected) <= 1e-12,
             "utilization " + num(v.utilization) + " != " + num(expected));
    c.expect(std::lround(100.0 * v.utilization) == percent,
             "whole percent " + std::to_string(std::lround(100.0 * v.utilization)));
  }
  c.note("utilization 0.362 at B=5000, 0.181 at B=10000");
}

struct RandomCase {
  SourcePool pool;
  StrategyConfig cfg;
};

RandomCase random_case(std::mt19937_64& gen) {
  const std::size_t n = 2 + gen() % 19;
  RandomCase rc{testing::random_pool(gen, n, 20000), {}};
  rc.cfg.budget = 1 + static_cast<std::int64_t>(gen() % 20000);
  rc.cfg.k = 1 + static_cast<int>(gen() % std::min<std::size_t>(n, 6));
  rc.cfg.alpha = std::uniform_real_distribution<double>(0.0, 1.5)(gen);
  rc.cfg.seed = gen();
  rc.cfg.batch_size =
      1 + static_cast<std::int64_t>(gen() % std::min<std::int64_t>(500, rc.cfg.budget));
  return rc;
}

void budget_conservation(Check& c) {
  std::mt19937_64 gen(20240501);
  constexpr int kPools = 1000;
  for (int trial = 0; trial < kPools; ++trial) {
    RandomCase rc = random_case(gen);
    for (const Strategy s :
         {Strategy::kTopKProportional, Strategy::kTopKUniform, Strategy::kRandomK,
          Strategy::kDiversityAware, Strategy::kGreedyMarginal}) {
      rc.cfg.strategy = s;
      const auto v = allocate(rc.pool, rc.cfg);
      std::int64_t sum = 0;
      std::int64_t selected = 0;
      for (const auto& e : v.entries) sum += e.amount;
      if (s == Strategy::kGreedyMarginal) {
        // Selection and allocation are joint: every positive-similarity
        // source is selectable.
        for (const auto& cand : rc.pool.candidates) {
          if (cand.similarity > 0.0) selected += cand.availability;
        }
      } else {
        for (const auto& e : v.entries) {
          selected += rc.pool.candidate(e.language).availability;
        }
      }
      c.expect(sum == std::min(rc.cfg.budget, selected),
               std::string(strategy_name(s)) + " trial " + std::to_string(trial) +
                   ": sum " + std::to_string(sum));
      for (const auto& e : v.entries) {
        c.expect(e.amount <= rc.pool.candidate(e.language).availability,
                 "cap exceeded for " + e.language);
      }
    }
  }
  c.note(std::to_string(kPools) + " pools x 5 strategies");
}

void alpha_zero_reduction(Check& c) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomCase rc = random_case(gen);
    auto top = top_k_select(rc.pool, rc.cfg.k);
    auto div = diversity_aware_select(rc.pool, rc.cfg.k, 0.0);
    const auto penalized = diversity_aware_select(rc.pool, rc.cfg.k, rc.cfg.alpha);
    const auto argmax = std::max_element(
        rc.pool.candidates.begin(), rc.pool.candidates.end(),
        [](const Candidate& a, const Candidate& b) {
          return a.similarity < b.similarity ||
                 (a.similarity == b.similarity && a.language > b.language);
        });
    c.expect(div.front() == argmax->language, "alpha=0 first pick is not argmax");
    c.expect(penalized.front() == argmax->language, "first pick is not argmax");
    std::sort(top.begin(), top.end());
    std::sort(div.begin(), div.end());
    c.expect(top == div, "alpha=0 set differs from top-k, trial " + std::to_string(trial));
  }
  c.note("1000 pools");
}

void cosine_gap_oracle(Check& c) {
  std::mt19937_64 gen(64);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 63;
    const std::size_t d = 1 + gen() % 16;
    const auto s = testing::random_rows(gen, n, d);
    const auto t = testing::random_rows(gen, n, d);
    const double fast = cosine_gap(EmbeddingSet::from_rows("s", s),
                                   EmbeddingSet::from_rows("t", t));
    const double slow = testing::cosine_gap_double_loop(s, t);
    worst = std::max(worst, std::abs(fast - slow));
    c.expect(std::abs(fast - slow) <= 1e-9,
             "n=" + std::to_string(n) + " d=" + std::to_string(d) + " diff " +
                 num(std::abs(fast - slow)));
  }
  const std::vector<std::vector<double>> same(6, {0.6, 0.8});
  const double zero = cosine_gap(EmbeddingSet::from_rows("a", same),
                                 EmbeddingSet::from_rows("b", same));
  c.expect(std::abs(zero) <= 1e-12, "identical vectors gave " + num(zero));
  const std::vector<std::vector<double>> ortho{{1.0, 0.0}, {0.0, 1.0}};
  const double one = cosine_gap(EmbeddingSet::from_rows("a", ortho),
                                EmbeddingSet::from_rows("b", ortho));
  c.expect(std::abs(one - 1.0) <= 1e-12, "orthonormal pair gave " + num(one));
  c.note("max deviation " + num(worst));
}

void greedy_optimality(Check& c) {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> sim(0.01, 1.0);
  std::uniform_real_distribution<double> tau(0.5, 15.0);
  int comparisons = 0;
  for (int model_no = 0; model_no < 100; ++model_no) {
    const std::size_t n = 1 + gen() % 4;
    SourcePool pool;
    pool.target = "tgt";
    UtilityModel model;
    model.target = "tgt";
    model.beta = 0.0;
    model.tau = tau(gen);
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate cand{testing::code(i), static_cast<std::int64_t>(gen() % 12),
                           sim(gen)};
      pool.candidates.push_back(cand);
      model.sim_to_target[cand.language] = cand.similarity;
    }
    if (pool.total_availability() == 0) pool.candidates[0].availability = 5;
    const auto gain = separable_gain(model);
    for (std::int64_t budget = 1; budget <= 20; ++budget) {
      StrategyConfig cfg;
      cfg.strategy = Strategy::kGreedyMarginal;
      cfg.budget = budget;
      cfg.batch_size = 1;
      const double greedy = evaluate(model, greedy_marginal_allocate(pool, cfg, gain));
      const double best = evaluate(model, brute_force_best(model, pool, budget, 1));
      ++comparisons;
      c.expect(std::abs(greedy - best) <= 1e-9,
               "model " + std::to_string(model_no) + " B=" + std::to_string(budget) +
                   ": greedy " + num(greedy) + " vs " + num(best));
    }
  }
  c.note("100 models, B = 1..20, " + std::to_string(comparisons) + " comparisons");
}

void statistics_correctness(Check& c) {
  std::mt19937_64 gen(31337);
  std::normal_distribution<double> noise(0.0, 0.05);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + gen() % 19;
    std::vector<double> a(n), b(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = 0.5 + noise(gen);
      b[i] = a[i] + 0.01 + noise(gen);
      d[i] = b[i] - a[i];
    }
    double mean = 0.0;
    for (const double x : d) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double se = sd / std::sqrt(static_cast<double>(n));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    const double half = boost::math::quantile(dist, 0.975) * se;
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(mean / se)));
    const auto r = paired_t_test(a, b);
    const double dev = std::max({std::abs(r.delta - mean), std::abs(r.ci_low - (mean - half)),
                                 std::abs(r.ci_high - (mean + half)), std::abs(r.p - p),
                                 std::abs(cohens_d_paired(a, b) - mean / sd)});
    worst = std::max(worst, dev);
    c.expect(dev <= 1e-10, "trial " + std::to_string(trial) + " deviation " + num(dev));
  }
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  const std::vector<double> diffs{1.0, 2.0, 3.0};
  const double d = cohens_d_paired(zeros, diffs);
  const auto fixture = paired_t_test(zeros, diffs);
  c.expect(d == 2.0, "diffs (1,2,3) d = " + num(d));
  c.expect(std::abs(fixture.p - 0.0742) <= 1e-3, "diffs (1,2,3) p = " + num(fixture.p));

  std::normal_distribution<double> unit(0.0, 1.0);
  int covered = 0;
  constexpr int kTrials = 10000;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::vector<double> a(9), b(9);
    for (std::size_t i = 0; i < 9; ++i) {
      a[i] = unit(gen);
      b[i] = a[i] + 0.25 + unit(gen);
    }
    const auto r = paired_t_test(a, b);
    covered += r.ci_low <= 0.25 && 0.25 <= r.ci_high;
  }
  const double coverage = covered / static_cast<double>(kTrials);
  c.expect(std::abs(coverage - 0.95) <= 0.02, "coverage " + num(coverage));
  c.note("max deviation " + num(worst) + ", p(1,2,3) = " + num(fixture.p) +
         ", CI coverage " + num(coverage));
}

void comparison_report_pipeline(Check& c) {
  const auto csv = results_to_csv(testing::ner_comparison_fixture(), "synthetic fixture");
  const auto results = parse_results_csv(csv, "fixture");
  const auto report =
      compare_strategies(results, "all-from-best", "top-k-proportional", 4);
  const auto report_csv = report_to_csv(report);
  const auto text = report_to_text(report);
  c.expect(report.rows.size() == 1, "expected one condition");
  if (report.rows.empty()) return;
  const auto& row = report.rows[0];
  const auto round3 = [](double x) { return std::round(x * 1000.0) / 1000.0; };
  c.expect(row.n == 9, "n = " + std::to_string(row.n));
  c.expect(round3(row.delta) == 0.038, "delta " + num(row.delta));
  c.expect(round3(row.d) == 1.43, "d " + num(row.d));
  c.expect(text.find("+.038") != std::string::npos, "text lacks +.038");
  c.expect(text.find("+1.43") != std::string::npos, "text lacks +1.43");
  c.expect(report_csv.find(",9,") != std::string::npos, "csv row missing");
  c.note("delta " + num(row.delta) + ", d " + num(row.d) + ", CI [" + num(row.ci_low) +
         ", " + num(row.ci_high) + "], p " + num(row.p));
}

void determinism(Check& c) {
  // Same-process repeat runs.
  const auto pool = testing::scarce_best_pool().pool;
  c.expect(random_k_select(pool, 5, 42) == random_k_select(pool, 5, 42), "random-k repeat");

  StrategyConfig cfg;
  cfg.strategy = Strategy::kTopKProportional;
  cfg.budget = 5000;
  const auto alloc = allocate(pool, cfg);
  std::vector<DatasetIndex> indexes;
  for (const auto& cand : pool.candidates) {
    DatasetIndex idx;
    idx.language = cand.language;
    for (std::int64_t i = 0; i < cand.availability; ++i) {
      idx.example_ids.push_back(cand.language + "-" + std::to_string(i));
    }
    indexes.push_back(std::move(idx));
  }
  c.expect(manifest_to_jsonl(build_manifest(alloc, indexes, 42)) ==
               manifest_to_jsonl(build_manifest(alloc, indexes, 42)),
           "manifest repeat");

  const auto tp = testing::scarce_best_pool();
  const std::vector<TournamentPool> pools{tp};
  const std::vector<UtilityModel> models{testing::model_for(tp, "m", 0.02, 7)};
  const auto cfgs = testing::all_strategy_configs(5000);
  const std::vector<std::uint64_t> seeds{42, 43, 44};
  c.expect(results_to_csv(tournament(models, pools, cfgs, seeds)) ==
               results_to_csv(tournament(models, pools, cfgs, seeds)),
           "tournament repeat");

  // Cross-platform pins: values computed by an independent implementation
  // of the generator, not by this library.
  Rng rng(42);
  c.expect(rng.next() == 0x15780b2e0c2ec716ULL, "xoshiro256** golden output");
  c.expect(mix_seed(42, std::string_view("swa")) == 0x94ec2fb36b44ada6ULL,
           "language sub-seed golden value");
  SourcePool golden;
  golden.target = "amh";
  for (const char* code : {"bam", "ewe", "fon", "hau", "ibo", "kin", "lug", "luo", "mos",
                           "nya", "pcm", "sna", "swa", "tsn", "twi", "wol", "xho", "yor",
                           "zul"}) {
    golden.candidates.push_back({code, 10, 0.1});
  }
  c.expect(random_k_select(golden, 5, 42) ==
               std::vector<std::string>{"ewe", "luo", "tsn", "yor", "zul"},
           "random-k golden draw");
  AllocationVector small;
  small.budget = 5;
  small.entries = {{"A", 3}, {"B", 2}};
  small.refresh_totals();
  std::vector<DatasetIndex> small_idx(2);
  small_idx[0].language = "A";
  small_idx[1].language = "B";
  for (int i = 0; i < 6; ++i) small_idx[0].example_ids.push_back("a" + std::to_string(i));
  for (int i = 0; i < 4; ++i) small_idx[1].example_ids.push_back("b" + std::to_string(i));
  const auto m = build_manifest(small, small_idx, 42, 0.2);
  std::string order;
  for (const auto& r : m.records) order += r.example_id + (r.split == Split::kTrain ? "" : "*") + " ";
  c.expect(order == "b0 b1 a2 a4 a5* ", "manifest golden order: " + order);
  c.note("repeat runs identical; generator, random-k and manifest match frozen "
         "cross-implementation values");
}

void simulator_mechanism(Check& c) {
  const auto base = testing::scarce_best_pool();
  std::vector<TournamentPool> pools{base};
  auto ner = base;
  ner.task = "ner";
  pools.push_back(ner);
  const std::vector<UtilityModel> models{testing::model_for(base, "m1", 0.02, 1),
                                         testing::model_for(base, "m2", 0.02, 2)};
  const auto cfgs = testing::all_strategy_configs(5000);
  const std::vector<std::uint64_t> seeds{42, 43, 44};
  const auto results = tournament(models, pools, cfgs, seeds);
  std::map<std::string, std::pair<double, int>> sums;
  for (const auto& r : results) {
    sums[r.strategy].first += r.metric;
    ++sums[r.strategy].second;
  }
  std::map<std::string, double> mean;
  for (const auto& [name, acc] : sums) mean[name] = acc.first / acc.second;
  const double single = mean.at("all-from-best");
  for (const auto& [name, score] : mean) {
    if (name != "all-from-best") {
      c.expect(score > single, name + " mean " + num(score) + " <= all-from-best " + num(single));
    }
  }
  const auto util = utilization_summary(results);
  c.expect(util.at("all-from-best").mean < 0.6,
           "single-source utilization " + num(util.at("all-from-best").mean));
  for (const auto& [name, u] : util) {
    if (name != "all-from-best") c.expect(u.min == 1.0, name + " utilization " + num(u.min));
  }
  std::string ranking;
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [name, score] : mean) order.push_back({score, name});
  std::sort(order.rbegin(), order.rend());
  for (const auto& [score, name] : order) ranking += name + "=" + num(score) + " ";
  c.note("means: " + ranking + "| single-source utilization " +
         num(util.at("all-from-best").mean));
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"utilization-reproduction", 1.0, utilization_reproduction},
      {"budget-conservation", 10.0, budget_conservation},
      {"alpha-zero-reduction", 5.0, alpha_zero_reduction},
      {"cosine-gap-oracle", 5.0, cosine_gap_oracle},
      {"greedy-marginal-optimality", 30.0, greedy_optimality},
      {"statistics-correctness", 60.0, statistics_correctness},
      {"comparison-report-pipeline", 1.0, comparison_report_pipeline},
      {"determinism", 10.0, determinism},
      {"simulator-mechanism", 30.0, simulator_mechanism},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = error.empty() && check.ok() && seconds < criterion.limit_seconds;
    failed += !pass;
    std::printf("%s %s (%.3fs, limit %.0fs): %s", pass ? "PASS" : "FAIL", criterion.name,
                seconds, criterion.limit_seconds, check.summary().c_str());
    if (!error.empty()) std::printf("; exception: %s", error.c_str());
    if (!check.notes().empty()) std::printf("; %s", check.notes().c_str());
    std::printf("\n");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
