#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srcalloc/similarity.hpp"

namespace srcalloc {

enum class Strategy {
  kAllFromBest,
  kTopKProportional,
  kTopKUniform,
  kRandomK,
  kDiversityAware,
  kGreedyMarginal,
};

inline constexpr Strategy kAllStrategies[] = {
    Strategy::kAllFromBest,    Strategy::kTopKProportional,
    Strategy::kTopKUniform,    Strategy::kRandomK,
    Strategy::kDiversityAware, Strategy::kGreedyMarginal,
};

// Kebab-case names used on the command line and in output files.
std::string_view strategy_name(Strategy s) noexcept;
Strategy parse_strategy(std::string_view name);

struct Candidate {
  std::string language;
  std::int64_t availability = 0;
  // Similarity to the target; 0 when no similarity data exists.
  double similarity = 0.0;
};

struct SourcePool {
  std::string target;
  std::vector<Candidate> candidates;
  // Pairwise source similarities; required by diversity-aware selection.
  // Pairs missing from the matrix count as 0.
  std::optional<SimilarityMatrix> inter_source;

  // Unique non-empty codes, target excluded, availability >= 0, finite
  // similarities, at least one candidate.
  void validate() const;
  const Candidate& candidate(std::string_view language) const;
  std::int64_t total_availability() const noexcept;
};

struct StrategyConfig {
  Strategy strategy = Strategy::kTopKProportional;
  std::int64_t budget = 0;
  int k = 5;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::int64_t batch_size = 500;
  double saturation_c = 1000.0;

  void validate() const;
};

struct AllocationEntry {
  std::string language;
  std::int64_t amount = 0;

  friend bool operator==(const AllocationEntry&,
                         const AllocationEntry&) = default;
};

// Sentences per selected source. `entries` lists the selected sources in
// selection order; `used` is the sum of amounts.
struct AllocationVector {
  std::string target;
  std::vector<AllocationEntry> entries;
  std::int64_t budget = 0;
  std::int64_t used = 0;
  double utilization = 0.0;
  // Set by the strategy functions; building blocks leave it empty.
  std::optional<StrategyConfig> config;

  std::int64_t amount_of(std::string_view language) const noexcept;
  // Recomputes used and utilization from the entries.
  void refresh_totals();
};

// A selected source as seen by the allocation rules.
struct WeightedSource {
  std::string language;
  double similarity = 0.0;
  std::int64_t availability = 0;
};

// Hamilton apportionment of `total` by `weights`. Remainder ties go to the
// lower `rank`. Weights must be >= 0 with a positive sum.
std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            std::span<const double> weights,
                                            std::span<const std::size_t> rank);

std::vector<std::string> top_k_select(const SourcePool& pool, int k);

std::vector<std::string> random_k_select(const SourcePool& pool, int k,
                                         std::uint64_t seed);

std::vector<std::string> diversity_aware_select(const SourcePool& pool, int k,
                                                double alpha);

// Shares proportional to similarity (negative similarity weighs 0), then
// capped and redistributed with similarity weights.
AllocationVector proportional_allocate(std::span<const WeightedSource> selected,
                                       std::int64_t budget);

// Equal shares; remainder sentences go one each in input order. Capped and
// redistributed with equal weights.
AllocationVector uniform_allocate(std::span<const WeightedSource> selected,
                                  std::int64_t budget);

enum class WeightBasis { kSimilarity, kUniform };

struct CapStats {
  int iterations = 0;
};

// Caps every amount at its availability and re-apportions the remaining
// budget over the sources that are not yet capped, repeating until no cap
// is exceeded. Returns the input unchanged when nothing exceeds a cap.
AllocationVector cap_and_redistribute(const AllocationVector& raw,
                                      const SourcePool& pool,
                                      WeightBasis basis,
                                      CapStats* stats = nullptr);

// Basis taken from raw.config: uniform for Top-K-Uniform and Random-K,
// similarity otherwise.
AllocationVector cap_and_redistribute(const AllocationVector& raw,
                                      const SourcePool& pool);

AllocationVector all_from_best(const SourcePool& pool,
                               const StrategyConfig& cfg);

// Value of giving `batch` more sentences to `source` when it already holds
// `current`. Greedy-marginal hands each batch to the largest value.
using MarginalGain = std::function<double(
    const Candidate& source, std::int64_t current, std::int64_t batch)>;

// sim / (1 + current / saturation_c).
MarginalGain hyperbolic_gain(double saturation_c);

AllocationVector greedy_marginal_allocate(const SourcePool& pool,
                                          const StrategyConfig& cfg);
AllocationVector greedy_marginal_allocate(const SourcePool& pool,
                                          const StrategyConfig& cfg,
                                          const MarginalGain& gain);

// Runs cfg.strategy end to end.
AllocationVector allocate(const SourcePool& pool, const StrategyConfig& cfg);

}  // namespace srcalloc
