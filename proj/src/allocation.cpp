#include "srcalloc/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "srcalloc/error.hpp"
#include "srcalloc/rng.hpp"

namespace srcalloc {

std::string_view strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::kAllFromBest: return "all-from-best";
    case Strategy::kTopKProportional: return "top-k-proportional";
    case Strategy::kTopKUniform: return "top-k-uniform";
    case Strategy::kRandomK: return "random-k";
    case Strategy::kDiversityAware: return "diversity-aware";
    case Strategy::kGreedyMarginal: return "greedy-marginal";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (const Strategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  std::string valid;
  for (const Strategy s : kAllStrategies) {
    if (!valid.empty()) valid += ", ";
    valid += strategy_name(s);
  }
  throw Error(ErrorCode::kInput, "unknown strategy '" + std::string(name) +
                                     "' (expected one of: " + valid + ")");
}

void SourcePool::validate() const {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInput,
                "source pool for target '" + target + "' has no candidates");
  }
  std::set<std::string_view> seen;
  for (const auto& c : candidates) {
    if (c.language.empty()) {
      throw Error(ErrorCode::kInput, "candidate with an empty language code");
    }
    if (c.language == target) {
      throw Error(ErrorCode::kInput,
                  "target '" + target + "' is listed as a candidate source");
    }
    if (!seen.insert(c.language).second) {
      throw Error(ErrorCode::kInput,
                  "duplicate candidate '" + c.language + "'");
    }
    if (c.availability < 0) {
      throw Error(ErrorCode::kInput,
                  "negative availability for '" + c.language + "'");
    }
    if (!std::isfinite(c.similarity)) {
      throw Error(ErrorCode::kInput,
                  "non-finite similarity for '" + c.language + "'");
    }
  }
}

const Candidate& SourcePool::candidate(std::string_view language) const {
  for (const auto& c : candidates) {
    if (c.language == language) return c;
  }
  throw Error(ErrorCode::kInput, "'" + std::string(language) +
                                     "' is not in the source pool");
}

std::int64_t SourcePool::total_availability() const noexcept {
  std::int64_t total = 0;
  for (const auto& c : candidates) total += c.availability;
  return total;
}

void StrategyConfig::validate() const {
  if (budget <= 0) {
    throw Error(ErrorCode::kInput,
                "budget must be positive, got " + std::to_string(budget));
  }
  if (k < 1) {
    throw Error(ErrorCode::kInput, "k must be at least 1");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInput, "alpha must be a finite value >= 0");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInput, "batch size must be at least 1");
  }
  if (!(saturation_c > 0.0) || !std::isfinite(saturation_c)) {
    throw Error(ErrorCode::kInput, "saturation constant must be positive");
  }
}

std::int64_t AllocationVector::amount_of(
    std::string_view language) const noexcept {
  for (const auto& e : entries) {
    if (e.language == language) return e.amount;
  }
  return 0;
}

void AllocationVector::refresh_totals() {
  used = 0;
  for (const auto& e : entries) used += e.amount;
  utilization = budget > 0 ? static_cast<double>(used) /
                                 static_cast<double>(budget)
                           : 0.0;
}

std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            std::span<const double> weights,
                                            std::span<const std::size_t> rank) {
  const std::size_t n = weights.size();
  if (rank.size() != n) {
    throw Error(ErrorCode::kInput, "largest_remainder: rank size mismatch");
  }
  if (total < 0) {
    throw Error(ErrorCode::kInput, "cannot apportion a negative total");
  }
  double weight_sum = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInput, "apportionment weights must be >= 0");
    }
    weight_sum += w;
  }
  if (n == 0 || !(weight_sum > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeights,
                "apportionment weights sum to zero");
  }
  std::vector<std::int64_t> amounts(n);
  std::vector<double> remainders(n);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota = static_cast<double>(total) * weights[i] / weight_sum;
    const double floor_quota = std::floor(quota);
    amounts[i] = static_cast<std::int64_t>(floor_quota);
    remainders[i] = quota - floor_quota;
    assigned += amounts[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
    return rank[a] < rank[b];
  });
  std::int64_t left = total - assigned;
  // Rounding in the quotas can leave the floors one unit off in either
  // direction; walk the same order to settle the difference.
  for (std::size_t i = 0; left > 0; i = (i + 1) % n, --left) {
    ++amounts[order[i]];
  }
  for (std::size_t i = n; left < 0; ++left) {
    do {
      i = (i == 0 ? n : i) - 1;
    } while (amounts[order[i]] == 0);
    --amounts[order[i]];
  }
  return amounts;
}

namespace {

bool more_similar(const Candidate& a, const Candidate& b) {
  if (a.similarity != b.similarity) return a.similarity > b.similarity;
  return a.language < b.language;
}

std::vector<const Candidate*> by_similarity(const SourcePool& pool) {
  std::vector<const Candidate*> sorted;
  for (const auto& c : pool.candidates) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const Candidate* a, const Candidate* b) {
              return more_similar(*a, *b);
            });
  return sorted;
}

void check_k(const SourcePool& pool, int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInput, "k must be at least 1, got " +
                                       std::to_string(k));
  }
  if (static_cast<std::size_t>(k) > pool.candidates.size()) {
    throw Error(ErrorCode::kInput,
                "k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(pool.candidates.size()) +
                    " candidates for target '" + pool.target + "'");
  }
}

double allocation_weight(double similarity) {
  return similarity > 0.0 ? similarity : 0.0;
}

// Ranks by descending similarity, then language code.
std::vector<std::size_t> similarity_ranks(
    std::span<const WeightedSource> sources) {
  std::vector<std::size_t> order(sources.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sources[a].similarity != sources[b].similarity) {
      return sources[a].similarity > sources[b].similarity;
    }
    return sources[a].language < sources[b].language;
  });
  std::vector<std::size_t> rank(sources.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
  return rank;
}

std::vector<std::size_t> input_ranks(std::size_t n) {
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  return rank;
}

struct Slot {
  double weight = 0.0;
  std::int64_t availability = 0;
  std::size_t rank = 0;
  std::int64_t amount = 0;
};

// Fixed-point capping. Each round pins every source over its cap at the cap
// and re-apportions what is left of the total over the sources not yet
// pinned. Every round that runs pins at least one new source.
int cap_slots(std::vector<Slot>& slots) {
  std::int64_t total = 0;
  for (const auto& s : slots) total += s.amount;
  std::vector<bool> pinned(slots.size(), false);
  int rounds = 0;
  for (;;) {
    bool over = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!pinned[i] && slots[i].amount > slots[i].availability) {
        pinned[i] = true;
        slots[i].amount = slots[i].availability;
        over = true;
      }
    }
    if (!over) return rounds;
    ++rounds;

    std::int64_t remaining = total;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (pinned[i]) {
        remaining -= slots[i].amount;
      } else {
        free.push_back(i);
      }
    }
    if (free.empty()) return rounds;

    std::vector<double> weights;
    std::vector<std::size_t> ranks;
    double weight_sum = 0.0;
    for (const std::size_t i : free) {
      weights.push_back(slots[i].weight);
      ranks.push_back(slots[i].rank);
      weight_sum += slots[i].weight;
    }
    // Only zero-weight sources left: spread evenly so the budget is still met.
    if (!(weight_sum > 0.0)) std::fill(weights.begin(), weights.end(), 1.0);
    const auto shares = largest_remainder(remaining, weights, ranks);
    for (std::size_t f = 0; f < free.size(); ++f) {
      slots[free[f]].amount = shares[f];
    }
  }
}

void check_selected(std::span<const WeightedSource> selected) {
  if (selected.empty()) {
    throw Error(ErrorCode::kInput, "no sources selected");
  }
  std::set<std::string_view> seen;
  for (const auto& s : selected) {
    if (!seen.insert(s.language).second) {
      throw Error(ErrorCode::kInput,
                  "source '" + s.language + "' selected twice");
    }
    if (s.availability < 0) {
      throw Error(ErrorCode::kInput,
                  "negative availability for '" + s.language + "'");
    }
    if (!std::isfinite(s.similarity)) {
      throw Error(ErrorCode::kInput,
                  "non-finite similarity for '" + s.language + "'");
    }
  }
}

AllocationVector from_slots(std::span<const WeightedSource> selected,
                            const std::vector<Slot>& slots,
                            std::int64_t budget) {
  AllocationVector out;
  out.budget = budget;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    out.entries.push_back({selected[i].language, slots[i].amount});
  }
  out.refresh_totals();
  return out;
}

AllocationVector apportion_and_cap(std::span<const WeightedSource> selected,
                                   std::int64_t budget,
                                   std::span<const double> weights,
                                   std::span<const std::size_t> ranks) {
  const auto raw = largest_remainder(budget, weights, ranks);
  std::vector<Slot> slots(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    slots[i] = {weights[i], selected[i].availability, ranks[i], raw[i]};
  }
  cap_slots(slots);
  return from_slots(selected, slots, budget);
}

std::vector<WeightedSource> weighted(const SourcePool& pool,
                                     const std::vector<std::string>& languages) {
  std::vector<WeightedSource> out;
  out.reserve(languages.size());
  for (const auto& lang : languages) {
    const Candidate& c = pool.candidate(lang);
    out.push_back({c.language, c.similarity, c.availability});
  }
  return out;
}

}  // namespace

std::vector<std::string> top_k_select(const SourcePool& pool, int k) {
  pool.validate();
  check_k(pool, k);
  const auto sorted = by_similarity(pool);
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back(sorted[i]->language);
  return out;
}

std::vector<std::string> random_k_select(const SourcePool& pool, int k,
                                         std::uint64_t seed) {
  pool.validate();
  check_k(pool, k);
  std::vector<std::string> codes;
  for (const auto& c : pool.candidates) codes.push_back(c.language);
  std::sort(codes.begin(), codes.end());
  Rng rng(seed);
  rng.sample_prefix(std::span<std::string>(codes),
                    static_cast<std::size_t>(k));
  codes.resize(static_cast<std::size_t>(k));
  return codes;
}

std::vector<std::string> diversity_aware_select(const SourcePool& pool, int k,
                                                double alpha) {
  pool.validate();
  check_k(pool, k);
  if (!pool.inter_source) {
    throw Error(ErrorCode::kInput,
                "diversity-aware selection needs an inter-source similarity "
                "matrix");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInput, "alpha must be a finite value >= 0");
  }
  const SimilarityMatrix& inter = *pool.inter_source;
  const auto sorted = by_similarity(pool);

  std::vector<std::string> chosen{sorted.front()->language};
  std::vector<const Candidate*> rest(sorted.begin() + 1, sorted.end());
  // Largest similarity from each remaining source to anything chosen.
  std::vector<double> redundancy(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) {
    redundancy[i] = inter.score_or(rest[i]->language, chosen.back(), 0.0);
  }
  while (chosen.size() < static_cast<std::size_t>(k)) {
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const double score = rest[i]->similarity - alpha * redundancy[i];
      if (i == 0 || score > best_score ||
          (score == best_score &&
           rest[i]->language < rest[best]->language)) {
        best = i;
        best_score = score;
      }
    }
    chosen.push_back(rest[best]->language);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
    redundancy.erase(redundancy.begin() + static_cast<std::ptrdiff_t>(best));
    for (std::size_t i = 0; i < rest.size(); ++i) {
      redundancy[i] = std::max(
          redundancy[i], inter.score_or(rest[i]->language, chosen.back(), 0.0));
    }
  }
  return chosen;
}

AllocationVector proportional_allocate(std::span<const WeightedSource> selected,
                                       std::int64_t budget) {
  check_selected(selected);
  std::vector<double> weights;
  for (const auto& s : selected) weights.push_back(allocation_weight(s.similarity));
  if (std::all_of(weights.begin(), weights.end(),
                  [](double w) { return w == 0.0; })) {
    throw Error(ErrorCode::kDegenerateWeights,
                "all selected sources have zero similarity; proportional "
                "shares are undefined");
  }
  const auto ranks = similarity_ranks(selected);
  return apportion_and_cap(selected, budget, weights, ranks);
}

AllocationVector uniform_allocate(std::span<const WeightedSource> selected,
                                  std::int64_t budget) {
  check_selected(selected);
  const std::vector<double> weights(selected.size(), 1.0);
  const auto ranks = input_ranks(selected.size());
  return apportion_and_cap(selected, budget, weights, ranks);
}

AllocationVector cap_and_redistribute(const AllocationVector& raw,
                                      const SourcePool& pool,
                                      WeightBasis basis, CapStats* stats) {
  std::vector<WeightedSource> selected;
  for (const auto& e : raw.entries) {
    if (e.amount < 0) {
      throw Error(ErrorCode::kInput,
                  "negative amount for '" + e.language + "'");
    }
    const Candidate& c = pool.candidate(e.language);
    selected.push_back({c.language, c.similarity, c.availability});
  }
  const auto ranks = basis == WeightBasis::kSimilarity
                         ? similarity_ranks(selected)
                         : input_ranks(selected.size());
  std::vector<Slot> slots(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const double weight = basis == WeightBasis::kSimilarity
                              ? allocation_weight(selected[i].similarity)
                              : 1.0;
    slots[i] = {weight, selected[i].availability, ranks[i],
                raw.entries[i].amount};
  }
  const int rounds = cap_slots(slots);
  if (stats) stats->iterations = rounds;

  AllocationVector out = raw;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    out.entries[i].amount = slots[i].amount;
  }
  out.refresh_totals();
  return out;
}

AllocationVector cap_and_redistribute(const AllocationVector& raw,
                                      const SourcePool& pool) {
  WeightBasis basis = WeightBasis::kSimilarity;
  if (raw.config && (raw.config->strategy == Strategy::kTopKUniform ||
                     raw.config->strategy == Strategy::kRandomK)) {
    basis = WeightBasis::kUniform;
  }
  return cap_and_redistribute(raw, pool, basis);
}

AllocationVector all_from_best(const SourcePool& pool,
                               const StrategyConfig& cfg) {
  pool.validate();
  cfg.validate();
  const Candidate& best = *by_similarity(pool).front();
  if (!(best.similarity > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeights,
                "no candidate for target '" + pool.target +
                    "' has positive similarity");
  }
  AllocationVector out;
  out.target = pool.target;
  out.budget = cfg.budget;
  out.config = cfg;
  out.entries.push_back({best.language, std::min(cfg.budget, best.availability)});
  out.refresh_totals();
  return out;
}

MarginalGain hyperbolic_gain(double saturation_c) {
  return [saturation_c](const Candidate& source, std::int64_t current,
                        std::int64_t /*batch*/) {
    return source.similarity /
           (1.0 + static_cast<double>(current) / saturation_c);
  };
}

AllocationVector greedy_marginal_allocate(const SourcePool& pool,
                                          const StrategyConfig& cfg) {
  return greedy_marginal_allocate(pool, cfg, hyperbolic_gain(cfg.saturation_c));
}

AllocationVector greedy_marginal_allocate(const SourcePool& pool,
                                          const StrategyConfig& cfg,
                                          const MarginalGain& gain) {
  pool.validate();
  cfg.validate();
  if (cfg.budget < cfg.batch_size) {
    throw Error(ErrorCode::kInput,
                "budget " + std::to_string(cfg.budget) +
                    " is smaller than the batch size " +
                    std::to_string(cfg.batch_size));
  }
  if (pool.total_availability() == 0) {
    throw Error(ErrorCode::kEmptyPool,
                "no candidate for target '" + pool.target +
                    "' has any available data");
  }
  std::vector<const Candidate*> eligible;
  for (const auto& c : pool.candidates) {
    if (c.similarity > 0.0) eligible.push_back(&c);
  }
  if (eligible.empty()) {
    throw Error(ErrorCode::kDegenerateWeights,
                "no candidate for target '" + pool.target +
                    "' has positive similarity");
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const Candidate* a, const Candidate* b) {
              return a->language < b->language;
            });

  std::vector<std::int64_t> amounts(eligible.size(), 0);
  std::int64_t remaining = cfg.budget;
  while (remaining > 0) {
    const std::int64_t batch = std::min(cfg.batch_size, remaining);
    std::size_t best = eligible.size();
    double best_gain = 0.0;
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (amounts[i] >= eligible[i]->availability) continue;
      const double g = gain(*eligible[i], amounts[i], batch);
      if (best == eligible.size() || g > best_gain) {
        best = i;
        best_gain = g;
      }
    }
    if (best == eligible.size()) break;
    const std::int64_t add =
        std::min(batch, eligible[best]->availability - amounts[best]);
    amounts[best] += add;
    remaining -= add;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (amounts[i] > 0) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return more_similar(*eligible[a], *eligible[b]);
  });
  AllocationVector out;
  out.target = pool.target;
  out.budget = cfg.budget;
  out.config = cfg;
  for (const std::size_t i : order) {
    out.entries.push_back({eligible[i]->language, amounts[i]});
  }
  out.refresh_totals();
  return out;
}

AllocationVector allocate(const SourcePool& pool, const StrategyConfig& cfg) {
  cfg.validate();
  AllocationVector out;
  switch (cfg.strategy) {
    case Strategy::kAllFromBest:
      return all_from_best(pool, cfg);
    case Strategy::kGreedyMarginal:
      return greedy_marginal_allocate(pool, cfg);
    case Strategy::kTopKProportional:
      out = proportional_allocate(weighted(pool, top_k_select(pool, cfg.k)),
                                  cfg.budget);
      break;
    case Strategy::kTopKUniform:
      out = uniform_allocate(weighted(pool, top_k_select(pool, cfg.k)),
                             cfg.budget);
      break;
    case Strategy::kRandomK:
      out = uniform_allocate(
          weighted(pool, random_k_select(pool, cfg.k, cfg.seed)), cfg.budget);
      break;
    case Strategy::kDiversityAware:
      out = proportional_allocate(
          weighted(pool, diversity_aware_select(pool, cfg.k, cfg.alpha)),
          cfg.budget);
      break;
  }
  out.target = pool.target;
  out.config = cfg;
  return out;
}

}  // namespace srcalloc
