#include "srcalloc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "srcalloc/error.hpp"
#include "srcalloc/rng.hpp"

namespace srcalloc {

void UtilityModel::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInput, "model '" + tag + "': tau must be positive");
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kInput, "model '" + tag + "': beta must be >= 0");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::kInput,
                "model '" + tag + "': noise_sd must be >= 0");
  }
  for (const auto& [lang, sim] : sim_to_target) {
    if (!std::isfinite(sim)) {
      throw Error(ErrorCode::kInput, "model '" + tag +
                                         "': non-finite similarity for '" +
                                         lang + "'");
    }
  }
}

namespace {

struct Term {
  double sim = 0.0;
  std::int64_t amount = 0;
};

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

// Terms in language-code order; `inter(i, j)` gives pairwise similarity.
template <typename Inter>
double score_terms(const std::vector<Term>& terms, const Inter& inter,
                   double budget, double tau, double beta) {
  double gain = 0.0;
  for (const auto& t : terms) {
    gain += t.sim * -std::expm1(-static_cast<double>(t.amount) / tau);
  }
  double redundancy = 0.0;
  if (beta > 0.0) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t j = i + 1; j < terms.size(); ++j) {
        const auto shared =
            static_cast<double>(std::min(terms[i].amount, terms[j].amount));
        redundancy += inter(i, j) * shared / budget;
      }
    }
  }
  return clamp_unit(gain - beta * redundancy);
}

double model_sim(const UtilityModel& model, std::string_view language) {
  const auto it = model.sim_to_target.find(std::string(language));
  if (it == model.sim_to_target.end()) {
    throw Error(ErrorCode::kInput, "model '" + model.tag +
                                       "' has no similarity for '" +
                                       std::string(language) + "'");
  }
  return it->second;
}

double inter_sim(const UtilityModel& model, std::string_view a,
                 std::string_view b) {
  return model.inter_source ? model.inter_source->score_or(a, b, 0.0) : 0.0;
}

}  // namespace

double evaluate_noiseless(const UtilityModel& model,
                          const AllocationVector& allocation) {
  model.validate();
  if (allocation.budget <= 0) {
    throw Error(ErrorCode::kInput, "allocation budget must be positive");
  }
  std::vector<const AllocationEntry*> entries;
  for (const auto& e : allocation.entries) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(),
            [](const AllocationEntry* a, const AllocationEntry* b) {
              return a->language < b->language;
            });
  std::vector<Term> terms;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i]->language == entries[i - 1]->language) {
      throw Error(ErrorCode::kInput, "language '" + entries[i]->language +
                                         "' appears twice in allocation");
    }
    terms.push_back({model_sim(model, entries[i]->language),
                     entries[i]->amount});
  }
  const auto inter = [&](std::size_t i, std::size_t j) {
    return inter_sim(model, entries[i]->language, entries[j]->language);
  };
  return score_terms(terms, inter, static_cast<double>(allocation.budget),
                     model.tau, model.beta);
}

double evaluate(const UtilityModel& model, const AllocationVector& allocation,
                std::uint64_t noise_seed) {
  const double base = evaluate_noiseless(model, allocation);
  if (model.noise_sd == 0.0) return base;
  Rng rng(noise_seed);
  return clamp_unit(base + model.noise_sd * rng.normal());
}

double evaluate(const UtilityModel& model, const AllocationVector& allocation) {
  return evaluate(model, allocation, model.seed);
}

MarginalGain separable_gain(const UtilityModel& model) {
  return [model](const Candidate& source, std::int64_t current,
                 std::int64_t batch) {
    const double sim = model_sim(model, source.language);
    const double before = std::exp(-static_cast<double>(current) / model.tau);
    const double after =
        std::exp(-static_cast<double>(current + batch) / model.tau);
    return sim * (before - after);
  };
}

namespace {

// Number of ways to place `units` into boxes with the given capacities.
// Counted in floating point; only the comparison with the grid limit
// matters.
double count_compositions(const std::vector<std::int64_t>& caps,
                          std::int64_t units) {
  const auto size = static_cast<std::size_t>(units) + 1;
  std::vector<double> ways(size, 0.0);
  ways[0] = 1.0;
  std::vector<double> prefix(size + 1);
  for (const std::int64_t cap : caps) {
    prefix[0] = 0.0;
    for (std::size_t t = 0; t < size; ++t) prefix[t + 1] = prefix[t] + ways[t];
    for (std::size_t t = 0; t < size; ++t) {
      const std::size_t low =
          t > static_cast<std::size_t>(cap) ? t - static_cast<std::size_t>(cap)
                                            : 0;
      ways[t] = prefix[t + 1] - prefix[low];
    }
  }
  return ways[size - 1];
}

}  // namespace

AllocationVector brute_force_best(const UtilityModel& model,
                                  const SourcePool& pool, std::int64_t budget,
                                  std::int64_t step) {
  model.validate();
  pool.validate();
  if (budget <= 0 || step <= 0) {
    throw Error(ErrorCode::kInput, "budget and step must be positive");
  }
  if (budget % step != 0) {
    throw Error(ErrorCode::kInput, "budget " + std::to_string(budget) +
                                       " is not a multiple of step " +
                                       std::to_string(step));
  }
  std::vector<const Candidate*> sources;
  for (const auto& c : pool.candidates) sources.push_back(&c);
  std::sort(sources.begin(), sources.end(),
            [](const Candidate* a, const Candidate* b) {
              return a->language < b->language;
            });
  const std::size_t n = sources.size();
  std::vector<std::int64_t> caps(n);
  std::int64_t capacity = 0;
  std::vector<double> sims(n);
  for (std::size_t i = 0; i < n; ++i) {
    caps[i] = sources[i]->availability / step;
    capacity += caps[i];
    sims[i] = model_sim(model, sources[i]->language);
  }
  const std::int64_t units = std::min(budget / step, capacity);
  // Leftover budget counts as one more part, so the grid holds every capped
  // vector spending at most `units` steps.
  auto grid_caps = caps;
  grid_caps.push_back(units);
  if (count_compositions(grid_caps, units) >
      static_cast<double>(kMaxGridPoints)) {
    throw Error(ErrorCode::kScale,
                "exhaustive grid exceeds " + std::to_string(kMaxGridPoints) +
                    " points; use a coarser step or fewer sources");
  }
  std::vector<double> inter(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      inter[i * n + j] =
          inter_sim(model, sources[i]->language, sources[j]->language);
    }
  }
  const auto inter_at = [&](std::size_t i, std::size_t j) {
    return inter[i * n + j];
  };

  std::vector<Term> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i].sim = sims[i];
  std::vector<std::int64_t> best_units;
  double best_score = -1.0;
  std::vector<std::int64_t> current(n, 0);

  // Vectors are visited in lexicographic order, so keeping only strict
  // improvements leaves the smallest vector among ties.
  const auto recurse = [&](auto&& self, std::size_t i,
                           std::int64_t left) -> void {
    if (i == n) {
      for (std::size_t s = 0; s < n; ++s) terms[s].amount = current[s] * step;
      const double score = score_terms(terms, inter_at,
                                       static_cast<double>(budget),
                                       model.tau, model.beta);
      if (score > best_score) {
        best_score = score;
        best_units = current;
      }
      return;
    }
    const std::int64_t highest = std::min(caps[i], left);
    for (std::int64_t take = 0; take <= highest; ++take) {
      current[i] = take;
      self(self, i + 1, left - take);
    }
    current[i] = 0;
  };
  recurse(recurse, 0, units);

  AllocationVector out;
  out.target = pool.target;
  out.budget = budget;
  for (std::size_t i = 0; i < n; ++i) {
    out.entries.push_back({sources[i]->language, best_units[i] * step});
  }
  out.refresh_totals();
  return out;
}

std::vector<RunResult> tournament(std::span<const UtilityModel> models,
                                  std::span<const TournamentPool> pools,
                                  std::span<const StrategyConfig> configs,
                                  std::span<const std::uint64_t> seeds) {
  if (models.empty() || pools.empty() || configs.empty() || seeds.empty()) {
    throw Error(ErrorCode::kInput,
                "a tournament needs at least one model, pool, strategy and "
                "seed");
  }
  std::vector<RunResult> results;
  results.reserve(models.size() * pools.size() * configs.size() * seeds.size());
  for (const auto& model : models) {
    model.validate();
    for (const auto& entry : pools) {
      entry.pool.validate();
      if (entry.pool.target != model.target) {
        throw Error(ErrorCode::kInput,
                    "pool '" + entry.task + "' targets '" + entry.pool.target +
                        "' but model '" + model.tag + "' targets '" +
                        model.target + "'");
      }
      for (const auto& base : configs) {
        for (const std::uint64_t seed : seeds) {
          StrategyConfig cfg = base;
          cfg.seed = seed;
          const AllocationVector allocation = allocate(entry.pool, cfg);
          RunResult r;
          r.task = entry.task;
          r.target = entry.pool.target;
          r.budget = cfg.budget;
          r.model = model.tag;
          r.strategy = std::string(strategy_name(cfg.strategy));
          r.seed = seed;
          r.metric = evaluate(model, allocation, mix_seed(model.seed, seed));
          r.utilization = allocation.utilization;
          results.push_back(std::move(r));
        }
      }
    }
  }
  std::sort(results.begin(), results.end(),
            [](const RunResult& a, const RunResult& b) {
              return std::tie(a.task, a.target, a.budget, a.model, a.strategy,
                              a.seed) < std::tie(b.task, b.target, b.budget,
                                                 b.model, b.strategy, b.seed);
            });
  validate_results(results);
  return results;
}

}  // namespace srcalloc
