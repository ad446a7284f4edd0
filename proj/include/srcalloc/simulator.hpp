#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srcalloc/allocation.hpp"
#include "srcalloc/similarity.hpp"
#include "srcalloc/stats.hpp"

namespace srcalloc {

// Synthetic stand-in for downstream transfer performance:
//
//   clamp(sum_i sim_i (1 - exp(-u_i / tau))
//         - beta * sum_{i<j} sim(s_i, s_j) min(u_i, u_j) / B, 0, 1)
//
// plus optional Gaussian noise, re-clamped to [0, 1].
struct UtilityModel {
  std::string tag = "model";
  std::string target;
  std::map<std::string, double> sim_to_target;
  // Pairs absent from the matrix count as 0.
  std::optional<SimilarityMatrix> inter_source;
  double tau = 2000.0;
  double beta = 0.1;
  double noise_sd = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Noise stream keyed on model.seed.
double evaluate(const UtilityModel& model, const AllocationVector& allocation);
double evaluate(const UtilityModel& model, const AllocationVector& allocation,
                std::uint64_t noise_seed);
double evaluate_noiseless(const UtilityModel& model,
                          const AllocationVector& allocation);

// Exact gain of the model's separable term for `batch` more sentences:
// sim (exp(-current / tau) - exp(-(current + batch) / tau)).
MarginalGain separable_gain(const UtilityModel& model);

inline constexpr std::uint64_t kMaxGridPoints = 10'000'000;

// Exhaustive search over allocations in multiples of `step`, each capped at
// availability and together spending at most `budget`, scored with noise
// off. Entries cover every candidate in code order; ties go to the
// lexicographically smallest amount vector.
AllocationVector brute_force_best(const UtilityModel& model,
                                  const SourcePool& pool, std::int64_t budget,
                                  std::int64_t step);

struct TournamentPool {
  std::string task;
  SourcePool pool;
};

// Cross product of models x pools x strategy configs x seeds, sorted by
// (task, target, budget, model, strategy, seed). The run seed drives both
// Random-K and the evaluation noise, so strategies sharing a seed share
// the noise draw.
std::vector<RunResult> tournament(std::span<const UtilityModel> models,
                                  std::span<const TournamentPool> pools,
                                  std::span<const StrategyConfig> configs,
                                  std::span<const std::uint64_t> seeds);

struct TournamentSpec {
  std::vector<UtilityModel> models;
  std::vector<TournamentPool> pools;
  std::vector<StrategyConfig> strategies;
  std::vector<std::uint64_t> seeds;
};

// JSON {target, sims, inter_source_ref, tau, beta, noise_sd, seed, tag}.
// Relative paths resolve against `base_dir`.
UtilityModel parse_model_spec(std::string_view text,
                              const std::filesystem::path& base_dir,
                              std::string_view source_name);

// JSON {models, pools, strategies, seeds}; see README for the schema.
TournamentSpec parse_tournament_spec(std::string_view text,
                                     const std::filesystem::path& base_dir,
                                     std::string_view source_name);
TournamentSpec read_tournament_spec(const std::filesystem::path& path);

// Single-line JSON echo of the fully resolved spec.
std::string describe_tournament_spec(const TournamentSpec& spec);

}  // namespace srcalloc
