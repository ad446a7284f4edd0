#include "srcalloc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srcalloc/allocation.hpp"
#include "srcalloc/allocation_io.hpp"
#include "srcalloc/error.hpp"
#include "srcalloc/manifest.hpp"
#include "srcalloc/numeric.hpp"
#include "srcalloc/report.hpp"
#include "srcalloc/similarity_io.hpp"
#include "srcalloc/simulator.hpp"
#include "srcalloc/stats.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {

namespace fs = std::filesystem;

namespace {

fs::path output_path(const std::string& out) {
  const fs::path p(out);
  if (p.is_absolute()) return p;
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    return fs::path(dir) / p;
  }
  return p;
}

struct SimilarityArgs {
  std::string embeddings;
  std::string out;
  std::string provenance;
};

struct AllocateArgs {
  std::string strategy;
  std::int64_t budget = 0;
  int k = 5;
  double alpha = 0.5;
  std::uint64_t seed = 0;
  std::int64_t batch_size = 500;
  double saturation_c = 1000.0;
  std::string similarity;
  std::string availability;
  std::string target;
  std::string out;
};

struct ManifestArgs {
  std::string allocation;
  std::string index_dir;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  std::string out;
};

struct CompareArgs {
  std::string results;
  std::string a;
  std::string b;
  int family_size = 1;
  std::string out;
};

struct WinRateArgs {
  std::string results;
  bool strict = false;
  std::string out;
};

struct UtilizationArgs {
  std::string results;
  std::string out;
};

struct TournamentArgs {
  std::string spec;
  std::string out;
};

int run_similarity(const SimilarityArgs& args, std::ostream& err) {
  const auto sets = load_embedding_dir(args.embeddings);
  for (const auto& s : sets) {
    if (s.renormalized_rows() > 0) {
      err << "warning: " << s.renormalized_rows() << " rows of '"
          << s.language() << "' were not unit length and were normalized\n";
    }
  }
  std::string provenance = args.provenance.empty() ? "unspecified"
                                                   : args.provenance;
  provenance += "; metric=cosine_gap symmetrized=mean-of-directed n=" +
                std::to_string(sets.empty() ? 0 : sets.front().size()) +
                " d=" +
                std::to_string(sets.empty() ? 0 : sets.front().dimension());
  const auto matrix = build_similarity_matrix(sets, provenance);
  write_file_atomic(output_path(args.out), format_similarity_csv(matrix));
  return 0;
}

bool uses_k(Strategy s) {
  return s != Strategy::kAllFromBest && s != Strategy::kGreedyMarginal;
}

int run_allocate(const AllocateArgs& args) {
  StrategyConfig cfg;
  cfg.strategy = parse_strategy(args.strategy);
  cfg.budget = args.budget;
  cfg.k = args.k;
  cfg.alpha = args.alpha;
  cfg.seed = args.seed;
  cfg.batch_size = args.batch_size;
  cfg.saturation_c = args.saturation_c;
  if (cfg.budget <= 0) {
    throw Error(ErrorCode::kInput, "--budget must be positive");
  }
  if (cfg.k < 1) throw Error(ErrorCode::kInput, "--k must be at least 1");
  if (!(cfg.alpha >= 0.0)) {
    throw Error(ErrorCode::kInput, "--alpha must be >= 0");
  }
  cfg.validate();
  const auto matrix = read_similarity_csv(args.similarity);
  const auto availability = read_availability_csv(args.availability);
  const SourcePool pool = make_pool(args.target, availability, matrix);
  if (!matrix.contains(args.target)) {
    throw Error(ErrorCode::kInput, "--target '" + args.target +
                                       "' is not in the similarity matrix");
  }
  if (uses_k(cfg.strategy) &&
      static_cast<std::size_t>(cfg.k) > pool.candidates.size()) {
    throw Error(ErrorCode::kInput,
                "--k " + std::to_string(cfg.k) + " exceeds the " +
                    std::to_string(pool.candidates.size()) +
                    " candidate sources for target '" + args.target + "'");
  }
  const AllocationVector allocation = allocate(pool, cfg);
  write_file_atomic(output_path(args.out), allocation_to_json(allocation));
  return 0;
}

int run_manifest(const ManifestArgs& args) {
  const AllocationVector allocation = read_allocation_json(args.allocation);
  const auto indexes = load_index_dir(args.index_dir);
  const Manifest manifest =
      build_manifest(allocation, indexes, args.seed, args.val_fraction);
  const fs::path out = output_path(args.out);
  write_file_atomic(out, manifest_to_jsonl(manifest));

  nlohmann::json config = {
      {"seed", args.seed},
      {"val_fraction", args.val_fraction},
      {"records", manifest.records.size()},
      {"validation_records", manifest.validation_count()},
      {"allocation", nlohmann::json::parse(allocation_to_json(allocation))}};
  fs::path sidecar = out;
  sidecar += ".config.json";
  write_file_atomic(sidecar, config.dump(2) + "\n");
  return 0;
}

std::vector<RunResult> load_results(const std::string& path) {
  return parse_results_csv(read_text_file(path), path);
}

int run_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
  const auto results = load_results(args.results);
  const auto report =
      compare_strategies(results, args.a, args.b, args.family_size);
  write_file_atomic(output_path(args.out), report_to_csv(report));
  out << report_to_text(report);
  if (report.any_degenerate()) {
    err << "error: degenerate variance: some conditions have constant "
           "differences; their p-values are undefined (NA)\n";
    return exit_code_for(ErrorCode::kDegenerateVariance);
  }
  return 0;
}

int run_win_rates(const WinRateArgs& args, std::ostream& out) {
  const auto results = load_results(args.results);
  const auto rates =
      win_rates(results, args.strict ? WinMode::kStrictOnly
                                     : WinMode::kSplitTies);
  std::string csv = std::string("# win-rates: mode=") +
                    (args.strict ? "strict" : "split-ties") + "\n";
  csv += "strategy,win_rate\n";
  for (const auto& [name, rate] : rates) {
    csv += name + "," + format_real(rate) + "\n";
    out << name << ": " << format_real(rate) << "\n";
  }
  write_file_atomic(output_path(args.out), csv);
  return 0;
}

int run_utilization(const UtilizationArgs& args, std::ostream& out) {
  const auto summary = utilization_summary(load_results(args.results));
  std::string csv = "# utilization-summary: results=" + args.results + "\n";
  csv += "strategy,runs,mean,min,max\n";
  for (const auto& [name, s] : summary) {
    csv += name + "," + std::to_string(s.runs) + "," + format_real(s.mean) +
           "," + format_real(s.min) + "," + format_real(s.max) + "\n";
    out << name << ": mean " << format_real(s.mean) << " (range "
        << format_real(s.min) << " - " << format_real(s.max) << ")\n";
  }
  write_file_atomic(output_path(args.out), csv);
  return 0;
}

int run_tournament(const TournamentArgs& args) {
  const TournamentSpec spec = read_tournament_spec(args.spec);
  const auto results =
      tournament(spec.models, spec.pools, spec.strategies, spec.seeds);
  write_file_atomic(
      output_path(args.out),
      results_to_csv(results, "tournament: " + describe_tournament_spec(spec)));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Budget-constrained source-language selection toolkit", "srcalloc"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.footer(std::string("Relative --out paths are resolved against $") +
             kOutputDirEnv + " when it is set.");

  SimilarityArgs sim;
  auto* similarity = app.add_subcommand(
      "similarity", "Build a cosine_gap similarity matrix from embeddings");
  similarity->add_option("--embeddings", sim.embeddings,
                         "Directory of embedding files, one per language")
      ->required();
  similarity->add_option("--out", sim.out, "Similarity matrix CSV to write")
      ->required();
  similarity->add_option("--provenance", sim.provenance,
                         "Free text recorded as the embedding source");

  AllocateArgs alloc;
  auto* allocate_cmd = app.add_subcommand(
      "allocate", "Allocate a sentence budget across source languages");
  allocate_cmd
      ->add_option("--strategy", alloc.strategy,
                   "all-from-best, top-k-proportional, top-k-uniform, "
                   "random-k, diversity-aware or greedy-marginal")
      ->required();
  allocate_cmd->add_option("--budget", alloc.budget, "Total sentences B")
      ->required();
  allocate_cmd->add_option("--k", alloc.k, "Sources for multi-source strategies")
      ->capture_default_str();
  allocate_cmd
      ->add_option("--alpha", alloc.alpha, "Diversity penalty weight")
      ->capture_default_str();
  allocate_cmd->add_option("--seed", alloc.seed, "Random seed")->required();
  allocate_cmd
      ->add_option("--batch-size", alloc.batch_size,
                   "Greedy-marginal batch size")
      ->capture_default_str();
  allocate_cmd
      ->add_option("--saturation-c", alloc.saturation_c,
                   "Greedy-marginal saturation constant")
      ->capture_default_str();
  allocate_cmd
      ->add_option("--similarity", alloc.similarity, "Similarity matrix CSV")
      ->required();
  allocate_cmd
      ->add_option("--availability", alloc.availability,
                   "CSV of language,count")
      ->required();
  allocate_cmd->add_option("--target", alloc.target, "Target language code")
      ->required();
  allocate_cmd->add_option("--out", alloc.out, "Allocation JSON to write")
      ->required();

  ManifestArgs man;
  auto* manifest_cmd = app.add_subcommand(
      "manifest", "Sample a shuffled training/validation manifest");
  manifest_cmd->add_option("--allocation", man.allocation, "Allocation JSON")
      ->required();
  manifest_cmd
      ->add_option("--index-dir", man.index_dir,
                   "Directory of <language> files listing example ids")
      ->required();
  manifest_cmd->add_option("--seed", man.seed, "Random seed")->required();
  manifest_cmd
      ->add_option("--val-fraction", man.val_fraction,
                   "Fraction held out for validation")
      ->capture_default_str();
  manifest_cmd
      ->add_option("--out", man.out,
                   "Manifest JSON Lines to write (config goes to "
                   "<out>.config.json)")
      ->required();

  auto* stats = app.add_subcommand("stats", "Statistics over results CSVs");
  stats->require_subcommand(1);
  CompareArgs cmp;
  auto* compare = stats->add_subcommand(
      "compare", "Paired t-tests between two strategies per condition");
  compare->add_option("--results", cmp.results, "Results CSV")->required();
  compare->add_option("--a", cmp.a, "First strategy")->required();
  compare->add_option("--b", cmp.b, "Second strategy (positive delta favors it)")
      ->required();
  compare->add_option("--family-size", cmp.family_size,
                      "Bonferroni family size m")
      ->required();
  compare->add_option("--out", cmp.out, "Report CSV to write")->required();

  WinRateArgs wins;
  auto* win_cmd = stats->add_subcommand(
      "win-rates", "Share of conditions won by each strategy");
  win_cmd->add_option("--results", wins.results, "Results CSV")->required();
  win_cmd->add_flag("--strict", wins.strict,
                    "Credit only unique winners instead of splitting ties");
  win_cmd->add_option("--out", wins.out, "CSV to write")->required();

  UtilizationArgs util;
  auto* util_cmd = stats->add_subcommand(
      "utilization", "Budget utilization mean and range per strategy");
  util_cmd->add_option("--results", util.results, "Results CSV")->required();
  util_cmd->add_option("--out", util.out, "CSV to write")->required();

  auto* simulate =
      app.add_subcommand("simulate", "Synthetic transfer simulator");
  simulate->require_subcommand(1);
  TournamentArgs tour;
  auto* tournament_cmd = simulate->add_subcommand(
      "tournament", "Evaluate every strategy over a grid of models and pools");
  tournament_cmd->add_option("--spec", tour.spec, "Tournament JSON")
      ->required();
  tournament_cmd->add_option("--out", tour.out, "Results CSV to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  try {
    if (*similarity) return run_similarity(sim, err);
    if (*allocate_cmd) return run_allocate(alloc);
    if (*manifest_cmd) return run_manifest(man);
    if (*compare) return run_compare(cmp, out, err);
    if (*win_cmd) return run_win_rates(wins, out);
    if (*util_cmd) return run_utilization(util, out);
    if (*tournament_cmd) return run_tournament(tour);
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace srcalloc
