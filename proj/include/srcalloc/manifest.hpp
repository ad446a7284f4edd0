#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srcalloc/allocation.hpp"

namespace srcalloc {

enum class Task { kNer, kSentiment, kOther };

// Example identifiers available for one source language.
struct DatasetIndex {
  std::string language;
  std::vector<std::string> example_ids;
  Task task = Task::kOther;
};

enum class Split { kTrain, kValidation };

std::string_view split_name(Split split) noexcept;

struct ManifestRecord {
  std::string source_language;
  std::string example_id;
  Split split = Split::kTrain;

  friend bool operator==(const ManifestRecord&,
                         const ManifestRecord&) = default;
};

struct Manifest {
  // Final shuffled order; validation records form the tail.
  std::vector<ManifestRecord> records;
  AllocationVector allocation;
  std::uint64_t seed = 0;
  double val_fraction = 0.1;

  std::size_t validation_count() const noexcept;
};

// Per language (in code order), draws `amount` ids without replacement from
// a stream keyed on (seed, language); concatenates; shuffles with a stream
// keyed on seed; marks the last round_half_even(val_fraction * total)
// records as validation.
Manifest build_manifest(const AllocationVector& allocation,
                        std::span<const DatasetIndex> indexes,
                        std::uint64_t seed, double val_fraction = 0.1);

std::vector<Manifest> seed_sweep(const AllocationVector& allocation,
                                 std::span<const DatasetIndex> indexes,
                                 std::span<const std::uint64_t> seeds,
                                 double val_fraction = 0.1);

// One JSON object per line: {"example_id", "source_language", "split"}.
std::string manifest_to_jsonl(const Manifest& manifest);

// One id per line; blank lines are skipped. Duplicates raise kIndex.
DatasetIndex parse_index_text(std::string_view text, std::string language,
                              std::string_view source_name);

// Each regular file is one language, named by the file stem.
std::vector<DatasetIndex> load_index_dir(const std::filesystem::path& dir);

}  // namespace srcalloc
