#include "srcalloc/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include <json.hpp>

#include "srcalloc/error.hpp"
#include "srcalloc/numeric.hpp"
#include "srcalloc/rng.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {

std::string_view split_name(Split split) noexcept {
  return split == Split::kTrain ? "train" : "validation";
}

std::size_t Manifest::validation_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const auto& r) {
        return r.split == Split::kValidation;
      }));
}

namespace {

void check_unique_ids(const DatasetIndex& index) {
  std::unordered_set<std::string_view> seen;
  for (const auto& id : index.example_ids) {
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kIndex, "duplicate example id '" + id +
                                         "' in index for '" + index.language +
                                         "'");
    }
  }
}

}  // namespace

Manifest build_manifest(const AllocationVector& allocation,
                        std::span<const DatasetIndex> indexes,
                        std::uint64_t seed, double val_fraction) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw Error(ErrorCode::kInput, "validation fraction must be in [0, 1)");
  }
  std::map<std::string_view, const DatasetIndex*> by_language;
  for (const auto& index : indexes) {
    if (!by_language.emplace(index.language, &index).second) {
      throw Error(ErrorCode::kIndex,
                  "two indexes for language '" + index.language + "'");
    }
  }

  std::map<std::string_view, std::int64_t> amounts;
  for (const auto& e : allocation.entries) {
    if (e.amount < 0) {
      throw Error(ErrorCode::kInput,
                  "negative amount for '" + e.language + "'");
    }
    if (!amounts.emplace(e.language, e.amount).second) {
      throw Error(ErrorCode::kInput,
                  "language '" + e.language + "' appears twice in allocation");
    }
  }

  Manifest manifest;
  manifest.allocation = allocation;
  manifest.seed = seed;
  manifest.val_fraction = val_fraction;

  for (const auto& [language, amount] : amounts) {
    if (amount == 0) continue;
    const auto it = by_language.find(language);
    if (it == by_language.end()) {
      throw Error(ErrorCode::kAvailabilityMismatch,
                  "no dataset index for allocated language '" +
                      std::string(language) + "'");
    }
    const DatasetIndex& index = *it->second;
    check_unique_ids(index);
    if (static_cast<std::int64_t>(index.example_ids.size()) < amount) {
      throw Error(ErrorCode::kAvailabilityMismatch,
                  "language '" + index.language + "' has " +
                      std::to_string(index.example_ids.size()) +
                      " examples but " + std::to_string(amount) +
                      " are allocated");
    }
    std::vector<std::string_view> ids(index.example_ids.begin(),
                                      index.example_ids.end());
    Rng rng(mix_seed(seed, language));
    rng.sample_prefix(std::span<std::string_view>(ids),
                      static_cast<std::size_t>(amount));
    for (std::int64_t i = 0; i < amount; ++i) {
      manifest.records.push_back(
          {index.language, std::string(ids[static_cast<std::size_t>(i)]),
           Split::kTrain});
    }
  }

  Rng shuffler(seed);
  shuffler.shuffle(std::span<ManifestRecord>(manifest.records));

  const std::size_t total = manifest.records.size();
  const auto validation = static_cast<std::size_t>(
      round_half_even(val_fraction * static_cast<double>(total)));
  for (std::size_t i = total - validation; i < total; ++i) {
    manifest.records[i].split = Split::kValidation;
  }
  return manifest;
}

std::vector<Manifest> seed_sweep(const AllocationVector& allocation,
                                 std::span<const DatasetIndex> indexes,
                                 std::span<const std::uint64_t> seeds,
                                 double val_fraction) {
  if (seeds.empty()) {
    throw Error(ErrorCode::kInput, "seed sweep needs at least one seed");
  }
  std::vector<Manifest> out;
  out.reserve(seeds.size());
  for (const auto seed : seeds) {
    out.push_back(build_manifest(allocation, indexes, seed, val_fraction));
  }
  return out;
}

std::string manifest_to_jsonl(const Manifest& manifest) {
  std::string out;
  for (const auto& r : manifest.records) {
    nlohmann::json line = {{"source_language", r.source_language},
                           {"example_id", r.example_id},
                           {"split", std::string(split_name(r.split))}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

DatasetIndex parse_index_text(std::string_view text, std::string language,
                              std::string_view source_name) {
  DatasetIndex index;
  index.language = std::move(language);
  for (const auto line : split_lines(text)) {
    const auto id = trim(line);
    if (id.empty()) continue;
    index.example_ids.emplace_back(id);
  }
  try {
    check_unique_ids(index);
  } catch (const Error& e) {
    throw Error(ErrorCode::kIndex,
                std::string(source_name) + ": " + e.what());
  }
  return index;
}

std::vector<DatasetIndex> load_index_dir(const std::filesystem::path& dir) {
  std::vector<DatasetIndex> out;
  for (const auto& file : list_data_files(dir)) {
    out.push_back(parse_index_text(read_text_file(file),
                                   file.stem().string(), file.string()));
  }
  return out;
}

}  // namespace srcalloc
