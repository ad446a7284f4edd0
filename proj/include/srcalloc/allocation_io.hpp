#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "srcalloc/allocation.hpp"
#include "srcalloc/similarity.hpp"

namespace srcalloc {

// `language,count` rows; an optional header row with exactly those names.
std::map<std::string, std::int64_t> parse_availability_csv(
    std::string_view text, std::string_view source_name);
std::map<std::string, std::int64_t> read_availability_csv(
    const std::filesystem::path& path);

// Candidates are every language in `availability` except the target, in
// code order. Similarity comes from the target's row of `similarity`;
// languages absent from the matrix get similarity 0. The matrix doubles as
// the inter-source table.
SourcePool make_pool(std::string target,
                     const std::map<std::string, std::int64_t>& availability,
                     const SimilarityMatrix& similarity);

// {alpha, batch_size, budget, entries:[{amount, language}], k, saturation_c,
//  seed, strategy, target, used, utilization} with keys sorted.
std::string allocation_to_json(const AllocationVector& allocation);
AllocationVector allocation_from_json(std::string_view text,
                                      std::string_view source_name);
AllocationVector read_allocation_json(const std::filesystem::path& path);

}  // namespace srcalloc
