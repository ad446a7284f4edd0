#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "srcalloc/similarity.hpp"

namespace srcalloc {

// Embedding text format: a `lang n d` header, then n rows of d reals
// separated by spaces. Lines starting with '#' are ignored anywhere.
EmbeddingSet parse_embedding_text(std::string_view text,
                                  std::string_view source_name);
EmbeddingSet read_embedding_file(const std::filesystem::path& path);

std::string format_embedding_text(const EmbeddingSet& set,
                                  const std::vector<std::string>& comments = {});
void write_embedding_file(const std::filesystem::path& path,
                          const EmbeddingSet& set,
                          const std::vector<std::string>& comments = {});

// Every regular, non-hidden file in `dir`, sorted by language code.
std::vector<EmbeddingSet> load_embedding_dir(const std::filesystem::path& dir);

// CSV with a `# provenance:` comment, a header row `language,<codes...>`
// and one row per language. Cells use round-trip decimal text.
std::string format_similarity_csv(const SimilarityMatrix& matrix);
SimilarityMatrix parse_similarity_csv(std::string_view text,
                                      std::string_view source_name);
SimilarityMatrix read_similarity_csv(const std::filesystem::path& path);

}  // namespace srcalloc
