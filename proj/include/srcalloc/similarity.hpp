#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace srcalloc {

// Sentence embeddings for one language, row i aligned with row i of every
// other set drawn from the same parallel corpus. Rows are L2-normalized on
// construction, so cosines reduce to dot products.
class EmbeddingSet {
 public:
  // `values` is row-major, rows * dim long. Requires rows >= 2, dim >= 1,
  // finite values and no all-zero row.
  EmbeddingSet(std::string language, std::size_t rows, std::size_t dim,
               std::vector<double> values);

  static EmbeddingSet from_rows(std::string language,
                                const std::vector<std::vector<double>>& rows);

  const std::string& language() const noexcept { return language_; }
  std::size_t size() const noexcept { return rows_; }
  std::size_t dimension() const noexcept { return dim_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<const double> values() const noexcept { return values_; }

  // Rows whose input norm differed from 1 by more than 1e-6.
  std::size_t renormalized_rows() const noexcept { return renormalized_; }

 private:
  std::string language_;
  std::size_t rows_;
  std::size_t dim_;
  std::vector<double> values_;
  std::size_t renormalized_ = 0;
};

// Symmetric table of language similarity scores.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  // `scores` is row-major over `languages`. Requires unique codes, finite
  // entries and symmetry within 1e-9.
  SimilarityMatrix(std::vector<std::string> languages,
                   std::vector<double> scores, std::string provenance = {});

  const std::vector<std::string>& languages() const noexcept {
    return languages_;
  }
  std::size_t size() const noexcept { return languages_.size(); }
  const std::string& provenance() const noexcept { return provenance_; }

  std::optional<std::size_t> index_of(std::string_view language) const;
  bool contains(std::string_view language) const {
    return index_of(language).has_value();
  }

  double at(std::size_t i, std::size_t j) const noexcept {
    return scores_[i * languages_.size() + j];
  }

  // kInput when either code is absent.
  double score(std::string_view a, std::string_view b) const;

  // Score, or `fallback` when either code is absent.
  double score_or(std::string_view a, std::string_view b,
                  double fallback) const;

 private:
  std::vector<std::string> languages_;
  std::vector<double> scores_;
  std::string provenance_;
};

// Mean cosine over aligned pairs (i, i) minus mean cosine over all n(n-1)
// misaligned pairs (i, j), i != j. The misaligned mean comes from summed
// row vectors, so the cost is O(n d).
double cosine_gap(const EmbeddingSet& source, const EmbeddingSet& target);

// Off-diagonal (s, t) holds the average of the two directed gaps; the
// diagonal holds a set's gap with itself. Languages keep input order.
SimilarityMatrix build_similarity_matrix(std::span<const EmbeddingSet> sets,
                                         std::string provenance = {});

}  // namespace srcalloc
