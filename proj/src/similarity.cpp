#include "srcalloc/similarity.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "srcalloc/error.hpp"
#include "srcalloc/numeric.hpp"

namespace srcalloc {

EmbeddingSet::EmbeddingSet(std::string language, std::size_t rows,
                           std::size_t dim, std::vector<double> values)
    : language_(std::move(language)),
      rows_(rows),
      dim_(dim),
      values_(std::move(values)) {
  if (language_.empty()) {
    throw Error(ErrorCode::kInput, "embedding set has an empty language code");
  }
  if (rows_ < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "embedding set '" + language_ + "' needs at least 2 rows, got " +
                    std::to_string(rows_));
  }
  if (dim_ < 1) {
    throw Error(ErrorCode::kInput,
                "embedding set '" + language_ + "' has dimension 0");
  }
  if (values_.size() != rows_ * dim_) {
    throw Error(ErrorCode::kAlignment,
                "embedding set '" + language_ + "': expected " +
                    std::to_string(rows_ * dim_) + " values, got " +
                    std::to_string(values_.size()));
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    std::span<double> row(values_.data() + r * dim_, dim_);
    for (const double v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInput, "embedding set '" + language_ +
                                           "': non-finite value in row " +
                                           std::to_string(r));
      }
    }
    const double norm = std::sqrt(pairwise_dot(row, row));
    if (norm == 0.0) {
      throw Error(ErrorCode::kInput, "embedding set '" + language_ +
                                         "': row " + std::to_string(r) +
                                         " is all zeros");
    }
    if (std::abs(norm - 1.0) > 1e-6) ++renormalized_;
    // Rows already unit length up to rounding are kept bit for bit, so
    // loading a written set is idempotent.
    if (std::abs(norm - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
      continue;
    }
    for (double& v : row) v /= norm;
  }
}

EmbeddingSet EmbeddingSet::from_rows(
    std::string language, const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) {
      throw Error(ErrorCode::kAlignment,
                  "embedding set '" + language + "': row " +
                      std::to_string(r) + " has " +
                      std::to_string(rows[r].size()) + " values, expected " +
                      std::to_string(dim));
    }
    values.insert(values.end(), rows[r].begin(), rows[r].end());
  }
  return EmbeddingSet(std::move(language), rows.size(), dim,
                      std::move(values));
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> languages,
                                   std::vector<double> scores,
                                   std::string provenance)
    : languages_(std::move(languages)),
      scores_(std::move(scores)),
      provenance_(std::move(provenance)) {
  const std::size_t n = languages_.size();
  if (scores_.size() != n * n) {
    throw Error(ErrorCode::kInput, "similarity matrix is not square");
  }
  std::set<std::string> seen;
  for (const auto& lang : languages_) {
    if (lang.empty()) {
      throw Error(ErrorCode::kInput, "similarity matrix has an empty code");
    }
    if (!seen.insert(lang).second) {
      throw Error(ErrorCode::kInput,
                  "duplicate language '" + lang + "' in similarity matrix");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = at(i, j);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kInput, "non-finite similarity for (" +
                                           languages_[i] + ", " +
                                           languages_[j] + ")");
      }
      if (j > i && std::abs(v - at(j, i)) > 1e-9) {
        throw Error(ErrorCode::kInput, "similarity matrix is not symmetric at (" +
                                           languages_[i] + ", " +
                                           languages_[j] + ")");
      }
    }
  }
}

std::optional<std::size_t> SimilarityMatrix::index_of(
    std::string_view language) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i] == language) return i;
  }
  return std::nullopt;
}

double SimilarityMatrix::score(std::string_view a, std::string_view b) const {
  const auto i = index_of(a);
  const auto j = index_of(b);
  if (!i || !j) {
    throw Error(ErrorCode::kInput, "no similarity entry for (" +
                                       std::string(a) + ", " + std::string(b) +
                                       ")");
  }
  return at(*i, *j);
}

double SimilarityMatrix::score_or(std::string_view a, std::string_view b,
                                  double fallback) const {
  const auto i = index_of(a);
  const auto j = index_of(b);
  if (!i || !j) return fallback;
  return at(*i, *j);
}

namespace {

void check_aligned(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.size() != b.size() || a.dimension() != b.dimension()) {
    throw Error(ErrorCode::kAlignment,
                "embedding sets '" + a.language() + "' (" +
                    std::to_string(a.size()) + "x" +
                    std::to_string(a.dimension()) + ") and '" + b.language() +
                    "' (" + std::to_string(b.size()) + "x" +
                    std::to_string(b.dimension()) + ") are not aligned");
  }
}

std::vector<double> column_sums(const EmbeddingSet& set) {
  std::vector<double> sums(set.dimension());
  pairwise_column_sums(set.values(), set.size(), set.dimension(), sums);
  return sums;
}

// Directed gap given precomputed column sums of both sets.
double gap_from_sums(const EmbeddingSet& source, const EmbeddingSet& target,
                     std::span<const double> source_sum,
                     std::span<const double> target_sum) {
  const std::size_t n = source.size();
  std::vector<double> aligned(n);
  for (std::size_t i = 0; i < n; ++i) {
    aligned[i] = pairwise_dot(source.row(i), target.row(i));
  }
  const double aligned_total = pairwise_sum(aligned);
  const double all_total = pairwise_dot(source_sum, target_sum);
  const double nd = static_cast<double>(n);
  const double aligned_mean = aligned_total / nd;
  const double misaligned_mean = (all_total - aligned_total) / (nd * nd - nd);
  return aligned_mean - misaligned_mean;
}

}  // namespace

double cosine_gap(const EmbeddingSet& source, const EmbeddingSet& target) {
  check_aligned(source, target);
  if (source.size() < 2) {
    throw Error(ErrorCode::kInsufficientData,
                "cosine_gap needs at least 2 aligned sentences");
  }
  const auto source_sum = column_sums(source);
  const auto target_sum = column_sums(target);
  return gap_from_sums(source, target, source_sum, target_sum);
}

SimilarityMatrix build_similarity_matrix(std::span<const EmbeddingSet> sets,
                                         std::string provenance) {
  if (sets.size() < 2) {
    throw Error(ErrorCode::kInput,
                "a similarity matrix needs at least 2 embedding sets");
  }
  std::set<std::string> seen;
  for (const auto& s : sets) {
    if (!seen.insert(s.language()).second) {
      throw Error(ErrorCode::kInput,
                  "duplicate language '" + s.language() + "' in embeddings");
    }
    check_aligned(sets.front(), s);
  }
  const std::size_t n = sets.size();
  std::vector<std::vector<double>> sums;
  sums.reserve(n);
  for (const auto& s : sets) sums.push_back(column_sums(s));

  std::vector<double> scores(n * n);
  std::vector<std::string> languages;
  for (std::size_t i = 0; i < n; ++i) {
    languages.push_back(sets[i].language());
    scores[i * n + i] = gap_from_sums(sets[i], sets[i], sums[i], sums[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double forward = gap_from_sums(sets[i], sets[j], sums[i], sums[j]);
      const double backward = gap_from_sums(sets[j], sets[i], sums[j], sums[i]);
      const double symmetric = (forward + backward) / 2.0;
      scores[i * n + j] = symmetric;
      scores[j * n + i] = symmetric;
    }
  }
  return SimilarityMatrix(std::move(languages), std::move(scores),
                          std::move(provenance));
}

}  // namespace srcalloc
