#include "srcalloc/similarity_io.hpp"

#include <algorithm>

#include "srcalloc/error.hpp"
#include "srcalloc/numeric.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kProvenancePrefix = "# provenance:";

bool is_comment_or_blank(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::string where(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no);
}

}  // namespace

EmbeddingSet parse_embedding_text(std::string_view text,
                                  std::string_view source_name) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && is_comment_or_blank(lines[i])) ++i;
  if (i == lines.size()) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) + ": missing `lang n d` header");
  }
  const auto header = split_whitespace(trim(lines[i]));
  if (header.size() != 3) {
    throw Error(ErrorCode::kInput,
                where(source_name, i + 1) + ": header must be `lang n d`");
  }
  std::string language(header[0]);
  const std::int64_t n = parse_int(header[1], where(source_name, i + 1) + " n");
  const std::int64_t d = parse_int(header[2], where(source_name, i + 1) + " d");
  if (n < 0 || d < 0) {
    throw Error(ErrorCode::kInput,
                where(source_name, i + 1) + ": negative n or d");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n * d));
  std::int64_t rows = 0;
  for (++i; i < lines.size(); ++i) {
    if (is_comment_or_blank(lines[i])) continue;
    const auto fields = split_whitespace(trim(lines[i]));
    if (static_cast<std::int64_t>(fields.size()) != d) {
      throw Error(ErrorCode::kAlignment,
                  where(source_name, i + 1) + ": expected " +
                      std::to_string(d) + " values, got " +
                      std::to_string(fields.size()));
    }
    for (const auto f : fields) {
      values.push_back(parse_double(f, where(source_name, i + 1)));
    }
    ++rows;
  }
  if (rows != n) {
    throw Error(ErrorCode::kAlignment,
                std::string(source_name) + ": header declares " +
                    std::to_string(n) + " rows, found " + std::to_string(rows));
  }
  return EmbeddingSet(std::move(language), static_cast<std::size_t>(n),
                      static_cast<std::size_t>(d), std::move(values));
}

EmbeddingSet read_embedding_file(const fs::path& path) {
  return parse_embedding_text(read_text_file(path), path.string());
}

std::string format_embedding_text(const EmbeddingSet& set,
                                  const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += set.language() + " " + std::to_string(set.size()) + " " +
         std::to_string(set.dimension()) + "\n";
  for (std::size_t r = 0; r < set.size(); ++r) {
    const auto row = set.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ' ';
      out += format_real(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_embedding_file(const fs::path& path, const EmbeddingSet& set,
                          const std::vector<std::string>& comments) {
  write_file_atomic(path, format_embedding_text(set, comments));
}

std::vector<EmbeddingSet> load_embedding_dir(const fs::path& dir) {
  std::vector<EmbeddingSet> sets;
  for (const auto& file : list_data_files(dir)) {
    sets.push_back(read_embedding_file(file));
  }
  std::sort(sets.begin(), sets.end(),
            [](const EmbeddingSet& a, const EmbeddingSet& b) {
              return a.language() < b.language();
            });
  return sets;
}

std::string format_similarity_csv(const SimilarityMatrix& matrix) {
  std::string out;
  std::string provenance = matrix.provenance();
  std::replace(provenance.begin(), provenance.end(), '\n', ' ');
  out += std::string(kProvenancePrefix) + " " + provenance + "\n";
  out += "language";
  for (const auto& lang : matrix.languages()) out += "," + lang;
  out += '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out += matrix.languages()[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      out += ',' + format_real(matrix.at(i, j));
    }
    out += '\n';
  }
  return out;
}

SimilarityMatrix parse_similarity_csv(std::string_view text,
                                      std::string_view source_name) {
  std::string provenance;
  std::vector<std::string> header;
  std::vector<std::string> row_langs;
  std::vector<std::vector<double>> rows;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with(kProvenancePrefix)) {
        provenance = std::string(trim(line.substr(kProvenancePrefix.size())));
      }
      continue;
    }
    const auto cells = split_char(line, ',');
    if (header.empty()) {
      if (cells.size() < 2) {
        throw Error(ErrorCode::kInput,
                    where(source_name, i + 1) + ": header lists no languages");
      }
      for (std::size_t c = 1; c < cells.size(); ++c) {
        header.emplace_back(trim(cells[c]));
      }
      continue;
    }
    if (cells.size() != header.size() + 1) {
      throw Error(ErrorCode::kInput,
                  where(source_name, i + 1) + ": expected " +
                      std::to_string(header.size() + 1) + " cells, got " +
                      std::to_string(cells.size()));
    }
    row_langs.emplace_back(trim(cells[0]));
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      row.push_back(parse_double(cells[c], where(source_name, i + 1)));
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) + ": empty similarity matrix");
  }
  if (row_langs != header) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) +
                    ": row labels must match the header languages in order");
  }
  std::vector<double> scores;
  scores.reserve(header.size() * header.size());
  for (const auto& r : rows) scores.insert(scores.end(), r.begin(), r.end());
  return SimilarityMatrix(std::move(header), std::move(scores),
                          std::move(provenance));
}

SimilarityMatrix read_similarity_csv(const fs::path& path) {
  return parse_similarity_csv(read_text_file(path), path.string());
}

}  // namespace srcalloc
