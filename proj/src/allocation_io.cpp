#include "srcalloc/allocation_io.hpp"

#include <json.hpp>

#include "srcalloc/error.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {

namespace fs = std::filesystem;
using nlohmann::json;

std::map<std::string, std::int64_t> parse_availability_csv(
    std::string_view text, std::string_view source_name) {
  std::map<std::string, std::int64_t> out;
  bool first = true;
  std::size_t line_no = 0;
  for (const auto raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_char(line, ',');
    const std::string at =
        std::string(source_name) + ":" + std::to_string(line_no);
    if (cells.size() != 2) {
      throw Error(ErrorCode::kInput, at + ": expected `language,count`");
    }
    const auto lang = trim(cells[0]);
    const auto count = trim(cells[1]);
    if (first && lang == "language" && count == "count") {
      first = false;
      continue;
    }
    first = false;
    if (lang.empty()) {
      throw Error(ErrorCode::kInput, at + ": empty language code");
    }
    const std::int64_t n = parse_int(count, at + " count");
    if (n < 0) {
      throw Error(ErrorCode::kInput,
                  at + ": negative count for '" + std::string(lang) + "'");
    }
    if (!out.emplace(std::string(lang), n).second) {
      throw Error(ErrorCode::kInput,
                  at + ": duplicate language '" + std::string(lang) + "'");
    }
  }
  return out;
}

std::map<std::string, std::int64_t> read_availability_csv(const fs::path& path) {
  return parse_availability_csv(read_text_file(path), path.string());
}

SourcePool make_pool(std::string target,
                     const std::map<std::string, std::int64_t>& availability,
                     const SimilarityMatrix& similarity) {
  SourcePool pool;
  pool.target = std::move(target);
  const bool has_target = similarity.contains(pool.target);
  for (const auto& [lang, count] : availability) {
    if (lang == pool.target) continue;
    const double sim =
        has_target ? similarity.score_or(lang, pool.target, 0.0) : 0.0;
    pool.candidates.push_back({lang, count, sim});
  }
  pool.inter_source = similarity;
  pool.validate();
  return pool;
}

std::string allocation_to_json(const AllocationVector& allocation) {
  json doc = json::object();
  doc["target"] = allocation.target;
  doc["budget"] = allocation.budget;
  doc["used"] = allocation.used;
  doc["utilization"] = allocation.utilization;
  json entries = json::array();
  for (const auto& e : allocation.entries) {
    entries.push_back({{"language", e.language}, {"amount", e.amount}});
  }
  doc["entries"] = std::move(entries);
  if (allocation.config) {
    const StrategyConfig& c = *allocation.config;
    doc["strategy"] = std::string(strategy_name(c.strategy));
    doc["k"] = c.k;
    doc["alpha"] = c.alpha;
    doc["seed"] = c.seed;
    doc["batch_size"] = c.batch_size;
    doc["saturation_c"] = c.saturation_c;
  } else {
    for (const char* key :
         {"strategy", "k", "alpha", "seed", "batch_size", "saturation_c"}) {
      doc[key] = nullptr;
    }
  }
  return doc.dump(2) + "\n";
}

AllocationVector allocation_from_json(std::string_view text,
                                      std::string_view source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) + ": invalid JSON: " + e.what());
  }
  try {
    AllocationVector out;
    out.target = doc.at("target").get<std::string>();
    out.budget = doc.at("budget").get<std::int64_t>();
    for (const auto& e : doc.at("entries")) {
      const auto amount = e.at("amount").get<std::int64_t>();
      if (amount < 0) {
        throw Error(ErrorCode::kInput,
                    std::string(source_name) + ": negative amount");
      }
      out.entries.push_back({e.at("language").get<std::string>(), amount});
    }
    if (doc.contains("strategy") && !doc["strategy"].is_null()) {
      StrategyConfig c;
      c.strategy = parse_strategy(doc["strategy"].get<std::string>());
      c.budget = out.budget;
      c.k = doc.value("k", c.k);
      c.alpha = doc.value("alpha", c.alpha);
      c.seed = doc.value("seed", c.seed);
      c.batch_size = doc.value("batch_size", c.batch_size);
      c.saturation_c = doc.value("saturation_c", c.saturation_c);
      out.config = c;
    }
    out.refresh_totals();
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInput,
                std::string(source_name) + ": malformed allocation: " +
                    e.what());
  }
}

AllocationVector read_allocation_json(const fs::path& path) {
  return allocation_from_json(read_text_file(path), path.string());
}

}  // namespace srcalloc
