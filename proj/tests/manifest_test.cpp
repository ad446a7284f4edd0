#include "srcalloc/manifest.hpp"

#include <filesystem>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "srcalloc/error.hpp"
#include "srcalloc/text_io.hpp"

namespace srcalloc {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::kIo;
}

DatasetIndex index_of(const std::string& lang, std::size_t n) {
  DatasetIndex idx;
  idx.language = lang;
  for (std::size_t i = 0; i < n; ++i) {
    idx.example_ids.push_back(std::string(1, static_cast<char>(std::tolower(lang[0]))) +
                              std::to_string(i));
  }
  return idx;
}

AllocationVector alloc_of(std::vector<AllocationEntry> entries,
                          std::int64_t budget) {
  AllocationVector v;
  v.target = "tgt";
  v.budget = budget;
  v.entries = std::move(entries);
  v.refresh_totals();
  return v;
}

std::map<std::string, std::int64_t> counts(const Manifest& m) {
  std::map<std::string, std::int64_t> out;
  for (const auto& r : m.records) ++out[r.source_language];
  return out;
}

TEST(Manifest, GoldenSmallCase) {
  const auto alloc = alloc_of({{"A", 3}, {"B", 2}}, 5);
  const std::vector<DatasetIndex> idx{index_of("A", 6), index_of("B", 4)};
  const auto m = build_manifest(alloc, idx, 42, 0.2);
  // Expected order from an independent implementation of the generator.
  const std::vector<ManifestRecord> expected{
      {"B", "b0", Split::kTrain},
      {"B", "b1", Split::kTrain},
      {"A", "a2", Split::kTrain},
      {"A", "a4", Split::kTrain},
      {"A", "a5", Split::kValidation},
  };
  EXPECT_EQ(m.records, expected);
  EXPECT_EQ(m.validation_count(), 1u);
  const auto jsonl = manifest_to_jsonl(m);
  EXPECT_EQ(jsonl.substr(0, jsonl.find('\n') + 1),
            "{\"example_id\":\"b0\",\"source_language\":\"B\","
            "\"split\":\"train\"}\n");
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 5);
}

TEST(Manifest, CountsFollowAllocation) {
  const auto alloc = alloc_of({{"A", 3}, {"B", 2}}, 5);
  const std::vector<DatasetIndex> idx{index_of("B", 9), index_of("A", 9)};
  const auto m = build_manifest(alloc, idx, 7);
  EXPECT_EQ(m.records.size(), 5u);
  EXPECT_EQ(counts(m), (std::map<std::string, std::int64_t>{{"A", 3}, {"B", 2}}));
}

TEST(Manifest, ValidationCountRoundsHalfToEven) {
  const std::vector<DatasetIndex> idx{index_of("A", 200)};
  EXPECT_EQ(build_manifest(alloc_of({{"A", 100}}, 100), idx, 1, 0.1)
                .validation_count(),
            10u);
  // 0.5 * 5 = 2.5 -> 2, 0.5 * 7 = 3.5 -> 4.
  EXPECT_EQ(build_manifest(alloc_of({{"A", 5}}, 5), idx, 1, 0.5)
                .validation_count(),
            2u);
  EXPECT_EQ(build_manifest(alloc_of({{"A", 7}}, 7), idx, 1, 0.5)
                .validation_count(),
            4u);
  const auto m = build_manifest(alloc_of({{"A", 40}}, 40), idx, 3, 0.25);
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    EXPECT_EQ(m.records[i].split, i < 30 ? Split::kTrain : Split::kValidation);
  }
}

TEST(Manifest, PropertiesOverRandomAllocations) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<DatasetIndex> idx;
    std::vector<AllocationEntry> entries;
    const std::size_t n = 1 + gen() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string lang = std::string(1, static_cast<char>('A' + i)) + "x";
      const std::size_t size = gen() % 50;
      idx.push_back(index_of(lang, size));
      idx.back().language = lang;
      entries.push_back({lang, static_cast<std::int64_t>(size == 0 ? 0 : gen() % (size + 1))});
    }
    const auto alloc = alloc_of(entries, 500);
    const double vf = (gen() % 100) / 100.0;
    const std::uint64_t seed = gen();
    const auto m = build_manifest(alloc, idx, seed, vf);
    std::map<std::string, std::int64_t> expected;
    for (const auto& e : entries) {
      if (e.amount > 0) expected[e.language] = e.amount;
    }
    EXPECT_EQ(counts(m), expected);
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& r : m.records) {
      EXPECT_TRUE(seen.insert({r.source_language, r.example_id}).second);
    }
    const auto other = build_manifest(alloc, idx, seed + 1, vf);
    EXPECT_EQ(counts(other), expected);
    EXPECT_EQ(manifest_to_jsonl(m), manifest_to_jsonl(build_manifest(alloc, idx, seed, vf)));
  }
}

TEST(Manifest, AddingALanguageKeepsOtherSamples) {
  const std::vector<DatasetIndex> idx{index_of("A", 50), index_of("B", 50)};
  const auto solo = build_manifest(alloc_of({{"A", 10}}, 20), idx, 5);
  const auto pair = build_manifest(alloc_of({{"A", 10}, {"B", 10}}, 20), idx, 5);
  std::set<std::string> a1, a2;
  for (const auto& r : solo.records) a1.insert(r.example_id);
  for (const auto& r : pair.records) {
    if (r.source_language == "A") a2.insert(r.example_id);
  }
  EXPECT_EQ(a1, a2);
}

TEST(SeedSweep, DefaultSeedsAndExhaustiveIndexes) {
  const auto alloc = alloc_of({{"A", 6}, {"B", 4}}, 10);
  const std::vector<DatasetIndex> idx{index_of("A", 6), index_of("B", 4)};
  const std::vector<std::uint64_t> seeds{42, 43, 44};
  const auto sweep = seed_sweep(alloc, idx, seeds);
  ASSERT_EQ(sweep.size(), 3u);
  std::set<std::string> orders;
  for (const auto& m : sweep) {
    std::multiset<std::string> ids;
    std::string order;
    for (const auto& r : m.records) {
      ids.insert(r.example_id);
      order += r.example_id + ",";
    }
    EXPECT_EQ(ids.size(), 10u);
    EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 10u);
    orders.insert(order);
  }
  EXPECT_EQ(orders.size(), 3u);
  const std::vector<std::uint64_t> one{42};
  EXPECT_EQ(seed_sweep(alloc, idx, one)[0].records,
            build_manifest(alloc, idx, 42).records);
  EXPECT_EQ(code_of([&] { seed_sweep(alloc, idx, {}); }), ErrorCode::kInput);
}

TEST(Manifest, Errors) {
  const std::vector<DatasetIndex> idx{index_of("A", 2)};
  EXPECT_EQ(code_of([&] { build_manifest(alloc_of({{"A", 3}}, 3), idx, 1); }),
            ErrorCode::kAvailabilityMismatch);
  EXPECT_EQ(code_of([&] { build_manifest(alloc_of({{"B", 1}}, 3), idx, 1); }),
            ErrorCode::kAvailabilityMismatch);
  EXPECT_EQ(code_of([&] { build_manifest(alloc_of({{"A", 1}}, 3), idx, 1, 1.0); }),
            ErrorCode::kInput);
  EXPECT_EQ(code_of([&] { build_manifest(alloc_of({{"A", 1}}, 3), idx, 1, -0.1); }),
            ErrorCode::kInput);
  DatasetIndex dup = index_of("A", 3);
  dup.example_ids[2] = dup.example_ids[0];
  const std::vector<DatasetIndex> dups{dup};
  EXPECT_EQ(code_of([&] { build_manifest(alloc_of({{"A", 1}}, 3), dups, 1); }),
            ErrorCode::kIndex);
  EXPECT_EQ(code_of([] { parse_index_text("x1\nx2\nx1\n", "A", "idx"); }),
            ErrorCode::kIndex);
}

TEST(IndexFiles, ParseAndLoadDirectory) {
  const auto idx = parse_index_text("s1\r\n\ns2\ns3\n", "swa", "inline");
  EXPECT_EQ(idx.example_ids, (std::vector<std::string>{"s1", "s2", "s3"}));
  const auto dir = std::filesystem::temp_directory_path() / "srcalloc_index_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "yor.txt", "y1\ny2\n");
  write_file_atomic(dir / "hau.txt", "h1\n");
  const auto all = load_index_dir(dir);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].language, "hau");
  EXPECT_EQ(all[1].example_ids.size(), 2u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace srcalloc
