#include <gtest/gtest.h>

#include "apegen/corpus.hpp"
#include "apegen/error.hpp"
#include "support.hpp"

namespace apegen {
namespace {

using test::TempDir;
using test::write_file;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no apegen::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(LoadTsv, SplitsOnTab) {
  TempDir dir;
  write_file(dir / "c.tsv", "ich mag Katzen\tI like cats\n");
  const auto corpus = load_tsv(dir / "c.tsv");
  ASSERT_EQ(corpus.pairs.size(), 1u);
  EXPECT_EQ(corpus.pairs[0].src, "ich mag Katzen");
  EXPECT_EQ(corpus.pairs[0].tgt, "I like cats");
  EXPECT_EQ(corpus.pairs[0].index, 0u);
}

TEST(LoadTsv, DropsLineWithoutTab) {
  TempDir dir;
  write_file(dir / "c.tsv", "no tab here\na\tb\n");
  const auto corpus = load_tsv(dir / "c.tsv");
  ASSERT_EQ(corpus.pairs.size(), 1u);
  EXPECT_EQ(corpus.pairs[0].index, 1u);
  EXPECT_EQ(validate(corpus).dropped_indices, std::vector<std::size_t>{0});
}

TEST(LoadTsv, EmptyFileIsEmptyCorpus) {
  TempDir dir;
  write_file(dir / "c.tsv", "");
  EXPECT_EQ(code_of([&] { load_tsv(dir / "c.tsv"); }), ErrorCode::kEmptyCorpus);
}

TEST(LoadTsv, OnlyMalformedLinesIsEmptyCorpus) {
  TempDir dir;
  write_file(dir / "c.tsv", "no tab here\n");
  EXPECT_EQ(code_of([&] { load_tsv(dir / "c.tsv"); }), ErrorCode::kEmptyCorpus);
}

TEST(LoadTsv, MissingFile) {
  EXPECT_EQ(code_of([] { load_tsv("/nonexistent/c.tsv"); }), ErrorCode::kFileNotFound);
}

TEST(LoadTsv, LaterTabsBelongToTarget) {
  const auto corpus = parse_tsv("a\tb\tc\n", "mem");
  ASSERT_EQ(corpus.pairs.size(), 1u);
  EXPECT_EQ(corpus.pairs[0].tgt, "b\tc");
}

TEST(LoadTsv, InvalidUtf8IsDroppedNotFatal) {
  const auto corpus = parse_tsv("a\t\xff\xfe\nb\tok\n", "mem");
  ASSERT_EQ(corpus.pairs.size(), 1u);
  ASSERT_EQ(corpus.load_issues.size(), 1u);
  EXPECT_EQ(corpus.load_issues[0].index, 0u);
}

TEST(LoadTsv, CrlfAndMissingFinalNewline) {
  const auto corpus = parse_tsv("a\tb\r\nc\td", "mem");
  ASSERT_EQ(corpus.pairs.size(), 2u);
  EXPECT_EQ(corpus.pairs[0].tgt, "b");
  EXPECT_EQ(corpus.pairs[1].tgt, "d");
}

TEST(LoadMoses, ZipsPositionally) {
  TempDir dir;
  write_file(dir / "s", "a\nb\nc\n");
  write_file(dir / "t", "x\ny\nz\n");
  const auto corpus = load_moses(dir / "s", dir / "t");
  ASSERT_EQ(corpus.pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(corpus.pairs[i].index, i);
  EXPECT_EQ(corpus.pairs[2].src, "c");
  EXPECT_EQ(corpus.pairs[2].tgt, "z");
}

TEST(LoadMoses, LineCountMismatch) {
  TempDir dir;
  write_file(dir / "s", "a\nb\nc\n");
  write_file(dir / "t", "x\ny\n");
  EXPECT_EQ(code_of([&] { load_moses(dir / "s", dir / "t"); }),
            ErrorCode::kLineCountMismatch);
}

TEST(LoadMoses, BothEmpty) {
  TempDir dir;
  write_file(dir / "s", "");
  write_file(dir / "t", "");
  EXPECT_EQ(code_of([&] { load_moses(dir / "s", dir / "t"); }), ErrorCode::kEmptyCorpus);
}

TEST(Validate, EmptyTargetCounted) {
  ParallelCorpus corpus;
  corpus.pairs = {{0, "a", "b"}, {1, "c", ""}};
  corpus.total_lines = 2;
  const auto report = validate(corpus);
  EXPECT_EQ(report.empty_tgt_count, 1u);
  EXPECT_EQ(report.dropped_indices, std::vector<std::size_t>{1});
}

TEST(Validate, EmptyTargetDroppedAtLoadIsCounted) {
  const auto corpus = parse_tsv("a\tb\nc\t\n", "mem");
  const auto report = validate(corpus);
  EXPECT_EQ(report.empty_tgt_count, 1u);
  EXPECT_EQ(report.dropped_indices, std::vector<std::size_t>{1});
}

TEST(Validate, LengthRatioOutlier) {
  std::string tgt;
  for (int i = 0; i < 10; ++i) tgt += "abcdefghij";
  ParallelCorpus corpus;
  corpus.pairs = {{0, "a", tgt}, {1, "hello", "hallo"}};
  const auto report = validate(corpus);
  EXPECT_EQ(report.length_ratio_outliers, std::vector<std::size_t>{0});
  EXPECT_TRUE(report.dropped_indices.empty());
}

TEST(Validate, WellFormedCorpusHasZeroCounts) {
  const auto report = validate(test::demo_corpus());
  EXPECT_EQ(report.empty_src_count, 0u);
  EXPECT_EQ(report.empty_tgt_count, 0u);
  EXPECT_TRUE(report.dropped_indices.empty());
  EXPECT_TRUE(report.length_ratio_outliers.empty());
  EXPECT_EQ(report.total_lines, 1000u);
}

TEST(Validate, IsPure) {
  const auto corpus = parse_tsv("a\tb\nbad\nc\t" + std::string(50, 'x') + "\n", "mem");
  EXPECT_EQ(validate(corpus), validate(corpus));
}

TEST(Validate, LengthCountsCodePointsNotBytes) {
  // 9 two-byte characters against 1: ratio 9 in code points, 18 in bytes.
  ParallelCorpus corpus;
  corpus.pairs = {{0, "a", "ééééééééé"}};
  EXPECT_TRUE(validate(corpus).length_ratio_outliers.empty());
}

TEST(DropLengthOutliers, RemovesOnlyOutliers) {
  ParallelCorpus corpus;
  corpus.pairs = {{0, "a", std::string(100, 'x')}, {1, "hello", "hallo"}};
  const auto kept = drop_length_outliers(corpus, validate(corpus));
  ASSERT_EQ(kept.pairs.size(), 1u);
  EXPECT_EQ(kept.pairs[0].index, 1u);
}

TEST(SaveLoad, TsvRoundTripPreservesOrder) {
  TempDir dir;
  const auto& demo = test::demo_corpus();
  save_tsv(demo, dir / "out.tsv");
  const auto back = load_tsv(dir / "out.tsv");
  EXPECT_EQ(back.pairs, demo.pairs);
}

TEST(SaveLoad, MosesRoundTripPreservesOrder) {
  TempDir dir;
  const auto& demo = test::demo_corpus();
  save_moses(demo, dir / "s", dir / "t");
  EXPECT_EQ(load_moses(dir / "s", dir / "t").pairs, demo.pairs);
}

TEST(Fingerprint, IgnoresProvenance) {
  auto a = parse_tsv("a\tb\n", "one");
  auto b = parse_tsv("a\tb\n", "two");
  EXPECT_EQ(corpus_fingerprint(a), corpus_fingerprint(b));
  EXPECT_NE(corpus_fingerprint(a), corpus_fingerprint(parse_tsv("a\tc\n", "one")));
  EXPECT_EQ(corpus_fingerprint(a).size(), 64u);
}

}  // namespace
}  // namespace apegen
