#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace apegen {

// One aligned line of a parallel corpus. `index` is the 0-based line position
// in the input, so indices of a corpus with dropped lines are not contiguous.
struct SentencePair {
  std::size_t index = 0;
  std::string src;
  std::string tgt;

  bool operator==(const SentencePair&) const = default;
};

struct LineIssue {
  std::size_t index = 0;
  std::string reason;
};

// Immutable after loading; safe to share between threads.
struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  std::vector<std::string> source_paths;
  // Number of input lines seen, including dropped ones.
  std::size_t total_lines = 0;
  // Lines rejected while loading (missing tab, invalid UTF-8, empty side).
  std::vector<LineIssue> load_issues;

  std::size_t pair_count() const { return pairs.size(); }
};

struct ValidationReport {
  std::size_t total_lines = 0;
  std::size_t empty_src_count = 0;
  std::size_t empty_tgt_count = 0;
  std::vector<std::size_t> dropped_indices;
  std::vector<std::size_t> length_ratio_outliers;

  bool operator==(const ValidationReport&) const = default;
};

// Bounds for the character length ratio len(tgt) / len(src).
inline constexpr double kMinLengthRatio = 1.0 / 9.0;
inline constexpr double kMaxLengthRatio = 9.0;

// `<src>\t<tgt>` per line. Only the first tab splits; later tabs belong to
// tgt. Lines without a tab, with an empty side, or with invalid UTF-8 are
// dropped and recorded in load_issues.
ParallelCorpus load_tsv(const std::filesystem::path& path);

// Two line-aligned files. Throws LineCountMismatch when the counts differ.
ParallelCorpus load_moses(const std::filesystem::path& src_path,
                          const std::filesystem::path& tgt_path);

// Same parsers over in-memory text; `origin` is recorded as provenance.
ParallelCorpus parse_tsv(const std::string& text, const std::string& origin);
ParallelCorpus parse_moses(const std::string& src_text,
                           const std::string& tgt_text,
                           const std::string& origin);

ValidationReport validate(const ParallelCorpus& corpus);

// Drops the pairs listed in report.length_ratio_outliers.
ParallelCorpus drop_length_outliers(const ParallelCorpus& corpus,
                                    const ValidationReport& report);

void save_tsv(const ParallelCorpus& corpus, const std::filesystem::path& path);
void save_moses(const ParallelCorpus& corpus,
                const std::filesystem::path& src_path,
                const std::filesystem::path& tgt_path);

// SHA-256 (hex) over the pair contents, independent of provenance paths.
std::string corpus_fingerprint(const ParallelCorpus& corpus);

// Reads a whole file; throws FileNotFound / IoError.
std::string read_file(const std::filesystem::path& path);

}  // namespace apegen
