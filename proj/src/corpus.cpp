#include "apegen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "apegen/digest.hpp"
#include "apegen/error.hpp"
#include "apegen/utf8.hpp"

namespace apegen {

namespace {

constexpr std::string_view kEmptySource = "empty source";
constexpr std::string_view kEmptyTarget = "empty target";

// Splits on LF. A trailing LF does not start a new line; a trailing CR on each
// line is treated as part of the terminator.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

void require_nonempty(const ParallelCorpus& corpus) {
  if (corpus.pairs.empty()) {
    std::string origin = corpus.source_paths.empty() ? "<memory>"
                                                     : corpus.source_paths[0];
    throw Error(ErrorCode::kEmptyCorpus,
                "no valid sentence pairs in " + origin + " (" +
                    std::to_string(corpus.total_lines) + " lines read)");
  }
}

// Returns an empty string when the pair is acceptable.
std::string check_pair(std::string_view src, std::string_view tgt) {
  if (!utf8::is_valid(src)) return "invalid UTF-8 in source";
  if (!utf8::is_valid(tgt)) return "invalid UTF-8 in target";
  if (src.empty()) return std::string(kEmptySource);
  if (tgt.empty()) return std::string(kEmptyTarget);
  return {};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, "file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ParallelCorpus parse_tsv(const std::string& text, const std::string& origin) {
  ParallelCorpus corpus;
  corpus.source_paths.push_back(origin);
  const auto lines = split_lines(text);
  corpus.total_lines = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      corpus.load_issues.push_back({i, "missing tab separator"});
      continue;
    }
    const std::string_view src = line.substr(0, tab);
    const std::string_view tgt = line.substr(tab + 1);
    if (auto reason = check_pair(src, tgt); !reason.empty()) {
      corpus.load_issues.push_back({i, std::move(reason)});
      continue;
    }
    corpus.pairs.push_back({i, std::string(src), std::string(tgt)});
  }
  require_nonempty(corpus);
  return corpus;
}

ParallelCorpus parse_moses(const std::string& src_text,
                           const std::string& tgt_text,
                           const std::string& origin) {
  const auto src_lines = split_lines(src_text);
  const auto tgt_lines = split_lines(tgt_text);
  if (src_lines.size() != tgt_lines.size()) {
    throw Error(ErrorCode::kLineCountMismatch,
                "line count mismatch in " + origin + ": source has " +
                    std::to_string(src_lines.size()) + ", target has " +
                    std::to_string(tgt_lines.size()));
  }
  ParallelCorpus corpus;
  corpus.source_paths.push_back(origin);
  corpus.total_lines = src_lines.size();
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    if (auto reason = check_pair(src_lines[i], tgt_lines[i]); !reason.empty()) {
      corpus.load_issues.push_back({i, std::move(reason)});
      continue;
    }
    corpus.pairs.push_back(
        {i, std::string(src_lines[i]), std::string(tgt_lines[i])});
  }
  require_nonempty(corpus);
  return corpus;
}

ParallelCorpus load_tsv(const std::filesystem::path& path) {
  return parse_tsv(read_file(path), path.string());
}

ParallelCorpus load_moses(const std::filesystem::path& src_path,
                          const std::filesystem::path& tgt_path) {
  const std::string src = read_file(src_path);
  const std::string tgt = read_file(tgt_path);
  ParallelCorpus corpus =
      parse_moses(src, tgt, src_path.string() + "," + tgt_path.string());
  corpus.source_paths = {src_path.string(), tgt_path.string()};
  return corpus;
}

ValidationReport validate(const ParallelCorpus& corpus) {
  ValidationReport report;
  std::size_t max_index = 0;
  for (const auto& pair : corpus.pairs) max_index = std::max(max_index, pair.index + 1);
  report.total_lines = std::max(corpus.total_lines, max_index);

  std::set<std::size_t> dropped;
  for (const auto& issue : corpus.load_issues) {
    dropped.insert(issue.index);
    if (issue.reason == kEmptySource) ++report.empty_src_count;
    if (issue.reason == kEmptyTarget) ++report.empty_tgt_count;
  }
  for (const auto& pair : corpus.pairs) {
    const bool empty_src = pair.src.empty();
    const bool empty_tgt = pair.tgt.empty();
    if (empty_src) ++report.empty_src_count;
    if (empty_tgt) ++report.empty_tgt_count;
    if (empty_src || empty_tgt) {
      dropped.insert(pair.index);
      continue;
    }
    const double ratio = static_cast<double>(utf8::length(pair.tgt)) /
                         static_cast<double>(utf8::length(pair.src));
    if (ratio < kMinLengthRatio || ratio > kMaxLengthRatio) {
      report.length_ratio_outliers.push_back(pair.index);
    }
  }
  report.dropped_indices.assign(dropped.begin(), dropped.end());
  return report;
}

ParallelCorpus drop_length_outliers(const ParallelCorpus& corpus,
                                    const ValidationReport& report) {
  const std::set<std::size_t> outliers(report.length_ratio_outliers.begin(),
                                       report.length_ratio_outliers.end());
  ParallelCorpus out;
  out.source_paths = corpus.source_paths;
  out.total_lines = corpus.total_lines;
  out.load_issues = corpus.load_issues;
  for (const auto& pair : corpus.pairs) {
    if (outliers.count(pair.index)) {
      out.load_issues.push_back({pair.index, "length ratio outlier"});
    } else {
      out.pairs.push_back(pair);
    }
  }
  require_nonempty(out);
  return out;
}

void save_tsv(const ParallelCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  for (const auto& pair : corpus.pairs) out << pair.src << '\t' << pair.tgt << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void save_moses(const ParallelCorpus& corpus,
                const std::filesystem::path& src_path,
                const std::filesystem::path& tgt_path) {
  std::ofstream src(src_path, std::ios::binary);
  std::ofstream tgt(tgt_path, std::ios::binary);
  if (!src || !tgt) {
    throw Error(ErrorCode::kIoError,
                "cannot write " + src_path.string() + " / " + tgt_path.string());
  }
  for (const auto& pair : corpus.pairs) {
    src << pair.src << '\n';
    tgt << pair.tgt << '\n';
  }
}

std::string corpus_fingerprint(const ParallelCorpus& corpus) {
  Sha256 hash;
  for (const auto& pair : corpus.pairs) {
    hash.update(std::to_string(pair.index)).update("\t").update(pair.src);
    hash.update("\t").update(pair.tgt).update("\n");
  }
  return hash.hex();
}

}  // namespace apegen
