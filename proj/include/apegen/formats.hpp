#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apegen/noising.hpp"

namespace apegen {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class OutputFormat { kWmt, kTsv, kJsonl };

std::string_view format_name(OutputFormat format);
std::optional<OutputFormat> parse_format(std::string_view name);

// A record a writer refused, by corpus line.
struct SkippedRecord {
  std::size_t index = 0;
  std::string reason;

  bool operator==(const SkippedRecord&) const = default;
};

// Counts over records actually written.
struct WriteReport {
  std::size_t written = 0;
  std::size_t total_edits = 0;
  std::size_t shortfall_count = 0;
  std::vector<SkippedRecord> skipped;
};

// Streaming writer over an ordered triplet sequence.
class DatasetWriter {
 public:
  virtual ~DatasetWriter() = default;
  // Returns false when the record was skipped.
  virtual bool write(const ApeTriplet& triplet) = 0;
  // Flushes and closes; throws IoError on failure.
  virtual void close() = 0;
  const WriteReport& report() const { return report_; }
  // Files produced, relative to the output directory.
  virtual std::vector<std::string> files() const = 0;

 protected:
  void count(const ApeTriplet& triplet);
  void skip(const ApeTriplet& triplet, std::string reason);
  WriteReport report_;
};

// <prefix>.src / .mt / .pe, line-aligned. Records containing a line break are
// skipped so the three files stay aligned.
class WmtWriter : public DatasetWriter {
 public:
  WmtWriter(const std::filesystem::path& dir, std::string prefix);
  bool write(const ApeTriplet& triplet) override;
  void close() override;
  std::vector<std::string> files() const override;

 private:
  std::string prefix_;
  std::filesystem::path dir_;
  std::ofstream src_, mt_, pe_;
};

// src<TAB>mt<TAB>pe per line. Records containing a tab or line break are
// skipped.
class TsvWriter : public DatasetWriter {
 public:
  explicit TsvWriter(const std::filesystem::path& path);
  bool write(const ApeTriplet& triplet) override;
  void close() override;
  std::vector<std::string> files() const override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// One JSON object per line; lossless.
class JsonlWriter : public DatasetWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  bool write(const ApeTriplet& triplet) override;
  void close() override;
  std::vector<std::string> files() const override;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Writer for `format` inside `dir`: <prefix>.{src,mt,pe}, <prefix>.tsv or
// <prefix>.jsonl.
std::unique_ptr<DatasetWriter> make_writer(OutputFormat format,
                                           const std::filesystem::path& dir,
                                           const std::string& prefix);

WriteReport write_wmt(std::span<const ApeTriplet> triplets,
                      const std::filesystem::path& dir, const std::string& prefix);
WriteReport write_tsv(std::span<const ApeTriplet> triplets,
                      const std::filesystem::path& path);
WriteReport write_jsonl(std::span<const ApeTriplet> triplets,
                        const std::filesystem::path& path);

// Exact inverse of write_jsonl. Throws ParseError naming the 1-based line.
std::vector<ApeTriplet> read_jsonl(std::istream& in, const std::string& origin);
std::vector<ApeTriplet> read_jsonl(const std::filesystem::path& path);

nlohmann::ordered_json edit_to_json(const Edit& edit);
nlohmann::ordered_json triplet_to_json(const ApeTriplet& triplet);
// Throws ParseError on schema violations.
ApeTriplet triplet_from_json(const nlohmann::json& value);

struct Manifest {
  std::string tool_version{kToolVersion};
  NoiseConfig config;
  OutputFormat format = OutputFormat::kWmt;
  std::string prefix = "train";
  std::string corpus_fingerprint;
  std::string tagger_fingerprint;  // empty when no tagger was used
  std::size_t pair_count = 0;
  std::size_t total_edits = 0;
  std::size_t shortfall_count = 0;
  std::vector<std::string> files;
  std::vector<SkippedRecord> skipped;
  // Sentences the generator could not process.
  std::vector<SkippedRecord> generation_errors;
  // Absent by default so that reruns are byte-identical.
  std::optional<std::string> timestamp;

  bool operator==(const Manifest&) const = default;
};

// Fills the count fields from a writer report.
void apply_report(Manifest& manifest, const DatasetWriter& writer);

nlohmann::ordered_json manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& value);
void write_manifest(const Manifest& manifest, const std::filesystem::path& dir);
Manifest read_manifest(const std::filesystem::path& dir);

// Current UTC time as ISO-8601.
std::string utc_timestamp();

}  // namespace apegen
