#include "apegen/formats.hpp"

#include <chrono>
#include <ctime>
#include <istream>

#include "apegen/error.hpp"

namespace apegen {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 3> kFormatNames = {"wmt", "tsv", "jsonl"};

bool has_line_break(const std::string& s) {
  return s.find('\n') != std::string::npos || s.find('\r') != std::string::npos;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  if (!out.is_open()) return;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
  out.close();
}

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

const json& field(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing field \"") + key + "\"");
  return *it;
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) schema_error(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::size_t count_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned()) {
    schema_error(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::string> string_list(const json& v, const char* key) {
  if (!v.is_array()) schema_error(std::string("field \"") + key + "\" must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      schema_error(std::string("field \"") + key + "\" must hold strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

ordered_json skipped_to_json(const std::vector<SkippedRecord>& records) {
  ordered_json out = ordered_json::array();
  for (const auto& r : records) out.push_back({{"index", r.index}, {"reason", r.reason}});
  return out;
}

std::vector<SkippedRecord> skipped_from_json(const json& v, const char* key) {
  if (!v.is_array()) schema_error(std::string("field \"") + key + "\" must be an array");
  std::vector<SkippedRecord> out;
  for (const auto& item : v) {
    if (!item.is_object()) schema_error(std::string("bad entry in \"") + key + "\"");
    out.push_back({count_field(item, "index"), string_field(item, "reason")});
  }
  return out;
}

}  // namespace

std::string_view format_name(OutputFormat format) {
  return kFormatNames[static_cast<std::size_t>(format)];
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  for (std::size_t i = 0; i < kFormatNames.size(); ++i) {
    if (kFormatNames[i] == name) return static_cast<OutputFormat>(i);
  }
  return std::nullopt;
}

void DatasetWriter::count(const ApeTriplet& triplet) {
  ++report_.written;
  report_.total_edits += triplet.edits.size();
  if (triplet.shortfall) ++report_.shortfall_count;
}

void DatasetWriter::skip(const ApeTriplet& triplet, std::string reason) {
  report_.skipped.push_back({triplet.sentence_index, std::move(reason)});
}

WmtWriter::WmtWriter(const std::filesystem::path& dir, std::string prefix)
    : prefix_(std::move(prefix)),
      dir_(dir),
      src_(open_output(dir / (prefix_ + ".src"))),
      mt_(open_output(dir / (prefix_ + ".mt"))),
      pe_(open_output(dir / (prefix_ + ".pe"))) {}

bool WmtWriter::write(const ApeTriplet& t) {
  if (has_line_break(t.src) || has_line_break(t.mt) || has_line_break(t.pe)) {
    skip(t, "line break inside a field");
    return false;
  }
  src_ << t.src << '\n';
  mt_ << t.mt << '\n';
  pe_ << t.pe << '\n';
  count(t);
  return true;
}

void WmtWriter::close() {
  finish(src_, dir_ / (prefix_ + ".src"));
  finish(mt_, dir_ / (prefix_ + ".mt"));
  finish(pe_, dir_ / (prefix_ + ".pe"));
}

std::vector<std::string> WmtWriter::files() const {
  return {prefix_ + ".src", prefix_ + ".mt", prefix_ + ".pe"};
}

TsvWriter::TsvWriter(const std::filesystem::path& path)
    : path_(path), out_(open_output(path)) {}

bool TsvWriter::write(const ApeTriplet& t) {
  for (const std::string* s : {&t.src, &t.mt, &t.pe}) {
    if (s->find('\t') != std::string::npos) {
      skip(t, "tab inside a field");
      return false;
    }
    if (has_line_break(*s)) {
      skip(t, "line break inside a field");
      return false;
    }
  }
  out_ << t.src << '\t' << t.mt << '\t' << t.pe << '\n';
  count(t);
  return true;
}

void TsvWriter::close() { finish(out_, path_); }

std::vector<std::string> TsvWriter::files() const {
  return {path_.filename().string()};
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path)
    : path_(path), out_(open_output(path)) {}

bool JsonlWriter::write(const ApeTriplet& t) {
  std::string line;
  try {
    line = triplet_to_json(t).dump();
  } catch (const json::exception& e) {
    skip(t, std::string("not serializable: ") + e.what());
    return false;
  }
  out_ << line << '\n';
  count(t);
  return true;
}

void JsonlWriter::close() { finish(out_, path_); }

std::vector<std::string> JsonlWriter::files() const {
  return {path_.filename().string()};
}

std::unique_ptr<DatasetWriter> make_writer(OutputFormat format,
                                           const std::filesystem::path& dir,
                                           const std::string& prefix) {
  switch (format) {
    case OutputFormat::kWmt:
      return std::make_unique<WmtWriter>(dir, prefix);
    case OutputFormat::kTsv:
      return std::make_unique<TsvWriter>(dir / (prefix + ".tsv"));
    case OutputFormat::kJsonl:
      return std::make_unique<JsonlWriter>(dir / (prefix + ".jsonl"));
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown output format");
}

namespace {
WriteReport write_all(DatasetWriter& writer, std::span<const ApeTriplet> triplets) {
  for (const auto& t : triplets) writer.write(t);
  writer.close();
  return writer.report();
}
}  // namespace

WriteReport write_wmt(std::span<const ApeTriplet> triplets,
                      const std::filesystem::path& dir, const std::string& prefix) {
  WmtWriter writer(dir, prefix);
  return write_all(writer, triplets);
}

WriteReport write_tsv(std::span<const ApeTriplet> triplets,
                      const std::filesystem::path& path) {
  TsvWriter writer(path);
  return write_all(writer, triplets);
}

WriteReport write_jsonl(std::span<const ApeTriplet> triplets,
                        const std::filesystem::path& path) {
  JsonlWriter writer(path);
  return write_all(writer, triplets);
}

ordered_json edit_to_json(const Edit& edit) {
  ordered_json out;
  out["scheme"] = scheme_name(edit.scheme);
  out["range"] = {edit.begin, edit.end};
  out["original"] = edit.original;
  out["replacement"] = edit.replacement;
  return out;
}

ordered_json triplet_to_json(const ApeTriplet& t) {
  ordered_json out;
  out["index"] = t.sentence_index;
  out["src"] = t.src;
  out["mt"] = t.mt;
  out["pe"] = t.pe;
  ordered_json edits = ordered_json::array();
  for (const auto& e : t.edits) edits.push_back(edit_to_json(e));
  out["edits"] = std::move(edits);
  out["eligible"] = t.eligible;
  out["shortfall"] = t.shortfall;
  return out;
}

ApeTriplet triplet_from_json(const json& value) {
  if (!value.is_object()) schema_error("record must be a JSON object");
  ApeTriplet t;
  t.sentence_index = count_field(value, "index");
  t.src = string_field(value, "src");
  t.mt = string_field(value, "mt");
  t.pe = string_field(value, "pe");
  const json& edits = field(value, "edits");
  if (!edits.is_array()) schema_error("field \"edits\" must be an array");
  for (const auto& e : edits) {
    if (!e.is_object()) schema_error("edit must be a JSON object");
    Edit edit;
    const std::string scheme = string_field(e, "scheme");
    const auto parsed = parse_scheme(scheme);
    if (!parsed) schema_error("unknown scheme \"" + scheme + "\"");
    edit.scheme = *parsed;
    const json& range = field(e, "range");
    if (!range.is_array() || range.size() != 2 || !range[0].is_number_unsigned() ||
        !range[1].is_number_unsigned()) {
      schema_error("field \"range\" must be [begin, end]");
    }
    edit.begin = range[0].get<std::size_t>();
    edit.end = range[1].get<std::size_t>();
    if (edit.begin > edit.end) schema_error("edit range begins after it ends");
    edit.original = string_list(field(e, "original"), "original");
    edit.replacement = string_list(field(e, "replacement"), "replacement");
    t.edits.push_back(std::move(edit));
  }
  t.actual_replacements = t.edits.size();
  t.eligible = value.contains("eligible") ? count_field(value, "eligible") : 0;
  if (value.contains("shortfall")) {
    if (!value["shortfall"].is_boolean()) schema_error("field \"shortfall\" must be boolean");
    t.shortfall = value["shortfall"].get<bool>();
  }
  return t;
}

std::vector<ApeTriplet> read_jsonl(std::istream& in, const std::string& origin) {
  std::vector<ApeTriplet> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(triplet_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  origin + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParseError,
                  origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ApeTriplet> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "file not found: " + path.string());
  return read_jsonl(in, path.string());
}

void apply_report(Manifest& manifest, const DatasetWriter& writer) {
  const WriteReport& r = writer.report();
  manifest.pair_count = r.written;
  manifest.total_edits = r.total_edits;
  manifest.shortfall_count = r.shortfall_count;
  manifest.skipped = r.skipped;
  manifest.files = writer.files();
}

ordered_json manifest_to_json(const Manifest& m) {
  ordered_json out;
  out["tool_version"] = m.tool_version;
  out["config"] = {{"scheme", scheme_name(m.config.scheme)},
                   {"ratio", m.config.ratio},
                   {"seed", m.config.seed}};
  out["format"] = format_name(m.format);
  out["prefix"] = m.prefix;
  out["corpus_fingerprint"] = m.corpus_fingerprint;
  out["tagger_fingerprint"] = m.tagger_fingerprint;
  out["pair_count"] = m.pair_count;
  out["total_edits"] = m.total_edits;
  out["shortfall_count"] = m.shortfall_count;
  out["files"] = m.files;
  out["skipped"] = skipped_to_json(m.skipped);
  out["generation_errors"] = skipped_to_json(m.generation_errors);
  out["timestamp"] = m.timestamp ? ordered_json(*m.timestamp) : ordered_json(nullptr);
  return out;
}

Manifest manifest_from_json(const json& v) {
  if (!v.is_object()) schema_error("manifest must be a JSON object");
  Manifest m;
  m.tool_version = string_field(v, "tool_version");
  const json& config = field(v, "config");
  if (!config.is_object()) schema_error("field \"config\" must be an object");
  const std::string scheme = string_field(config, "scheme");
  const auto parsed_scheme = parse_scheme(scheme);
  if (!parsed_scheme) schema_error("unknown scheme \"" + scheme + "\"");
  m.config.scheme = *parsed_scheme;
  const json& ratio = field(config, "ratio");
  if (!ratio.is_number()) schema_error("field \"ratio\" must be a number");
  m.config.ratio = ratio.get<double>();
  m.config.seed = field(config, "seed").get<std::uint64_t>();
  const std::string format = string_field(v, "format");
  const auto parsed_format = parse_format(format);
  if (!parsed_format) schema_error("unknown format \"" + format + "\"");
  m.format = *parsed_format;
  m.prefix = string_field(v, "prefix");
  m.corpus_fingerprint = string_field(v, "corpus_fingerprint");
  m.tagger_fingerprint = string_field(v, "tagger_fingerprint");
  m.pair_count = count_field(v, "pair_count");
  m.total_edits = count_field(v, "total_edits");
  m.shortfall_count = count_field(v, "shortfall_count");
  m.files = string_list(field(v, "files"), "files");
  m.skipped = skipped_from_json(field(v, "skipped"), "skipped");
  m.generation_errors = skipped_from_json(field(v, "generation_errors"), "generation_errors");
  const json& ts = field(v, "timestamp");
  if (ts.is_string()) m.timestamp = ts.get<std::string>();
  return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ofstream out = open_output(path);
  out << manifest_to_json(manifest).dump(2) << '\n';
  finish(out, path);
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "file not found: " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace apegen
