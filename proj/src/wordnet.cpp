#include "apegen/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "apegen/error.hpp"
#include "apegen/utf8.hpp"

namespace apegen {

namespace {

constexpr std::array<std::string_view, 4> kCategoryNames = {"noun", "verb",
                                                            "adj", "adv"};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view text, T& value, int base = 10) {
  if (text.empty()) return false;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value, base);
  return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

bool all_digits(std::string_view text) {
  return !text.empty() && std::all_of(text.begin(), text.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

// Removes the adjective position markers (a), (p) and (ip).
std::string_view strip_marker(std::string_view lemma) {
  for (std::string_view marker : {"(a)", "(p)", "(ip)"}) {
    if (lemma.size() > marker.size() && lemma.ends_with(marker)) {
      return lemma.substr(0, lemma.size() - marker.size());
    }
  }
  return lemma;
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) {
      throw Error(ErrorCode::kMissingFile, "missing WordNet file: " + path.string());
    }
  }

  // Skips license header lines (two leading spaces).
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.starts_with("  ") || line.empty()) continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kParseError, path_.string() + ":" +
                                            std::to_string(line_no_) + ": " + what);
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string_view wn_category_name(WnCategory cat) {
  return kCategoryNames[static_cast<std::size_t>(cat)];
}

std::optional<WnCategory> map_penn_to_wn(PosTag tag) {
  if (is_noun_tag(tag)) return WnCategory::kNoun;
  if (is_verb_tag(tag)) return WnCategory::kVerb;
  if (is_adjective_tag(tag)) return WnCategory::kAdj;
  if (is_adverb_tag(tag)) return WnCategory::kAdv;
  return std::nullopt;
}

const std::vector<WordnetDb::Offset>* WordnetDb::senses(std::string_view lemma,
                                                        WnCategory cat) const {
  const auto& index = parts_[static_cast<std::size_t>(cat)].index;
  const auto it = index.find(std::string(lemma));
  return it == index.end() ? nullptr : &it->second;
}

const std::vector<std::string>* WordnetDb::members(Offset offset,
                                                   WnCategory cat) const {
  const auto& data = parts_[static_cast<std::size_t>(cat)].data;
  const auto it = data.find(offset);
  return it == data.end() ? nullptr : &it->second;
}

std::size_t WordnetDb::synset_count(WnCategory cat) const {
  return parts_[static_cast<std::size_t>(cat)].data.size();
}

std::size_t WordnetDb::lemma_count(WnCategory cat) const {
  return parts_[static_cast<std::size_t>(cat)].index.size();
}

WordnetDb load_wordnet(const std::filesystem::path& dir) {
  for (WnCategory cat : kWnCategories) {
    for (std::string_view kind : {"index.", "data."}) {
      const auto path = dir / (std::string(kind) + std::string(wn_category_name(cat)));
      if (!std::filesystem::is_regular_file(path)) {
        throw Error(ErrorCode::kMissingFile, "missing WordNet file: " + path.string());
      }
    }
  }

  WordnetDb db;
  std::string line;
  for (WnCategory cat : kWnCategories) {
    auto& part = db.parts_[static_cast<std::size_t>(cat)];
    const std::string name(wn_category_name(cat));

    // data.<cat>: offset lex_filenum ss_type w_cnt (word lex_id){w_cnt} p_cnt ...
    LineReader data(dir / ("data." + name));
    while (data.next(line)) {
      const auto fields = split_fields(line);
      if (fields.size() < 4) data.fail("truncated synset line");
      WordnetDb::Offset offset = 0;
      if (!all_digits(fields[0]) || !parse_number(fields[0], offset)) {
        data.fail("bad synset offset '" + std::string(fields[0]) + "'");
      }
      const std::string_view ss_type = fields[2];
      if (ss_type.size() != 1 || std::string_view("nvasr").find(ss_type[0]) ==
                                     std::string_view::npos) {
        data.fail("bad ss_type '" + std::string(ss_type) + "'");
      }
      std::size_t w_cnt = 0;
      if (!parse_number(fields[3], w_cnt, 16) || w_cnt == 0) {
        data.fail("bad w_cnt '" + std::string(fields[3]) + "'");
      }
      const std::size_t p_cnt_at = 4 + 2 * w_cnt;
      if (fields.size() <= p_cnt_at) data.fail("fewer lemmas than w_cnt");
      std::vector<std::string> lemmas;
      lemmas.reserve(w_cnt);
      for (std::size_t k = 0; k < w_cnt; ++k) {
        const std::string_view lex_id = fields[5 + 2 * k];
        unsigned value = 0;
        if (lex_id.size() != 1 || !parse_number(lex_id, value, 16)) {
          data.fail("lemma count does not match w_cnt " + std::string(fields[3]));
        }
        lemmas.emplace_back(strip_marker(fields[4 + 2 * k]));
      }
      if (fields[p_cnt_at].size() != 3 || !all_digits(fields[p_cnt_at])) {
        data.fail("lemma count does not match w_cnt " + std::string(fields[3]));
      }
      if (!part.data.emplace(offset, std::move(lemmas)).second) {
        data.fail("duplicate synset offset " + std::string(fields[0]));
      }
    }

    // index.<cat>: lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt offsets
    LineReader index(dir / ("index." + name));
    while (index.next(line)) {
      const auto fields = split_fields(line);
      if (fields.size() < 4) index.fail("truncated index line");
      std::size_t synset_cnt = 0;
      if (!parse_number(fields[2], synset_cnt) || synset_cnt == 0 ||
          fields.size() < 4 + synset_cnt) {
        index.fail("bad synset_cnt '" + std::string(fields[2]) + "'");
      }
      std::vector<WordnetDb::Offset> offsets;
      offsets.reserve(synset_cnt);
      for (std::size_t k = fields.size() - synset_cnt; k < fields.size(); ++k) {
        WordnetDb::Offset offset = 0;
        if (!all_digits(fields[k]) || !parse_number(fields[k], offset)) {
          index.fail("bad synset offset '" + std::string(fields[k]) + "'");
        }
        if (!part.data.contains(offset)) {
          index.fail("offset " + std::string(fields[k]) + " not in data." + name);
        }
        offsets.push_back(offset);
      }
      part.index[utf8::to_lower(fields[0])] = std::move(offsets);
    }
  }
  return db;
}

std::set<std::string> synonyms(const WordnetDb& db, std::string_view lemma,
                               WnCategory cat) {
  std::string key = utf8::to_lower(lemma);
  std::replace(key.begin(), key.end(), ' ', '_');
  std::set<std::string> out;
  const auto* offsets = db.senses(key, cat);
  if (offsets == nullptr) return out;
  for (const auto offset : *offsets) {
    const auto* lemmas = db.members(offset, cat);
    if (lemmas == nullptr) continue;
    for (const auto& member : *lemmas) {
      if (utf8::to_lower(member) == key) continue;
      std::string text = member;
      std::replace(text.begin(), text.end(), '_', ' ');
      out.insert(std::move(text));
    }
  }
  return out;
}

}  // namespace apegen
