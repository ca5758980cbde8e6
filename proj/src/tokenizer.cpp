#include "apegen/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "apegen/error.hpp"
#include "apegen/utf8.hpp"

namespace apegen {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool is_leading_punct(char c) { return c == '"' || c == '(' || c == '['; }

bool is_trailing_punct(char c) {
  switch (c) {
    case ',': case ';': case ':': case '!': case '?':
    case '"': case ')': case ']':
      return true;
    default:
      return false;
  }
}

// Abbreviations that keep their period when not sentence-final.
constexpr std::array<std::string_view, 28> kAbbreviations = {
    "mr",  "mrs", "ms",   "dr",  "prof", "st",  "jr",  "sr",   "vs",  "etc",
    "inc", "ltd", "co",   "corp", "no",  "mt",  "gen", "gov",  "sen", "rep",
    "lt",  "col", "capt", "sgt", "fig",  "jan", "feb", "approx"};

bool keeps_period(std::string_view word, bool last_in_line) {
  // word ends with '.', length >= 2
  const std::string_view stem = word.substr(0, word.size() - 1);
  if (stem.find('.') != std::string_view::npos) return true;  // U.S. e.g.
  if (last_in_line) return false;
  const std::string lower = utf8::to_lower(stem);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) !=
         kAbbreviations.end();
}

bool iequals_suffix(std::string_view word, std::string_view suffix) {
  if (word.size() < suffix.size()) return false;
  const std::string_view tail = word.substr(word.size() - suffix.size());
  return utf8::to_lower(tail) == suffix;
}

// Length of a clitic suffix to split off, or 0.
std::size_t clitic_length(std::string_view word) {
  if (word.size() > 3 && iequals_suffix(word, "n't")) return 3;
  for (std::string_view suffix : {"'ll", "'re", "'ve"}) {
    if (word.size() > 3 && iequals_suffix(word, suffix)) return 3;
  }
  for (std::string_view suffix : {"'s", "'d", "'m"}) {
    if (word.size() > 2 && iequals_suffix(word, suffix)) return 2;
  }
  if (word.size() > 2 && word.back() == '\'' &&
      (word[word.size() - 2] == 's' || word[word.size() - 2] == 'S')) {
    return 1;
  }
  return 0;
}

void split_chunk(std::string_view line, std::size_t begin, std::size_t end,
                 bool last_in_line, std::vector<Token>& out) {
  auto emit = [&](std::size_t b, std::size_t e) {
    out.push_back({std::string(line.substr(b, e - b)), b, e});
  };
  while (end - begin > 1 && is_leading_punct(line[begin])) {
    emit(begin, begin + 1);
    ++begin;
  }
  std::vector<std::pair<std::size_t, std::size_t>> suffixes;
  while (end - begin > 1) {
    const std::string_view word = line.substr(begin, end - begin);
    if (word.size() > 3 && word.ends_with("...")) {
      suffixes.emplace_back(end - 3, end);
      end -= 3;
      continue;
    }
    const char last = line[end - 1];
    if (is_trailing_punct(last)) {
      suffixes.emplace_back(end - 1, end);
      --end;
      continue;
    }
    if (last == '.' && word != "..." && !keeps_period(word, last_in_line)) {
      suffixes.emplace_back(end - 1, end);
      --end;
      continue;
    }
    break;
  }
  if (end > begin) {
    const std::string_view word = line.substr(begin, end - begin);
    if (const std::size_t n = clitic_length(word); n > 0) {
      emit(begin, end - n);
      emit(end - n, end);
    } else {
      emit(begin, end);
    }
  }
  for (auto it = suffixes.rbegin(); it != suffixes.rend(); ++it) {
    emit(it->first, it->second);
  }
}

bool is_opening(std::string_view tok) {
  return tok == "(" || tok == "[" || tok == "{";
}

bool is_closing(std::string_view tok) {
  static constexpr std::array<std::string_view, 12> kClosing = {
      ".", ",", ";", ":", "!", "?", ")", "]", "}", "...", "%", "'"};
  return std::find(kClosing.begin(), kClosing.end(), tok) != kClosing.end();
}

}  // namespace

std::vector<Token> tokenize(std::string_view line) {
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    chunks.emplace_back(start, i);
  }
  if (chunks.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot tokenize an empty line");
  }
  std::vector<Token> tokens;
  tokens.reserve(chunks.size() + chunks.size() / 2);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    split_chunk(line, chunks[c].first, chunks[c].second, c + 1 == chunks.size(),
                tokens);
  }
  return tokens;
}

std::vector<std::string> tokenize_words(std::string_view line) {
  std::vector<std::string> words;
  for (auto& token : tokenize(line)) words.push_back(std::move(token.surface));
  return words;
}

bool is_clitic(std::string_view token) {
  const std::string lower = utf8::to_lower(token);
  return lower == "n't" || lower == "'s" || lower == "'re" || lower == "'ve" ||
         lower == "'ll" || lower == "'d" || lower == "'m";
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u < 0x80 && (std::ispunct(u) != 0);
  });
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  bool glue_next = false;
  bool quote_open = false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    bool glue_left = false;
    bool opens = is_opening(tok);
    if (tok == "\"") {
      glue_left = quote_open;
      opens = !quote_open;
      quote_open = !quote_open;
    } else {
      glue_left = is_closing(tok) || is_clitic(tok);
    }
    if (i > 0 && !glue_next && !glue_left) out.push_back(' ');
    out += tok;
    glue_next = opens;
  }
  return out;
}

}  // namespace apegen
