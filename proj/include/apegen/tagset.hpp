#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace apegen {

// The 45-tag Penn Treebank inventory: 36 word tags plus 9 punctuation tags.
inline constexpr std::array<std::string_view, 45> kPennTags = {
    "CC",  "CD",   "DT",   "EX",  "FW",  "IN",  "JJ",   "JJR",  "JJS",
    "LS",  "MD",   "NN",   "NNS", "NNP", "NNPS", "PDT", "POS",  "PRP",
    "PRP$", "RB",  "RBR",  "RBS", "RP",  "SYM", "TO",   "UH",   "VB",
    "VBD", "VBG",  "VBN",  "VBP", "VBZ", "WDT", "WP",   "WP$",  "WRB",
    "#",   "$",    "``",   "''",  "-LRB-", "-RRB-", ",", ".",   ":"};

inline constexpr std::size_t kTagCount = kPennTags.size();

// Strong type over an index into kPennTags.
class PosTag {
 public:
  constexpr PosTag() = default;
  constexpr explicit PosTag(std::uint8_t id) : id_(id) {}

  constexpr std::uint8_t id() const { return id_; }
  constexpr std::string_view name() const { return kPennTags[id_]; }

  // Accepts the canonical names plus the bracket aliases ( ) [ ] { }
  // -LCB- -RCB- used by some treebank releases.
  static std::optional<PosTag> parse(std::string_view name);

  // Throws std::invalid_argument for names outside the tagset; meant for
  // literals in code and tests.
  static PosTag of(std::string_view name);

  constexpr bool operator==(const PosTag&) const = default;
  constexpr auto operator<=>(const PosTag&) const = default;

 private:
  std::uint8_t id_ = 0;
};

// Tag forced on pure punctuation tokens. `quote_open` tells whether a
// double-quote token closes a quotation opened earlier in the sentence.
std::optional<PosTag> punctuation_tag(std::string_view token, bool quote_open);

bool is_noun_tag(PosTag tag);
bool is_verb_tag(PosTag tag);
bool is_adjective_tag(PosTag tag);
bool is_adverb_tag(PosTag tag);

}  // namespace apegen
