#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "apegen/tagset.hpp"

namespace apegen {

enum class WnCategory { kNoun, kVerb, kAdj, kAdv };

inline constexpr std::array<WnCategory, 4> kWnCategories = {
    WnCategory::kNoun, WnCategory::kVerb, WnCategory::kAdj, WnCategory::kAdv};

// File suffix used by the database: "noun", "verb", "adj", "adv".
std::string_view wn_category_name(WnCategory cat);

// NN* -> noun, VB* -> verb, JJ* -> adj, RB* -> adv, otherwise none.
std::optional<WnCategory> map_penn_to_wn(PosTag tag);

// In-memory view of the WordNet index.* and data.* files. Adjective
// satellites (ss_type 's') live with the adjectives. Immutable after load.
class WordnetDb {
 public:
  using Offset = std::uint32_t;

  // Synset offsets for a lemma (lowercase, underscores for spaces).
  const std::vector<Offset>* senses(std::string_view lemma, WnCategory cat) const;

  // Member lemmas of a synset, as spelled in the data file (underscores kept).
  const std::vector<std::string>* members(Offset offset, WnCategory cat) const;

  std::size_t synset_count(WnCategory cat) const;
  std::size_t lemma_count(WnCategory cat) const;

 private:
  friend WordnetDb load_wordnet(const std::filesystem::path& dir);

  struct Part {
    std::unordered_map<std::string, std::vector<Offset>> index;
    std::unordered_map<Offset, std::vector<std::string>> data;
  };
  std::array<Part, 4> parts_;
};

// Throws MissingFile when one of the eight files is absent and ParseError
// (with file and line number) on malformed content.
WordnetDb load_wordnet(const std::filesystem::path& dir);

// Union of member lemmas over every synset of `lemma` in `cat`, minus the
// query itself (case-insensitive), with underscores mapped to spaces. Lookup is
// exact on the lowercased lemma; unknown lemmas give an empty set.
std::set<std::string> synonyms(const WordnetDb& db, std::string_view lemma,
                               WnCategory cat);

}  // namespace apegen
