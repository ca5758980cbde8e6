#include "apegen/tagset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace apegen {

std::optional<PosTag> PosTag::parse(std::string_view name) {
  if (name == "(" || name == "[" || name == "{" || name == "-LCB-" ||
      name == "-LSB-") {
    name = "-LRB-";
  } else if (name == ")" || name == "]" || name == "}" || name == "-RCB-" ||
             name == "-RSB-") {
    name = "-RRB-";
  }
  const auto it = std::find(kPennTags.begin(), kPennTags.end(), name);
  if (it == kPennTags.end()) return std::nullopt;
  return PosTag(static_cast<std::uint8_t>(it - kPennTags.begin()));
}

PosTag PosTag::of(std::string_view name) {
  if (auto tag = parse(name)) return *tag;
  throw std::invalid_argument("not a Penn Treebank tag: " + std::string(name));
}

std::optional<PosTag> punctuation_tag(std::string_view token, bool quote_open) {
  if (token == "." || token == "!" || token == "?") return PosTag::of(".");
  if (token == ",") return PosTag::of(",");
  if (token == ":" || token == ";" || token == "..." || token == "--" ||
      token == "-") {
    return PosTag::of(":");
  }
  if (token == "(" || token == "[" || token == "{") return PosTag::of("-LRB-");
  if (token == ")" || token == "]" || token == "}") return PosTag::of("-RRB-");
  if (token == "``") return PosTag::of("``");
  if (token == "''") return PosTag::of("''");
  if (token == "\"") return PosTag::of(quote_open ? "''" : "``");
  if (token == "$") return PosTag::of("$");
  if (token == "#") return PosTag::of("#");
  return std::nullopt;
}

namespace {
bool has_prefix(PosTag tag, std::string_view prefix) {
  return tag.name().starts_with(prefix);
}
}  // namespace

bool is_noun_tag(PosTag tag) { return has_prefix(tag, "NN"); }
bool is_verb_tag(PosTag tag) { return has_prefix(tag, "VB"); }
bool is_adjective_tag(PosTag tag) { return has_prefix(tag, "JJ"); }
bool is_adverb_tag(PosTag tag) { return has_prefix(tag, "RB"); }

}  // namespace apegen
